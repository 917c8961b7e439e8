// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file oracle.hpp
 * @brief Brute-force reference: dense state vectors over a truncated multimode
 * Fock space, evolved by explicit matrix exponentials of the amplifier generator
 * and of quadratic mode Hamiltonians. Shares no amplitude formulas with the
 * closed-form modules.
 */

#ifndef MACROQUBIT_ORACLE_HPP
#define MACROQUBIT_ORACLE_HPP

#include "macroqubit/amplifier.hpp"
#include "macroqubit/splitter.hpp"

#include <Eigen/SparseCore>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace macroqubit {

class CutoffTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Occupation = std::vector<int>;

/// Occupation tuples of `modes` modes with every count <= per_mode and total <= total.
class FockIndex {
public:
    FockIndex(int modes, int per_mode, int total);

    int modes() const { return modes_; }
    int per_mode() const { return per_mode_; }
    int total() const { return total_; }
    std::size_t size() const { return tuples_.size(); }
    const Occupation& tuple(std::size_t i) const { return tuples_[i]; }
    /// Index of `n`, or -1 when it lies outside the space.
    long find(const Occupation& n) const;

private:
    int modes_;
    int per_mode_;
    int total_;
    std::vector<Occupation> tuples_;
    std::map<Occupation, std::size_t> lookup_;
};

struct DenseState {
    std::shared_ptr<const FockIndex> index;
    Eigen::VectorXcd vec;
    /// Probability mass lost to truncation so far.
    double leakage = 0.0;

    double norm_squared() const { return vec.squaredNorm(); }
};

/// Basis state |n> in a fresh space.
DenseState fock_state(int modes, int per_mode, int total, const Occupation& n);

/// exp(A) by scaling and squaring.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// exp(A) v by a scaled Taylor series; `norm_bound` must bound the operator norm of A.
Eigen::VectorXcd expmv(const Eigen::SparseMatrix<cplx>& a, const Eigen::VectorXcd& v, double norm_bound);

/**
 * Evolves the H/V occupation `injected` under exp(g (a_H^dag a_V^dag - a_H a_V)) on a
 * two-mode space with per-mode cutoff `cutoff`. Leakage is the weight on the
 * cutoff boundary; above 1e-6 throws CutoffTooSmall.
 */
DenseState evolve_amplifier(ModePair injected, double g, int cutoff);

/// Same as evolve_amplifier, for an arbitrary initial two-mode vector in the same space.
DenseState evolve_amplifier(const DenseState& initial, double g);

/**
 * Applies the linear-optics unitary with mode matrix `u` (column k = image of
 * the k-th listed mode) to the listed modes. The space must be closed under
 * photon exchange, i.e. per_mode >= total.
 */
DenseState apply_mode_unitary(const DenseState& state, const std::vector<int>& modes, const Eigen::MatrixXcd& u);

/// Beam splitter with transmittivity tau: mode `trans` maps to sqrt(tau) trans + i sqrt(1-tau) refl.
DenseState apply_bs_unitary(const DenseState& state, double tau, int trans, int refl);

/// Re-expresses the polarization pair (first, second) from basis beta to beta + delta.
DenseState rotate_polarization(const DenseState& state, int first, int second, double delta);

/// Re-expresses an H/V pair in the equatorial basis beta.
DenseState hv_to_equatorial(const DenseState& state, int h_mode, int v_mode, double beta);

/**
 * Copies a state into `modes` modes with total photon number <= total; the
 * source modes land at positions `placement`, others are vacuum. Weight above
 * the total is added to leakage.
 */
DenseState embed(const DenseState& state, int modes, int total, const std::vector<int>& placement);

using ProbabilityTable = std::map<Occupation, double>;

/// Probabilities of every tuple in the state's space.
ProbabilityTable probabilities(const DenseState& state);

/// Max absolute difference; throws StructuralError when the key sets differ.
double max_deviation(const ProbabilityTable& closed_form, const ProbabilityTable& dense);

/// Tables of closed-form results restricted to total photon number <= window, zero-filled.
ProbabilityTable table_from_state(const TwoModeState& state, int window);
ProbabilityTable table_from_joint(const JointSplitState& joint, int window);
ProbabilityTable table_from_three_way(const std::vector<ThreeWaySplitOutcome>& outcomes, int window);

/// Divides every entry by the table total; throws StructuralError when the total is zero.
ProbabilityTable normalized(const ProbabilityTable& table);

/// Macro-qubit for pi_beta by dense evolution, expressed in basis beta.
DenseState oracle_macroqubit(double beta, double g, int cutoff);

struct SuiteDeviation {
    std::string suite;
    double deviation = 0.0;
    double seconds = 0.0;
};

/**
 * Compares every closed-form probability table against dense simulation at gain g
 * over total photon number <= window: amplifier states, beam-splitter joint
 * tables, conditional transmitted states and the three-way split.
 * `amplifier_cutoff` is the per-mode cutoff of the amplifier evolution.
 */
std::vector<SuiteDeviation> oracle_suites(double g, int window, int amplifier_cutoff);

}  // namespace macroqubit

#endif  // MACROQUBIT_ORACLE_HPP
