// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file splitter.hpp
 * @brief Unbalanced beam splitter acting on a two-mode polarization state:
 * explicit joint tables for small instances, conditional transmitted states,
 * the three-way split, and a projector/Gram engine for large sums.
 *
 * The beam splitter maps each polarization mode b^dag to
 * sqrt(tau) c^dag + i sqrt(1 - tau) d^dag, with c transmitted and d reflected.
 */

#ifndef MACROQUBIT_SPLITTER_HPP
#define MACROQUBIT_SPLITTER_HPP

#include "macroqubit/amplifier.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace macroqubit {

class UnreachableOutcome : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct JointEntry {
    ModePair trans;
    ModePair refl;
    cplx amplitude;
};

/**
 * Joint amplitudes over (transmitted, reflected) occupations. Transmitted counts
 * are in `trans_basis`, reflected counts in `refl_basis`. `trunc_tail` collects
 * the input truncation mass plus everything above the reflected-count cap.
 */
struct JointSplitState {
    double tau = 1.0;
    double trans_basis = 0.0;
    double refl_basis = 0.0;
    std::vector<JointEntry> entries;
    double trunc_tail = 0.0;
    int refl_cap = -1;

    double total_probability() const;
    std::map<ModePair, double> reflected_marginal() const;
    std::map<ModePair, double> transmitted_marginal() const;
};

/// refl_cap < 0 keeps every reflected total.
JointSplitState ubs_joint(const TwoModeState& state, double tau, double refl_basis, int refl_cap = -1);

/// Normalized transmitted state given the reflected counts. Throws UnreachableOutcome.
TwoModeState conditional_transmitted(const JointSplitState& joint, ModePair detected);

struct ThreeWaySplitOutcome {
    ModePair trans;
    ModePair branch1;
    ModePair branch2;
    double probability = 0.0;
};

/**
 * Reflected part further divided by a 50/50 splitter; branch 1 (transmitted port)
 * is counted in basis beta1, branch 2 (reflected port) in beta2. Transmitted counts
 * stay in the basis of `state`. Outcomes are sorted by (trans, branch1, branch2).
 */
std::vector<ThreeWaySplitOutcome> three_way_split(const TwoModeState& state, double tau, double beta1,
                                                  double beta2, int refl_cap = -1);

/**
 * Positive operator on the reflected sector with R photons, written in the basis
 * of the states fed to transmitted_gram. Matrices are built on first use and
 * cached; concurrent lookups are safe.
 */
class ReflectedProjector {
public:
    using Builder = std::function<Eigen::MatrixXcd(int)>;

    explicit ReflectedProjector(Builder builder);

    const Eigen::MatrixXcd& operator()(int reflected_total) const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<int, std::unique_ptr<Eigen::MatrixXcd>> matrices;
    };
    Builder builder_;
    std::shared_ptr<Cache> cache_;
};

/// Accepts every reflected outcome.
ReflectedProjector all_pass_projector();

/// Accepts reflected totals above h (h = -1 accepts everything).
ReflectedProjector total_count_projector(int h);

/// Counts (p, q) in basis state_basis + delta, accepted when `pass` holds.
ReflectedProjector count_projector(double delta, std::function<bool(ModePair)> pass);

/**
 * Reflected light split 50/50; the two branches are counted in bases
 * state_basis + delta1 and state_basis + delta2.
 */
ReflectedProjector split_count_projector(double delta1, double delta2, std::function<bool(ModePair, ModePair)> pass);

/**
 * Which (N, R) pairs (total photons, reflected photons) enter a Gram sum.
 * Pairs are dropped smallest-mass first while the dropped mass stays within budget.
 */
struct SplitPlan {
    std::vector<std::vector<int>> reflected;  // reflected[N] lists kept R
    double dropped_mass = 0.0;
    int r_max = 0;
    int n_max = 0;
};

SplitPlan make_split_plan(std::span<const TwoModeState> states, double tau, double drop_budget);

/**
 * Accumulates, for every transmitted difference d = t_a - t_b, the Gram matrix
 * G_ij = sum <psi_i| (Q_R on reflected) |psi_j> over transmitted outcomes with that
 * difference. All states must share a basis; transmitted counts are in that basis.
 */
struct TransmittedGram {
    std::map<int, Eigen::MatrixXcd> by_difference;
    double dropped_mass = 0.0;
    int r_max = 0;
    int n_max = 0;

    Eigen::MatrixXcd total() const;
};

TransmittedGram transmitted_gram(std::span<const TwoModeState> states, double tau,
                                 const ReflectedProjector& projector, const SplitPlan& plan);

/**
 * Closed-form transmitted amplitude of |Phi+> given reflected counts (p, q) in
 * the same basis, before normalization: amplitude of |m, n> joint with |p, q>.
 * Support requires m + p odd and n + q even.
 */
cplx same_basis_joint_amplitude(double g, double tau, int m, int n, int p, int q);

/**
 * Joint probability of transmitted (m, n) in the R/L basis and reflected (p, q) in
 * the +/- basis for the state amplified from pi_R, from the explicit double sum.
 */
double conjugate_basis_joint_probability(double g, double tau, int m, int n, int p, int q);

}  // namespace macroqubit

#endif  // MACROQUBIT_SPLITTER_HPP
