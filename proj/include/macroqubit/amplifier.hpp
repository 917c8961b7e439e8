// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file amplifier.hpp
 * @brief Macro-qubit and spontaneous-emission amplitude tables of the
 * phase-covariant amplifier, and the realistic injection mixture.
 */

#ifndef MACROQUBIT_AMPLIFIER_HPP
#define MACROQUBIT_AMPLIFIER_HPP

#include "macroqubit/fock.hpp"

#include <utility>
#include <vector>

namespace macroqubit {

/// Amplifier parameters; gamma = tanh g, c = cosh g, mean_photons = sinh^2 g.
struct GainParams {
    double g = 0.0;
    double gamma = 0.0;
    double c = 1.0;
    double mean_photons = 0.0;
};

/// Throws std::domain_error for g < 0 or non-finite g.
GainParams gain_params(double g);

/**
 * Pure two-mode polarization state in an equatorial basis. Sector N holds the
 * amplitudes of |n_a, N - n_a>, indexed by n_a. Missing sectors are zero.
 */
struct TwoModeState {
    double basis = 0.0;
    std::vector<Eigen::VectorXcd> sectors;
    double trunc_tail = 0.0;

    int max_total() const { return static_cast<int>(sectors.size()) - 1; }
    cplx amplitude(ModePair n) const;
    double probability(ModePair n) const { return std::norm(amplitude(n)); }
    /// Squared norm of sector N (0 when absent).
    double sector_weight(int n) const;
    double norm_squared() const;
    /// Mean photon numbers of the first and second basis modes.
    std::pair<double, double> mean_counts() const;
};

/// Drops sectors above max_total, moving their weight into trunc_tail.
TwoModeState truncate_total(const TwoModeState& state, int max_total);

/// Re-expresses a state in another equatorial basis; the physical state is unchanged.
TwoModeState in_basis(const TwoModeState& state, double target_basis);

/**
 * Amplified single photon injected with polarization pi_beta, expressed in basis
 * beta. Support is on (2i+1, 2j) with amplitude
 * (1/C^2)(-Gamma/2)^j (Gamma/2)^i sqrt((2i+1)!(2j)!)/(i! j!) e^{-i beta (i+j)}.
 * Whole total-photon sectors are kept until the excluded mass is below eps_trunc.
 */
TwoModeState macroqubit_state(double beta, double g, double eps_trunc = 1e-10);

/// Spontaneous emission in the H/V representation, as a pair of H/V counts per sector.
struct HvState {
    std::vector<std::pair<ModePair, cplx>> terms;
    double trunc_tail = 0.0;
};

/// Amplitude (1/C) Gamma^n on |n_H, n_V = n>.
HvState spontaneous_hv(double g, double eps_trunc = 1e-10);

/// Spontaneous emission expressed in the equatorial basis `basis`.
TwoModeState spontaneous_state(double g, double eps_trunc = 1e-10, double basis = 0.0);

struct MeanPhotons {
    double plus = 0.0;
    double minus = 0.0;
};

/// N_pm(phi) = p[m + (2m+1)(1 +- cos phi)/2] + (1-p) m, with m = sinh^2 g.
MeanPhotons mean_photons(double phi, double p, double g);

struct InjectionModel {
    double p = 1.0;
    double g = 0.0;
};

struct WeightedState {
    double weight = 1.0;
    TwoModeState state;
};

/**
 * Amplified output of a partially mode-matched injection: weight p on the
 * macro-qubit, 1 - p on spontaneous emission. Zero-weight components are omitted.
 */
std::vector<WeightedState> injected_mixture(const InjectionModel& model, double beta, double eps_trunc = 1e-10);

}  // namespace macroqubit

#endif  // MACROQUBIT_AMPLIFIER_HPP
