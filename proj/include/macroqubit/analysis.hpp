// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file analysis.hpp
 * @brief Figures of merit: conditional injection probability, shutter activation,
 * single and double orthogonality-filter visibilities, pre-selected fringes and
 * CHSH correlations for the micro-macro configuration.
 *
 * Every ratio carries its numerator and denominator. Quantities are exact sums
 * over the truncated outcome space; nothing is sampled.
 */

#ifndef MACROQUBIT_ANALYSIS_HPP
#define MACROQUBIT_ANALYSIS_HPP

#include "macroqubit/amplifier.hpp"
#include "macroqubit/filters.hpp"
#include "macroqubit/splitter.hpp"

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace macroqubit {

class NoEventsPass : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Truncation of the amplitude series and mass budget for dropped split cells.
struct Precision {
    double eps_trunc = 1e-10;
    double drop_budget = 1e-12;
};

struct Ratio {
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
};

/// Throws NoEventsPass when the denominator is not positive.
Ratio make_ratio(double numerator, double denominator, const char* what);

/**
 * Transmitted dichotomic sums for events accepted by the reflected-side filter.
 * `by_difference` maps the transmitted count difference to its probability.
 */
struct DichotomicSums {
    std::map<int, double> by_difference;
    double dropped_mass = 0.0;
    int r_max = 0;

    double accepted() const;
    /// Sums with transmitted threshold h: +1 for d > h, -1 for d < -h; a k = 0 tie
    /// contributes half to each side under TieRule::HalfWeight.
    std::pair<double, double> signed_sums(int h, TieRule ties) const;
    /// (plus - minus) / (plus + minus), numerator and denominator reported.
    Ratio visibility(int h, TieRule ties) const;

    DichotomicSums& accumulate(const DichotomicSums& other, double weight);
};

/// Probability that the reflected portion of a state holds more than h photons.
double reflected_total_acceptance(const TwoModeState& state, double tau, int h);

/// p_cond = p A_inj / (p A_inj + (1 - p) A_spont); h = -1 accepts everything.
Ratio conditional_injection_probability(double p, double g, double tau, int h, const Precision& precision = {});

/// Probability that the reflected orthogonality filter passes, for an injected pi_beta_inj.
double shutter_activation_probability(double beta_inj, double g, double tau, int k, double refl_basis,
                                      const Precision& precision = {});

/// Transmitted dichotomic sums of `state` (any basis) counted in final_basis, given the reflected filter.
DichotomicSums filtered_dichotomic_sums(const TwoModeState& state, double tau, const FilterSpec& filter,
                                        double final_basis, const Precision& precision = {});

/// Weighted sums over mixture components.
DichotomicSums filtered_dichotomic_sums(std::span<const WeightedState> mixture, double tau, const FilterSpec& filter,
                                        double final_basis, const Precision& precision = {});

struct VisibilityResult {
    Ratio visibility;
    double pass_probability = 0.0;
    DichotomicSums sums;
};

/**
 * Visibility of the transmitted dichotomic measurement in final_basis after a
 * reflected orthogonality filter with threshold k in refl_basis. The balanced
 * transmitted outcome is split half and half. Throws NoEventsPass.
 */
VisibilityResult visibility_single_of(double beta_inj, double refl_basis, int k, double final_basis, double g,
                                      double tau, const Precision& precision = {});

/**
 * Balanced split (tau = 0.5) with orthogonality filters on both outputs: threshold
 * k_refl on the reflected output in refl_basis, h_trans on the transmitted output
 * in final_basis. Only events conclusive on both sides count, so the balanced
 * transmitted outcome is always discarded. Throws NoEventsPass.
 */
VisibilityResult visibility_double_of(double g, int k_refl, int h_trans, double beta_inj, double refl_basis,
                                      double final_basis, const Precision& precision = {});

/**
 * Labeled samples plus metadata. Flagged samples had no accepted events; their
 * y value is NaN and serializers print them as missing.
 */
struct CurveResult {
    std::string x_label;
    std::string y_label;
    std::vector<std::pair<double, double>> samples;
    std::vector<bool> flagged;
    std::vector<std::pair<std::string, std::string>> meta;
    /// Extra per-sample columns, e.g. acceptance probability.
    std::vector<std::pair<std::string, std::vector<double>>> columns;

    void add_meta(const std::string& key, const std::string& value);
    void add_meta(const std::string& key, double value);
    /// Throws std::logic_error when x is not strictly increasing or columns are ragged.
    void validate() const;
};

/// Pre-selection probabilities for one injected equatorial angle.
struct FringePoint {
    double plus = 0.0;   ///< P(pass, final +1)
    double minus = 0.0;  ///< P(pass, final -1)
    double pass = 0.0;   ///< P(pass)

    /// P(+1 | pass); throws NoEventsPass.
    double plus_fraction() const;
};

/**
 * Pre-selected dichotomic measurement in beta_meas on the amplified photon
 * pi_alpha, for every alpha at once. Amplitudes are linear in the injected
 * qubit, so each probability is a Hermitian form in the coefficients of
 * |Phi^alpha> over |Phi^0> and |Phi^pi>.
 */
class MacroFringe {
public:
    MacroFringe(double g, double tau, const FilterSpec& preselect, double beta_meas, int final_k, TieRule ties,
                const Precision& precision = {});

    FringePoint evaluate(double alpha) const;

    double beta_meas() const { return beta_meas_; }
    double dropped_mass() const { return dropped_mass_; }
    int r_max() const { return r_max_; }

private:
    double beta_meas_;
    Eigen::Matrix2cd plus_;
    Eigen::Matrix2cd minus_;
    Eigen::Matrix2cd pass_;
    double dropped_mass_ = 0.0;
    int r_max_ = 0;
};

/// Two-branch pre-selection with bases 0 and phi_pre and threshold k.
FilterSpec preselection_filter(double phi_pre, int k);

/// y(alpha) = P(+1 | pi_alpha, pass) for final basis beta_meas, balanced outcome half-weighted.
CurveResult fringe_pattern(std::span<const double> alpha_grid, double beta_meas, double phi_pre, int k, double g,
                           double tau, const Precision& precision = {});

struct FringeExtremum {
    double alpha = 0.0;
    double value = 0.0;
};

/// Maximum (or minimum) of P(+1 | alpha, pass) over [0, 2 pi): grid of `grid` points then golden section.
FringeExtremum fringe_extremum(const MacroFringe& fringe, bool maximum, int grid = 360);

struct PreselectVisibility {
    double visibility = 0.0;
    FringeExtremum max;
    FringeExtremum min;
    double pass_probability = 0.0;
};

/// (I_max - I_min)/(I_max + I_min) of the fringe measured in beta_meas.
PreselectVisibility preselect_visibility(double phi_pre, int k, double g, double tau, double beta_meas = 0.0,
                                         const Precision& precision = {}, int grid = 360);

struct MicroMacroModel {
    double g = 0.0;
    double tau = 0.9;
    FilterSpec preselect = FilterSpec::intensity(-1);
    int final_k = 0;

    void validate() const;
};

/**
 * E(a, b) for the singlet: the micro photon is measured in basis a, the macro arm
 * is pre-selected and then measured in basis b. Conditioned on pre-selection and
 * on a conclusive macro outcome.
 */
class ChshEvaluator {
public:
    explicit ChshEvaluator(const MicroMacroModel& model, const Precision& precision = {});

    /// Correlation with numerator and denominator.
    Ratio correlation(double a, double b);
    /// Pre-selection pass probability averaged over micro outcomes.
    double pass_probability(double a, double b);

private:
    const MacroFringe& fringe(double b);

    MicroMacroModel model_;
    Precision precision_;
    std::map<double, MacroFringe> fringes_;
};

struct ChshResult {
    double s = 0.0;
    std::array<Ratio, 4> correlations{};
};

/// S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
ChshResult chsh_value(double a, double a_prime, double b, double b_prime, const MicroMacroModel& model,
                      const Precision& precision = {});

struct ChshSweep {
    double max_s = 0.0;
    std::array<double, 4> argmax{};  ///< (a, a', b, b')
    double min_pass = 0.0;
};

/// Maximum S over all angle quadruples drawn from `angles`.
ChshSweep chsh_sweep(std::span<const double> angles, const MicroMacroModel& model, const Precision& precision = {},
                     int jobs = 1);

}  // namespace macroqubit

#endif  // MACROQUBIT_ANALYSIS_HPP
