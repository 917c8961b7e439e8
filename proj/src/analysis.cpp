// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/analysis.hpp"

#include "macroqubit/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace macroqubit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double binomial_tail_above(int n, int h, double reflect) {
    if (h < 0) return 1.0;
    if (h >= n) return 0.0;
    if (reflect <= 0.0) return 0.0;
    if (reflect >= 1.0) return 1.0;
    const double lr = std::log(reflect);
    const double lt = std::log1p(-reflect);
    long double s = 0.0L;
    for (int r = h + 1; r <= n; ++r) s += std::exp(log_binomial(n, r) + r * lr + (n - r) * lt);
    return std::min(1.0, static_cast<double>(s));
}

Eigen::Vector2cd superposition_coefficients(double alpha) {
    const cplx e = std::polar(1.0, alpha);
    return {(1.0 + e) / 2.0, (1.0 - e) / 2.0};
}

double hermitian_form(const Eigen::Matrix2cd& m, const Eigen::Vector2cd& c) {
    return (c.adjoint() * m * c)(0, 0).real();
}

Eigen::Matrix2cd to_matrix2(const Eigen::MatrixXcd& m) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    if (m.size() == 0) return out;
    out = m;
    return out;
}

}  // namespace

Ratio make_ratio(double numerator, double denominator, const char* what) {
    if (!(denominator > 0.0)) throw NoEventsPass(std::string("no events pass: ") + what);
    return {numerator / denominator, numerator, denominator};
}

double DichotomicSums::accepted() const {
    double s = 0.0;
    for (const auto& [d, p] : by_difference) s += p;
    return s;
}

std::pair<double, double> DichotomicSums::signed_sums(int h, TieRule ties) const {
    double plus = 0.0;
    double minus = 0.0;
    for (const auto& [d, p] : by_difference) {
        const DichotomicOutcome o = dichotomic_from_difference(d, h, ties);
        plus += o.plus_weight * p;
        minus += o.minus_weight * p;
    }
    return {plus, minus};
}

Ratio DichotomicSums::visibility(int h, TieRule ties) const {
    const auto [plus, minus] = signed_sums(h, ties);
    return make_ratio(plus - minus, plus + minus, "visibility denominator is zero");
}

DichotomicSums& DichotomicSums::accumulate(const DichotomicSums& other, double weight) {
    for (const auto& [d, p] : other.by_difference) by_difference[d] += weight * p;
    dropped_mass += weight * other.dropped_mass;
    r_max = std::max(r_max, other.r_max);
    return *this;
}

double reflected_total_acceptance(const TwoModeState& state, double tau, int h) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("transmittivity outside [0, 1]");
    long double s = 0.0L;
    for (int n = 0; n <= state.max_total(); ++n) {
        const double w = state.sector_weight(n);
        if (w > 0.0) s += w * binomial_tail_above(n, h, 1.0 - tau);
    }
    return static_cast<double>(s);
}

Ratio conditional_injection_probability(double p, double g, double tau, int h, const Precision& precision) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("injection probability outside [0, 1]");
    const double a_inj = reflected_total_acceptance(macroqubit_state(0.0, g, precision.eps_trunc), tau, h);
    const double a_sp = reflected_total_acceptance(spontaneous_state(g, precision.eps_trunc), tau, h);
    return make_ratio(p * a_inj, p * a_inj + (1.0 - p) * a_sp, "intensity threshold rejects every event");
}

DichotomicSums filtered_dichotomic_sums(const TwoModeState& state, double tau, const FilterSpec& filter,
                                        double final_basis, const Precision& precision) {
    const TwoModeState s = in_basis(state, final_basis);
    const std::span<const TwoModeState> one(&s, 1);
    const ReflectedProjector projector = filter_projector(filter, final_basis);
    const SplitPlan plan = make_split_plan(one, tau, precision.drop_budget);
    const TransmittedGram gram = transmitted_gram(one, tau, projector, plan);
    DichotomicSums sums;
    for (const auto& [d, g] : gram.by_difference) sums.by_difference[d] = g(0, 0).real();
    sums.dropped_mass = gram.dropped_mass;
    sums.r_max = gram.r_max;
    return sums;
}

DichotomicSums filtered_dichotomic_sums(std::span<const WeightedState> mixture, double tau, const FilterSpec& filter,
                                        double final_basis, const Precision& precision) {
    DichotomicSums total;
    for (const auto& c : mixture) total.accumulate(filtered_dichotomic_sums(c.state, tau, filter, final_basis, precision), c.weight);
    return total;
}

double shutter_activation_probability(double beta_inj, double g, double tau, int k, double refl_basis,
                                      const Precision& precision) {
    const TwoModeState s = macroqubit_state(beta_inj, g, precision.eps_trunc);
    return filtered_dichotomic_sums(s, tau, FilterSpec::orthogonality(k, refl_basis), beta_inj, precision).accepted();
}

VisibilityResult visibility_single_of(double beta_inj, double refl_basis, int k, double final_basis, double g,
                                      double tau, const Precision& precision) {
    VisibilityResult r;
    r.sums = filtered_dichotomic_sums(macroqubit_state(beta_inj, g, precision.eps_trunc), tau,
                                      FilterSpec::orthogonality(k, refl_basis), final_basis, precision);
    r.pass_probability = r.sums.accepted();
    if (!(r.pass_probability > 0.0)) throw NoEventsPass("orthogonality filter rejects every event");
    r.visibility = r.sums.visibility(0, TieRule::HalfWeight);
    return r;
}

VisibilityResult visibility_double_of(double g, int k_refl, int h_trans, double beta_inj, double refl_basis,
                                      double final_basis, const Precision& precision) {
    if (h_trans < 0) throw std::domain_error("transmitted threshold is negative");
    VisibilityResult r;
    r.sums = filtered_dichotomic_sums(macroqubit_state(beta_inj, g, precision.eps_trunc), 0.5,
                                      FilterSpec::orthogonality(k_refl, refl_basis), final_basis, precision);
    r.pass_probability = r.sums.accepted();
    r.visibility = r.sums.visibility(h_trans, TieRule::Inconclusive);
    return r;
}

void CurveResult::add_meta(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
}

void CurveResult::add_meta(const std::string& key, double value) {
    meta.emplace_back(key, format_number(value));
}

void CurveResult::validate() const {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].first > samples[i - 1].first)) throw std::logic_error("curve x values are not strictly increasing");
    }
    if (!flagged.empty() && flagged.size() != samples.size()) throw std::logic_error("curve flags do not match samples");
    for (const auto& [name, values] : columns) {
        if (values.size() != samples.size()) throw std::logic_error("curve column '" + name + "' is ragged");
    }
}

double FringePoint::plus_fraction() const {
    return make_ratio(plus, plus + minus, "pre-selection rejects every event").value;
}

MacroFringe::MacroFringe(double g, double tau, const FilterSpec& preselect, double beta_meas, int final_k,
                         TieRule ties, const Precision& precision)
    : beta_meas_(beta_meas) {
    if (final_k < 0) throw std::domain_error("final threshold is negative");
    const std::array<TwoModeState, 2> states = {
        in_basis(macroqubit_state(0.0, g, precision.eps_trunc), beta_meas),
        in_basis(macroqubit_state(std::numbers::pi, g, precision.eps_trunc), beta_meas)};
    const ReflectedProjector projector = filter_projector(preselect, beta_meas);
    const SplitPlan plan = make_split_plan(states, tau, precision.drop_budget);
    const TransmittedGram gram = transmitted_gram(states, tau, projector, plan);
    plus_.setZero();
    minus_.setZero();
    pass_.setZero();
    for (const auto& [d, m] : gram.by_difference) {
        const Eigen::Matrix2cd g2 = to_matrix2(m);
        const DichotomicOutcome o = dichotomic_from_difference(d, final_k, ties);
        plus_ += o.plus_weight * g2;
        minus_ += o.minus_weight * g2;
        pass_ += g2;
    }
    dropped_mass_ = gram.dropped_mass;
    r_max_ = gram.r_max;
}

FringePoint MacroFringe::evaluate(double alpha) const {
    const Eigen::Vector2cd c = superposition_coefficients(alpha);
    return {hermitian_form(plus_, c), hermitian_form(minus_, c), hermitian_form(pass_, c)};
}

FilterSpec preselection_filter(double phi_pre, int k) {
    return FilterSpec::double_orthogonality(k, 0.0, phi_pre);
}

CurveResult fringe_pattern(std::span<const double> alpha_grid, double beta_meas, double phi_pre, int k, double g,
                           double tau, const Precision& precision) {
    const MacroFringe fringe(g, tau, preselection_filter(phi_pre, k), beta_meas, 0, TieRule::HalfWeight, precision);
    CurveResult curve;
    curve.x_label = "alpha";
    curve.y_label = "p_plus";
    std::vector<double> pass;
    for (double alpha : alpha_grid) {
        const FringePoint pt = fringe.evaluate(alpha);
        const bool ok = pt.plus + pt.minus > 0.0;
        curve.samples.emplace_back(alpha, ok ? pt.plus / (pt.plus + pt.minus) : std::nan(""));
        curve.flagged.push_back(!ok);
        pass.push_back(pt.pass);
    }
    curve.columns.emplace_back("pass_probability", std::move(pass));
    curve.add_meta("g", g);
    curve.add_meta("tau", tau);
    curve.add_meta("k", static_cast<double>(k));
    curve.add_meta("phi_pre", phi_pre);
    curve.add_meta("beta_meas", beta_meas);
    curve.add_meta("eps_trunc", precision.eps_trunc);
    curve.add_meta("dropped_mass", fringe.dropped_mass());
    curve.add_meta("r_max", static_cast<double>(fringe.r_max()));
    curve.validate();
    return curve;
}

FringeExtremum fringe_extremum(const MacroFringe& fringe, bool maximum, int grid) {
    if (grid < 3) throw std::invalid_argument("fringe grid needs at least three points");
    const double sign = maximum ? 1.0 : -1.0;
    const auto f = [&](double a) { return sign * fringe.evaluate(a).plus_fraction(); };
    const double step = kTwoPi / grid;
    int best = 0;
    double best_value = f(0.0);
    for (int i = 1; i < grid; ++i) {
        const double v = f(i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double lo = (best - 1) * step;
    double hi = (best + 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    double a = 0.5 * (lo + hi);
    double v = f(a);
    if (best_value > v) {
        a = best * step;
        v = best_value;
    }
    return {wrap_angle(a), sign * v};
}

PreselectVisibility preselect_visibility(double phi_pre, int k, double g, double tau, double beta_meas,
                                         const Precision& precision, int grid) {
    const MacroFringe fringe(g, tau, preselection_filter(phi_pre, k), beta_meas, 0, TieRule::HalfWeight, precision);
    PreselectVisibility out;
    out.max = fringe_extremum(fringe, true, grid);
    out.min = fringe_extremum(fringe, false, grid);
    out.visibility = make_ratio(out.max.value - out.min.value, out.max.value + out.min.value, "flat fringe").value;
    out.pass_probability = fringe.evaluate(out.max.alpha).pass;
    return out;
}

void MicroMacroModel::validate() const {
    gain_params(g);
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("transmittivity outside [0, 1]");
    if (final_k < 0) throw std::domain_error("final threshold is negative");
    preselect.validate();
}

ChshEvaluator::ChshEvaluator(const MicroMacroModel& model, const Precision& precision)
    : model_(model), precision_(precision) {
    model_.validate();
}

const MacroFringe& ChshEvaluator::fringe(double b) {
    auto it = fringes_.find(b);
    if (it == fringes_.end()) {
        const TieRule ties = model_.final_k == 0 ? TieRule::HalfWeight : TieRule::Inconclusive;
        it = fringes_.emplace(b, MacroFringe(model_.g, model_.tau, model_.preselect, b, model_.final_k, ties, precision_)).first;
    }
    return it->second;
}

namespace {

// Micro outcome +1 leaves the amplified photon in pi_{a + pi}, outcome -1 in pi_a.
Ratio correlation_from(const MacroFringe& f, double a) {
    const FringePoint up = f.evaluate(a + std::numbers::pi);
    const FringePoint down = f.evaluate(a);
    const double num = 0.5 * ((up.plus - up.minus) - (down.plus - down.minus));
    const double den = 0.5 * ((up.plus + up.minus) + (down.plus + down.minus));
    return make_ratio(num, den, "pre-selection rejects every event");
}

}  // namespace

Ratio ChshEvaluator::correlation(double a, double b) {
    return correlation_from(fringe(b), a);
}

double ChshEvaluator::pass_probability(double a, double b) {
    const MacroFringe& f = fringe(b);
    return 0.5 * (f.evaluate(a + std::numbers::pi).pass + f.evaluate(a).pass);
}

ChshResult chsh_value(double a, double a_prime, double b, double b_prime, const MicroMacroModel& model,
                      const Precision& precision) {
    ChshEvaluator ev(model, precision);
    ChshResult r;
    r.correlations = {ev.correlation(a, b), ev.correlation(a, b_prime), ev.correlation(a_prime, b),
                      ev.correlation(a_prime, b_prime)};
    r.s = r.correlations[0].value + r.correlations[1].value + r.correlations[2].value - r.correlations[3].value;
    return r;
}

ChshSweep chsh_sweep(std::span<const double> angles, const MicroMacroModel& model, const Precision& precision,
                     int jobs) {
    model.validate();
    const std::size_t n = angles.size();
    if (n == 0) throw std::invalid_argument("empty angle grid");
    const TieRule ties = model.final_k == 0 ? TieRule::HalfWeight : TieRule::Inconclusive;
    // Row b of the table holds E(a, b) for every a.
    struct Column {
        std::vector<double> e;
        double min_pass;
    };
    const auto columns = parallel_map(n, jobs, [&](std::size_t ib) {
        const MacroFringe f(model.g, model.tau, model.preselect, angles[ib], model.final_k, ties, precision);
        Column c{{}, 1.0};
        for (std::size_t ia = 0; ia < n; ++ia) {
            c.e.push_back(correlation_from(f, angles[ia]).value);
            c.min_pass = std::min(c.min_pass, 0.5 * (f.evaluate(angles[ia] + std::numbers::pi).pass + f.evaluate(angles[ia]).pass));
        }
        return c;
    });
    const auto e = [&](std::size_t ia, std::size_t ib) { return columns[ib].e[ia]; };
    ChshSweep out;
    out.max_s = -std::numeric_limits<double>::infinity();
    out.min_pass = 1.0;
    for (const auto& c : columns) out.min_pass = std::min(out.min_pass, c.min_pass);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t ap = 0; ap < n; ++ap) {
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t bp = 0; bp < n; ++bp) {
                    const double s = e(a, b) + e(a, bp) + e(ap, b) - e(ap, bp);
                    if (s > out.max_s) {
                        out.max_s = s;
                        out.argmax = {angles[a], angles[ap], angles[b], angles[bp]};
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace macroqubit
