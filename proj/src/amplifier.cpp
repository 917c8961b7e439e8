// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/amplifier.hpp"

#include <stdexcept>

namespace macroqubit {

namespace {

constexpr int kMaxSeriesTerms = 200000;

// Squared magnitudes of a normalized series, truncated so the exact remainder
// (summed from the far end) is at most `tail_budget`. Returns kept terms of the
// log-amplitude and the remainder.
struct SeriesCut {
    std::vector<double> log_amplitude;
    double tail = 0.0;
};

template <typename LogTerm>
SeriesCut cut_series(LogTerm log_term, double tail_budget) {
    std::vector<double> logs;
    for (int i = 0;; ++i) {
        if (i >= kMaxSeriesTerms) throw std::domain_error("amplitude series does not converge; gain too large");
        const double l = log_term(i);
        logs.push_back(l);
        if (std::isinf(l) || (i > 4 && 2.0 * l < -80.0 && l < logs[i - 1])) break;
    }
    std::vector<long double> tail(logs.size() + 1, 0.0L);
    for (std::size_t i = logs.size(); i-- > 0;) tail[i] = tail[i + 1] + std::exp(2.0L * logs[i]);
    std::size_t keep = 1;
    while (keep < logs.size() && tail[keep] > tail_budget) ++keep;
    SeriesCut cut;
    cut.log_amplitude.assign(logs.begin(), logs.begin() + static_cast<std::ptrdiff_t>(keep));
    cut.tail = static_cast<double>(tail[keep]);
    return cut;
}

double log_or_null(double x) {
    return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

double checked_eps(double eps_trunc) {
    if (!(eps_trunc > 0.0)) throw std::domain_error("truncation tolerance must be positive");
    return eps_trunc;
}

}  // namespace

GainParams gain_params(double g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::domain_error("gain must be finite and nonnegative");
    const double s = std::sinh(g);
    return {g, std::tanh(g), std::cosh(g), s * s};
}

cplx TwoModeState::amplitude(ModePair n) const {
    const int total = n.total();
    if (n.a < 0 || n.b < 0 || total >= static_cast<int>(sectors.size())) return {};
    const auto& v = sectors[static_cast<std::size_t>(total)];
    if (v.size() == 0) return {};
    return v[n.a];
}

double TwoModeState::sector_weight(int n) const {
    if (n < 0 || n >= static_cast<int>(sectors.size())) return 0.0;
    return sectors[static_cast<std::size_t>(n)].squaredNorm();
}

double TwoModeState::norm_squared() const {
    double s = 0.0;
    for (const auto& v : sectors) s += v.squaredNorm();
    return s;
}

std::pair<double, double> TwoModeState::mean_counts() const {
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t n = 0; n < sectors.size(); ++n) {
        const auto& v = sectors[n];
        for (Eigen::Index a = 0; a < v.size(); ++a) {
            const double p = std::norm(v[a]);
            na += p * static_cast<double>(a);
            nb += p * static_cast<double>(static_cast<Eigen::Index>(n) - a);
        }
    }
    return {na, nb};
}

TwoModeState truncate_total(const TwoModeState& state, int max_total) {
    TwoModeState out = state;
    if (max_total < 0) throw std::domain_error("truncate_total: negative photon bound");
    if (max_total >= state.max_total()) return out;
    for (int n = max_total + 1; n <= state.max_total(); ++n) out.trunc_tail += state.sector_weight(n);
    out.sectors.resize(static_cast<std::size_t>(max_total) + 1);
    return out;
}

TwoModeState in_basis(const TwoModeState& state, double target_basis) {
    const double delta = target_basis - state.basis;
    TwoModeState out = state;
    out.basis = target_basis;
    if (delta == 0.0) return out;
    SectorTransform<double> transform(basis_change_matrix(delta));
    for (std::size_t n = 0; n < state.sectors.size(); ++n) {
        transform.advance_to(static_cast<int>(n));
        if (state.sectors[n].size() == 0) continue;
        out.sectors[n] = transform.matrix() * state.sectors[n];
    }
    return out;
}

TwoModeState macroqubit_state(double beta, double g, double eps_trunc) {
    checked_eps(eps_trunc);
    const GainParams gp = gain_params(g);
    const double lhalf = log_or_null(gp.gamma / 2);
    const double lc = std::log(gp.c);
    const auto odd_term = [&](int i) {
        if (i > 0 && std::isinf(lhalf)) return -std::numeric_limits<double>::infinity();
        return (i > 0 ? i * lhalf : 0.0) + 0.5 * log_factorial(2 * i + 1) - log_factorial(i) - 1.5 * lc;
    };
    const auto even_term = [&](int j) {
        if (j > 0 && std::isinf(lhalf)) return -std::numeric_limits<double>::infinity();
        return (j > 0 ? j * lhalf : 0.0) + 0.5 * log_factorial(2 * j) - log_factorial(j) - 0.5 * lc;
    };
    // Cut by total photon number so the kept set is closed under basis changes.
    // Sector 2n+1 carries weight (n+1) Gamma^(2n) / C^4.
    const double lg = log_or_null(gp.gamma);
    const SeriesCut sectors = cut_series(
        [&](int n) {
            if (n > 0 && std::isinf(lg)) return -std::numeric_limits<double>::infinity();
            return 0.5 * std::log(n + 1.0) + (n > 0 ? n * lg : 0.0) - 2.0 * lc;
        },
        eps_trunc);

    TwoModeState st;
    st.basis = beta;
    const int pairs = static_cast<int>(sectors.log_amplitude.size()) - 1;
    const int max_total = 2 * pairs + 1;
    st.sectors.assign(static_cast<std::size_t>(max_total) + 1, Eigen::VectorXcd());
    for (int n = 1; n <= max_total; n += 2) st.sectors[static_cast<std::size_t>(n)] = Eigen::VectorXcd::Zero(n + 1);
    for (int i = 0; i <= pairs; ++i) {
        for (int j = 0; i + j <= pairs; ++j) {
            const LogWeight w = LogWeight::make(odd_term(i) + even_term(j),
                                                -beta * (i + j) + ((j & 1) ? std::numbers::pi : 0.0));
            st.sectors[static_cast<std::size_t>(2 * i + 1 + 2 * j)][2 * i + 1] = w.value();
        }
    }
    st.trunc_tail = sectors.tail;
    return st;
}

HvState spontaneous_hv(double g, double eps_trunc) {
    checked_eps(eps_trunc);
    const GainParams gp = gain_params(g);
    const double lg = log_or_null(gp.gamma);
    const double lc = std::log(gp.c);
    const SeriesCut cut = cut_series(
        [&](int n) {
            if (n > 0 && std::isinf(lg)) return -std::numeric_limits<double>::infinity();
            return (n > 0 ? n * lg : 0.0) - lc;
        },
        eps_trunc);
    HvState hv;
    for (std::size_t n = 0; n < cut.log_amplitude.size(); ++n) {
        const int k = static_cast<int>(n);
        hv.terms.emplace_back(ModePair{k, k}, std::exp(cut.log_amplitude[n]));
    }
    hv.trunc_tail = cut.tail;
    return hv;
}

TwoModeState spontaneous_state(double g, double eps_trunc, double basis) {
    const HvState hv = spontaneous_hv(g, eps_trunc);
    const GainParams gp = gain_params(g);
    const double lhalf = log_or_null(gp.gamma / 2);
    const double lc = std::log(gp.c);
    const int pairs = static_cast<int>(hv.terms.size()) - 1;
    TwoModeState st;
    st.basis = basis;
    st.trunc_tail = hv.trunc_tail;
    st.sectors.assign(static_cast<std::size_t>(2 * pairs) + 1, Eigen::VectorXcd());
    // exp(Gamma a_H^dag a_V^dag) with a_H^dag a_V^dag = e^{-i basis}(a^dag a^dag - b^dag b^dag)/2.
    for (int n = 0; n <= pairs; ++n) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n + 1);
        for (int i = 0; i <= n; ++i) {
            const int j = n - i;
            if (n > 0 && std::isinf(lhalf)) continue;
            const double lm = (n > 0 ? n * lhalf : 0.0) + 0.5 * (log_factorial(2 * i) + log_factorial(2 * j)) -
                              log_factorial(i) - log_factorial(j) - lc;
            v[2 * i] = LogWeight::make(lm, -basis * n + ((j & 1) ? std::numbers::pi : 0.0)).value();
        }
        st.sectors[static_cast<std::size_t>(2 * n)] = std::move(v);
    }
    return st;
}

MeanPhotons mean_photons(double phi, double p, double g) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("injection probability outside [0, 1]");
    const double m = gain_params(g).mean_photons;
    const double half = 0.5 * (2.0 * m + 1.0);
    return {p * (m + half * (1.0 + std::cos(phi))) + (1.0 - p) * m,
            p * (m + half * (1.0 - std::cos(phi))) + (1.0 - p) * m};
}

std::vector<WeightedState> injected_mixture(const InjectionModel& model, double beta, double eps_trunc) {
    if (!(model.p >= 0.0 && model.p <= 1.0)) throw std::domain_error("injection probability outside [0, 1]");
    std::vector<WeightedState> out;
    if (model.p > 0.0) out.push_back({model.p, macroqubit_state(beta, model.g, eps_trunc)});
    if (model.p < 1.0) out.push_back({1.0 - model.p, spontaneous_state(model.g, eps_trunc, beta)});
    return out;
}

}  // namespace macroqubit
