// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/splitter.hpp"

#include <algorithm>
#include <tuple>

namespace macroqubit {

namespace {

double log_or_null(double x) {
    return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

void check_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("transmittivity outside [0, 1]");
}

// Fixed per-(T, R) factor tau^{T/2} (1 - tau)^{R/2}, in log domain.
struct SplitScale {
    double log_t;
    double log_r;

    explicit SplitScale(double tau) : log_t(log_or_null(tau)), log_r(log_or_null(1.0 - tau)) {}

    double log_factor(int t, int r) const {
        double l = 0.0;
        if (t > 0) l += 0.5 * t * log_t;
        if (r > 0) l += 0.5 * r * log_r;
        return l;
    }
};

// Reflected amplitudes v(r_a), in the state's basis, that accompany transmitted
// (t_a, T - t_a) in sector N with R reflected photons; the common i^R is omitted.
void reflected_vector(const Eigen::VectorXcd& sector, int n, int r, int ta, double log_scale,
                      Eigen::Ref<Eigen::VectorXcd> out) {
    const int t = n - r;
    const int tb = t - ta;
    for (int ra = 0; ra <= r; ++ra) {
        const int na = ta + ra;
        const int nb = tb + r - ra;
        const cplx psi = sector[na];
        if (psi == cplx{}) {
            out[ra] = 0.0;
            continue;
        }
        const double l = 0.5 * (log_binomial(na, ta) + log_binomial(nb, tb)) + log_scale;
        out[ra] = psi * std::exp(l);
    }
}

// Change-of-basis table for R photons, identity when delta is zero.
std::shared_ptr<const SectorMatrix<double>> change_table(int r, double delta) {
    if (delta == 0.0) {
        return std::make_shared<const SectorMatrix<double>>(SectorMatrix<double>::Identity(r + 1, r + 1));
    }
    return RotationTableCache::global().get(r, -delta);
}

double binomial_upper_tail(int n, int cap, double reflect) {
    // P(R > cap) for R ~ Binomial(n, reflect).
    if (cap >= n) return 0.0;
    if (reflect <= 0.0) return 0.0;
    if (reflect >= 1.0) return 1.0;
    const double lr = std::log(reflect);
    const double lt = std::log1p(-reflect);
    long double s = 0.0L;
    for (int r = cap + 1; r <= n; ++r) s += std::exp(log_binomial(n, r) + r * lr + (n - r) * lt);
    return static_cast<double>(s);
}

// Tensor of the 50/50 split of R reflected photons into R1 + R2, in the state
// basis: S(xa, ua; ra) = sqrt(C(ra, xa) C(rb, xb)) 2^{-R/2} i^{ua + ub}.
cplx half_split_amplitude(int r, int r1, int xa, int ua) {
    const int r2 = r - r1;
    const int xb = r1 - xa;
    const int ub = r2 - ua;
    const int ra = xa + ua;
    const int rb = xb + ub;
    const double l = 0.5 * (log_binomial(ra, xa) + log_binomial(rb, xb)) - 0.5 * r * std::log(2.0);
    return std::polar(std::exp(l), i_power_phase(ua + ub));
}

// Rows (p, q) of branch amplitudes for a fixed reflected vector space: returns
// B with B(p * (R2+1) + q, ra) = amplitude of branch counts (p, R1-p), (q, R2-q)
// given |ra, R - ra> before the split.
Eigen::MatrixXcd branch_map(int r, int r1, const SectorMatrix<double>& k1, const SectorMatrix<double>& k2) {
    const int r2 = r - r1;
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero((r1 + 1) * (r2 + 1), r + 1);
    Eigen::MatrixXcd m(r1 + 1, r2 + 1);
    for (int ra = 0; ra <= r; ++ra) {
        m.setZero();
        for (int xa = std::max(0, ra - r2); xa <= std::min(r1, ra); ++xa) m(xa, ra - xa) = half_split_amplitude(r, r1, xa, ra - xa);
        const Eigen::MatrixXcd out = k1 * m * k2.transpose();
        for (int p = 0; p <= r1; ++p) {
            for (int q = 0; q <= r2; ++q) b(p * (r2 + 1) + q, ra) = out(p, q);
        }
    }
    return b;
}

}  // namespace

double JointSplitState::total_probability() const {
    double s = 0.0;
    for (const auto& e : entries) s += std::norm(e.amplitude);
    return s;
}

std::map<ModePair, double> JointSplitState::reflected_marginal() const {
    std::map<ModePair, double> out;
    for (const auto& e : entries) out[e.refl] += std::norm(e.amplitude);
    return out;
}

std::map<ModePair, double> JointSplitState::transmitted_marginal() const {
    std::map<ModePair, double> out;
    for (const auto& e : entries) out[e.trans] += std::norm(e.amplitude);
    return out;
}

JointSplitState ubs_joint(const TwoModeState& state, double tau, double refl_basis, int refl_cap) {
    check_tau(tau);
    JointSplitState joint;
    joint.tau = tau;
    joint.trans_basis = state.basis;
    joint.refl_basis = refl_basis;
    joint.refl_cap = refl_cap;
    joint.trunc_tail = state.trunc_tail;
    const double delta = refl_basis - state.basis;
    const SplitScale scale(tau);
    for (int n = 0; n <= state.max_total(); ++n) {
        const auto& sector = state.sectors[static_cast<std::size_t>(n)];
        if (sector.size() == 0) continue;
        const int r_hi = refl_cap < 0 ? n : std::min(n, refl_cap);
        if (refl_cap >= 0) joint.trunc_tail += sector.squaredNorm() * binomial_upper_tail(n, refl_cap, 1.0 - tau);
        for (int r = 0; r <= r_hi; ++r) {
            const int t = n - r;
            const double ls = scale.log_factor(t, r);
            if (std::isinf(ls)) continue;
            const auto table = change_table(r, delta);
            const cplx ir = std::polar(1.0, i_power_phase(r));
            Eigen::VectorXcd v(r + 1);
            for (int ta = 0; ta <= t; ++ta) {
                reflected_vector(sector, n, r, ta, ls, v);
                const Eigen::VectorXcd w = ir * ((*table) * v);
                for (int p = 0; p <= r; ++p) {
                    if (w[p] == cplx{}) continue;
                    joint.entries.push_back({{ta, t - ta}, {p, r - p}, w[p]});
                }
            }
        }
    }
    return joint;
}

TwoModeState conditional_transmitted(const JointSplitState& joint, ModePair detected) {
    double prob = 0.0;
    int max_total = -1;
    for (const auto& e : joint.entries) {
        if (e.refl != detected) continue;
        prob += std::norm(e.amplitude);
        max_total = std::max(max_total, e.trans.total());
    }
    if (!(prob > 0.0)) {
        throw UnreachableOutcome("reflected outcome (" + std::to_string(detected.a) + ", " +
                                 std::to_string(detected.b) + ") has zero probability");
    }
    TwoModeState out;
    out.basis = joint.trans_basis;
    out.sectors.assign(static_cast<std::size_t>(max_total) + 1, Eigen::VectorXcd());
    const double scale = 1.0 / std::sqrt(prob);
    for (const auto& e : joint.entries) {
        if (e.refl != detected) continue;
        auto& v = out.sectors[static_cast<std::size_t>(e.trans.total())];
        if (v.size() == 0) v = Eigen::VectorXcd::Zero(e.trans.total() + 1);
        v[e.trans.a] += e.amplitude * scale;
    }
    return out;
}

std::vector<ThreeWaySplitOutcome> three_way_split(const TwoModeState& state, double tau, double beta1,
                                                  double beta2, int refl_cap) {
    check_tau(tau);
    std::vector<ThreeWaySplitOutcome> out;
    const SplitScale scale(tau);
    for (int n = 0; n <= state.max_total(); ++n) {
        const auto& sector = state.sectors[static_cast<std::size_t>(n)];
        if (sector.size() == 0) continue;
        const int r_hi = refl_cap < 0 ? n : std::min(n, refl_cap);
        for (int r = 0; r <= r_hi; ++r) {
            const int t = n - r;
            const double ls = scale.log_factor(t, r);
            if (std::isinf(ls)) continue;
            std::vector<Eigen::MatrixXcd> maps;
            for (int r1 = 0; r1 <= r; ++r1) {
                const auto k1 = change_table(r1, beta1 - state.basis);
                const auto k2 = change_table(r - r1, beta2 - state.basis);
                maps.push_back(branch_map(r, r1, *k1, *k2));
            }
            Eigen::VectorXcd v(r + 1);
            for (int ta = 0; ta <= t; ++ta) {
                reflected_vector(sector, n, r, ta, ls, v);
                for (int r1 = 0; r1 <= r; ++r1) {
                    const int r2 = r - r1;
                    const Eigen::VectorXcd b = maps[static_cast<std::size_t>(r1)] * v;
                    for (int p = 0; p <= r1; ++p) {
                        for (int q = 0; q <= r2; ++q) {
                            const double prob = std::norm(b[p * (r2 + 1) + q]);
                            if (prob == 0.0) continue;
                            out.push_back({{ta, t - ta}, {p, r1 - p}, {q, r2 - q}, prob});
                        }
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ThreeWaySplitOutcome& x, const ThreeWaySplitOutcome& y) {
        return std::tie(x.trans, x.branch1, x.branch2) < std::tie(y.trans, y.branch1, y.branch2);
    });
    return out;
}

ReflectedProjector::ReflectedProjector(Builder builder)
    : builder_(std::move(builder)), cache_(std::make_shared<Cache>()) {}

const Eigen::MatrixXcd& ReflectedProjector::operator()(int reflected_total) const {
    std::lock_guard lock(cache_->mutex);
    auto& slot = cache_->matrices[reflected_total];
    if (!slot) slot = std::make_unique<Eigen::MatrixXcd>(builder_(reflected_total));
    return *slot;
}

ReflectedProjector all_pass_projector() {
    return ReflectedProjector([](int r) -> Eigen::MatrixXcd { return Eigen::MatrixXcd::Identity(r + 1, r + 1); });
}

ReflectedProjector total_count_projector(int h) {
    return ReflectedProjector([h](int r) -> Eigen::MatrixXcd {
        return (r > h ? 1.0 : 0.0) * Eigen::MatrixXcd::Identity(r + 1, r + 1);
    });
}

ReflectedProjector count_projector(double delta, std::function<bool(ModePair)> pass) {
    return ReflectedProjector([delta, pass = std::move(pass)](int r) -> Eigen::MatrixXcd {
        const auto k = change_table(r, delta);
        Eigen::VectorXd d(r + 1);
        for (int p = 0; p <= r; ++p) d[p] = pass({p, r - p}) ? 1.0 : 0.0;
        Eigen::MatrixXcd q = k->adjoint() * d.asDiagonal() * (*k);
        return 0.5 * (q + q.adjoint());
    });
}

ReflectedProjector split_count_projector(double delta1, double delta2,
                                         std::function<bool(ModePair, ModePair)> pass) {
    return ReflectedProjector([delta1, delta2, pass = std::move(pass)](int r) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(r + 1, r + 1);
        for (int r1 = 0; r1 <= r; ++r1) {
            const int r2 = r - r1;
            std::vector<int> rows;
            for (int p = 0; p <= r1; ++p) {
                for (int s = 0; s <= r2; ++s) {
                    if (pass({p, r1 - p}, {s, r2 - s})) rows.push_back(p * (r2 + 1) + s);
                }
            }
            if (rows.empty()) continue;
            const auto k1 = change_table(r1, delta1);
            const auto k2 = change_table(r2, delta2);
            const Eigen::MatrixXcd b = branch_map(r, r1, *k1, *k2);
            Eigen::MatrixXcd kept(static_cast<Eigen::Index>(rows.size()), r + 1);
            for (std::size_t i = 0; i < rows.size(); ++i) kept.row(static_cast<Eigen::Index>(i)) = b.row(rows[i]);
            q.noalias() += kept.adjoint() * kept;
        }
        return 0.5 * (q + q.adjoint());
    });
}

SplitPlan make_split_plan(std::span<const TwoModeState> states, double tau, double drop_budget) {
    check_tau(tau);
    SplitPlan plan;
    int n_max = 0;
    for (const auto& s : states) n_max = std::max(n_max, s.max_total());
    std::vector<double> weight(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (const auto& s : states) {
        for (int n = 0; n <= s.max_total(); ++n) weight[static_cast<std::size_t>(n)] = std::max(weight[static_cast<std::size_t>(n)], s.sector_weight(n));
    }
    const double lr = log_or_null(1.0 - tau);
    const double lt = log_or_null(tau);
    struct Cell {
        double mass;
        int n;
        int r;
    };
    std::vector<Cell> cells;
    for (int n = 0; n <= n_max; ++n) {
        const double w = weight[static_cast<std::size_t>(n)];
        if (w <= 0.0) continue;
        for (int r = 0; r <= n; ++r) {
            double l = log_binomial(n, r);
            if (r > 0) l += r * lr;
            if (n - r > 0) l += (n - r) * lt;
            const double mass = std::isinf(l) ? 0.0 : w * std::exp(l);
            if (mass > 0.0) cells.push_back({mass, n, r});
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
        return std::tie(x.mass, x.n, x.r) < std::tie(y.mass, y.n, y.r);
    });
    std::size_t first_kept = 0;
    double dropped = 0.0;
    while (first_kept < cells.size() && dropped + cells[first_kept].mass <= drop_budget) {
        dropped += cells[first_kept].mass;
        ++first_kept;
    }
    plan.dropped_mass = dropped;
    plan.reflected.assign(static_cast<std::size_t>(n_max) + 1, {});
    for (std::size_t i = first_kept; i < cells.size(); ++i) {
        plan.reflected[static_cast<std::size_t>(cells[i].n)].push_back(cells[i].r);
        plan.r_max = std::max(plan.r_max, cells[i].r);
        plan.n_max = std::max(plan.n_max, cells[i].n);
    }
    for (auto& rs : plan.reflected) std::sort(rs.begin(), rs.end());
    return plan;
}

Eigen::MatrixXcd TransmittedGram::total() const {
    Eigen::MatrixXcd sum;
    for (const auto& [d, g] : by_difference) {
        if (sum.size() == 0) sum = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
        sum += g;
    }
    return sum;
}

TransmittedGram transmitted_gram(std::span<const TwoModeState> states, double tau,
                                 const ReflectedProjector& projector, const SplitPlan& plan) {
    check_tau(tau);
    if (states.empty()) throw std::invalid_argument("transmitted_gram: no states");
    for (const auto& s : states) {
        if (s.basis != states.front().basis) throw std::invalid_argument("transmitted_gram: states in different bases");
    }
    const auto count = static_cast<Eigen::Index>(states.size());
    TransmittedGram gram;
    gram.dropped_mass = plan.dropped_mass;
    gram.r_max = plan.r_max;
    gram.n_max = plan.n_max;
    const SplitScale scale(tau);
    const Eigen::VectorXcd empty;
    for (int n = 0; n < static_cast<int>(plan.reflected.size()); ++n) {
        for (int r : plan.reflected[static_cast<std::size_t>(n)]) {
            const int t = n - r;
            const double ls = scale.log_factor(t, r);
            if (std::isinf(ls)) continue;
            const Eigen::MatrixXcd& q = projector(r);
            if (q.isZero(0.0)) continue;
            Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero((t + 1) * count, r + 1);
            for (Eigen::Index s = 0; s < count; ++s) {
                const auto& st = states[static_cast<std::size_t>(s)];
                if (n > st.max_total() || st.sectors[static_cast<std::size_t>(n)].size() == 0) continue;
                Eigen::VectorXcd v(r + 1);
                for (int ta = 0; ta <= t; ++ta) {
                    reflected_vector(st.sectors[static_cast<std::size_t>(n)], n, r, ta, ls, v);
                    x.row(ta * count + s) = v.transpose();
                }
            }
            const Eigen::MatrixXcd y = x.conjugate() * q;
            for (int ta = 0; ta <= t; ++ta) {
                const Eigen::MatrixXcd g = y.middleRows(ta * count, count) * x.middleRows(ta * count, count).transpose();
                auto [it, fresh] = gram.by_difference.try_emplace(2 * ta - t, g);
                if (!fresh) it->second += g;
            }
        }
    }
    return gram;
}

cplx same_basis_joint_amplitude(double g, double tau, int m, int n, int p, int q) {
    check_tau(tau);
    if (m < 0 || n < 0 || p < 0 || q < 0) return {};
    if (((m + p) & 1) == 0 || ((n + q) & 1) != 0) return {};
    const int i = (m + p - 1) / 2;
    const int j = (n + q) / 2;
    const GainParams gp = gain_params(g);
    if (gp.gamma == 0.0 && i + j > 0) return {};
    const double lhalf = gp.gamma > 0 ? std::log(gp.gamma / 2) : 0.0;
    const SplitScale scale(tau);
    const double ls = scale.log_factor(m + n, p + q);
    if (std::isinf(ls)) return {};
    const double l = -2.0 * std::log(gp.c) + (i + j) * lhalf + ls + log_factorial(2 * i + 1) + log_factorial(2 * j) -
                     log_factorial(i) - log_factorial(j) -
                     0.5 * (log_factorial(p) + log_factorial(q) + log_factorial(m) + log_factorial(n));
    const double phase = ((j & 1) ? std::numbers::pi : 0.0) + i_power_phase(p + q);
    return std::polar(std::exp(l), phase);
}

double conjugate_basis_joint_probability(double g, double tau, int m, int n, int p, int q) {
    check_tau(tau);
    if (m < 0 || n < 0 || p < 0 || q < 0) return 0.0;
    const int total = m + n + p + q;
    if ((total & 1) == 0) return 0.0;
    const GainParams gp = gain_params(g);
    if (gp.gamma == 0.0 && total > 1) return 0.0;
    long double sum = 0.0L;
    for (int j = 0; 2 * j <= total - 1; ++j) {
        for (int s = 0; s <= p; ++s) {
            const int a = n + q + s - 2 * j;
            const int b = 2 * j - n - s;
            if (a < 0 || b < 0) continue;
            const double l = log_factorial(total - 2 * j) + log_factorial(2 * j) -
                             log_factorial((total - 2 * j - 1) / 2) - log_factorial(j) - log_factorial(a) -
                             log_factorial(s) - log_factorial(b) - log_factorial(p - s);
            sum += ((s & 1) ? -1.0L : 1.0L) * std::exp(static_cast<long double>(l));
        }
    }
    const SplitScale scale(tau);
    const double ls = scale.log_factor(m + n, p + q);
    if (std::isinf(ls)) return 0.0;
    const double lhalf = gp.gamma > 0 ? std::log(gp.gamma / 2) : 0.0;
    const double lpref = -4.0 * std::log(gp.c) + (total - 1) * lhalf + log_factorial(p) + log_factorial(q) -
                         log_factorial(m) - log_factorial(n) + 2.0 * ls - (p + q) * std::log(2.0);
    return static_cast<double>(std::exp(static_cast<long double>(lpref)) * sum * sum);
}

}  // namespace macroqubit
