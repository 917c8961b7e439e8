// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <numbers>

namespace macroqubit {

namespace {

constexpr double kLeakageLimit = 1e-6;

void enumerate(int modes, int per_mode, int budget, Occupation& cur, std::vector<Occupation>& out) {
    if (static_cast<int>(cur.size()) == modes) {
        out.push_back(cur);
        return;
    }
    for (int n = 0; n <= std::min(per_mode, budget); ++n) {
        cur.push_back(n);
        enumerate(modes, per_mode, budget - n, cur, out);
        cur.pop_back();
    }
}

Eigen::MatrixXcd mode_hamiltonian(const Eigen::MatrixXcd& u) {
    if (!(u.adjoint() * u).isIdentity(1e-12)) throw std::invalid_argument("mode matrix is not unitary");
    const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
    const Eigen::MatrixXcd& t = schur.matrixT();
    Eigen::MatrixXcd log_t = Eigen::MatrixXcd::Zero(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i) log_t(i, i) = std::log(t(i, i));
    const Eigen::MatrixXcd h = cplx(0, -1) * schur.matrixU() * log_t * schur.matrixU().adjoint();
    return 0.5 * (h + h.adjoint());
}

double boundary_weight(const DenseState& s) {
    double w = 0.0;
    for (std::size_t i = 0; i < s.index->size(); ++i) {
        const Occupation& n = s.index->tuple(i);
        for (int c : n) {
            if (c == s.index->per_mode()) {
                w += std::norm(s.vec[static_cast<Eigen::Index>(i)]);
                break;
            }
        }
    }
    return w;
}

// Propagators are reused across suites; evolutions at the same (g, cutoff) share one.
std::shared_ptr<const Eigen::MatrixXcd> amplifier_propagator(const FockIndex& idx, double g) {
    static std::mutex mutex;
    static std::map<std::pair<double, int>, std::shared_ptr<const Eigen::MatrixXcd>> cache;
    const auto key = std::make_pair(g, idx.per_mode());
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const auto dim = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Occupation& n = idx.tuple(static_cast<std::size_t>(i));
        const long up = idx.find({n[0] + 1, n[1] + 1});
        if (up >= 0) {
            const double c = std::sqrt(static_cast<double>((n[0] + 1) * (n[1] + 1)));
            gen(up, i) += c;  // a_H^dag a_V^dag
            gen(i, up) -= c;  // -a_H a_V
        }
    }
    auto u = std::make_shared<const Eigen::MatrixXcd>(expm(g * gen));
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(u)).first->second;
}

std::string label(const std::string& name, double beta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", beta);
    return name + " beta=" + buf;
}

void fill_zero(ProbabilityTable& table, int modes, int window) {
    std::vector<Occupation> all;
    Occupation cur;
    enumerate(modes, window, window, cur, all);
    for (auto& n : all) table.emplace(std::move(n), 0.0);
}

}  // namespace

FockIndex::FockIndex(int modes, int per_mode, int total) : modes_(modes), per_mode_(per_mode), total_(total) {
    if (modes < 1 || modes > 6) throw std::invalid_argument("oracle supports one to six modes");
    if (per_mode < 0 || total < 0) throw std::invalid_argument("negative cutoff");
    Occupation cur;
    enumerate(modes, per_mode, total, cur, tuples_);
    for (std::size_t i = 0; i < tuples_.size(); ++i) lookup_.emplace(tuples_[i], i);
}

long FockIndex::find(const Occupation& n) const {
    const auto it = lookup_.find(n);
    return it == lookup_.end() ? -1 : static_cast<long>(it->second);
}

DenseState fock_state(int modes, int per_mode, int total, const Occupation& n) {
    DenseState s;
    s.index = std::make_shared<const FockIndex>(modes, per_mode, total);
    s.vec = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.index->size()));
    const long i = s.index->find(n);
    if (i < 0) throw std::invalid_argument("occupation outside the truncated space");
    s.vec[i] = 1.0;
    return s;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
    return a.exp();
}

Eigen::VectorXcd expmv(const Eigen::SparseMatrix<cplx>& a, const Eigen::VectorXcd& v, double norm_bound) {
    const int steps = std::max(1, static_cast<int>(std::ceil(norm_bound)));
    Eigen::VectorXcd acc = v;
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd term = acc;
        Eigen::VectorXcd next = acc;
        for (int j = 1; j < 200; ++j) {
            term = (a * term) / (static_cast<double>(steps) * j);
            next += term;
            if (term.norm() <= 1e-18 * next.norm()) break;
        }
        acc = std::move(next);
    }
    return acc;
}

DenseState evolve_amplifier(ModePair injected, double g, int cutoff) {
    return evolve_amplifier(fock_state(2, cutoff, 2 * cutoff, {injected.a, injected.b}), g);
}

DenseState evolve_amplifier(const DenseState& initial, double g) {
    const FockIndex& idx = *initial.index;
    if (idx.modes() != 2 || idx.total() < 2 * idx.per_mode()) {
        throw std::invalid_argument("amplifier evolution needs a two-mode box space");
    }
    DenseState out;
    out.index = initial.index;
    out.vec = (*amplifier_propagator(idx, g)) * initial.vec;
    out.leakage = initial.leakage + boundary_weight(out);
    if (out.leakage > kLeakageLimit) {
        throw CutoffTooSmall("amplifier leakage " + std::to_string(out.leakage) + " exceeds 1e-6; raise the cutoff");
    }
    return out;
}

DenseState apply_mode_unitary(const DenseState& state, const std::vector<int>& modes, const Eigen::MatrixXcd& u) {
    const FockIndex& idx = *state.index;
    if (idx.per_mode() < idx.total()) throw std::invalid_argument("mode unitaries need per_mode >= total");
    if (static_cast<Eigen::Index>(modes.size()) != u.rows() || u.rows() != u.cols()) {
        throw std::invalid_argument("mode list does not match the unitary");
    }
    const Eigen::MatrixXcd h = mode_hamiltonian(u);
    std::vector<Eigen::Triplet<cplx>> triplets;
    const auto dim = static_cast<Eigen::Index>(idx.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Occupation& n = idx.tuple(static_cast<std::size_t>(i));
        for (std::size_t k = 0; k < modes.size(); ++k) {
            for (std::size_t l = 0; l < modes.size(); ++l) {
                const cplx hkl = h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
                if (hkl == cplx{}) continue;
                const int mk = modes[k];
                const int ml = modes[l];
                if (k == l) {
                    triplets.emplace_back(i, i, cplx(0, 1) * hkl * static_cast<double>(n[mk]));
                    continue;
                }
                if (n[ml] == 0) continue;
                Occupation m = n;
                m[ml] -= 1;
                m[mk] += 1;
                const long j = idx.find(m);
                const double c = std::sqrt(static_cast<double>(n[ml]) * m[mk]);
                triplets.emplace_back(j, i, cplx(0, 1) * hkl * c);
            }
        }
    }
    Eigen::SparseMatrix<cplx> a(dim, dim);
    a.setFromTriplets(triplets.begin(), triplets.end());
    DenseState out;
    out.index = state.index;
    out.leakage = state.leakage;
    const double bound = static_cast<double>(idx.total()) * h.norm();
    out.vec = expmv(a, state.vec, bound);
    return out;
}

DenseState apply_bs_unitary(const DenseState& state, double tau, int trans, int refl) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("transmittivity outside [0, 1]");
    const double t = std::sqrt(tau);
    const cplx r(0, std::sqrt(1.0 - tau));
    Eigen::Matrix2cd u;
    u << t, r, r, t;
    return apply_mode_unitary(state, {trans, refl}, u);
}

DenseState rotate_polarization(const DenseState& state, int first, int second, double delta) {
    if (delta == 0.0) return state;
    const Eigen::Matrix2cd u = basis_change_matrix(delta);
    return apply_mode_unitary(state, {first, second}, u);
}

DenseState hv_to_equatorial(const DenseState& state, int h_mode, int v_mode, double beta) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx e = std::polar(s, -beta);
    Eigen::Matrix2cd u;
    u << s, e, s, -e;
    return apply_mode_unitary(state, {h_mode, v_mode}, u);
}

DenseState embed(const DenseState& state, int modes, int total, const std::vector<int>& placement) {
    const FockIndex& src = *state.index;
    if (static_cast<int>(placement.size()) != src.modes()) throw std::invalid_argument("placement size mismatch");
    DenseState out;
    out.index = std::make_shared<const FockIndex>(modes, total, total);
    out.vec = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(out.index->size()));
    out.leakage = state.leakage;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Occupation& n = src.tuple(i);
        Occupation m(static_cast<std::size_t>(modes), 0);
        for (std::size_t k = 0; k < n.size(); ++k) m[static_cast<std::size_t>(placement[k])] = n[k];
        const cplx amp = state.vec[static_cast<Eigen::Index>(i)];
        const long j = out.index->find(m);
        if (j < 0) {
            out.leakage += std::norm(amp);
            continue;
        }
        out.vec[j] = amp;
    }
    return out;
}

ProbabilityTable probabilities(const DenseState& state) {
    ProbabilityTable t;
    for (std::size_t i = 0; i < state.index->size(); ++i) {
        t.emplace(state.index->tuple(i), std::norm(state.vec[static_cast<Eigen::Index>(i)]));
    }
    return t;
}

double max_deviation(const ProbabilityTable& closed_form, const ProbabilityTable& dense) {
    if (closed_form.size() != dense.size()) {
        throw StructuralError("probability tables have different sizes: " + std::to_string(closed_form.size()) +
                              " vs " + std::to_string(dense.size()));
    }
    double d = 0.0;
    auto it = dense.begin();
    for (const auto& [key, p] : closed_form) {
        if (it->first != key) throw StructuralError("probability tables index different outcomes");
        d = std::max(d, std::abs(p - it->second));
        ++it;
    }
    return d;
}

ProbabilityTable table_from_state(const TwoModeState& state, int window) {
    ProbabilityTable t;
    fill_zero(t, 2, window);
    for (auto& [key, p] : t) p = state.probability({key[0], key[1]});
    return t;
}

ProbabilityTable table_from_joint(const JointSplitState& joint, int window) {
    ProbabilityTable t;
    fill_zero(t, 4, window);
    for (const auto& e : joint.entries) {
        if (e.trans.total() + e.refl.total() > window) continue;
        t[{e.trans.a, e.trans.b, e.refl.a, e.refl.b}] += std::norm(e.amplitude);
    }
    return t;
}

ProbabilityTable table_from_three_way(const std::vector<ThreeWaySplitOutcome>& outcomes, int window) {
    ProbabilityTable t;
    fill_zero(t, 6, window);
    for (const auto& o : outcomes) {
        if (o.trans.total() + o.branch1.total() + o.branch2.total() > window) continue;
        t[{o.trans.a, o.trans.b, o.branch1.a, o.branch1.b, o.branch2.a, o.branch2.b}] += o.probability;
    }
    return t;
}

ProbabilityTable normalized(const ProbabilityTable& table) {
    double s = 0.0;
    for (const auto& [k, p] : table) s += p;
    if (!(s > 0.0)) throw StructuralError("cannot normalize an empty table");
    ProbabilityTable out = table;
    for (auto& [k, p] : out) p /= s;
    return out;
}

DenseState oracle_macroqubit(double beta, double g, int cutoff) {
    DenseState init = fock_state(2, cutoff, 2 * cutoff, {1, 0});
    init.vec[init.index->find({0, 1})] = std::polar(1.0, beta);
    init.vec /= std::sqrt(2.0);
    DenseState amplified = evolve_amplifier(init, g);
    DenseState tri = embed(amplified, 2, cutoff, {0, 1});
    return hv_to_equatorial(tri, 0, 1, beta);
}

std::vector<SuiteDeviation> oracle_suites(double g, int window, int amplifier_cutoff) {
    constexpr double pi = std::numbers::pi;
    constexpr double tau = 0.9;
    constexpr double eps = 1e-14;
    std::vector<SuiteDeviation> out;
    const auto timed = [&](const std::string& name, const std::function<double()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        const double d = f();
        out.push_back({name, d, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    };

    for (double beta : {0.0, pi / 2, pi / 4}) {
        timed(label("amplifier/macroqubit", beta), [&] {
            const DenseState dense = embed(oracle_macroqubit(beta, g, amplifier_cutoff), 2, window, {0, 1});
            return max_deviation(table_from_state(macroqubit_state(beta, g, eps), window), probabilities(dense));
        });
    }
    timed("amplifier/spontaneous", [&] {
        const DenseState amplified = evolve_amplifier(ModePair{0, 0}, g, amplifier_cutoff);
        const DenseState dense = hv_to_equatorial(embed(amplified, 2, window, {0, 1}), 0, 1, 0.3);
        return max_deviation(table_from_state(spontaneous_state(g, eps, 0.3), window), probabilities(dense));
    });

    for (double beta : {0.0, pi / 2}) {
        const double refl_basis = pi / 4;
        const TwoModeState state = macroqubit_state(beta, g, eps);
        const JointSplitState joint = ubs_joint(state, tau, refl_basis, window);
        DenseState dense = embed(oracle_macroqubit(beta, g, amplifier_cutoff), 4, window, {0, 1});
        dense = apply_bs_unitary(dense, tau, 0, 2);
        dense = apply_bs_unitary(dense, tau, 1, 3);
        dense = rotate_polarization(dense, 2, 3, refl_basis - beta);
        const ProbabilityTable dense_table = probabilities(dense);
        timed(label("splitter/ubs_joint", beta), [&] {
            return max_deviation(table_from_joint(joint, window), dense_table);
        });
        timed(label("splitter/conditional", beta), [&] {
            double worst = 0.0;
            for (ModePair detected : {ModePair{1, 0}, ModePair{0, 1}, ModePair{2, 0}, ModePair{1, 1}, ModePair{0, 3}}) {
                const TwoModeState cond = conditional_transmitted(joint, detected);
                ProbabilityTable closed;
                ProbabilityTable oracle;
                const int room = window - detected.total();
                for (const auto& [key, p] : dense_table) {
                    if (key[2] != detected.a || key[3] != detected.b) continue;
                    oracle[{key[0], key[1]}] = p;
                    closed[{key[0], key[1]}] = key[0] + key[1] <= room ? cond.probability({key[0], key[1]}) : 0.0;
                }
                worst = std::max(worst, max_deviation(normalized(closed), normalized(oracle)));
            }
            return worst;
        });
    }

    timed("splitter/three_way", [&] {
        const double beta = 0.0;
        const double b1 = 0.0;
        const double b2 = pi / 4;
        const TwoModeState state = truncate_total(macroqubit_state(beta, g, eps), window);
        const auto outcomes = three_way_split(state, tau, b1, b2);
        DenseState dense = embed(oracle_macroqubit(beta, g, amplifier_cutoff), 6, window, {0, 1});
        dense = apply_bs_unitary(dense, tau, 0, 2);
        dense = apply_bs_unitary(dense, tau, 1, 3);
        dense = apply_bs_unitary(dense, 0.5, 2, 4);
        dense = apply_bs_unitary(dense, 0.5, 3, 5);
        dense = rotate_polarization(dense, 2, 3, b1 - beta);
        dense = rotate_polarization(dense, 4, 5, b2 - beta);
        return max_deviation(table_from_three_way(outcomes, window), probabilities(dense));
    });
    return out;
}

}  // namespace macroqubit
