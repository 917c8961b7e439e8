// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/fock.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace macroqubit {

namespace {

constexpr long kTableSize = 1L << 16;

const std::vector<double>& log_factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kTableSize);
        t[0] = 0.0;
        // Running sum keeps the table free of lgamma's global sign state.
        long double acc = 0.0L;
        for (long n = 1; n < kTableSize; ++n) {
            acc += std::log(static_cast<long double>(n));
            t[n] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

double stirling_log_factorial(long n) {
    const double x = static_cast<double>(n) + 1.0;
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

// log|x| and sign, with log|0| = -inf.
struct SignedLog {
    double log_abs;
    int sign;
};

SignedLog signed_log(double x) {
    if (x == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    return {std::log(std::abs(x)), x > 0 ? 1 : -1};
}

double power_log(const SignedLog& base, int exponent, int& sign) {
    if (exponent == 0) return 0.0;
    if (base.sign == 0) {
        sign = 0;
        return -std::numeric_limits<double>::infinity();
    }
    if (base.sign < 0 && (exponent & 1)) sign = -sign;
    return exponent * base.log_abs;
}

}  // namespace

double normalize_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phase, two_pi);
    if (p <= -std::numbers::pi) p += two_pi;
    if (p > std::numbers::pi) p -= two_pi;
    return p;
}

LogWeight LogWeight::make(double log_magnitude, double phase) {
    if (std::isinf(log_magnitude) && log_magnitude < 0) return null();
    return {log_magnitude, normalize_phase(phase)};
}

LogWeight LogWeight::from_complex(cplx z) {
    if (z == cplx{}) return null();
    return make(std::log(std::abs(z)), std::arg(z));
}

LogWeight operator*(const LogWeight& x, const LogWeight& y) {
    if (x.is_null() || y.is_null()) return LogWeight::null();
    return LogWeight::make(x.log_magnitude + y.log_magnitude, x.phase + y.phase);
}

double log_factorial(long n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (n < kTableSize) return log_factorial_table()[n];
    return stirling_log_factorial(n);
}

double log_binomial(long n, long k) {
    if (n < 0 || k < 0) throw std::domain_error("log_binomial: negative argument");
    if (k > n) {
        throw std::domain_error("log_binomial: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    }
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double i_power_phase(long k) {
    static constexpr std::array<double, 4> phases = {0.0, std::numbers::pi / 2, std::numbers::pi,
                                                     -std::numbers::pi / 2};
    return phases[static_cast<std::size_t>(((k % 4) + 4) % 4)];
}

std::vector<SplitTerm> split_single_mode(int n, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("split_single_mode: tau outside [0, 1]");
    if (n < 0) throw std::domain_error("split_single_mode: negative photon count");
    const SignedLog lt = signed_log(tau);
    const SignedLog lr = signed_log(1.0 - tau);
    std::vector<SplitTerm> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int kt = 0; kt <= n; ++kt) {
        const int kr = n - kt;
        int sign = 1;
        double lm = 0.5 * log_binomial(n, kt);
        lm += 0.5 * power_log(lt, kt, sign);
        lm += 0.5 * power_log(lr, kr, sign);
        SplitTerm term{kt, kr, sign == 0 ? LogWeight::null() : LogWeight::make(lm, i_power_phase(kr))};
        out.push_back(term);
    }
    return out;
}

LogWeight rotation_kernel(int n, int m, double phi, int r, int s) {
    if (n < 0 || m < 0 || r < 0 || s < 0 || r + s != n + m) return LogWeight::null();
    // R|n,m> = (e c a + e(-i s) b)^n (e(-i s) a + e c b)^m |0> / sqrt(n! m!), e = e^{i phi/2}.
    // Picking x photons of a from the first factor and r - x from the second gives
    // (-i)^{n + r - 2x} c^{m - r + 2x} s^{n + r - 2x}; the x-dependent phase is (-1)^x.
    const SignedLog lc = signed_log(std::cos(phi / 2));
    const SignedLog ls = signed_log(std::sin(phi / 2));
    const int x_lo = std::max(0, r - m);
    const int x_hi = std::min(n, r);
    std::vector<double> logs;
    std::vector<int> signs;
    for (int x = x_lo; x <= x_hi; ++x) {
        int sign = (x & 1) ? -1 : 1;
        double lm = log_binomial(n, x) + log_binomial(m, r - x);
        lm += power_log(lc, m - r + 2 * x, sign);
        lm += power_log(ls, n + r - 2 * x, sign);
        if (sign == 0) continue;
        logs.push_back(lm);
        signs.push_back(sign);
    }
    if (logs.empty()) return LogWeight::null();
    const double top = *std::max_element(logs.begin(), logs.end());
    long double acc = 0.0L;
    for (std::size_t t = 0; t < logs.size(); ++t) acc += signs[t] * std::exp(static_cast<long double>(logs[t] - top));
    if (acc == 0.0L) return LogWeight::null();
    const double log_norm = 0.5 * (log_factorial(r) + log_factorial(s) - log_factorial(n) - log_factorial(m));
    double phase = phi * (n + m) / 2 + i_power_phase(-static_cast<long>(n + r));
    if (acc < 0) phase += std::numbers::pi;
    return LogWeight::make(top + std::log(static_cast<double>(std::abs(acc))) + log_norm, phase);
}

std::shared_ptr<const SectorMatrix<double>> RotationTableCache::get(int n, double phi) {
    const auto key = std::make_pair(n, phi);
    {
        std::lock_guard lock(mutex_);
        if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    }
    auto table = std::make_shared<const SectorMatrix<double>>(rotation_sector<double>(n, phi));
    std::lock_guard lock(mutex_);
    return tables_.emplace(key, std::move(table)).first->second;
}

RotationTableCache& RotationTableCache::global() {
    static RotationTableCache cache;
    return cache;
}

}  // namespace macroqubit
