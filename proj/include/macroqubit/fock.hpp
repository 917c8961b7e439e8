// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Two-mode Fock-space foundations: log-domain combinatorics, single-mode
 * beam-splitter amplitudes and polarization rotation kernels.
 *
 * Conventions used throughout the library:
 *  - An equatorial polarization basis with angle beta has first mode
 *    (H + e^{i beta} V)/sqrt(2) and second mode (H - e^{i beta} V)/sqrt(2).
 *  - A sector is the set of two-mode Fock states with a fixed total photon
 *    number N; sector vectors are indexed by the first-mode count n_a.
 *  - A 2x2 mode matrix U describes the linear map a_k^dag -> sum_l U(l,k) a_l^dag
 *    (column k is the image of input mode k).
 */

#ifndef MACROQUBIT_FOCK_HPP
#define MACROQUBIT_FOCK_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <compare>
#include <limits>
#include <memory>
#include <mutex>
#include <map>
#include <numbers>
#include <vector>

namespace macroqubit {

using cplx = std::complex<double>;

/// Wraps an angle into (-pi, pi].
double normalize_phase(double phase);

/**
 * Complex amplitude stored as natural-log magnitude plus explicit phase.
 * The null weight (log magnitude -inf) absorbs under multiplication.
 */
struct LogWeight {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    double phase = 0.0;

    static LogWeight null() { return {}; }
    static LogWeight one() { return {0.0, 0.0}; }
    static LogWeight from_complex(cplx z);
    static LogWeight make(double log_magnitude, double phase);

    bool is_null() const { return std::isinf(log_magnitude) && log_magnitude < 0; }
    double magnitude() const { return is_null() ? 0.0 : std::exp(log_magnitude); }
    double probability() const { return is_null() ? 0.0 : std::exp(2.0 * log_magnitude); }
    cplx value() const { return is_null() ? cplx{} : std::polar(std::exp(log_magnitude), phase); }

    friend LogWeight operator*(const LogWeight& x, const LogWeight& y);
};

/// Occupation of the two polarization modes of one spatial mode.
struct ModePair {
    int a = 0;
    int b = 0;

    int total() const { return a + b; }
    auto operator<=>(const ModePair&) const = default;
};

/// ln(n!) for n >= 0; tabulated for small n, Stirling series beyond.
double log_factorial(long n);

/// ln C(n, k). Throws std::domain_error when k > n or either argument is negative.
double log_binomial(long n, long k);

/// Phase i^k as an angle in (-pi, pi], exact for every integer k.
double i_power_phase(long k);

struct SplitTerm {
    int transmitted = 0;
    int reflected = 0;
    LogWeight amplitude;
};

/**
 * Splits n photons of one mode on a beam splitter with b^dag ->
 * sqrt(tau) c^dag + i sqrt(1-tau) d^dag. Returns one term per (k_t, k_r = n - k_t),
 * ordered by increasing k_t. Throws std::domain_error for tau outside [0, 1].
 */
std::vector<SplitTerm> split_single_mode(int n, double tau);

/**
 * <r,s| R(phi) |n,m> for the active polarization rotation carrying basis beta to
 * beta + phi, computed from the explicit binomial expansion in log domain.
 * Returns the null weight when r + s != n + m.
 *
 * The alternating sum loses relative accuracy once n + m exceeds a few dozen;
 * large sectors should go through SectorTransform instead.
 */
LogWeight rotation_kernel(int n, int m, double phi, int r, int s);

template <typename Real>
using SectorMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ModeMatrix = Eigen::Matrix<std::complex<Real>, 2, 2>;

/// Mode matrix of the active rotation R(phi): column 0 is e^{i phi/2}(cos, -i sin).
template <typename Real>
ModeMatrix<Real> rotation_mode_matrix(Real phi) {
    using C = std::complex<Real>;
    const C e = std::polar(Real(1), phi / 2);
    const C c(std::cos(phi / 2), 0);
    const C s(0, -std::sin(phi / 2));
    ModeMatrix<Real> u;
    u << e * c, e * s, e * s, e * c;
    return u;
}

/**
 * Mode matrix taking coefficients expressed in basis beta to coefficients in basis
 * beta + delta. This is R(-delta): the first basis mode of beta reads
 * e^{-i delta/2}(cos(delta/2), i sin(delta/2)) in the new basis.
 */
template <typename Real>
ModeMatrix<Real> basis_change_matrix(Real delta) {
    return rotation_mode_matrix<Real>(-delta);
}

/**
 * Streams the sector matrices <r, N-r| U |n, N-n> of the Fock-space operator
 * induced by a 2x2 unitary mode matrix, for N = 0, 1, 2, ...
 *
 * Each sector is obtained from the previous one by the symmetric four-neighbour
 * recursion (adding one photon to an input and an output mode simultaneously),
 * whose weights are bounded by one; unitarity is preserved to rounding for
 * sectors of several hundred photons.
 */
template <typename Real>
class SectorTransform {
public:
    explicit SectorTransform(const ModeMatrix<Real>& mode) : mode_(mode), current_(1, 1) {
        current_(0, 0) = std::complex<Real>(1);
    }

    int sector() const { return sector_; }
    const SectorMatrix<Real>& matrix() const { return current_; }

    void advance() {
        const int M = sector_ + 1;
        SectorMatrix<Real> next(M + 1, M + 1);
        const auto at = [&](int r, int n) -> std::complex<Real> {
            if (r < 0 || n < 0 || r > M - 1 || n > M - 1) return {};
            return current_(r, n);
        };
        for (int n = 0; n <= M; ++n) {
            const int m = M - n;
            for (int r = 0; r <= M; ++r) {
                const int s = M - r;
                std::complex<Real> acc{};
                if (n > 0 && r > 0) acc += std::sqrt(Real(n) * r) * mode_(0, 0) * at(r - 1, n - 1);
                if (n > 0 && s > 0) acc += std::sqrt(Real(n) * s) * mode_(1, 0) * at(r, n - 1);
                if (m > 0 && r > 0) acc += std::sqrt(Real(m) * r) * mode_(0, 1) * at(r - 1, n);
                if (m > 0 && s > 0) acc += std::sqrt(Real(m) * s) * mode_(1, 1) * at(r, n);
                next(r, n) = acc / Real(M);
            }
        }
        current_ = std::move(next);
        sector_ = M;
    }

    void advance_to(int sector) {
        while (sector_ < sector) advance();
    }

private:
    ModeMatrix<Real> mode_;
    SectorMatrix<Real> current_;
    int sector_ = 0;
};

/// Sector matrix of a mode matrix for total photon number n.
template <typename Real>
SectorMatrix<Real> sector_matrix(const ModeMatrix<Real>& mode, int n) {
    SectorTransform<Real> t(mode);
    t.advance_to(n);
    return t.matrix();
}

/// Sector matrix of R(phi) for total photon number n (stable recursion).
template <typename Real>
SectorMatrix<Real> rotation_sector(int n, Real phi) {
    return sector_matrix<Real>(rotation_mode_matrix<Real>(phi), n);
}

/**
 * Memo of rotation sector tables keyed by (N, phi). Tables are immutable once
 * inserted and may be shared across threads.
 */
class RotationTableCache {
public:
    std::shared_ptr<const SectorMatrix<double>> get(int n, double phi);
    static RotationTableCache& global();

private:
    std::mutex mutex_;
    std::map<std::pair<int, double>, std::shared_ptr<const SectorMatrix<double>>> tables_;
};

}  // namespace macroqubit

#endif  // MACROQUBIT_FOCK_HPP
