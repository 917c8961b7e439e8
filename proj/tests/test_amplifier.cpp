// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/amplifier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace macroqubit {
namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const TwoModeState& x, const TwoModeState& y) {
    double worst = 0.0;
    const int n = std::max(x.max_total(), y.max_total());
    for (int t = 0; t <= n; ++t) {
        for (int a = 0; a <= t; ++a) worst = std::max(worst, std::abs(x.amplitude({a, t - a}) - y.amplitude({a, t - a})));
    }
    return worst;
}

TEST(GainParams, Values) {
    const GainParams zero = gain_params(0.0);
    EXPECT_EQ(zero.gamma, 0.0);
    EXPECT_EQ(zero.c, 1.0);
    EXPECT_EQ(zero.mean_photons, 0.0);
    EXPECT_NEAR(gain_params(1.2).mean_photons, 2.278473583483, 1e-11);
    EXPECT_NEAR(gain_params(1.5).mean_photons, 4.533830997889, 1e-11);
    EXPECT_THROW(gain_params(-0.1), std::domain_error);
}

TEST(Macroqubit, ZeroGainIsSinglePhoton) {
    for (double beta : {0.0, 1.0}) {
        const TwoModeState s = macroqubit_state(beta, 0.0);
        EXPECT_EQ(s.max_total(), 1);
        EXPECT_NEAR(std::abs(s.amplitude({1, 0}) - 1.0), 0.0, 1e-15);
        EXPECT_EQ(s.amplitude({0, 1}), cplx{});
        EXPECT_EQ(s.trunc_tail, 0.0);
    }
}

TEST(Macroqubit, LowOrderAmplitudes) {
    const GainParams gp = gain_params(0.8);
    const TwoModeState s = macroqubit_state(0.0, 0.8);
    EXPECT_NEAR(std::abs(s.amplitude({1, 0}) - 1.0 / (gp.c * gp.c)), 0.0, 1e-15);
    const cplx want = -(gp.gamma / 2) * std::sqrt(2.0) / (gp.c * gp.c);
    EXPECT_NEAR(std::abs(s.amplitude({1, 2}) - want), 0.0, 1e-15);
}

TEST(Macroqubit, NormalizedWithParity) {
    for (double g : {0.3, 0.8, 1.2, 1.5}) {
        const TwoModeState s = macroqubit_state(0.4, g, 1e-10);
        EXPECT_NEAR(s.norm_squared() + s.trunc_tail, 1.0, 1e-10) << g;
        EXPECT_LE(s.trunc_tail, 1e-10);
        for (int t = 0; t <= s.max_total(); ++t) {
            for (int a = 0; a <= t; ++a) {
                if (a % 2 == 1 && (t - a) % 2 == 0) continue;
                EXPECT_EQ(s.amplitude({a, t - a}), cplx{}) << a << " " << t - a;
            }
        }
    }
}

TEST(Macroqubit, OwnBasisTableIndependentOfBeta) {
    const TwoModeState a = macroqubit_state(0.0, 1.0);
    for (double beta : {kPi / 2, kPi / 4, 2.0}) {
        const TwoModeState b = macroqubit_state(beta, 1.0);
        for (int t = 0; t <= a.max_total(); ++t) {
            for (int x = 0; x <= t; ++x) EXPECT_NEAR(a.probability({x, t - x}), b.probability({x, t - x}), 1e-15);
        }
    }
}

TEST(Macroqubit, SuperpositionOfConjugateStates) {
    const TwoModeState zero = macroqubit_state(0.0, 0.7, 1e-14);
    const TwoModeState pi = in_basis(macroqubit_state(kPi, 0.7, 1e-14), 0.0);
    for (double alpha : {0.3, kPi / 2, 2.5}) {
        const TwoModeState direct = in_basis(macroqubit_state(alpha, 0.7, 1e-14), 0.0);
        const cplx e = std::polar(1.0, alpha);
        TwoModeState mix = zero;
        for (std::size_t n = 0; n < mix.sectors.size(); ++n) {
            if (mix.sectors[n].size() == 0) continue;
            mix.sectors[n] = ((1.0 + e) * zero.sectors[n] + (1.0 - e) * pi.sectors[n]) / 2.0;
        }
        EXPECT_LT(max_diff(direct, mix), 1e-12) << alpha;
    }
}

TEST(Macroqubit, BasisChangeRoundTrip) {
    const TwoModeState s = macroqubit_state(0.5, 0.9);
    const TwoModeState back = in_basis(in_basis(s, 2.1), 0.5);
    EXPECT_LT(max_diff(s, back), 1e-13);
    EXPECT_NEAR(in_basis(s, 2.1).norm_squared(), s.norm_squared(), 1e-13);
}

TEST(Macroqubit, MeanCounts) {
    const double m = gain_params(1.2).mean_photons;
    const auto [plus, minus] = macroqubit_state(0.0, 1.2).mean_counts();
    EXPECT_NEAR(plus, 3 * m + 1, 1e-6);
    EXPECT_NEAR(minus, m, 1e-6);
}

TEST(Spontaneous, ZeroGainIsVacuum) {
    const TwoModeState s = spontaneous_state(0.0);
    EXPECT_NEAR(std::abs(s.amplitude({0, 0}) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
}

TEST(Spontaneous, HvPairAmplitude) {
    const GainParams gp = gain_params(0.3);
    const HvState hv = spontaneous_hv(0.3);
    bool found = false;
    for (const auto& [n, amp] : hv.terms) {
        if (n == ModePair{1, 1}) {
            EXPECT_NEAR(std::abs(amp - gp.gamma / gp.c), 0.0, 1e-15);
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Spontaneous, MeanTotalAndBasisInvariance) {
    const double m = gain_params(1.2).mean_photons;
    const TwoModeState s = spontaneous_state(1.2, 1e-12, 0.0);
    const auto [a, b] = s.mean_counts();
    EXPECT_NEAR(a + b, 2 * m, 1e-8);
    EXPECT_NEAR(s.norm_squared() + s.trunc_tail, 1.0, 1e-12);
    const TwoModeState rotated = spontaneous_state(1.2, 1e-12, 1.1);
    EXPECT_LT(max_diff(in_basis(s, 1.1), rotated), 1e-12);
}

TEST(MeanPhotons, Examples) {
    const double m = gain_params(1.5).mean_photons;
    const MeanPhotons one = mean_photons(0.0, 1.0, 1.5);
    EXPECT_NEAR(one.plus, 3 * m + 1, 1e-12);
    EXPECT_NEAR(one.minus, m, 1e-12);
    const MeanPhotons none = mean_photons(0.7, 0.0, 1.5);
    EXPECT_NEAR(none.plus, m, 1e-12);
    EXPECT_NEAR(none.minus, m, 1e-12);
    const MeanPhotons half = mean_photons(kPi / 2, 1.0, 1.5);
    EXPECT_NEAR(half.plus, m + (2 * m + 1) / 2, 1e-12);
    EXPECT_NEAR(half.minus, m + (2 * m + 1) / 2, 1e-12);
}

TEST(InjectedMixture, Components) {
    const auto pure = injected_mixture({1.0, 1.5}, 0.0);
    ASSERT_EQ(pure.size(), 1u);
    EXPECT_LT(max_diff(pure[0].state, macroqubit_state(0.0, 1.5)), 1e-15);
    const auto empty = injected_mixture({0.0, 1.5}, 0.0);
    ASSERT_EQ(empty.size(), 1u);
    EXPECT_LT(max_diff(empty[0].state, spontaneous_state(1.5)), 1e-15);
}

TEST(InjectedMixture, MeanMatchesFormula) {
    double total = 0.0;
    for (const auto& w : injected_mixture({0.5, 1.5}, 0.0, 1e-13)) {
        const auto [a, b] = w.state.mean_counts();
        total += w.weight * (a + b);
    }
    const MeanPhotons mp = mean_photons(0.0, 0.5, 1.5);
    EXPECT_NEAR(total, mp.plus + mp.minus, 1e-8);
}

TEST(Truncation, TotalCutKeepsTail) {
    const TwoModeState s = macroqubit_state(0.0, 1.0);
    const TwoModeState t = truncate_total(s, 7);
    EXPECT_EQ(t.max_total(), 7);
    EXPECT_NEAR(t.norm_squared() + t.trunc_tail, 1.0, 1e-10);
}

}  // namespace
}  // namespace macroqubit
