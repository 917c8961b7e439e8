// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/analysis.hpp"
#include "macroqubit/parallel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace macroqubit {
namespace {

constexpr double kPi = std::numbers::pi;

double peak_alpha(double beta_meas, int k) {
    const MacroFringe f(1.2, 0.9, preselection_filter(kPi / 4, k), beta_meas, 0, TieRule::HalfWeight);
    return fringe_extremum(f, true).alpha;
}

double circular_gap(double x, double y) {
    return std::abs(std::remainder(x - y, 2 * kPi));
}

TEST(InjectionProbability, Trivial) {
    for (int h : {0, 3, 8}) EXPECT_NEAR(conditional_injection_probability(1.0, 1.5, 0.9, h).value, 1.0, 1e-15);
    EXPECT_NEAR(conditional_injection_probability(0.3, 1.5, 0.9, -1).value, 0.3, 1e-12);
}

TEST(InjectionProbability, StrictlyIncreasing) {
    double last = 0.3;
    for (int h = 0; h <= 8; ++h) {
        const double v = conditional_injection_probability(0.3, 1.5, 0.9, h).value;
        EXPECT_GT(v, last) << h;
        last = v;
    }
}

TEST(InjectionProbability, MatchesReference) {
    // Reference from total-photon-number statistics in 40-digit arithmetic.
    std::ifstream in(std::string(MACROQUBIT_GOLDEN_DIR) + "/pcond_g1.5_tau0.9.csv");
    ASSERT_TRUE(in.good());
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        int h = 0;
        char comma = 0;
        double want = 0.0;
        row >> h >> comma >> want;
        const double tight = conditional_injection_probability(0.3, 1.5, 0.9, h, {1e-15, 1e-16}).value;
        EXPECT_NEAR(tight, want, 1e-11) << h;
        const double loose = conditional_injection_probability(0.3, 1.5, 0.9, h).value;
        EXPECT_NEAR(loose, want, 1e-7) << h;
        ++rows;
    }
    EXPECT_EQ(rows, 9);
}

TEST(ShutterActivation, SinglePhotonLimit) {
    EXPECT_NEAR(shutter_activation_probability(0.0, 0.0, 0.9, 0, 0.0), 0.1, 1e-15);
    EXPECT_NEAR(shutter_activation_probability(0.0, 0.0, 0.9, 0, 1.3), 0.1, 1e-15);
    for (int k : {1, 2, 4}) EXPECT_EQ(shutter_activation_probability(0.0, 0.0, 0.9, k, 0.0), 0.0);
}

TEST(SingleOf, NothingPassesIsAnError) {
    EXPECT_THROW(visibility_single_of(0.0, 0.0, 1, 0.0, 0.0, 0.9), NoEventsPass);
}

TEST(SingleOf, CodificationBasisImproves) {
    double last = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double v = visibility_single_of(0.0, 0.0, k, 0.0, 1.1, 0.9).visibility.value;
        EXPECT_GE(v, last) << k;
        last = v;
    }
}

TEST(SingleOf, ConjugateBasisDegrades) {
    double last = 1.0;
    for (int k = 0; k <= 10; ++k) {
        const double v = visibility_single_of(kPi / 2, 0.0, k, kPi / 2, 1.1, 0.9).visibility.value;
        EXPECT_LT(v, last) << k;
        last = v;
    }
}

TEST(DoubleOf, HeadlineValueAndOrdering) {
    for (int k = 0; k <= 2; ++k) {
        const auto sums = visibility_double_of(1.2, k, k, kPi / 2, 0.0, kPi / 2).sums;
        const double diag = sums.visibility(k, TieRule::Inconclusive).value;
        EXPECT_NEAR(diag, 0.64, 0.03) << k;
        EXPECT_GT(sums.visibility(k + 1, TieRule::Inconclusive).value, diag);
        if (k > 0) EXPECT_LT(sums.visibility(k - 1, TieRule::Inconclusive).value, diag);
    }
}

TEST(DoubleOf, ZeroThresholdsMatchSingleFilterAtBalancedSplit) {
    const double dbl = visibility_double_of(1.2, 0, 0, kPi / 2, 0.0, kPi / 2).visibility.value;
    const auto single = visibility_single_of(kPi / 2, 0.0, 0, kPi / 2, 1.2, 0.5);
    EXPECT_NEAR(single.sums.visibility(0, TieRule::Inconclusive).value, dbl, 1e-10);
    EXPECT_THROW(visibility_double_of(1.2, 0, -1, kPi / 2, 0.0, kPi / 2), std::domain_error);
}

TEST(DichotomicSums, MixtureIsLinear) {
    const FilterSpec f = FilterSpec::orthogonality(1, 0.0);
    const auto mix = injected_mixture({0.4, 0.9}, 0.0);
    const DichotomicSums joint = filtered_dichotomic_sums(mix, 0.9, f, 0.0);
    DichotomicSums manual;
    for (const auto& w : mix) manual.accumulate(filtered_dichotomic_sums(w.state, 0.9, f, 0.0), w.weight);
    EXPECT_NEAR(joint.accepted(), manual.accepted(), 1e-13);
    for (const auto& [d, v] : manual.by_difference) EXPECT_NEAR(joint.by_difference.at(d), v, 1e-13);
}

TEST(Fringe, PassMatchesThreeWayEnumeration) {
    const MacroFringe f(0.5, 0.9, preselection_filter(kPi / 4, 1), 0.0, 0, TieRule::HalfWeight, {1e-13, 1e-15});
    for (double alpha : {0.0, 0.7, 2.0}) {
        const TwoModeState s = truncate_total(macroqubit_state(alpha, 0.5), 26);
        double pass = 0.0;
        for (const auto& o : three_way_split(s, 0.9, 0.0, kPi / 4)) {
            if (double_of_pass(o, 1)) pass += o.probability;
        }
        // The enumeration misses at most the mass cut by truncate_total.
        EXPECT_NEAR(f.evaluate(alpha).pass, pass, s.trunc_tail + 1e-12) << alpha;
    }
}

TEST(Fringe, UnfilteredMatchesDirectSums) {
    const MacroFringe f(1.0, 0.9, FilterSpec::intensity(-1), 0.4, 0, TieRule::HalfWeight);
    for (double alpha : {0.4, 1.5, 3.0}) {
        const FringePoint pt = f.evaluate(alpha);
        EXPECT_NEAR(pt.pass, 1.0, 1e-9);
        const auto sums = filtered_dichotomic_sums(macroqubit_state(alpha, 1.0), 0.9, FilterSpec::intensity(-1), 0.4);
        EXPECT_NEAR(2 * pt.plus_fraction() - 1, sums.visibility(0, TieRule::HalfWeight).value, 1e-9) << alpha;
    }
}

TEST(Preselect, ShiftShrinksWithK) {
    const double shift0 = circular_gap(peak_alpha(0.0, 0), peak_alpha(kPi / 4, 0));
    const double shift3 = circular_gap(peak_alpha(0.0, 3), peak_alpha(kPi / 4, 3));
    EXPECT_LT(shift3, shift0);
    EXPECT_GT(shift0, 0.5);
}

TEST(Preselect, HighThresholdPeaksAtEighthPi) {
    EXPECT_NEAR(peak_alpha(0.0, 5), kPi / 8, 0.03);
    EXPECT_NEAR(peak_alpha(kPi / 4, 5), kPi / 8, 0.03);
}

TEST(Preselect, VisibilityOrdering) {
    const double small = preselect_visibility(kPi / 16, 3, 1.2, 0.9).visibility;
    const double large = preselect_visibility(kPi / 2, 3, 1.2, 0.9).visibility;
    EXPECT_GT(small, large);
    const double v5 = preselect_visibility(kPi / 16, 5, 1.2, 0.9).visibility;
    const double v7 = preselect_visibility(kPi / 16, 7, 1.2, 0.9).visibility;
    EXPECT_GE(v7, v5);
    EXPECT_GE(v5, small);
    EXPECT_NEAR(preselect_visibility(kPi / 4, 0, 1.2, 0.9).visibility, 0.64, 0.03);
}

TEST(Chsh, IdealSinglet) {
    const MicroMacroModel ideal{0.0, 1.0, FilterSpec::intensity(-1), 0};
    const ChshResult r = chsh_value(0.0, kPi / 2, 5 * kPi / 4, 3 * kPi / 4, ideal);
    EXPECT_NEAR(std::abs(r.s), 2 * std::sqrt(2.0), 1e-9);
}

TEST(Chsh, PassIndependentOfMicroAngle) {
    const MicroMacroModel m{1.2, 0.9, preselection_filter(kPi / 4, 3), 0};
    ChshEvaluator e(m);
    const double p0 = e.pass_probability(0.0, kPi / 8);
    for (double a : {0.5, 2.0, 4.0}) EXPECT_NEAR(e.pass_probability(a, kPi / 8), p0, 1e-15);
}

TEST(Chsh, GlobalRotationWithoutFilter) {
    const MicroMacroModel m{0.8, 0.9, FilterSpec::intensity(-1), 0};
    const Precision tight{1e-14, 1e-15};
    const double s0 = chsh_value(0.1, 0.9, 0.4, 1.7, m, tight).s;
    const double s1 = chsh_value(0.1 + 0.6, 0.9 + 0.6, 0.4 + 0.6, 1.7 + 0.6, m, tight).s;
    EXPECT_NEAR(s0, s1, 1e-10);
}

TEST(Chsh, MatchedBasesApproachFilteredVisibility) {
    const MicroMacroModel m{1.2, 0.9, preselection_filter(kPi / 4, 5), 0};
    ChshEvaluator e(m);
    const double v = preselect_visibility(kPi / 4, 5, 1.2, 0.9).visibility;
    EXPECT_NEAR(std::abs(e.correlation(kPi / 8, kPi / 8).value), v, 0.01);
}

TEST(Chsh, CoarseSweepStaysLocal) {
    const std::vector<double> angles{0.0, kPi / 4, kPi / 2, 3 * kPi / 4};
    const MicroMacroModel m{1.2, 0.9, preselection_filter(kPi / 4, 3), 0};
    EXPECT_LE(chsh_sweep(angles, m, {}, 2).max_s, 2.0 + 1e-6);
}

TEST(ParallelMap, OrderedAndRethrows) {
    const auto v = parallel_map(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
    EXPECT_THROW(parallel_map(10, 3,
                              [](std::size_t i) {
                                  if (i == 7) throw std::runtime_error("seven");
                                  return 0;
                              }),
                 std::runtime_error);
}

TEST(CurveResult, ValidateRejectsMismatchedColumns) {
    CurveResult c;
    c.samples = {{0.0, 1.0}, {1.0, 2.0}};
    c.flagged = {false, false};
    c.columns.emplace_back("pass", std::vector<double>{1.0});
    EXPECT_THROW(c.validate(), std::logic_error);
}

}  // namespace
}  // namespace macroqubit
