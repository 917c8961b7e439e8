// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/splitter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace macroqubit {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(UbsJoint, UnitTransmissionKeepsInput) {
    const TwoModeState s = macroqubit_state(0.0, 0.5);
    const JointSplitState j = ubs_joint(s, 1.0, 0.0);
    for (const auto& e : j.entries) {
        EXPECT_EQ(e.refl, (ModePair{0, 0}));
        EXPECT_NEAR(std::abs(e.amplitude - s.amplitude(e.trans)), 0.0, 1e-15);
    }
    const TwoModeState cond = conditional_transmitted(j, {0, 0});
    for (int t = 0; t <= 9; ++t) {
        for (int a = 0; a <= t; ++a) {
            EXPECT_NEAR(std::abs(cond.amplitude({a, t - a}) - s.amplitude({a, t - a})), 0.0, 1e-10);
        }
    }
}

TEST(UbsJoint, SinglePhoton) {
    const JointSplitState j = ubs_joint(macroqubit_state(0.0, 0.0), 0.9, 0.0);
    const auto trans = j.transmitted_marginal();
    const auto refl = j.reflected_marginal();
    EXPECT_NEAR(trans.at({1, 0}), 0.9, 1e-15);
    EXPECT_NEAR(refl.at({1, 0}), 0.1, 1e-15);
    EXPECT_NEAR(j.total_probability(), 1.0, 1e-15);
}

TEST(UbsJoint, NormalizedWithOddTotal) {
    const JointSplitState j = ubs_joint(macroqubit_state(kPi / 2, 1.0), 0.9, kPi / 4);
    EXPECT_NEAR(j.total_probability() + j.trunc_tail, 1.0, 1e-10);
    for (const auto& e : j.entries) {
        if (std::norm(e.amplitude) > 1e-30) EXPECT_EQ((e.trans.total() + e.refl.total()) % 2, 1);
    }
}

TEST(UbsJoint, CapMovesMassIntoTail) {
    const TwoModeState s = macroqubit_state(0.0, 0.8);
    const JointSplitState capped = ubs_joint(s, 0.9, 0.0, 3);
    for (const auto& e : capped.entries) EXPECT_LE(e.refl.total(), 3);
    EXPECT_NEAR(capped.total_probability() + capped.trunc_tail, 1.0, 1e-10);
}

TEST(UbsJoint, SameBasisClosedForm) {
    const JointSplitState j = ubs_joint(macroqubit_state(0.0, 0.5, 1e-14), 0.8, 0.0);
    double worst = 0.0;
    for (const auto& e : j.entries) {
        if (e.trans.total() + e.refl.total() > 15) continue;
        worst = std::max(worst, std::abs(same_basis_joint_amplitude(0.5, 0.8, e.trans.a, e.trans.b, e.refl.a, e.refl.b) -
                                         e.amplitude));
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(UbsJoint, ConjugateBasisDoubleSum) {
    const JointSplitState j = ubs_joint(macroqubit_state(kPi / 2, 0.5, 1e-14), 0.9, 0.0);
    const TwoModeState cond = conditional_transmitted(j, {2, 0});
    double marginal = 0.0;
    for (const auto& e : j.entries) {
        if (e.refl == ModePair{2, 0}) marginal += std::norm(e.amplitude);
    }
    double worst = 0.0;
    for (int t = 1; t <= 11; t += 2) {
        for (int m = 0; m <= t; ++m) {
            const double formula = conjugate_basis_joint_probability(0.5, 0.9, m, t - m, 2, 0) / marginal;
            worst = std::max(worst, std::abs(formula - cond.probability({m, t - m})));
        }
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(ConditionalTransmitted, UnreachableOutcomeThrows) {
    const JointSplitState j = ubs_joint(macroqubit_state(0.0, 0.0), 0.9, 0.0);
    EXPECT_THROW(conditional_transmitted(j, {2, 2}), UnreachableOutcome);
}

TEST(ThreeWay, SinglePhotonWeights) {
    const auto out = three_way_split(macroqubit_state(0.0, 0.0), 0.9, 0.0, kPi / 4);
    double trans = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    for (const auto& o : out) {
        EXPECT_EQ(o.trans.total() + o.branch1.total() + o.branch2.total(), 1);
        trans += o.trans.total() * o.probability;
        b1 += o.branch1.total() * o.probability;
        b2 += o.branch2.total() * o.probability;
    }
    EXPECT_NEAR(trans, 0.9, 1e-15);
    EXPECT_NEAR(b1, 0.05, 1e-15);
    EXPECT_NEAR(b2, 0.05, 1e-15);
}

TEST(ThreeWay, EqualBasesMergeToReflectedMarginal) {
    const TwoModeState s = truncate_total(macroqubit_state(0.0, 0.5), 14);
    const auto out = three_way_split(s, 0.9, 0.3, 0.3);
    std::map<ModePair, double> merged;
    for (const auto& o : out) merged[{o.branch1.a + o.branch2.a, o.branch1.b + o.branch2.b}] += o.probability;
    const auto refl = ubs_joint(s, 0.9, 0.3).reflected_marginal();
    double worst = 0.0;
    for (const auto& [k, p] : refl) worst = std::max(worst, std::abs(p - merged[k]));
    for (const auto& [k, p] : merged) worst = std::max(worst, std::abs(p - (refl.count(k) ? refl.at(k) : 0.0)));
    EXPECT_LT(worst, 1e-10);
}

TEST(ThreeWay, Normalization) {
    const TwoModeState s = truncate_total(macroqubit_state(0.0, 0.5), 30);
    double total = 0.0;
    for (const auto& o : three_way_split(s, 0.9, 0.0, kPi / 4)) total += o.probability;
    EXPECT_NEAR(total, 1.0, 1e-8);
    EXPECT_NEAR(total + s.trunc_tail, 1.0, 1e-11);
}

TEST(TransmittedGram, MatchesExplicitJoint) {
    const TwoModeState s = macroqubit_state(kPi / 2, 0.5, 1e-14);
    const std::vector<TwoModeState> states{s};
    const auto plan = make_split_plan(states, 0.8, 1e-15);
    const auto pass = [](ModePair m) { return std::abs(m.a - m.b) > 1; };
    const TransmittedGram gram = transmitted_gram(states, 0.8, count_projector(-kPi / 2, pass), plan);
    double gram_plus = 0.0;
    double gram_minus = 0.0;
    for (const auto& [d, g] : gram.by_difference) {
        if (d > 0) gram_plus += g(0, 0).real();
        if (d < 0) gram_minus += g(0, 0).real();
    }
    double plus = 0.0;
    double minus = 0.0;
    for (const auto& e : ubs_joint(s, 0.8, 0.0).entries) {
        if (!pass(e.refl)) continue;
        if (e.trans.a > e.trans.b) plus += std::norm(e.amplitude);
        if (e.trans.a < e.trans.b) minus += std::norm(e.amplitude);
    }
    EXPECT_NEAR(gram_plus, plus, 1e-12);
    EXPECT_NEAR(gram_minus, minus, 1e-12);
}

TEST(SplitPlan, DropsWithinBudget) {
    const std::vector<TwoModeState> states{macroqubit_state(0.0, 1.2)};
    const SplitPlan plan = make_split_plan(states, 0.9, 1e-12);
    EXPECT_LE(plan.dropped_mass, 1e-12);
    EXPECT_GT(plan.r_max, 0);
    EXPECT_LT(plan.r_max, plan.n_max);
}

}  // namespace
}  // namespace macroqubit
