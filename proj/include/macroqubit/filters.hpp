// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file filters.hpp
 * @brief Shutter-activation predicates: intensity threshold, orthogonality
 * filter and the two-branch orthogonality filter. Thresholds are strict.
 */

#ifndef MACROQUBIT_FILTERS_HPP
#define MACROQUBIT_FILTERS_HPP

#include "macroqubit/fock.hpp"
#include "macroqubit/splitter.hpp"

#include <string>
#include <vector>

namespace macroqubit {

enum class FilterKind { Intensity, Orthogonality, DoubleOrthogonality };

struct FilterSpec {
    FilterKind kind = FilterKind::Intensity;
    int h = -1;                 ///< intensity threshold; -1 accepts every event
    int k = 0;                  ///< orthogonality threshold
    std::vector<double> bases;  ///< one basis for OF, two for the double OF

    static FilterSpec intensity(int h);
    static FilterSpec orthogonality(int k, double basis);
    static FilterSpec double_orthogonality(int k, double basis1, double basis2);

    /// Throws std::invalid_argument when thresholds or basis counts are inconsistent.
    void validate() const;
};

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& name);

enum class Dichotomic { Plus, Minus, Inconclusive };

/// How a balanced event (n_a == n_b at k = 0) is scored.
enum class TieRule { HalfWeight, Inconclusive };

/// Outcome with its weights on +1 and -1; a half-weighted tie carries 0.5 on each.
struct DichotomicOutcome {
    Dichotomic value = Dichotomic::Inconclusive;
    double plus_weight = 0.0;
    double minus_weight = 0.0;

    bool conclusive() const { return plus_weight + minus_weight > 0.0; }
};

/// n_a + n_b > h.
bool id_predicate(ModePair counts, int h);

/// |n_a - n_b| > k.
bool of_predicate(ModePair counts, int k);

/// +1 when n_a - n_b > k, -1 when n_b - n_a > k. A k = 0 tie follows `ties`.
DichotomicOutcome of_dichotomic(ModePair counts, int k, TieRule ties = TieRule::HalfWeight);

/// Weights on (+1, -1) for a transmitted count difference d = n_a - n_b.
DichotomicOutcome dichotomic_from_difference(int difference, int k, TieRule ties);

/// Both branches of a three-way split outcome pass of_predicate.
bool double_of_pass(const ThreeWaySplitOutcome& outcome, int k);

/**
 * Reflected-side projector realising `filter` for states expressed in
 * `state_basis`. Filter bases are absolute equatorial angles.
 */
ReflectedProjector filter_projector(const FilterSpec& filter, double state_basis);

}  // namespace macroqubit

#endif  // MACROQUBIT_FILTERS_HPP
