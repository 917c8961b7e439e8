// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/filters.hpp"

#include <cstdlib>
#include <stdexcept>

namespace macroqubit {

FilterSpec FilterSpec::intensity(int h) {
    return {FilterKind::Intensity, h, 0, {}};
}

FilterSpec FilterSpec::orthogonality(int k, double basis) {
    return {FilterKind::Orthogonality, -1, k, {basis}};
}

FilterSpec FilterSpec::double_orthogonality(int k, double basis1, double basis2) {
    return {FilterKind::DoubleOrthogonality, -1, k, {basis1, basis2}};
}

void FilterSpec::validate() const {
    switch (kind) {
        case FilterKind::Intensity:
            if (h < -1) throw std::invalid_argument("intensity threshold below -1");
            return;
        case FilterKind::Orthogonality:
            if (k < 0) throw std::invalid_argument("orthogonality threshold is negative");
            if (bases.size() != 1) throw std::invalid_argument("orthogonality filter needs one basis");
            return;
        case FilterKind::DoubleOrthogonality:
            if (k < 0) throw std::invalid_argument("orthogonality threshold is negative");
            if (bases.size() != 2) throw std::invalid_argument("double orthogonality filter needs two bases");
            return;
    }
}

std::string to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::Intensity: return "ID";
        case FilterKind::Orthogonality: return "OF";
        case FilterKind::DoubleOrthogonality: return "DoubleOF";
    }
    return "?";
}

FilterKind filter_kind_from_string(const std::string& name) {
    if (name == "ID") return FilterKind::Intensity;
    if (name == "OF") return FilterKind::Orthogonality;
    if (name == "DoubleOF") return FilterKind::DoubleOrthogonality;
    throw std::invalid_argument("unknown filter kind '" + name + "'");
}

bool id_predicate(ModePair counts, int h) {
    return counts.total() > h;
}

bool of_predicate(ModePair counts, int k) {
    return std::abs(counts.a - counts.b) > k;
}

DichotomicOutcome dichotomic_from_difference(int difference, int k, TieRule ties) {
    if (difference > k) return {Dichotomic::Plus, 1.0, 0.0};
    if (-difference > k) return {Dichotomic::Minus, 0.0, 1.0};
    if (k == 0 && difference == 0 && ties == TieRule::HalfWeight) return {Dichotomic::Inconclusive, 0.5, 0.5};
    return {};
}

DichotomicOutcome of_dichotomic(ModePair counts, int k, TieRule ties) {
    return dichotomic_from_difference(counts.a - counts.b, k, ties);
}

bool double_of_pass(const ThreeWaySplitOutcome& outcome, int k) {
    return of_predicate(outcome.branch1, k) && of_predicate(outcome.branch2, k);
}

ReflectedProjector filter_projector(const FilterSpec& filter, double state_basis) {
    filter.validate();
    switch (filter.kind) {
        case FilterKind::Intensity:
            return total_count_projector(filter.h);
        case FilterKind::Orthogonality: {
            const int k = filter.k;
            return count_projector(filter.bases[0] - state_basis, [k](ModePair c) { return of_predicate(c, k); });
        }
        case FilterKind::DoubleOrthogonality: {
            const int k = filter.k;
            return split_count_projector(filter.bases[0] - state_basis, filter.bases[1] - state_basis,
                                         [k](ModePair b1, ModePair b2) { return of_predicate(b1, k) && of_predicate(b2, k); });
        }
    }
    throw std::logic_error("unhandled filter kind");
}

}  // namespace macroqubit
