// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file curve_io.hpp
 * @brief CSV and JSON serialization of curves. Numbers use 12 significant
 * digits and '.' as decimal separator so identical inputs give identical bytes.
 */

#ifndef MACROQUBIT_CURVE_IO_HPP
#define MACROQUBIT_CURVE_IO_HPP

#include "macroqubit/analysis.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace macroqubit {

/// "%.12g" in the C locale; NaN prints as an empty field.
std::string format_value(double v);

/**
 * Header: x label, y label, extra columns, one column per meta key, status.
 * Flagged rows leave y empty and carry status "no_events".
 */
void write_csv(std::ostream& out, const CurveResult& curve);

/// {x_label, y_label, meta{}, samples[[x, y]...], columns{}}; flagged y is null.
std::string to_json(const CurveResult& curve);

/// Plain table with a header row, for multi-curve summaries.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const Table& table);

}  // namespace macroqubit

#endif  // MACROQUBIT_CURVE_IO_HPP
