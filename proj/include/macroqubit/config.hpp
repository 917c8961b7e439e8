// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration shared by the command-line subcommands.
 */

#ifndef MACROQUBIT_CONFIG_HPP
#define MACROQUBIT_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace macroqubit {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json, Both };

OutputFormat output_format_from_string(const std::string& name);
std::string to_string(OutputFormat format);

/**
 * Unset optionals fall back to per-subcommand defaults. Angles are radians.
 * `thresholds` holds k values, `h_thresholds` the intensity or transmitted h values.
 */
struct RunConfig {
    std::optional<double> g;
    std::optional<double> tau;
    double epsilon_trunc = 1e-10;
    double drop_budget = 1e-12;
    std::vector<int> thresholds;
    std::vector<int> h_thresholds;
    std::vector<double> bases;
    std::optional<double> phi;
    int alpha_grid = 360;
    std::vector<double> p;
    std::string output_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    int jobs = 1;

    /// Throws ConfigError on any out-of-range field.
    void validate() const;
};

/**
 * Parses a radian angle: a decimal number or a multiple of pi such as "pi/4",
 * "3pi/4" or "-0.5*pi". Degree suffixes and magnitudes above 2 pi are rejected.
 */
double parse_angle(const std::string& text);

/// Reads a JSON object with RunConfig keys; unknown keys are errors.
RunConfig load_config_file(const std::string& path);

/// Same as load_config_file, from JSON text.
RunConfig parse_config_json(const std::string& text);

}  // namespace macroqubit

#endif  // MACROQUBIT_CONFIG_HPP
