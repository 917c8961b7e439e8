// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file commands.hpp
 * @brief Subcommands of the command-line tool. Each writes its curves plus a
 * manifest.json into the configured output directory.
 */

#ifndef MACROQUBIT_COMMANDS_HPP
#define MACROQUBIT_COMMANDS_HPP

#include "macroqubit/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace macroqubit {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitNoEvents = 2,
    kExitOracle = 3,
};

struct CommandOutput {
    int exit_code = kExitOk;
    std::vector<std::string> files;
};

CommandOutput cmd_distill(const RunConfig& config, std::ostream& log);
CommandOutput cmd_visibility(const RunConfig& config, std::ostream& log);
CommandOutput cmd_activation(const RunConfig& config, std::ostream& log);
CommandOutput cmd_double_filter(const RunConfig& config, std::ostream& log);
CommandOutput cmd_preselect(const RunConfig& config, std::ostream& log);
CommandOutput cmd_chsh(const RunConfig& config, std::ostream& log);
CommandOutput cmd_oracle_check(const RunConfig& config, std::ostream& log);

/// Names accepted by run_command, in help order.
const std::vector<std::string>& command_names();

/// Dispatches by name; throws ConfigError for an unknown name.
CommandOutput run_command(const std::string& name, const RunConfig& config, std::ostream& log);

}  // namespace macroqubit

#endif  // MACROQUBIT_COMMANDS_HPP
