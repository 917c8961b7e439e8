// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

// macroqubit: sweeps and validation runs for amplified polarization qubits.

#include "macroqubit/commands.hpp"
#include "macroqubit/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct RawFlags {
    std::optional<double> g;
    std::optional<double> tau;
    std::vector<double> p;
    std::vector<int> k;
    std::vector<int> h;
    std::optional<std::string> phi;
    std::vector<std::string> beta;
    std::optional<int> grid;
    std::optional<double> eps_trunc;
    std::optional<int> jobs;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::string> config;
};

void add_flags(CLI::App* sub, RawFlags& f) {
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--g", f.g, "amplifier gain");
    sub->add_option("--tau", f.tau, "splitter transmittivity, in (0, 1)");
    sub->add_option("--p", f.p, "injection probabilities")->delimiter(',');
    sub->add_option("--k", f.k, "orthogonality thresholds")->delimiter(',');
    sub->add_option("--h", f.h, "intensity thresholds")->delimiter(',');
    sub->add_option("--phi", f.phi, "pre-selection angle in radians (pi/4 style accepted)");
    sub->add_option("--beta", f.beta, "bases in radians")->delimiter(',');
    sub->add_option("--grid", f.grid, "fringe grid points on [0, 2pi)");
    sub->add_option("--eps-trunc", f.eps_trunc, "series truncation bound");
    sub->add_option("--jobs", f.jobs, "worker threads");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--format", f.format, "csv, json or both");
    sub->add_option("--config", f.config, "JSON config file; flags override it");
}

macroqubit::RunConfig resolve(const RawFlags& f) {
    using macroqubit::parse_angle;
    macroqubit::RunConfig c = f.config ? macroqubit::load_config_file(*f.config) : macroqubit::RunConfig{};
    if (f.g) c.g = f.g;
    if (f.tau) c.tau = f.tau;
    if (!f.p.empty()) c.p = f.p;
    if (!f.k.empty()) c.thresholds = f.k;
    if (!f.h.empty()) c.h_thresholds = f.h;
    if (f.phi) c.phi = parse_angle(*f.phi);
    if (!f.beta.empty()) {
        c.bases.clear();
        for (const auto& b : f.beta) c.bases.push_back(parse_angle(b));
    }
    if (f.grid) c.alpha_grid = *f.grid;
    if (f.eps_trunc) c.epsilon_trunc = *f.eps_trunc;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.out) c.output_dir = *f.out;
    if (f.format) c.format = macroqubit::output_format_from_string(*f.format);
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"macroqubit: measurement-induced operations on amplified polarization qubits"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    RawFlags flags;
    const std::vector<std::pair<std::string, std::string>> help = {
        {"distill", "injection probability after the intensity filter"},
        {"visibility", "single orthogonality-filter visibility vs k"},
        {"activation", "shutter activation probability vs k"},
        {"double-filter", "visibility surface over reflected k and transmitted h"},
        {"preselect", "fringes after two-branch pre-selection"},
        {"chsh", "CHSH sweep over a pi/8 angle grid"},
        {"oracle-check", "closed forms against dense simulation"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, text] : help) {
        subs.push_back(app.add_subcommand(name, text));
        add_flags(subs.back(), flags);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? macroqubit::kExitOk : macroqubit::kExitConfig;
    }
    std::string name;
    for (auto* s : subs) {
        if (s->parsed()) name = s->get_name();
    }
    try {
        const macroqubit::RunConfig config = resolve(flags);
        const macroqubit::CommandOutput out = macroqubit::run_command(name, config, std::cerr);
        for (const auto& f : out.files) std::cout << f << "\n";
        if (out.exit_code == macroqubit::kExitNoEvents) std::cerr << "no events pass the filter at any point\n";
        if (out.exit_code == macroqubit::kExitOracle) std::cerr << "oracle deviation above bound\n";
        return out.exit_code;
    } catch (const macroqubit::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return macroqubit::kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return macroqubit::kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return macroqubit::kExitConfig;
    }
}
