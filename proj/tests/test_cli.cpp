// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/commands.hpp"
#include "macroqubit/config.hpp"
#include "macroqubit/curve_io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

namespace macroqubit {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("macroqubit_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MACROQUBIT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(ParseAngle, RadianForms) {
    EXPECT_DOUBLE_EQ(parse_angle("0.5"), 0.5);
    EXPECT_DOUBLE_EQ(parse_angle("pi/4"), kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("3pi/4"), 3 * kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("-0.5*pi"), -kPi / 2);
    EXPECT_DOUBLE_EQ(parse_angle(" pi "), kPi);
}

TEST(ParseAngle, DegreesRejected) {
    EXPECT_THROW(parse_angle("45deg"), ConfigError);
    EXPECT_THROW(parse_angle("45d"), ConfigError);
    EXPECT_THROW(parse_angle("45°"), ConfigError);
    EXPECT_THROW(parse_angle("45"), ConfigError);
    EXPECT_THROW(parse_angle("pi/0"), ConfigError);
    EXPECT_THROW(parse_angle(""), ConfigError);
}

TEST(Config, ParsesAndValidates) {
    const RunConfig c = parse_config_json(
        R"({"g": 1.2, "tau": 0.9, "thresholds": [0, 3], "bases": ["pi/4", 0.1], "phi": "pi/8", "format": "both"})");
    EXPECT_DOUBLE_EQ(*c.g, 1.2);
    EXPECT_EQ(c.thresholds, (std::vector<int>{0, 3}));
    ASSERT_EQ(c.bases.size(), 2u);
    EXPECT_DOUBLE_EQ(c.bases[0], kPi / 4);
    EXPECT_DOUBLE_EQ(*c.phi, kPi / 8);
    EXPECT_EQ(c.format, OutputFormat::Both);
    EXPECT_THROW(parse_config_json(R"({"gain": 1.0})"), ConfigError);
    EXPECT_THROW(parse_config_json(R"({"g": -1.0})"), ConfigError);
    EXPECT_THROW(parse_config_json(R"({"tau": 1.0})"), ConfigError);
    EXPECT_THROW(parse_config_json(R"({"p": [0.5, 1.5]})"), ConfigError);
    EXPECT_THROW(parse_config_json(R"({"bases": [90]})"), ConfigError);
    EXPECT_THROW(parse_config_json("[1, 2]"), ConfigError);
    EXPECT_THROW(parse_config_json("{"), ConfigError);
}

TEST(CurveIo, CsvFormatting) {
    CurveResult c;
    c.x_label = "h";
    c.y_label = "p_cond";
    c.samples = {{0.0, 1.0 / 3.0}, {1.0, std::nan("")}};
    c.flagged = {false, true};
    c.columns.emplace_back("pass", std::vector<double>{0.5, 0.0});
    c.add_meta("g", 1.5);
    std::ostringstream out;
    write_csv(out, c);
    EXPECT_EQ(out.str(), "h,p_cond,pass,g,status\n0,0.333333333333,0.5,1.5,ok\n1,,0,1.5,no_events\n");
    const auto j = nlohmann::json::parse(to_json(c));
    EXPECT_TRUE(j["samples"][1][1].is_null());
    EXPECT_DOUBLE_EQ(j["meta"]["g"].get<double>(), 1.5);
}

TEST(Commands, DistillIsByteDeterministic) {
    RunConfig c;
    c.thresholds = {};
    c.p = {0.3, 1.0};
    c.h_thresholds = {0, 2, 4};
    c.output_dir = scratch_dir("det1").string();
    std::ostringstream log;
    const CommandOutput a = cmd_distill(c, log);
    c.output_dir = scratch_dir("det2").string();
    c.jobs = 3;
    const CommandOutput b = cmd_distill(c, log);
    EXPECT_EQ(a.exit_code, kExitOk);
    ASSERT_EQ(a.files, b.files);
    for (const auto& f : a.files) {
        EXPECT_EQ(slurp(fs::temp_directory_path() / "macroqubit_test_cli_det1" / f),
                  slurp(fs::temp_directory_path() / "macroqubit_test_cli_det2" / f))
            << f;
    }
    // p = 1 gives a constant curve and the low-information warning.
    const std::string p1 = slurp(fs::path(c.output_dir) / "distill_g1.5_p1.csv");
    EXPECT_NE(p1.find("\n0,1,"), std::string::npos);
    EXPECT_NE(log.str().find("low information"), std::string::npos);
}

TEST(Commands, ManifestCarriesParameters) {
    RunConfig c;
    c.g = 1.0;
    c.thresholds = {0, 1};
    c.output_dir = scratch_dir("manifest").string();
    std::ostringstream log;
    const CommandOutput out = cmd_visibility(c, log);
    EXPECT_EQ(out.exit_code, kExitOk);
    const auto m = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "manifest.json"));
    EXPECT_EQ(m["command"], "visibility");
    EXPECT_DOUBLE_EQ(m["parameters"]["g"].get<double>(), 1.0);
    EXPECT_EQ(m["files"].size(), 4u);
    EXPECT_TRUE(m["truncation"].contains("visibility_phi_plus_refl_pm"));
}

TEST(Commands, UnknownName) {
    std::ostringstream log;
    EXPECT_THROW(run_command("fig7", RunConfig{}, log), ConfigError);
    EXPECT_EQ(command_names().size(), 7u);
}

TEST(Binary, ExitCodes) {
    const fs::path dir = scratch_dir("exit");
    const std::string out = " --out " + dir.string();
    EXPECT_EQ(run_cli("--help"), kExitOk);
    EXPECT_EQ(run_cli("distill --help"), kExitOk);
    EXPECT_EQ(run_cli(""), kExitConfig);
    EXPECT_EQ(run_cli("distill --tau 1.5" + out), kExitConfig);
    EXPECT_EQ(run_cli("preselect --phi 45deg" + out), kExitConfig);
    EXPECT_EQ(run_cli("distill --bogus 1" + out), kExitConfig);
    EXPECT_EQ(run_cli("visibility --g 0 --k 1,2" + out), kExitNoEvents);
    const std::string flagged = slurp(dir / "visibility_phi_plus_refl_pm.csv");
    EXPECT_NE(flagged.find("no_events"), std::string::npos);
    EXPECT_EQ(run_cli("distill --p 0.5 --h 0,1" + out), kExitOk);
}

TEST(Binary, FlagsOverrideConfigFile) {
    const fs::path dir = scratch_dir("override");
    const fs::path cfg = dir / "run.json";
    std::ofstream(cfg) << R"({"g": 0.9, "p": [0.2], "h_thresholds": [0, 1], "format": "json"})";
    EXPECT_EQ(run_cli("distill --config " + cfg.string() + " --g 1.0 --out " + (dir / "o").string()), kExitOk);
    const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
    EXPECT_DOUBLE_EQ(m["parameters"]["g"].get<double>(), 1.0);
    EXPECT_TRUE(fs::exists(dir / "o" / "distill_g1_p0.2.json"));
    EXPECT_EQ(run_cli("distill --config " + (dir / "missing.json").string()), kExitConfig);
}

TEST(Binary, RepeatedRunsAreIdentical) {
    const fs::path dir = scratch_dir("repeat");
    const std::string args = "double-filter --k 0,1 --h 0,1,2 --out ";
    ASSERT_EQ(run_cli(args + (dir / "a").string()), kExitOk);
    ASSERT_EQ(run_cli(args + (dir / "b").string() + " --jobs 2"), kExitOk);
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / e.path().filename())) << e.path().filename();
    }
}

}  // namespace
}  // namespace macroqubit
