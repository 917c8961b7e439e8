// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

namespace macroqubit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_plain_number(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError("not a number: '" + text + "'");
    return v;
}

double json_angle(const nlohmann::json& v) {
    if (v.is_number()) {
        const double a = v.get<double>();
        return parse_angle(nlohmann::json(a).dump());
    }
    if (v.is_string()) return parse_angle(v.get<std::string>());
    throw ConfigError("angles must be numbers or strings");
}

template <typename T>
std::vector<T> json_list(const nlohmann::json& v, const char* key) {
    try {
        if (v.is_array()) return v.get<std::vector<T>>();
        return {v.get<T>()};
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

template <typename T>
T json_scalar(const nlohmann::json& v, const char* key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

}  // namespace

OutputFormat output_format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "both") return OutputFormat::Both;
    throw ConfigError("format must be csv, json or both, got '" + name + "'");
}

std::string to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Both: return "both";
    }
    return "csv";
}

double parse_angle(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty()) throw ConfigError("empty angle");
    static const std::regex degrees(R"((deg|°|[0-9.]\s*d$))", std::regex::icase);
    if (std::regex_search(text, degrees)) throw ConfigError("angles are radians only, got '" + text + "'");
    static const std::regex pi_form(R"(^([+-]?(?:[0-9]*\.?[0-9]*))\s*\*?\s*pi(?:\s*/\s*([0-9]*\.?[0-9]+))?$)",
                                    std::regex::icase);
    double value = 0.0;
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        const std::string coef = m[1].str();
        double c = 1.0;
        if (coef == "-") {
            c = -1.0;
        } else if (!coef.empty() && coef != "+") {
            c = parse_plain_number(coef);
        }
        const double d = m[2].matched ? parse_plain_number(m[2].str()) : 1.0;
        if (d == 0.0) throw ConfigError("division by zero in angle '" + text + "'");
        value = c * std::numbers::pi / d;
    } else {
        value = parse_plain_number(text);
    }
    if (!std::isfinite(value) || std::abs(value) > kTwoPi + 1e-12) {
        throw ConfigError("angle '" + text + "' exceeds 2 pi; angles are radians only");
    }
    return value;
}

void RunConfig::validate() const {
    if (g && (!(*g >= 0.0) || !std::isfinite(*g))) throw ConfigError("g must be a finite number >= 0");
    if (tau && !(*tau > 0.0 && *tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
    if (!(epsilon_trunc > 0.0 && epsilon_trunc < 1e-2)) throw ConfigError("eps-trunc must lie in (0, 0.01)");
    if (!(drop_budget >= 0.0 && drop_budget < 1e-2)) throw ConfigError("drop budget must lie in [0, 0.01)");
    for (int k : thresholds) {
        if (k < 0) throw ConfigError("k thresholds must be >= 0");
    }
    for (int h : h_thresholds) {
        if (h < -1) throw ConfigError("h thresholds must be >= -1");
    }
    for (double pv : p) {
        if (!(pv >= 0.0 && pv <= 1.0)) throw ConfigError("p must lie in [0, 1]");
    }
    if (alpha_grid < 3) throw ConfigError("grid must have at least 3 points");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (output_dir.empty()) throw ConfigError("output directory is empty");
}

RunConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {"g", "tau", "epsilon_trunc", "drop_budget", "thresholds",
                                                "h_thresholds", "bases", "phi", "alpha_grid", "p",
                                                "output_dir", "format", "jobs"};
    RunConfig c;
    for (const auto& [key, v] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
        if (key == "g") c.g = json_scalar<double>(v, "g");
        if (key == "tau") c.tau = json_scalar<double>(v, "tau");
        if (key == "epsilon_trunc") c.epsilon_trunc = json_scalar<double>(v, "epsilon_trunc");
        if (key == "drop_budget") c.drop_budget = json_scalar<double>(v, "drop_budget");
        if (key == "thresholds") c.thresholds = json_list<int>(v, "thresholds");
        if (key == "h_thresholds") c.h_thresholds = json_list<int>(v, "h_thresholds");
        if (key == "bases") {
            c.bases.clear();
            if (v.is_array()) {
                for (const auto& a : v) c.bases.push_back(json_angle(a));
            } else {
                c.bases.push_back(json_angle(v));
            }
        }
        if (key == "phi") c.phi = json_angle(v);
        if (key == "alpha_grid") c.alpha_grid = json_scalar<int>(v, "alpha_grid");
        if (key == "p") c.p = json_list<double>(v, "p");
        if (key == "output_dir") c.output_dir = json_scalar<std::string>(v, "output_dir");
        if (key == "format") c.format = output_format_from_string(json_scalar<std::string>(v, "format"));
        if (key == "jobs") c.jobs = json_scalar<int>(v, "jobs");
    }
    c.validate();
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

}  // namespace macroqubit
