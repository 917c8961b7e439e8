// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/curve_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace macroqubit {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::ordered_json meta_value(const std::string& s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && end == s.data() + s.size()) return v;
    return s;
}

// Same 12 significant digits as the CSV output.
double rounded(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

nlohmann::ordered_json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return rounded(v);
}

}  // namespace

std::string format_value(double v) {
    if (std::isnan(v)) return "";
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(std::ostream& out, const CurveResult& curve) {
    curve.validate();
    out << csv_field(curve.x_label) << ',' << csv_field(curve.y_label);
    for (const auto& [name, values] : curve.columns) out << ',' << csv_field(name);
    for (const auto& [key, value] : curve.meta) out << ',' << csv_field(key);
    out << ",status\n";
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const bool flagged = !curve.flagged.empty() && curve.flagged[i];
        out << format_value(curve.samples[i].first) << ',' << (flagged ? "" : format_value(curve.samples[i].second));
        for (const auto& [name, values] : curve.columns) out << ',' << format_value(values[i]);
        for (const auto& [key, value] : curve.meta) out << ',' << csv_field(value);
        out << ',' << (flagged ? "no_events" : "ok") << '\n';
    }
}

std::string to_json(const CurveResult& curve) {
    curve.validate();
    nlohmann::ordered_json j;
    j["x_label"] = curve.x_label;
    j["y_label"] = curve.y_label;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : curve.meta) meta[key] = meta_value(value);
    j["meta"] = meta;
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const bool flagged = !curve.flagged.empty() && curve.flagged[i];
        samples.push_back({rounded(curve.samples[i].first), flagged ? nlohmann::ordered_json(nullptr) : number_or_null(curve.samples[i].second)});
    }
    j["samples"] = samples;
    nlohmann::ordered_json columns = nlohmann::ordered_json::object();
    for (const auto& [name, values] : curve.columns) {
        nlohmann::ordered_json col = nlohmann::ordered_json::array();
        for (double v : values) col.push_back(number_or_null(v));
        columns[name] = col;
    }
    j["columns"] = columns;
    return j.dump(2) + "\n";
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << csv_field(table.header[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_value(row[i]);
        out << '\n';
    }
}

}  // namespace macroqubit
