// Copyright 2026 The macroqubit Authors
// SPDX-License-Identifier: Apache-2.0

#include "macroqubit/commands.hpp"

#include "macroqubit/analysis.hpp"
#include "macroqubit/curve_io.hpp"
#include "macroqubit/oracle.hpp"
#include "macroqubit/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

namespace macroqubit {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;
constexpr double kOracleBound = 1e-9;

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<int> range(int lo, int hi) {
    std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
    std::iota(v.begin(), v.end(), lo);
    return v;
}

double rounded(double v) {
    return std::strtod(format_value(v).c_str(), nullptr);
}

ordered_json rounded_list(const std::vector<double>& v) {
    ordered_json out = ordered_json::array();
    for (double x : v) out.push_back(rounded(x));
    return out;
}

Precision precision_of(const RunConfig& c) {
    return {c.epsilon_trunc, c.drop_budget};
}

/// Collects output files and the manifest for one command run.
class OutputSink {
public:
    OutputSink(const RunConfig& config, std::string command) : config_(config), command_(std::move(command)) {
        std::error_code ec;
        std::filesystem::create_directories(config.output_dir, ec);
        if (ec) throw ConfigError("cannot create output directory '" + config.output_dir + "': " + ec.message());
        truncation_ = ordered_json::object();
    }

    void emit(const std::string& stem, const CurveResult& curve) {
        total_points_ += curve.samples.size();
        for (bool f : curve.flagged) flagged_points_ += f ? 1 : 0;
        if (config_.format != OutputFormat::Json) {
            write(stem + ".csv", [&](std::ostream& o) { write_csv(o, curve); });
        }
        if (config_.format != OutputFormat::Csv) {
            write(stem + ".json", [&](std::ostream& o) { o << to_json(curve); });
        }
    }

    void emit(const std::string& stem, const Table& table) {
        write(stem + ".csv", [&](std::ostream& o) { write_csv(o, table); });
    }

    void raw(const std::string& name, const std::string& content) {
        write(name, [&](std::ostream& o) { o << content; });
    }

    void note_truncation(const std::string& key, double dropped_mass, int r_max) {
        truncation_[key] = {{"dropped_mass", rounded(dropped_mass)}, {"r_max", r_max}};
    }

    CommandOutput finish(const ordered_json& parameters, int exit_code = kExitOk) {
        ordered_json m;
        m["command"] = command_;
        m["parameters"] = parameters;
        m["precision"] = {{"eps_trunc", config_.epsilon_trunc}, {"drop_budget", config_.drop_budget}};
        m["truncation"] = truncation_;
        m["files"] = files_;
        m["flagged_points"] = flagged_points_;
        write("manifest.json", [&](std::ostream& o) { o << m.dump(2) << "\n"; });
        CommandOutput out;
        out.files = files_;
        out.files.push_back("manifest.json");
        out.exit_code = exit_code;
        if (exit_code == kExitOk && total_points_ > 0 && flagged_points_ == total_points_) out.exit_code = kExitNoEvents;
        return out;
    }

private:
    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const std::filesystem::path path = std::filesystem::path(config_.output_dir) / name;
        std::ofstream o(path, std::ios::binary);
        if (!o) throw ConfigError("cannot write '" + path.string() + "'");
        body(o);
        if (name != "manifest.json") files_.push_back(name);
    }

    const RunConfig& config_;
    std::string command_;
    std::vector<std::string> files_;
    ordered_json truncation_;
    std::size_t total_points_ = 0;
    std::size_t flagged_points_ = 0;
};

// Samples whose evaluation hit NoEventsPass are flagged instead of dropped.
struct Point {
    double y = std::nan("");
    bool flagged = true;
    std::vector<double> extra;
};

CurveResult make_curve(const std::string& x_label, const std::string& y_label, const std::vector<double>& xs,
                       const std::vector<Point>& points, const std::vector<std::string>& extra_names) {
    CurveResult c;
    c.x_label = x_label;
    c.y_label = y_label;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        c.samples.emplace_back(xs[i], points[i].flagged ? std::nan("") : points[i].y);
        c.flagged.push_back(points[i].flagged);
    }
    for (std::size_t e = 0; e < extra_names.size(); ++e) {
        std::vector<double> col;
        for (const auto& p : points) col.push_back(e < p.extra.size() ? p.extra[e] : std::nan(""));
        c.columns.emplace_back(extra_names[e], std::move(col));
    }
    return c;
}

std::vector<double> as_doubles(const std::vector<int>& v) {
    return {v.begin(), v.end()};
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

ordered_json base_parameters(double g, double tau) {
    return {{"g", g}, {"tau", tau}};
}

}  // namespace

CommandOutput cmd_distill(const RunConfig& config, std::ostream& log) {
    config.validate();
    const double g = config.g.value_or(1.5);
    const double tau = config.tau.value_or(0.9);
    const std::vector<int> hs = sorted_unique(config.h_thresholds.empty() ? range(0, 8) : config.h_thresholds);
    std::vector<double> ps = config.p;
    if (ps.empty()) {
        for (int i = 1; i <= 9; ++i) ps.push_back(i / 10.0);
    }
    const Precision prec = precision_of(config);
    OutputSink sink(config, "distill");
    const std::string stem = "distill_g" + short_number(g);

    const auto grid = parallel_map(ps.size() * hs.size(), config.jobs, [&](std::size_t i) {
        const double p = ps[i / hs.size()];
        const int h = hs[i % hs.size()];
        Point pt;
        try {
            const Ratio r = conditional_injection_probability(p, g, tau, h, prec);
            pt = {r.value, false, {r.numerator, r.denominator}};
        } catch (const NoEventsPass&) {
            pt.extra = {0.0, 0.0};
        }
        return pt;
    });

    Table wide;
    wide.header.push_back("h");
    for (double p : ps) wide.header.push_back("p=" + short_number(p));
    for (std::size_t ih = 0; ih < hs.size(); ++ih) {
        std::vector<double> row{static_cast<double>(hs[ih])};
        for (std::size_t ip = 0; ip < ps.size(); ++ip) row.push_back(grid[ip * hs.size() + ih].y);
        wide.rows.push_back(row);
    }
    sink.emit(stem, wide);

    for (std::size_t ip = 0; ip < ps.size(); ++ip) {
        std::vector<Point> pts(grid.begin() + static_cast<std::ptrdiff_t>(ip * hs.size()),
                               grid.begin() + static_cast<std::ptrdiff_t>((ip + 1) * hs.size()));
        CurveResult c = make_curve("h", "p_cond", as_doubles(hs), pts, {"numerator", "denominator"});
        c.add_meta("g", g);
        c.add_meta("tau", tau);
        c.add_meta("p", ps[ip]);
        double lo = 1.0;
        double hi = 0.0;
        for (const auto& pt : pts) {
            if (pt.flagged) continue;
            lo = std::min(lo, pt.y);
            hi = std::max(hi, pt.y);
        }
        const bool flat = hi >= lo && hi - lo < 1e-3;
        c.add_meta("low_information", flat ? "1" : "0");
        if (flat) log << "warning: p=" << short_number(ps[ip]) << " curve is flat within 1e-3 (low information)\n";
        sink.emit(stem + "_p" + short_number(ps[ip]), c);
    }
    ordered_json params = base_parameters(g, tau);
    params["p"] = rounded_list(ps);
    params["h_thresholds"] = hs;
    return sink.finish(params);
}

CommandOutput cmd_visibility(const RunConfig& config, std::ostream& /*log*/) {
    config.validate();
    const double g = config.g.value_or(1.1);
    const double tau = config.tau.value_or(0.9);
    const std::vector<int> ks = sorted_unique(config.thresholds.empty() ? range(0, 10) : config.thresholds);
    const Precision prec = precision_of(config);
    struct Panel {
        std::string stem;
        double beta_inj;
        double refl;
    };
    // Codification basis of each state is its own injection basis.
    const std::vector<Panel> panels = {{"visibility_phi_plus_refl_pm", 0.0, 0.0},
                                       {"visibility_phi_plus_refl_rl", 0.0, kPi / 2},
                                       {"visibility_phi_r_refl_pm", kPi / 2, 0.0},
                                       {"visibility_phi_r_refl_rl", kPi / 2, kPi / 2}};
    OutputSink sink(config, "visibility");
    const auto pts = parallel_map(panels.size() * ks.size(), config.jobs, [&](std::size_t i) {
        const Panel& pn = panels[i / ks.size()];
        const int k = ks[i % ks.size()];
        Point pt;
        try {
            const VisibilityResult r = visibility_single_of(pn.beta_inj, pn.refl, k, pn.beta_inj, g, tau, prec);
            pt = {r.visibility.value, false, {r.pass_probability, r.visibility.numerator, r.visibility.denominator, r.sums.dropped_mass, static_cast<double>(r.sums.r_max)}};
        } catch (const NoEventsPass&) {
            pt.extra = {0.0, 0.0, 0.0, 0.0, 0.0};
        }
        return pt;
    });
    for (std::size_t ip = 0; ip < panels.size(); ++ip) {
        std::vector<Point> sub(pts.begin() + static_cast<std::ptrdiff_t>(ip * ks.size()),
                               pts.begin() + static_cast<std::ptrdiff_t>((ip + 1) * ks.size()));
        double dropped = 0.0;
        int r_max = 0;
        for (auto& p : sub) {
            dropped = std::max(dropped, p.extra[3]);
            r_max = std::max(r_max, static_cast<int>(p.extra[4]));
            p.extra.resize(3);
        }
        CurveResult c = make_curve("k", "visibility", as_doubles(ks), sub, {"pass_probability", "numerator", "denominator"});
        c.add_meta("g", g);
        c.add_meta("tau", tau);
        c.add_meta("beta_inj", panels[ip].beta_inj);
        c.add_meta("refl_basis", panels[ip].refl);
        c.add_meta("final_basis", panels[ip].beta_inj);
        sink.note_truncation(panels[ip].stem, dropped, r_max);
        sink.emit(panels[ip].stem, c);
    }
    ordered_json params = base_parameters(g, tau);
    params["thresholds"] = ks;
    return sink.finish(params);
}

CommandOutput cmd_activation(const RunConfig& config, std::ostream& /*log*/) {
    config.validate();
    const double g = config.g.value_or(1.5);
    const double tau = config.tau.value_or(0.9);
    const double refl = config.bases.empty() ? 0.0 : config.bases.front();
    const std::vector<int> ks = sorted_unique(config.thresholds.empty() ? range(0, 10) : config.thresholds);
    const Precision prec = precision_of(config);
    const std::vector<std::pair<std::string, double>> states = {{"activation_phi_plus", 0.0}, {"activation_phi_r", kPi / 2}};
    OutputSink sink(config, "activation");
    const auto pts = parallel_map(states.size() * ks.size(), config.jobs, [&](std::size_t i) {
        const double beta = states[i / ks.size()].second;
        const int k = ks[i % ks.size()];
        return Point{shutter_activation_probability(beta, g, tau, k, refl, prec), false, {}};
    });
    for (std::size_t is = 0; is < states.size(); ++is) {
        std::vector<Point> sub(pts.begin() + static_cast<std::ptrdiff_t>(is * ks.size()),
                               pts.begin() + static_cast<std::ptrdiff_t>((is + 1) * ks.size()));
        CurveResult c = make_curve("k", "activation_probability", as_doubles(ks), sub, {});
        c.add_meta("g", g);
        c.add_meta("tau", tau);
        c.add_meta("beta_inj", states[is].second);
        c.add_meta("refl_basis", refl);
        sink.emit(states[is].first, c);
    }
    ordered_json params = base_parameters(g, tau);
    params["thresholds"] = ks;
    params["refl_basis"] = rounded(refl);
    return sink.finish(params);
}

CommandOutput cmd_double_filter(const RunConfig& config, std::ostream& log) {
    config.validate();
    const double g = config.g.value_or(1.2);
    constexpr double tau = 0.5;
    if (config.tau && *config.tau != tau) log << "note: double-filter always uses a balanced splitter; tau ignored\n";
    const double beta_inj = kPi / 2;
    const double refl = config.bases.size() > 0 ? config.bases[0] : 0.0;
    const double final_basis = config.bases.size() > 1 ? config.bases[1] : kPi / 2;
    const std::vector<int> ks = sorted_unique(config.thresholds.empty() ? range(0, 4) : config.thresholds);
    std::vector<int> hs = sorted_unique(config.h_thresholds.empty() ? range(0, 4) : config.h_thresholds);
    for (int h : hs) {
        if (h < 0) throw ConfigError("double-filter needs h >= 0");
    }
    const Precision prec = precision_of(config);
    OutputSink sink(config, "double-filter");
    const auto sums = parallel_map(ks.size(), config.jobs, [&](std::size_t i) {
        return filtered_dichotomic_sums(macroqubit_state(beta_inj, g, prec.eps_trunc), tau,
                                        FilterSpec::orthogonality(ks[i], refl), final_basis, prec);
    });
    Table surface;
    surface.header = {"k", "h", "visibility", "conclusive_probability"};
    for (std::size_t ik = 0; ik < ks.size(); ++ik) {
        std::vector<Point> pts;
        for (int h : hs) {
            Point pt;
            try {
                const Ratio r = sums[ik].visibility(h, TieRule::Inconclusive);
                pt = {r.value, false, {r.denominator}};
            } catch (const NoEventsPass&) {
                pt.extra = {0.0};
            }
            surface.rows.push_back({static_cast<double>(ks[ik]), static_cast<double>(h), pt.y, pt.extra[0]});
            pts.push_back(pt);
        }
        CurveResult c = make_curve("h", "visibility", as_doubles(hs), pts, {"conclusive_probability"});
        c.add_meta("g", g);
        c.add_meta("tau", tau);
        c.add_meta("k", static_cast<double>(ks[ik]));
        c.add_meta("beta_inj", beta_inj);
        c.add_meta("refl_basis", refl);
        c.add_meta("final_basis", final_basis);
        const std::string stem = "double_filter_k" + std::to_string(ks[ik]);
        sink.note_truncation(stem, sums[ik].dropped_mass, sums[ik].r_max);
        sink.emit(stem, c);
    }
    sink.emit("double_filter_surface", surface);
    ordered_json params = base_parameters(g, tau);
    params["thresholds"] = ks;
    params["h_thresholds"] = hs;
    params["bases"] = rounded_list({refl, final_basis});
    return sink.finish(params);
}

CommandOutput cmd_preselect(const RunConfig& config, std::ostream& /*log*/) {
    config.validate();
    const double g = config.g.value_or(1.2);
    const double tau = config.tau.value_or(0.9);
    const double phi = config.phi.value_or(kPi / 4);
    const std::vector<int> ks = sorted_unique(config.thresholds.empty() ? std::vector<int>{0, 3, 5} : config.thresholds);
    const std::vector<double> betas = config.bases.empty() ? std::vector<double>{0.0, kPi / 4} : config.bases;
    const int grid = config.alpha_grid;
    const Precision prec = precision_of(config);
    OutputSink sink(config, "preselect");

    std::vector<double> alphas;
    for (int i = 0; i < grid; ++i) alphas.push_back(2.0 * kPi * i / grid);

    struct FringeOut {
        CurveResult curve;
        double peak = std::nan("");
        double visibility = std::nan("");
        double pass = 0.0;
        double dropped = 0.0;
        int r_max = 0;
    };
    const auto fringes = parallel_map(ks.size() * betas.size(), config.jobs, [&](std::size_t i) {
        const int k = ks[i / betas.size()];
        const double b = betas[i % betas.size()];
        const MacroFringe f(g, tau, preselection_filter(phi, k), b, 0, TieRule::HalfWeight, prec);
        FringeOut out;
        std::vector<Point> pts;
        for (double a : alphas) {
            const FringePoint fp = f.evaluate(a);
            Point pt;
            pt.extra = {fp.pass};
            if (fp.plus + fp.minus > 0.0) {
                pt.y = fp.plus / (fp.plus + fp.minus);
                pt.flagged = false;
            }
            pts.push_back(pt);
        }
        out.curve = make_curve("alpha", "p_plus", alphas, pts, {"pass_probability"});
        out.dropped = f.dropped_mass();
        out.r_max = f.r_max();
        try {
            const FringeExtremum hi = fringe_extremum(f, true, grid);
            const FringeExtremum lo = fringe_extremum(f, false, grid);
            out.peak = hi.alpha;
            out.visibility = (hi.value - lo.value) / (hi.value + lo.value);
            out.pass = f.evaluate(hi.alpha).pass;
        } catch (const NoEventsPass&) {
        }
        return out;
    });

    Table peaks;
    peaks.header = {"k", "beta_meas", "peak_alpha", "visibility", "pass_probability"};
    for (std::size_t i = 0; i < fringes.size(); ++i) {
        const int k = ks[i / betas.size()];
        const double b = betas[i % betas.size()];
        CurveResult c = fringes[i].curve;
        c.add_meta("g", g);
        c.add_meta("tau", tau);
        c.add_meta("k", static_cast<double>(k));
        c.add_meta("phi_pre", phi);
        c.add_meta("beta_meas", b);
        const std::string stem = "preselect_fringe_k" + std::to_string(k) + "_beta" + short_number(b);
        sink.note_truncation(stem, fringes[i].dropped, fringes[i].r_max);
        sink.emit(stem, c);
        peaks.rows.push_back({static_cast<double>(k), b, fringes[i].peak, fringes[i].visibility, fringes[i].pass});
    }
    sink.emit("preselect_peaks", peaks);

    if (betas.size() == 2) {
        Table sep;
        sep.header = {"k", "peak_first", "peak_second", "separation"};
        for (std::size_t ik = 0; ik < ks.size(); ++ik) {
            const double p0 = fringes[ik * 2].peak;
            const double p1 = fringes[ik * 2 + 1].peak;
            double d = std::remainder(p1 - p0, 2.0 * kPi);
            sep.rows.push_back({static_cast<double>(ks[ik]), p0, p1, std::abs(d)});
        }
        sink.emit("preselect_peak_separation", sep);
    }

    // Visibility and pass probability as functions of the pre-selection angle.
    std::vector<double> phis;
    for (int i = 1; i <= 8; ++i) phis.push_back(i * kPi / 16);
    const auto vis = parallel_map(ks.size() * phis.size(), config.jobs, [&](std::size_t i) {
        const int k = ks[i / phis.size()];
        const double ph = phis[i % phis.size()];
        Point pt;
        try {
            const PreselectVisibility v = preselect_visibility(ph, k, g, tau, betas.front(), prec, grid);
            pt = {v.visibility, false, {v.pass_probability}};
        } catch (const NoEventsPass&) {
            pt.extra = {0.0};
        }
        return pt;
    });
    for (std::size_t ik = 0; ik < ks.size(); ++ik) {
        std::vector<Point> sub(vis.begin() + static_cast<std::ptrdiff_t>(ik * phis.size()),
                               vis.begin() + static_cast<std::ptrdiff_t>((ik + 1) * phis.size()));
        CurveResult c = make_curve("phi_pre", "visibility", phis, sub, {"pass_probability"});
        c.add_meta("g", g);
        c.add_meta("tau", tau);
        c.add_meta("k", static_cast<double>(ks[ik]));
        c.add_meta("beta_meas", betas.front());
        sink.emit("preselect_visibility_k" + std::to_string(ks[ik]), c);
    }

    ordered_json params = base_parameters(g, tau);
    params["phi"] = rounded(phi);
    params["thresholds"] = ks;
    params["bases"] = rounded_list(betas);
    params["alpha_grid"] = grid;
    return sink.finish(params);
}

CommandOutput cmd_chsh(const RunConfig& config, std::ostream& /*log*/) {
    config.validate();
    const double g = config.g.value_or(1.2);
    const double tau = config.tau.value_or(0.9);
    const double phi = config.phi.value_or(kPi / 4);
    const std::vector<int> ks = sorted_unique(config.thresholds.empty() ? std::vector<int>{0, 3, 5} : config.thresholds);
    std::vector<double> angles = config.bases;
    if (angles.empty()) {
        for (int i = 0; i < 16; ++i) angles.push_back(i * kPi / 8);
    }
    const Precision prec = precision_of(config);
    OutputSink sink(config, "chsh");
    std::vector<Point> pts;
    for (int k : ks) {
        const MicroMacroModel model{g, tau, preselection_filter(phi, k), 0};
        Point pt;
        try {
            const ChshSweep s = chsh_sweep(angles, model, prec, config.jobs);
            pt = {s.max_s, false, {s.argmax[0], s.argmax[1], s.argmax[2], s.argmax[3], s.min_pass}};
        } catch (const NoEventsPass&) {
            pt.extra = {std::nan(""), std::nan(""), std::nan(""), std::nan(""), 0.0};
        }
        pts.push_back(pt);
    }
    CurveResult c = make_curve("k", "max_s", as_doubles(ks), pts, {"a", "a_prime", "b", "b_prime", "min_pass_probability"});
    c.add_meta("g", g);
    c.add_meta("tau", tau);
    c.add_meta("phi_pre", phi);
    c.add_meta("angles", static_cast<double>(angles.size()));
    sink.emit("chsh_max", c);
    ordered_json params = base_parameters(g, tau);
    params["phi"] = rounded(phi);
    params["thresholds"] = ks;
    params["angles"] = rounded_list(angles);
    return sink.finish(params);
}

CommandOutput cmd_oracle_check(const RunConfig& config, std::ostream& log) {
    config.validate();
    constexpr int window = 12;
    constexpr int amplifier_cutoff = 24;
    const std::vector<double> gains = config.g ? std::vector<double>{*config.g} : std::vector<double>{0.3, 0.6};
    for (double g : gains) {
        if (g > 0.8) throw ConfigError("oracle-check is limited to g <= 0.8");
    }
    OutputSink sink(config, "oracle-check");
    ordered_json report;
    report["bound"] = kOracleBound;
    report["window"] = window;
    report["amplifier_cutoff"] = amplifier_cutoff;
    ordered_json suites = ordered_json::array();
    std::string csv = "g,suite,max_deviation,status\n";
    bool ok = true;
    for (double g : gains) {
        for (const auto& s : oracle_suites(g, window, amplifier_cutoff)) {
            const bool pass = s.deviation < kOracleBound;
            ok = ok && pass;
            log << "g=" << short_number(g) << " " << s.suite << " deviation " << s.deviation << " (" << s.seconds << " s)\n";
            suites.push_back({{"g", g}, {"suite", s.suite}, {"max_deviation", s.deviation}, {"pass", pass}});
            csv += format_value(g) + "," + s.suite + "," + format_value(s.deviation) + "," + (pass ? "ok" : "deviation") + "\n";
        }
    }
    report["suites"] = suites;
    report["passed"] = ok;
    sink.raw("oracle_report.json", report.dump(2) + "\n");
    sink.raw("oracle_report.csv", csv);
    ordered_json params;
    params["g"] = gains;
    return sink.finish(params, ok ? kExitOk : kExitOracle);
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"distill", "visibility", "activation", "double-filter",
                                                   "preselect", "chsh", "oracle-check"};
    return names;
}

CommandOutput run_command(const std::string& name, const RunConfig& config, std::ostream& log) {
    static const std::map<std::string, CommandOutput (*)(const RunConfig&, std::ostream&)> table = {
        {"distill", cmd_distill},       {"visibility", cmd_visibility},   {"activation", cmd_activation},
        {"double-filter", cmd_double_filter}, {"preselect", cmd_preselect}, {"chsh", cmd_chsh},
        {"oracle-check", cmd_oracle_check}};
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown subcommand '" + name + "'");
    return it->second(config, log);
}

}  // namespace macroqubit
