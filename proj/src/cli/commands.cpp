#include "qcrb/cli/commands.hpp"

#include <array>
#include <functional>

#include "qcrb/appendix.hpp"
#include "qcrb/cli/config.hpp"
#include "qcrb/cli/report_io.hpp"
#include "qcrb/cli/svg_plot.hpp"
#include "qcrb/errors.hpp"
#include "qcrb/estimators.hpp"
#include "qcrb/fisher.hpp"

namespace qcrb::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommandNames{{
    {Command::Bound, "bound"},
    {Command::QfiCheck, "qfi-check"},
    {Command::AppendixCheck, "appendix-check"},
    {Command::Simulate, "simulate"},
    {Command::Compare, "compare"},
    {Command::Plot, "plot"},
}};

struct Outcome {
    Json report;
    Json rows = Json::array();  // flat objects for the CSV form
    int exit_code = exit_code::kSuccess;
    std::string status;
};

Json envelope(Command command, Json body) {
    return {{"command", std::string(to_string(command))}, {"report", std::move(body)}};
}

Json flat_row(const Json& a, const Json& b = Json::object(), const Json& c = Json::object()) {
    Json row = Json::object();
    for (const Json* part : {&a, &b, &c}) {
        for (const auto& item : part->items()) {
            row[item.key()] = item.value();
        }
    }
    return row;
}

Outcome bound_command(const RunManifest& manifest) {
    const auto cfg = parse_bound_config(load_config(manifest.config_path));
    Outcome out;
    Json body = {{"spec", to_json(cfg.spec)},
                 {"bound", to_json(fisher::bound_report(cfg.spec))},
                 {"competitors", to_json(fisher::competitor_sensitivities(cfg.spec, cfg.sample_time))},
                 {"T_samp", cfg.sample_time ? Json(*cfg.sample_time) : Json(nullptr)}};
    if (cfg.grid) {
        const auto sweep = fisher::bound_sweep(cfg.spec, cfg.grid->axis, cfg.grid->min, cfg.grid->max,
                                               cfg.grid->points, cfg.sample_time);
        Json points = Json::array();
        for (const auto& p : sweep) {
            points.push_back(to_json(p));
            out.rows.push_back(flat_row(to_json(p.spec), to_json(p.bound), to_json(p.competitors)));
        }
        body["grid"] = {{"axis", cfg.grid->axis == fisher::SweepAxis::Occupation ? "n0" : "T_obs"},
                        {"points", points}};
    } else {
        out.rows.push_back(flat_row(body["spec"], body["bound"], body["competitors"]));
    }
    out.report = envelope(Command::Bound, std::move(body));
    out.status = "bound written";
    return out;
}

Outcome qfi_check_command(const RunManifest& manifest) {
    const auto cfg = parse_qfi_check_config(load_config(manifest.config_path));
    Outcome out;
    Json rows = Json::array();
    bool all_passed = true;
    for (double n0 : cfg.n0_list) {
        const auto row = fisher::qfi_check(n0, cfg.cutoff);
        all_passed = all_passed && row.passed;
        rows.push_back(to_json(row));
    }
    out.rows = rows;
    out.report = envelope(Command::QfiCheck, {{"cutoff_policy", cfg.cutoff ? Json(*cfg.cutoff) : Json("auto")},
                                              {"rows", rows},
                                              {"all_passed", all_passed}});
    out.status = all_passed ? "all rows pass" : "some rows flagged fail";
    return out;
}

Outcome appendix_command(const RunManifest& manifest) {
    const auto cfg = parse_appendix_config(load_config(manifest.config_path), manifest.seed, manifest.workers);
    const auto check = modal::run_appendix_check(cfg);
    Outcome out;
    for (const auto& row : check.rows) {
        out.rows.push_back({{"delta_nu_T", row.delta_nu_t},
                            {"n0", row.n0},
                            {"allowed_deviation", row.allowed_deviation},
                            {"quadrature_max_diagonal", row.quadrature_full.max_diagonal},
                            {"quadrature_max_off_diagonal", row.quadrature_full.max_off_diagonal},
                            {"quadrature_interior_max_diagonal", row.quadrature_interior.max_diagonal},
                            {"quadrature_interior_max_off_diagonal", row.quadrature_interior.max_off_diagonal},
                            {"synthesis_max_diagonal", row.synthesis_full.max_diagonal},
                            {"synthesis_max_off_diagonal", row.synthesis_full.max_off_diagonal},
                            {"fitted_constant", row.fitted_constant},
                            {"quadrature_error", row.quadrature_error},
                            {"realizations", row.realizations},
                            {"diagonal_within_bound", row.diagonal_within_bound},
                            {"off_diagonal_within_bound", row.off_diagonal_within_bound},
                            {"synthesis_agrees", row.synthesis_agrees}});
    }
    Json body = to_json(check);
    body["seed"] = cfg.seed;
    out.report = envelope(Command::AppendixCheck, std::move(body));
    out.exit_code = check.passed() ? exit_code::kSuccess : exit_code::kInvariant;
    out.status = check.passed() ? "appendix check passed" : "appendix check failed";
    return out;
}

Outcome simulate_command(const RunManifest& manifest) {
    const auto cfg = parse_experiment_config(load_config(manifest.config_path), manifest.seed, manifest.workers);
    const auto report = estimators::run_experiment(cfg);
    Outcome out;
    Json body = to_json(report);
    body["spec"] = to_json(cfg.spec);
    if (cfg.kind == estimators::EstimatorKind::PhotonCounting) {
        body["counting_path"] = std::string(estimators::to_string(cfg.counting_path));
    }
    out.rows.push_back(to_json(report));
    out.report = envelope(Command::Simulate, std::move(body));
    const bool ok = report.bound_ok && report.unbiased_ok;
    out.exit_code = ok ? exit_code::kSuccess : exit_code::kInvariant;
    out.status = !report.bound_ok     ? "BOUND VIOLATION flagged"
                 : !report.unbiased_ok ? "bias flag raised"
                                       : "all invariant flags pass";
    return out;
}

Outcome compare_command(const RunManifest& manifest) {
    const auto cfg = parse_comparison_config(load_config(manifest.config_path), manifest.seed, manifest.workers);
    const auto report = estimators::run_comparison(cfg);
    Outcome out;
    out.rows.push_back(flat_row({{"role", "operating_point"}, {"n0", report.operating_point.n0},
                                 {"M", report.operating_point.modes}},
                                to_json(report.competitors),
                                {{"bound", report.bound.rel_sens_bound}, {"lkd_gap_factor", report.lkd_gap_factor}}));
    for (const auto& s : report.simulated) {
        out.rows.push_back(flat_row({{"role", "simulated"}}, to_json(s)));
    }
    out.report = envelope(Command::Compare, to_json(report));
    out.exit_code = report.simulated_at_or_above_bound ? exit_code::kSuccess : exit_code::kInvariant;
    out.status = std::string(report.lkd_below_bound ? "LKD claim below bound" : "LKD claim not below bound") +
                 (report.simulated_at_or_above_bound ? "; simulated estimators at or above bound"
                                                      : "; BOUND VIOLATION flagged");
    return out;
}

struct PlotPoint {
    std::string kind;
    Json report;
    std::string source;
};

void collect_points(const Json& document, const std::string& source, std::vector<PlotPoint>& points) {
    if (!document.is_object() || !document.contains("command") || !document.contains("report")) {
        throw ConfigError("report " + source + " is not a qcrb report");
    }
    const auto command = document.at("command").get<std::string>();
    const Json& body = document.at("report");
    if (command == "simulate") {
        points.push_back({body.at("kind").get<std::string>(), body, source});
    } else if (command == "compare") {
        for (const auto& s : body.at("simulated")) {
            points.push_back({s.at("kind").get<std::string>(), s, source});
        }
    } else {
        throw ConfigError("report " + source + " holds no simulated estimators");
    }
}

Outcome plot_command(const RunManifest& manifest) {
    const auto cfg = parse_plot_config(load_config(manifest.config_path), manifest.config_path.parent_path());
    std::vector<PlotPoint> points;
    for (const auto& path : cfg.reports) {
        if (!fs::exists(path)) {
            throw ConfigError("missing report " + path.string());
        }
        collect_points(read_json_report(path), path.string(), points);
    }

    const auto sweep = fisher::bound_sweep(cfg.curve_spec, fisher::SweepAxis::Occupation, cfg.grid.min,
                                           cfg.grid.max, cfg.grid.points, cfg.sample_time);
    LogLogPlot plot;
    plot.title = "Relative sensitivity vs occupation, M = " + std::to_string(cfg.curve_spec.modes);
    plot.x_label = "n0 (photons per mode)";
    plot.y_label = "relative sensitivity Var(n0)/n0^2";
    Curve bound{"quantum CR bound", "#000000", {}, {}, false};
    Curve radiometer{"radiometer 1/M", "#1f77b4", {}, {}, true};
    Curve lkd{"LKD claimed", "#d62728", {}, {}, true};
    for (const auto& p : sweep) {
        bound.x.push_back(p.spec.n0);
        bound.y.push_back(p.bound.rel_sens_bound);
        radiometer.x.push_back(p.spec.n0);
        radiometer.y.push_back(p.competitors.radiometer);
        if (p.competitors.lkd_claimed) {
            lkd.x.push_back(p.spec.n0);
            lkd.y.push_back(*p.competitors.lkd_claimed);
        }
    }
    plot.curves = {bound, radiometer};
    if (!lkd.x.empty()) {
        plot.curves.push_back(lkd);
    }

    const std::array<std::pair<std::string_view, std::string_view>, 3> colors{{
        {"photon_counting", "#2ca02c"},
        {"heterodyne_radiometer", "#ff7f0e"},
        {"two_detector_correlation", "#9467bd"},
    }};
    Json listed = Json::array();
    for (const auto& [kind, color] : colors) {
        PointSeries series{std::string(kind), std::string(color), {}, {}, {}, {}};
        for (const auto& p : points) {
            if (p.kind != kind) {
                continue;
            }
            const double n0 = p.report.at("n0").get<double>();
            const double value = p.report.at("rel_sensitivity").get<double>();
            const double sigma = p.report.at("bootstrap_sigma").get<double>();
            series.x.push_back(n0);
            series.y.push_back(value);
            series.y_low.push_back(value - estimators::kToleranceSigmas * sigma);
            series.y_high.push_back(value + estimators::kToleranceSigmas * sigma);
            listed.push_back({{"kind", p.kind},
                              {"source", fs::path(p.source).filename().string()},
                              {"n0", n0},
                              {"M", p.report.at("M")},
                              {"rel_sensitivity", value},
                              {"bootstrap_sigma", sigma},
                              {"bound", p.report.at("bound")},
                              {"bound_ok", p.report.at("bound_ok")}});
        }
        if (!series.x.empty()) {
            plot.points.push_back(std::move(series));
        }
    }

    write_text(manifest.output_dir / "plot.svg", render_svg(plot));
    Json curves = Json::array();
    for (const auto& c : plot.curves) {
        curves.push_back({{"label", c.label}, {"samples", c.x.size()}});
    }
    Outcome out;
    out.rows = listed;
    out.report = envelope(Command::Plot, {{"svg", "plot.svg"},
                                          {"M", cfg.curve_spec.modes},
                                          {"curves", curves},
                                          {"points", listed}});
    out.status = "plot.svg written with " + std::to_string(plot.curves.size()) + " curves and " +
                 std::to_string(listed.size()) + " points";
    return out;
}

Outcome dispatch(const RunManifest& manifest) {
    switch (manifest.command) {
        case Command::Bound: return bound_command(manifest);
        case Command::QfiCheck: return qfi_check_command(manifest);
        case Command::AppendixCheck: return appendix_command(manifest);
        case Command::Simulate: return simulate_command(manifest);
        case Command::Compare: return compare_command(manifest);
        case Command::Plot: return plot_command(manifest);
    }
    throw ConfigError("unknown command");
}

}  // namespace

std::string_view to_string(Command command) {
    for (const auto& [c, name] : kCommandNames) {
        if (c == command) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
    for (const auto& [c, name] : kCommandNames) {
        if (name == text) {
            return c;
        }
    }
    return std::nullopt;
}

int run_command(const RunManifest& manifest, std::ostream& log) {
    const std::string name(to_string(manifest.command));
    try {
        if (manifest.workers < 1) {
            throw ConfigError("--workers must be >= 1");
        }
        std::error_code ec;
        fs::create_directories(manifest.output_dir, ec);
        if (ec || !fs::is_directory(manifest.output_dir)) {
            throw ConfigError("cannot create output directory " + manifest.output_dir.string());
        }
        const Outcome outcome = dispatch(manifest);
        const fs::path target =
            manifest.output_dir / (name + (manifest.format == Format::Json ? ".json" : ".csv"));
        write_text(target, manifest.format == Format::Json ? format_json(outcome.report)
                                                           : format_csv(table_from_rows(outcome.rows)));
        log << name << ": " << outcome.status << " -> " << target.string() << "\n";
        return outcome.exit_code;
    } catch (const InvariantViolation& e) {
        log << name << ": invariant violation: " << e.what() << "\n";
        return exit_code::kInvariant;
    } catch (const NumericalError& e) {
        log << name << ": numerical error: " << e.what() << "\n";
        return exit_code::kNumerical;
    } catch (const ConfigError& e) {
        log << name << ": config error: " << e.what() << "\n";
        return exit_code::kConfig;
    } catch (const Json::exception& e) {
        log << name << ": config error: " << e.what() << "\n";
        return exit_code::kConfig;
    } catch (const std::exception& e) {
        log << name << ": internal error: " << e.what() << "\n";
        return exit_code::kInternal;
    }
}

}  // namespace qcrb::cli
