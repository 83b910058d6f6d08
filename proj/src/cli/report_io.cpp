#include "qcrb/cli/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb::cli {

namespace {

Json optional_number(const std::optional<double>& value) { return value ? Json(*value) : Json(nullptr); }

Json to_json(const modal::DeviationStats& stats) {
    return {{"max_diagonal", stats.max_diagonal},
            {"diagonal_at", stats.diagonal_at},
            {"max_off_diagonal", stats.max_off_diagonal},
            {"off_row", stats.off_row},
            {"off_col", stats.off_col}};
}

Json to_json(const std::complex<double>& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const modal::ElementComparison& c) {
    return {{"label", c.label},
            {"m", c.m},
            {"n", c.n},
            {"quadrature", c.quadrature},
            {"quadrature_sigma", c.quadrature_sigma},
            {"synthesis", c.synthesis},
            {"synthesis_sigma", c.synthesis_sigma},
            {"z", c.z},
            {"agrees", c.agrees}};
}

}  // namespace

Json to_json(const physics::SourceSpec& spec) {
    return {{"T_s", spec.source_temperature},
            {"nu0", spec.nu0},
            {"delta_nu", spec.delta_nu},
            {"T_obs", spec.observation_time},
            {"n0", spec.n0},
            {"tau_c", spec.tau_c},
            {"M", spec.modes},
            {"M_exact", spec.modes_exact},
            {"long_observation", spec.long_observation},
            {"rayleigh_jeans_degraded", spec.rayleigh_jeans_degraded}};
}

Json to_json(const fisher::BoundReport& bound) {
    return {{"qfi_single", bound.qfi_single},
            {"qfi_total", bound.qfi_total},
            {"var_bound", bound.var_bound},
            {"rel_sens_bound", bound.rel_sens_bound},
            {"temp_rel_sens_bound", bound.temp_rel_sens_bound}};
}

Json to_json(const fisher::CompetitorSensitivities& competitors) {
    return {{"radiometer", competitors.radiometer},
            {"zmuidzinas", competitors.zmuidzinas},
            {"lkd_claimed", optional_number(competitors.lkd_claimed)},
            {"lkd_regime_valid", competitors.lkd_regime_valid}};
}

Json to_json(const fisher::SweepPoint& point) {
    return {{"spec", to_json(point.spec)}, {"bound", to_json(point.bound)}, {"competitors", to_json(point.competitors)}};
}

Json to_json(const fisher::QfiCheck& row) {
    return {{"n0", row.n0},
            {"cutoff", row.cutoff},
            {"tail_mass", row.tail_mass},
            {"qfi_analytic", row.qfi_analytic},
            {"qfi_numeric", row.qfi_numeric},
            {"qfi_relative_error", row.qfi_relative_error},
            {"sld_residual", row.sld_residual},
            {"sld_max_deviation", row.sld_max_deviation},
            {"score_mean", row.score_mean},
            {"drho_trace", row.drho_trace},
            {"dropped_pairs", row.dropped_pairs},
            {"escalated", row.escalated},
            {"passed", row.passed}};
}

Json to_json(const modal::AppendixRow& row) {
    Json comparisons = Json::array();
    for (const auto& c : row.comparisons) {
        comparisons.push_back(to_json(c));
    }
    return {{"delta_nu_T", row.delta_nu_t},
            {"n0", row.n0},
            {"allowed_deviation", row.allowed_deviation},
            {"quadrature_full", to_json(row.quadrature_full)},
            {"quadrature_interior", to_json(row.quadrature_interior)},
            {"fitted_constant", row.fitted_constant},
            {"quadrature_error", row.quadrature_error},
            {"panels_zeta", row.panels_zeta},
            {"panels_tau", row.panels_tau},
            {"center_split",
             {{"head", to_json(row.center_split.head)},
              {"middle", to_json(row.center_split.middle)},
              {"tail", to_json(row.center_split.tail)},
              {"end_segment_bound", row.center_split.end_segment_bound}}},
            {"realizations", row.realizations},
            {"synthesis_full", to_json(row.synthesis_full)},
            {"synthesis_interior", to_json(row.synthesis_interior)},
            {"max_anomalous", row.max_anomalous},
            {"comparisons", comparisons},
            {"diagonal_within_bound", row.diagonal_within_bound},
            {"off_diagonal_within_bound", row.off_diagonal_within_bound},
            {"synthesis_agrees", row.synthesis_agrees}};
}

Json to_json(const modal::AppendixCheck& check) {
    Json rows = Json::array();
    for (const auto& row : check.rows) {
        rows.push_back(to_json(row));
    }
    return {{"rows", rows},
            {"diagonal_decreasing", check.diagonal_decreasing},
            {"off_diagonal_decreasing", check.off_diagonal_decreasing},
            {"all_within_bound", check.all_within_bound},
            {"all_agree", check.all_agree},
            {"passed", check.passed()}};
}

Json to_json(const estimators::SensitivityReport& r) {
    return {{"kind", std::string(estimators::to_string(r.kind))},
            {"label", r.label},
            {"trials", r.trials},
            {"M", r.modes},
            {"n0", r.n0},
            {"mean_estimate", r.mean_estimate},
            {"bias", r.bias},
            {"variance", r.variance},
            {"rel_sensitivity", r.rel_sensitivity},
            {"bootstrap_sigma", r.bootstrap_sigma},
            {"bootstrap_sigma_mean", r.bootstrap_sigma_mean},
            {"bound", r.bound},
            {"ratio_to_bound", r.ratio_to_bound},
            {"ratio_sigma", r.ratio_sigma},
            {"asymptotic_bias", optional_number(r.asymptotic_bias)},
            {"lkd_claimed", optional_number(r.lkd_claimed)},
            {"seed", r.seed},
            {"expects_unbiased", r.expects_unbiased},
            {"unbiased_ok", r.unbiased_ok},
            {"bound_ok", r.bound_ok}};
}

Json to_json(const estimators::ComparisonReport& r) {
    Json simulated = Json::array();
    for (const auto& s : r.simulated) {
        simulated.push_back(to_json(s));
    }
    return {{"operating_point", to_json(r.operating_point)},
            {"T_samp", r.sample_time},
            {"bound", to_json(r.bound)},
            {"competitors", to_json(r.competitors)},
            {"lkd_gap_factor", r.lkd_gap_factor},
            {"lkd_below_bound", r.lkd_below_bound},
            {"simulation", to_json(r.simulation)},
            {"simulated", simulated},
            {"simulated_at_or_above_bound", r.simulated_at_or_above_bound}};
}

Table table_from_rows(const Json& rows) {
    std::set<std::string> keys;
    for (const auto& row : rows) {
        for (const auto& item : row.items()) {
            keys.insert(item.key());
        }
    }
    Table table;
    table.header.assign(keys.begin(), keys.end());
    for (const auto& row : rows) {
        std::vector<Cell> cells;
        for (const auto& key : table.header) {
            if (!row.contains(key) || row.at(key).is_null()) {
                cells.emplace_back(std::monostate{});
                continue;
            }
            const Json& v = row.at(key);
            if (v.is_boolean()) {
                cells.emplace_back(v.get<bool>());
            } else if (v.is_number_unsigned()) {
                cells.emplace_back(v.get<std::uint64_t>());
            } else if (v.is_number_integer()) {
                cells.emplace_back(v.get<std::int64_t>());
            } else if (v.is_number_float()) {
                cells.emplace_back(v.get<double>());
            } else if (v.is_string()) {
                cells.emplace_back(v.get<std::string>());
            } else {
                throw InvariantViolation("CSV rows must be flat; key '" + key + "' is nested");
            }
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

std::string format_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(std::uint64_t u) const { return std::to_string(u); }
        std::string operator()(double d) const {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.16e", d);
            return buf;
        }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\r\n") == std::string::npos) {
                return s;
            }
            std::string quoted = "\"";
            for (char c : s) {
                quoted += c;
                if (c == '"') {
                    quoted += '"';
                }
            }
            return quoted + "\"";
        }
    };
    return std::visit(Visitor{}, cell);
}

std::string format_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += (i ? "," : "") + format_cell(table.header[i]);
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + format_cell(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

std::string format_json(const Json& json) { return json.dump(2) + "\n"; }

Json read_json_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read report " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("malformed report " + path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        throw ConfigError("cannot write " + path.string());
    }
}

}  // namespace qcrb::cli
