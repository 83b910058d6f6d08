#include "qcrb/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "qcrb/errors.hpp"

namespace qcrb::cli {

ConfigObject::ConfigObject(const Json& json, std::string where) : json_(json), where_(std::move(where)) {
    if (!json_.is_object()) {
        throw ConfigError(where_ + " must be a JSON object");
    }
}

bool ConfigObject::has(const std::string& key) const { return json_.contains(key) && !json_.at(key).is_null(); }

const Json& ConfigObject::at(const std::string& key) {
    used_.insert(key);
    if (!json_.contains(key)) {
        throw ConfigError("missing required key " + path(key));
    }
    return json_.at(key);
}

double ConfigObject::number(const std::string& key) {
    const Json& value = at(key);
    if (!value.is_number()) {
        throw ConfigError(path(key) + " must be a number");
    }
    const double out = value.get<double>();
    if (!std::isfinite(out)) {
        throw ConfigError(path(key) + " must be finite");
    }
    return out;
}

std::optional<double> ConfigObject::optional_number(const std::string& key) {
    used_.insert(key);
    return has(key) ? std::optional<double>(number(key)) : std::nullopt;
}

std::int64_t ConfigObject::integer(const std::string& key) {
    const Json& value = at(key);
    if (value.is_number_integer()) {
        return value.get<std::int64_t>();
    }
    if (value.is_number_float()) {
        const double x = value.get<double>();
        if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15) {
            return static_cast<std::int64_t>(x);
        }
    }
    throw ConfigError(path(key) + " must be an integer");
}

std::optional<std::int64_t> ConfigObject::optional_integer(const std::string& key) {
    used_.insert(key);
    return has(key) ? std::optional<std::int64_t>(integer(key)) : std::nullopt;
}

std::optional<std::uint64_t> ConfigObject::optional_unsigned(const std::string& key) {
    used_.insert(key);
    if (!has(key)) {
        return std::nullopt;
    }
    const Json& value = at(key);
    if (value.is_number_unsigned()) {
        return value.get<std::uint64_t>();
    }
    throw ConfigError(path(key) + " must be a non-negative integer");
}

std::string ConfigObject::string(const std::string& key) {
    const Json& value = at(key);
    if (!value.is_string()) {
        throw ConfigError(path(key) + " must be a string");
    }
    return value.get<std::string>();
}

std::optional<std::string> ConfigObject::optional_string(const std::string& key) {
    used_.insert(key);
    return has(key) ? std::optional<std::string>(string(key)) : std::nullopt;
}

std::vector<double> ConfigObject::numbers(const std::string& key) {
    const Json& value = at(key);
    if (!value.is_array()) {
        throw ConfigError(path(key) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : value) {
        if (!item.is_number() || !std::isfinite(item.get<double>())) {
            throw ConfigError(path(key) + " must contain only finite numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

std::vector<std::int64_t> ConfigObject::integers(const std::string& key) {
    const Json& value = at(key);
    if (!value.is_array()) {
        throw ConfigError(path(key) + " must be an array of integers");
    }
    std::vector<std::int64_t> out;
    for (const auto& item : value) {
        if (!item.is_number_integer()) {
            throw ConfigError(path(key) + " must contain only integers");
        }
        out.push_back(item.get<std::int64_t>());
    }
    return out;
}

std::vector<std::string> ConfigObject::strings(const std::string& key) {
    const Json& value = at(key);
    if (!value.is_array()) {
        throw ConfigError(path(key) + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) {
            throw ConfigError(path(key) + " must contain only strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

ConfigObject ConfigObject::object(const std::string& key) { return ConfigObject(at(key), path(key)); }

const Json& ConfigObject::raw(const std::string& key) { return at(key); }

void ConfigObject::finish() const {
    for (const auto& item : json_.items()) {
        if (!used_.count(item.key())) {
            throw ConfigError("unknown key " + path(item.key()));
        }
    }
}

Json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    Json json;
    try {
        json = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
    if (!json.is_object()) {
        throw ConfigError("config " + path.string() + " must be a JSON object");
    }
    return json;
}

physics::SourceSpec parse_source_spec(ConfigObject& obj) {
    const auto source_temperature = obj.optional_number("T_s");
    const auto n0 = obj.optional_number("n0");
    const double nu0 = obj.number("nu0");
    const double delta_nu = obj.number("delta_nu");
    const double observation_time = obj.number("T_obs");
    if (source_temperature.has_value() == n0.has_value()) {
        throw ConfigError("give exactly one of T_s and n0");
    }
    return source_temperature
               ? physics::SourceSpec::from_temperature(*source_temperature, nu0, delta_nu, observation_time)
               : physics::SourceSpec::from_occupation(*n0, nu0, delta_nu, observation_time);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config) {
    return flag.value_or(config.value_or(kDefaultSeed));
}

namespace {

GridRequest parse_grid(ConfigObject obj) {
    GridRequest grid;
    const std::string axis = obj.string("axis");
    if (axis == "n0") {
        grid.axis = fisher::SweepAxis::Occupation;
    } else if (axis == "T_obs") {
        grid.axis = fisher::SweepAxis::ObservationTime;
    } else {
        throw ConfigError("grid.axis must be \"n0\" or \"T_obs\"");
    }
    grid.min = obj.number("min");
    grid.max = obj.number("max");
    const auto points = obj.integer("points");
    if (points < 2 || points > 100000) {
        throw ConfigError("grid.points must be in [2, 100000]");
    }
    grid.points = static_cast<int>(points);
    obj.finish();
    return grid;
}

std::int64_t positive_count(ConfigObject& obj, const std::string& key, std::int64_t fallback) {
    const auto value = obj.optional_integer(key).value_or(fallback);
    if (value < 1) {
        throw ConfigError(key + " must be >= 1");
    }
    return value;
}

int small_int(std::int64_t value, const std::string& key) {
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
        throw ConfigError(key + " is out of range");
    }
    return static_cast<int>(value);
}

}  // namespace

BoundConfig parse_bound_config(const Json& json) {
    ConfigObject obj(json, "config");
    BoundConfig cfg;
    cfg.spec = parse_source_spec(obj);
    cfg.sample_time = obj.optional_number("T_samp");
    if (obj.has("grid")) {
        cfg.grid = parse_grid(obj.object("grid"));
    }
    obj.finish();
    return cfg;
}

QfiCheckConfig parse_qfi_check_config(const Json& json) {
    ConfigObject obj(json, "config");
    QfiCheckConfig cfg;
    if (obj.has("n0_list")) {
        cfg.n0_list = obj.numbers("n0_list");
    }
    if (cfg.n0_list.empty()) {
        throw ConfigError("n0_list must not be empty");
    }
    if (obj.has("cutoff")) {
        const Json& cutoff = obj.raw("cutoff");
        if (cutoff.is_string() && cutoff.get<std::string>() == "auto") {
            cfg.cutoff.reset();
        } else {
            const auto fixed = obj.integer("cutoff");
            if (fixed < 2) {
                throw ConfigError("cutoff must be \"auto\" or an integer >= 2");
            }
            cfg.cutoff = small_int(fixed, "cutoff");
        }
    }
    obj.finish();
    return cfg;
}

modal::AppendixCheckConfig parse_appendix_config(const Json& json, std::optional<std::uint64_t> seed_flag,
                                                 unsigned workers) {
    ConfigObject obj(json, "config");
    modal::AppendixCheckConfig cfg;
    cfg.n0 = obj.optional_number("n0").value_or(cfg.n0);
    if (obj.has("delta_nu_T_list")) {
        cfg.delta_nu_t = obj.integers("delta_nu_T_list");
    }
    cfg.observation_time = obj.optional_number("T_obs").value_or(cfg.observation_time);
    cfg.nu0 = obj.optional_number("nu0").value_or(cfg.nu0);
    cfg.realizations = positive_count(obj, "realizations", cfg.realizations);
    if (obj.has("quadrature")) {
        auto q = obj.object("quadrature");
        cfg.quadrature.c = q.optional_number("c").value_or(cfg.quadrature.c);
        cfg.quadrature.panels_zeta =
            small_int(q.optional_integer("panels_zeta").value_or(cfg.quadrature.panels_zeta), "panels_zeta");
        cfg.quadrature.panels_tau =
            small_int(q.optional_integer("panels_tau").value_or(cfg.quadrature.panels_tau), "panels_tau");
        cfg.quadrature.max_doublings =
            small_int(q.optional_integer("max_doublings").value_or(cfg.quadrature.max_doublings), "max_doublings");
        cfg.quadrature.rel_tol = q.optional_number("rel_tol").value_or(cfg.quadrature.rel_tol);
        q.finish();
    }
    if (obj.has("synthesis")) {
        auto s = obj.object("synthesis");
        cfg.synthesis.samples_per_coherence = small_int(
            s.optional_integer("samples_per_coherence").value_or(cfg.synthesis.samples_per_coherence),
            "samples_per_coherence");
        cfg.synthesis.record_factor =
            small_int(s.optional_integer("record_factor").value_or(cfg.synthesis.record_factor), "record_factor");
        s.finish();
    }
    cfg.seed = resolve_seed(seed_flag, obj.optional_unsigned("master_seed"));
    cfg.workers = workers;
    obj.finish();
    if (cfg.delta_nu_t.empty()) {
        throw ConfigError("delta_nu_T_list must not be empty");
    }
    cfg.quadrature.validate();
    return cfg;
}

estimators::ExperimentConfig parse_experiment_config(const Json& json, std::optional<std::uint64_t> seed_flag,
                                                     unsigned workers) {
    ConfigObject obj(json, "config");
    estimators::ExperimentConfig cfg;
    cfg.spec = parse_source_spec(obj);
    cfg.kind = estimators::parse_kind(obj.string("kind"));
    cfg.trials = obj.optional_integer("trials").value_or(estimators::kDefaultTrials);
    cfg.master_seed = resolve_seed(seed_flag, obj.optional_unsigned("master_seed"));
    cfg.sample_time = obj.optional_number("T_samp");
    if (const auto path = obj.optional_string("counting_path")) {
        cfg.counting_path = estimators::parse_counting_path(*path);
    }
    cfg.workers = workers;
    obj.finish();
    cfg.validate();
    return cfg;
}

estimators::ComparisonConfig parse_comparison_config(const Json& json, std::optional<std::uint64_t> seed_flag,
                                                     unsigned workers) {
    ConfigObject obj(json, "config");
    estimators::ComparisonConfig cfg;
    cfg.operating_point = parse_source_spec(obj);
    cfg.sample_time = obj.number("T_samp");
    cfg.trials = obj.optional_integer("trials").value_or(estimators::kDefaultTrials);
    cfg.master_seed = resolve_seed(seed_flag, obj.optional_unsigned("master_seed"));
    if (const auto path = obj.optional_string("counting_path")) {
        cfg.counting_path = estimators::parse_counting_path(*path);
    }
    auto sim = obj.object("simulation");
    const double delta_nu = sim.optional_number("delta_nu").value_or(cfg.operating_point.delta_nu);
    const double observation_time = sim.number("T_obs");
    sim.finish();
    cfg.simulation = physics::SourceSpec::from_occupation(cfg.operating_point.n0, cfg.operating_point.nu0,
                                                          delta_nu, observation_time);
    cfg.workers = workers;
    obj.finish();
    return cfg;
}

PlotConfig parse_plot_config(const Json& json, const std::filesystem::path& base_dir) {
    ConfigObject obj(json, "config");
    PlotConfig cfg;
    if (obj.has("reports")) {
        for (const auto& name : obj.strings("reports")) {
            const std::filesystem::path path(name);
            cfg.reports.push_back(path.is_absolute() ? path : base_dir / path);
        }
    }
    if (obj.has("grid")) {
        cfg.grid = parse_grid(obj.object("grid"));
        if (cfg.grid.axis != fisher::SweepAxis::Occupation) {
            throw ConfigError("plot grid axis must be \"n0\"");
        }
    }
    const double nu0 = obj.number("nu0");
    const double delta_nu = obj.number("delta_nu");
    const double observation_time = obj.number("T_obs");
    cfg.sample_time = obj.optional_number("T_samp");
    obj.finish();
    cfg.curve_spec = physics::SourceSpec::from_occupation(cfg.grid.min, nu0, delta_nu, observation_time);
    return cfg;
}

}  // namespace qcrb::cli
