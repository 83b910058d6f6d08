#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcrb/appendix.hpp"
#include "qcrb/estimators.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/physics.hpp"

namespace qcrb::cli {

using Json = nlohmann::json;

/// Used when neither --seed nor master_seed is given.
inline constexpr std::uint64_t kDefaultSeed = 20161001;

/// Read-only view of a JSON config object that records which keys were
/// consumed; finish() rejects anything left over.
class ConfigObject {
public:
    ConfigObject(const Json& json, std::string where);

    bool has(const std::string& key) const;

    double number(const std::string& key);
    std::optional<double> optional_number(const std::string& key);
    std::int64_t integer(const std::string& key);
    std::optional<std::int64_t> optional_integer(const std::string& key);
    std::optional<std::uint64_t> optional_unsigned(const std::string& key);
    std::string string(const std::string& key);
    std::optional<std::string> optional_string(const std::string& key);
    std::vector<double> numbers(const std::string& key);
    std::vector<std::int64_t> integers(const std::string& key);
    std::vector<std::string> strings(const std::string& key);
    ConfigObject object(const std::string& key);
    const Json& raw(const std::string& key);

    void finish() const;

private:
    const Json& at(const std::string& key);
    std::string path(const std::string& key) const { return where_ + "." + key; }

    const Json& json_;
    std::string where_;
    std::set<std::string> used_;
};

/// Parses one JSON document; ConfigError if unreadable or not an object.
Json load_config(const std::filesystem::path& path);

/// SourceSpec from T_s or n0 (exactly one), nu0, delta_nu, T_obs.
physics::SourceSpec parse_source_spec(ConfigObject& obj);

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config);

struct GridRequest {
    fisher::SweepAxis axis = fisher::SweepAxis::Occupation;
    double min = 0.0;
    double max = 0.0;
    int points = 0;
};

struct BoundConfig {
    physics::SourceSpec spec;
    std::optional<double> sample_time;
    std::optional<GridRequest> grid;
};

struct QfiCheckConfig {
    std::vector<double> n0_list = {0.5, 1.0, 5.0, 20.0, 100.0};
    std::optional<int> cutoff;  // empty means automatic escalation
};

struct PlotConfig {
    std::vector<std::filesystem::path> reports;
    physics::SourceSpec curve_spec;  // n0 is replaced along the grid
    std::optional<double> sample_time;
    GridRequest grid{fisher::SweepAxis::Occupation, 0.1, 1000.0, 200};
};

BoundConfig parse_bound_config(const Json& json);
QfiCheckConfig parse_qfi_check_config(const Json& json);
modal::AppendixCheckConfig parse_appendix_config(const Json& json, std::optional<std::uint64_t> seed_flag,
                                                 unsigned workers);
estimators::ExperimentConfig parse_experiment_config(const Json& json, std::optional<std::uint64_t> seed_flag,
                                                     unsigned workers);
estimators::ComparisonConfig parse_comparison_config(const Json& json, std::optional<std::uint64_t> seed_flag,
                                                     unsigned workers);
/// Report paths are resolved against `base_dir`.
PlotConfig parse_plot_config(const Json& json, const std::filesystem::path& base_dir);

}  // namespace qcrb::cli
