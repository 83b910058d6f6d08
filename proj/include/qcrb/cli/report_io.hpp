#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qcrb/appendix.hpp"
#include "qcrb/estimators.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/physics.hpp"

namespace qcrb::cli {

using Json = nlohmann::json;

Json to_json(const physics::SourceSpec& spec);
Json to_json(const fisher::BoundReport& bound);
Json to_json(const fisher::CompetitorSensitivities& competitors);
Json to_json(const fisher::SweepPoint& point);
Json to_json(const fisher::QfiCheck& row);
Json to_json(const modal::AppendixRow& row);
Json to_json(const modal::AppendixCheck& check);
Json to_json(const estimators::SensitivityReport& report);
Json to_json(const estimators::ComparisonReport& report);

/// One CSV cell; monostate is written as an empty field.
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Flattens an array of flat JSON objects into a table; the header is the
/// union of keys in sorted order.
Table table_from_rows(const Json& rows);

/// RFC-4180 text with CRLF line ends; doubles as %.16e.
std::string format_csv(const Table& table);
std::string format_cell(const Cell& cell);

/// Pretty-printed with sorted keys and a trailing newline.
std::string format_json(const Json& json);

Json read_json_report(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qcrb::cli
