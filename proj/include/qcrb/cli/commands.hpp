#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace qcrb::cli {

enum class Command { Bound, QfiCheck, AppendixCheck, Simulate, Compare, Plot };
enum class Format { Json, Csv };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kInternal = 1;
inline constexpr int kConfig = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kInvariant = 4;
}  // namespace exit_code

struct RunManifest {
    Command command = Command::Bound;
    std::filesystem::path config_path;
    std::filesystem::path output_dir;
    std::optional<std::uint64_t> seed;  // overrides master_seed in the config
    Format format = Format::Json;
    unsigned workers = 1;
};

/// Runs one command, writing reports under manifest.output_dir. Returns the
/// process exit code; diagnostics go to `log`.
int run_command(const RunManifest& manifest, std::ostream& log);

}  // namespace qcrb::cli
