#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcrb/cli/commands.hpp"
#include "qcrb/parallel.hpp"

int main(int argc, char** argv) {
    using namespace qcrb::cli;

    CLI::App app{"Quantum Cramer-Rao bound toolkit for thermal-source occupation estimation"};
    std::string command_name;
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    unsigned workers = qcrb::default_workers();

    app.add_option("command", command_name, "bound | qfi-check | appendix-check | simulate | compare | plot")
        ->required()
        ->check(CLI::IsMember({"bound", "qfi-check", "appendix-check", "simulate", "compare", "plot"}));
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", output_dir, "output directory")->required();
    app.add_option("--seed", seed, "master seed, overrides the config");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--workers", workers, "worker threads; never changes output")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::kConfig;
    }

    RunManifest manifest;
    manifest.command = *parse_command(command_name);
    manifest.config_path = config_path;
    manifest.output_dir = output_dir;
    manifest.seed = seed;
    manifest.format = format == "csv" ? Format::Csv : Format::Json;
    manifest.workers = workers;
    return run_command(manifest, std::cerr);
}
