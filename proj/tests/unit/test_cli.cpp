#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "qcrb/cli/commands.hpp"
#include "qcrb/cli/config.hpp"
#include "qcrb/cli/report_io.hpp"
#include "qcrb/errors.hpp"

using namespace qcrb;
using namespace qcrb::cli;
namespace fs = std::filesystem;

namespace {

class Scratch {
public:
    explicit Scratch(const std::string& name)
        : root_(fs::temp_directory_path() / ("qcrb_cli_" + name + "_" + std::to_string(::getpid()))) {
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    ~Scratch() { fs::remove_all(root_); }

    fs::path write(const std::string& file, const std::string& text) const {
        std::ofstream(root_ / file) << text;
        return root_ / file;
    }
    fs::path path(const std::string& file) const { return root_ / file; }

private:
    fs::path root_;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(Command command, const fs::path& config, const fs::path& out, Format format = Format::Json,
        std::optional<std::uint64_t> seed = std::nullopt, unsigned workers = 1) {
    RunManifest manifest;
    manifest.command = command;
    manifest.config_path = config;
    manifest.output_dir = out;
    manifest.format = format;
    manifest.seed = seed;
    manifest.workers = workers;
    std::ostringstream log;
    const int code = run_command(manifest, log);
    MESSAGE(log.str());
    return code;
}

Json report(const fs::path& path) { return Json::parse(slurp(path)).at("report"); }

const std::string kSpec = R"("nu0": 1e9, "delta_nu": 1e6, "T_obs": 1e-4)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("command names") {
    CHECK(parse_command("qfi-check") == Command::QfiCheck);
    CHECK(to_string(Command::AppendixCheck) == "appendix-check");
    CHECK_FALSE(parse_command("bounds").has_value());
}

TEST_CASE("bound report matches the golden file") {
    Scratch s("golden");
    const auto cfg = s.write("b.json", R"({"n0": 1, )" + kSpec + "}");
    REQUIRE(run(Command::Bound, cfg, s.path("out")) == exit_code::kSuccess);
    const std::string text = slurp(s.path("out/bound.json"));
    CHECK(text == slurp(fs::path(QCRB_TEST_DATA_DIR) / "golden" / "bound_n0_1_M100.json"));
    CHECK(text.find("\"rel_sens_bound\": 0.02") != std::string::npos);
}

TEST_CASE("temperature and occupation configs give the same bound") {
    Scratch s("paths");
    const auto by_n = s.write("n.json", R"({"n0": 7.5, )" + kSpec + "}");
    REQUIRE(run(Command::Bound, by_n, s.path("n")) == exit_code::kSuccess);
    const double ts = report(s.path("n/bound.json")).at("spec").at("T_s").get<double>();
    std::ostringstream t_cfg;
    t_cfg.precision(17);
    t_cfg << R"({"T_s": )" << ts << ", " << kSpec << "}";
    const auto by_t = s.write("t.json", t_cfg.str());
    REQUIRE(run(Command::Bound, by_t, s.path("t")) == exit_code::kSuccess);
    const auto a = report(s.path("n/bound.json")).at("bound");
    const auto b = report(s.path("t/bound.json")).at("bound");
    for (const auto& key : {"var_bound", "rel_sens_bound", "temp_rel_sens_bound", "qfi_total"}) {
        CHECK(a.at(key).get<double>() == doctest::Approx(b.at(key).get<double>()).epsilon(1e-12));
    }
}

TEST_CASE("bound grid as CSV") {
    Scratch s("grid");
    const auto cfg = s.write("g.json", R"({"n0": 1, "T_samp": 1e-9, "grid": {"axis": "n0", "min": 0.1, "max": 1000, "points": 50}, )" + kSpec + "}");
    REQUIRE(run(Command::Bound, cfg, s.path("out"), Format::Csv) == exit_code::kSuccess);
    std::istringstream csv(slurp(s.path("out/bound.csv")));
    std::string line;
    std::getline(csv, line);
    CHECK(line.back() == '\r');
    std::vector<std::string> header;
    {
        std::istringstream h(line.substr(0, line.size() - 1));
        for (std::string cell; std::getline(h, cell, ',');) {
            header.push_back(cell);
        }
    }
    const auto column = std::find(header.begin(), header.end(), "rel_sens_bound") - header.begin();
    REQUIRE(column < static_cast<long>(header.size()));
    int rows = 0;
    double previous = 1e300;
    while (std::getline(csv, line)) {
        std::istringstream r(line);
        std::string cell;
        for (long i = 0; i <= column; ++i) {
            std::getline(r, cell, ',');
        }
        CHECK(cell.find('e') != std::string::npos);
        const double value = std::stod(cell);
        CHECK(value < previous);
        previous = value;
        ++rows;
    }
    CHECK(rows == 50);
}

TEST_CASE("qfi-check reports") {
    Scratch s("qfi");
    REQUIRE(run(Command::QfiCheck, s.write("q.json", "{}"), s.path("out")) == exit_code::kSuccess);
    const auto body = report(s.path("out/qfi-check.json"));
    CHECK(body.at("all_passed").get<bool>());
    CHECK(body.at("rows").size() == 5);
    CHECK(body.at("rows")[1].at("qfi_analytic").get<double>() == 0.5);

    REQUIRE(run(Command::QfiCheck, s.write("tiny.json", R"({"n0_list": [5], "cutoff": 4})"), s.path("tiny")) ==
            exit_code::kSuccess);
    const auto row = report(s.path("tiny/qfi-check.json")).at("rows")[0];
    CHECK_FALSE(row.at("passed").get<bool>());
    CHECK(row.at("tail_mass").get<double>() == doctest::Approx(0.48225308641975));
}

TEST_CASE("simulate reports and their determinism") {
    Scratch s("simulate");
    const auto counting = s.write("c.json", R"({"n0": 10, "kind": "photon_counting", "trials": 20000, )" + kSpec + "}");
    REQUIRE(run(Command::Simulate, counting, s.path("a"), Format::Json, std::nullopt, 1) == exit_code::kSuccess);
    REQUIRE(run(Command::Simulate, counting, s.path("b"), Format::Json, std::nullopt, 3) == exit_code::kSuccess);
    CHECK(slurp(s.path("a/simulate.json")) == slurp(s.path("b/simulate.json")));
    const auto body = report(s.path("a/simulate.json"));
    CHECK(body.at("seed").get<std::uint64_t>() == kDefaultSeed);
    CHECK(std::abs(body.at("ratio_to_bound").get<double>() - 1.0) <= 3.0 * body.at("ratio_sigma").get<double>());

    REQUIRE(run(Command::Simulate, counting, s.path("seeded"), Format::Json, 99) == exit_code::kSuccess);
    CHECK(report(s.path("seeded/simulate.json")).at("seed").get<std::uint64_t>() == 99);
    CHECK(slurp(s.path("seeded/simulate.json")) != slurp(s.path("a/simulate.json")));

    const auto het = s.write("h.json", R"({"n0": 1, "kind": "heterodyne_radiometer", "trials": 20000, "master_seed": 4, )" + kSpec + "}");
    REQUIRE(run(Command::Simulate, het, s.path("h")) == exit_code::kSuccess);
    const auto h = report(s.path("h/simulate.json"));
    CHECK(h.at("seed").get<std::uint64_t>() == 4);
    CHECK(std::abs(h.at("ratio_to_bound").get<double>() - 2.0) <= 3.0 * h.at("ratio_sigma").get<double>());
}

TEST_CASE("JSON reports round-trip byte for byte") {
    Scratch s("roundtrip");
    const auto cfg = s.write("c.json", R"({"n0": 3, "kind": "two_detector_correlation", "trials": 1000, )" + kSpec + "}");
    REQUIRE(run(Command::Simulate, cfg, s.path("out")) == exit_code::kSuccess);
    const std::string text = slurp(s.path("out/simulate.json"));
    CHECK(format_json(Json::parse(text)) == text);
}

TEST_CASE("compare and plot") {
    Scratch s("plot");
    const auto cmp = s.write("cmp.json", R"({"n0": 100, "nu0": 1e9, "delta_nu": 1e6, "T_obs": 1e-2, "T_samp": 1e-11, "trials": 1000, "simulation": {"T_obs": 1e-4}})");
    REQUIRE(run(Command::Compare, cmp, s.path("cmp")) == exit_code::kSuccess);
    const auto body = report(s.path("cmp/compare.json"));
    CHECK(body.at("lkd_below_bound").get<bool>());
    CHECK(body.at("simulated_at_or_above_bound").get<bool>());

    fs::create_directories(s.path("plot"));
    const auto plot_cfg = s.write("p.json", R"({"reports": ["cmp/compare.json"], "T_samp": 1e-10, )" + kSpec + "}");
    REQUIRE(run(Command::Plot, plot_cfg, s.path("plot")) == exit_code::kSuccess);
    const std::string svg = slurp(s.path("plot/plot.svg"));
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) {
            ++n;
        }
        return n;
    };
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count("class=\"curve\"") == 3);
    CHECK(count("class=\"point\"") == 3);
    CHECK(count("class=\"legend\"") == 1);
    for (const auto& p : report(s.path("plot/plot.json")).at("points")) {
        CHECK(p.at("bound_ok").get<bool>());
        CHECK(p.at("rel_sensitivity").get<double>() >= p.at("bound").get<double>() - 3.0 * p.at("bootstrap_sigma").get<double>());
    }

    const auto empty = s.write("e.json", R"({"reports": [], )" + kSpec + "}");
    CHECK(run(Command::Plot, empty, s.path("empty")) == exit_code::kSuccess);
    CHECK(report(s.path("empty/plot.json")).at("points").empty());

    const auto missing = s.write("m.json", R"({"reports": ["nowhere.json"], )" + kSpec + "}");
    CHECK(run(Command::Plot, missing, s.path("missing")) == exit_code::kConfig);
}

TEST_CASE("appendix-check exit codes") {
    Scratch s("appendix");
    const auto small = s.write("a.json", R"({"delta_nu_T_list": [16, 32], "realizations": 1000})");
    // The band-edge deviation exceeds 5 n0 / (delta_nu T); the check reports it.
    CHECK(run(Command::AppendixCheck, small, s.path("a")) == exit_code::kInvariant);
    const auto body = report(s.path("a/appendix-check.json"));
    CHECK(body.at("diagonal_decreasing").get<bool>());
    CHECK_FALSE(body.at("all_within_bound").get<bool>());

    const auto stiff = s.write("n.json", R"({"delta_nu_T_list": [16], "realizations": 10, "quadrature": {"max_doublings": 1, "rel_tol": 1e-17}})");
    CHECK(run(Command::AppendixCheck, stiff, s.path("n")) == exit_code::kNumerical);
}

TEST_CASE("configuration errors exit with code 2") {
    Scratch s("errors");
    CHECK(run(Command::Bound, s.write("u.json", R"({"n0": 1, "bogus": 2, )" + kSpec + "}"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Bound, s.write("both.json", R"({"n0": 1, "T_s": 2, )" + kSpec + "}"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Bound, s.write("none.json", R"({"nu0": 1e9})"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Bound, s.write("bad.json", "{ not json"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Bound, s.path("absent.json"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Simulate, s.write("few.json", R"({"n0": 1, "kind": "photon_counting", "trials": 999, )" + kSpec + "}"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Simulate, s.write("kind.json", R"({"n0": 1, "kind": "bolometer", )" + kSpec + "}"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::Bound, s.write("neg.json", R"({"n0": -1, )" + kSpec + "}"), s.path("o")) == exit_code::kConfig);
    CHECK(run(Command::QfiCheck, s.write("nested.json", R"({"quadrature": {}})"), s.path("o")) == exit_code::kConfig);
}

TEST_CASE("csv cells") {
    CHECK(format_cell(Cell{0.02}) == "2.0000000000000000e-02");
    CHECK(format_cell(Cell{std::int64_t{-3}}) == "-3");
    CHECK(format_cell(Cell{true}) == "true");
    CHECK(format_cell(Cell{std::string("a,\"b\"")}) == "\"a,\"\"b\"\"\"");
    CHECK(format_cell(Cell{}) == "");
}

}  // TEST_SUITE
