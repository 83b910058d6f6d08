#include <cmath>
#include <vector>

#include "doctest.h"
#include "qcrb/errors.hpp"
#include "qcrb/estimators.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/stats.hpp"

using namespace qcrb;
using namespace qcrb::estimators;
using physics::SourceSpec;

namespace {

SourceSpec spec_with(double n0, double modes = 100.0) {
    return SourceSpec::from_occupation(n0, 1e9, 1e6, modes * 1e-6);
}

ExperimentConfig config(EstimatorKind kind, double n0, std::int64_t trials, std::uint64_t seed = 2016) {
    ExperimentConfig cfg;
    cfg.spec = spec_with(n0);
    cfg.kind = kind;
    cfg.trials = trials;
    cfg.master_seed = seed;
    return cfg;
}

bool identical(const SensitivityReport& a, const SensitivityReport& b) {
    return a.mean_estimate == b.mean_estimate && a.variance == b.variance && a.rel_sensitivity == b.rel_sensitivity &&
           a.bootstrap_sigma == b.bootstrap_sigma && a.bootstrap_sigma_mean == b.bootstrap_sigma_mean &&
           a.bound == b.bound && a.asymptotic_bias == b.asymptotic_bias;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("names round-trip") {
    for (auto kind : {EstimatorKind::PhotonCounting, EstimatorKind::HeterodyneRadiometer,
                      EstimatorKind::TwoDetectorCorrelation}) {
        CHECK(parse_kind(to_string(kind)) == kind);
    }
    CHECK(parse_counting_path("conditional_poisson") == CountingPath::ConditionalPoisson);
    CHECK_THROWS_AS(parse_kind("radiometer"), ConfigError);
}

TEST_CASE("mode amplitude moments") {
    const double n0 = 3.0;
    const auto spec = spec_with(n0);
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> power;
    std::vector<double> fourth;
    for (std::uint32_t t = 0; t < 1000; ++t) {
        for (const auto& alpha : sample_mode_amplitudes(spec, 77, t)) {
            re.push_back(alpha.real());
            im.push_back(alpha.imag());
            power.push_back(std::norm(alpha));
            fourth.push_back(std::norm(alpha) * std::norm(alpha));
        }
    }
    REQUIRE(power.size() == 100000);
    const double se = std::sqrt(n0 / 2.0 / re.size());
    CHECK(std::abs(stats::mean(re)) < 4.0 * se);
    CHECK(std::abs(stats::mean(im)) < 4.0 * se);
    const auto p = stats::bootstrap_mean(power, 1);
    CHECK(std::abs(p.estimate - n0) < 3.0 * p.sigma);
    const auto f = stats::bootstrap_mean(fourth, 2);
    CHECK(std::abs(f.estimate - 2.0 * n0 * n0) < 3.0 * f.sigma);
}

TEST_CASE("both counting paths give the same distribution") {
    const double n0 = 3.0;
    const int draws = 100000;
    std::vector<double> direct(draws);
    std::vector<double> conditional(draws);
    for (int i = 0; i < draws; ++i) {
        const auto t = static_cast<std::uint32_t>(i);
        direct[i] = static_cast<double>(draw_thermal_count(n0, CountingPath::BoseEinstein, 11, t, 0));
        conditional[i] = static_cast<double>(draw_thermal_count(n0, CountingPath::ConditionalPoisson, 11, t, 0));
    }
    for (int order = 1; order <= 4; ++order) {
        CAPTURE(order);
        const auto moment = [order](std::span<const double> s) {
            return std::vector<double>{stats::raw_moment(s, order)};
        };
        const auto a = stats::bootstrap(direct, moment, 3, 1)[0];
        const auto b = stats::bootstrap(conditional, moment, 3, 2)[0];
        CHECK(std::abs(a.estimate - b.estimate) <= 3.0 * std::hypot(a.sigma, b.sigma));
    }
    CHECK(stats::mean(direct) == doctest::Approx(n0).epsilon(0.02));
}

TEST_CASE("photon counting attains the bound") {
    auto cfg = config(EstimatorKind::PhotonCounting, 10.0, 20000);
    const auto report = run_photon_counting(cfg);
    CHECK(std::abs(report.rel_sensitivity - 0.011) <= 3.0 * report.bootstrap_sigma);
    CHECK(report.unbiased_ok);
    CHECK(report.bound_ok);
    CHECK(report.ratio_to_bound == doctest::Approx(report.rel_sensitivity / report.bound).epsilon(1e-15));
    CHECK(report.bound == fisher::bound_report(cfg.spec).rel_sens_bound);

    cfg.counting_path = CountingPath::ConditionalPoisson;
    const auto conditional = run_photon_counting(cfg);
    CHECK(std::abs(conditional.rel_sensitivity - 0.011) <= 3.0 * conditional.bootstrap_sigma);
    CHECK(conditional.unbiased_ok);
}

TEST_CASE("heterodyne radiometer sensitivity") {
    const auto low = run_heterodyne(config(EstimatorKind::HeterodyneRadiometer, 1.0, 20000));
    CHECK(std::abs(low.rel_sensitivity - 0.04) <= 3.0 * low.bootstrap_sigma);
    CHECK(std::abs(low.ratio_to_bound - 2.0) <= 3.0 * low.ratio_sigma);
    CHECK(low.rel_sensitivity > low.bound);
    CHECK(low.unbiased_ok);

    const auto high = run_heterodyne(config(EstimatorKind::HeterodyneRadiometer, 100.0, 20000));
    CHECK(std::abs(high.rel_sensitivity - 1.01 * 1.01 / 100.0) <= 3.0 * high.bootstrap_sigma);
}

TEST_CASE("radiometer ratio approaches one from above") {
    double previous_expected = 1e9;
    for (double n0 : {1.0, 10.0, 100.0, 1000.0}) {
        const double expected = (n0 + 1.0) / n0;
        CHECK(expected < previous_expected);
        previous_expected = expected;
        const auto r = run_heterodyne(config(EstimatorKind::HeterodyneRadiometer, n0, 10000));
        CHECK(std::abs(r.ratio_to_bound - expected) <= 3.0 * r.ratio_sigma);
    }
}

TEST_CASE("two-detector correlation") {
    auto cfg = config(EstimatorKind::TwoDetectorCorrelation, 10.0, 10000);
    const auto outcomes = simulate_trials(cfg);
    std::vector<double> s;
    for (const auto& o : outcomes) {
        s.push_back(o.raw_summary);
        CHECK(o.estimate >= 0.0);
    }
    // E[n1 n2] = E|alpha|^4 / 4 = n0^2 / 2.
    const auto product = stats::bootstrap_mean(s, 4);
    CHECK(std::abs(product.estimate - 50.0) <= 3.0 * product.sigma);

    const auto report = summarize(cfg, outcomes);
    CHECK(report.bound_ok);
    CHECK(report.asymptotic_bias.has_value());
    CHECK(*report.asymptotic_bias < 0.0);
    CHECK(report.label.find("representative") != std::string::npos);
    CHECK_FALSE(report.expects_unbiased);

    auto dark = config(EstimatorKind::TwoDetectorCorrelation, physics::kMinOccupation, 1000);
    const auto nearly_dark = run_two_detector(dark);
    CHECK(nearly_dark.mean_estimate < 1e-3);
}

TEST_CASE("bootstrap sigma halves when trials quadruple") {
    const auto small = run_photon_counting(config(EstimatorKind::PhotonCounting, 2.0, 5000, 1));
    const auto large = run_photon_counting(config(EstimatorKind::PhotonCounting, 2.0, 20000, 1));
    CHECK(small.bootstrap_sigma / large.bootstrap_sigma == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("reports are deterministic and independent of worker count") {
    for (auto kind : {EstimatorKind::PhotonCounting, EstimatorKind::HeterodyneRadiometer,
                      EstimatorKind::TwoDetectorCorrelation}) {
        auto cfg = config(kind, 4.0, 3000, 5);
        const auto first = run_experiment(cfg);
        const auto again = run_experiment(cfg);
        cfg.workers = 3;
        const auto threaded = run_experiment(cfg);
        CHECK(identical(first, again));
        CHECK(identical(first, threaded));
        cfg.master_seed = 6;
        CHECK_FALSE(identical(first, run_experiment(cfg)));
    }
}

TEST_CASE("configuration invariants") {
    auto cfg = config(EstimatorKind::PhotonCounting, 1.0, 999);
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    cfg.trials = 1000;
    CHECK_NOTHROW(run_experiment(cfg));
    cfg.kind = EstimatorKind::HeterodyneRadiometer;
    CHECK_THROWS_AS(run_photon_counting(cfg), ConfigError);
    cfg.spec = SourceSpec::from_occupation(1.0, 1e9, 1e6, 64.4e-6);
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("comparison at the refutation operating point") {
    ComparisonConfig cfg;
    cfg.operating_point = SourceSpec::from_occupation(100.0, 1e9, 1e6, 1e-2);
    cfg.sample_time = 1e-11;
    cfg.simulation = spec_with(100.0);
    cfg.trials = 2000;
    cfg.master_seed = 3;
    const auto report = run_comparison(cfg);
    CHECK(*report.competitors.lkd_claimed == doctest::Approx(1.005e-6).epsilon(1e-12));
    CHECK(report.lkd_below_bound);
    CHECK(report.lkd_gap_factor > 50.0);
    CHECK(report.simulated.size() == 3);
    CHECK(report.simulated_at_or_above_bound);
}

}  // TEST_SUITE
