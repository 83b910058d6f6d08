#include "qcrb/estimators.hpp"

#include <cmath>
#include <random>
#include <span>

#include "qcrb/errors.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/parallel.hpp"
#include "qcrb/stats.hpp"

namespace qcrb::estimators {

namespace {

using rng::Purpose;
using rng::Stream;

std::int64_t poisson(double mean, Stream& stream) {
    if (!(mean > 0.0)) {
        return 0;
    }
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(stream);
}

std::int64_t bose_einstein(double n0, Stream& stream) {
    // Inverse CDF of P(k) = (1/(n0+1)) (n0/(n0+1))^k.
    return static_cast<std::int64_t>(std::floor(std::log(stream.uniform_open_low()) / -std::log1p(1.0 / n0)));
}

std::complex<double> mode_amplitude(double n0, std::uint64_t seed, std::uint32_t trial, std::uint32_t mode) {
    Stream stream(seed, Purpose::ModeAmplitude, trial, mode);
    return stream.complex_normal(n0);
}

TrialOutcome photon_counting_trial(const ExperimentConfig& cfg, std::uint32_t trial) {
    const auto modes = static_cast<std::uint32_t>(cfg.spec.modes);
    std::int64_t total = 0;
    for (std::uint32_t m = 0; m < modes; ++m) {
        total += draw_thermal_count(cfg.spec.n0, cfg.counting_path, cfg.master_seed, trial, m);
    }
    const auto sum = static_cast<double>(total);
    return {sum / modes, sum};
}

TrialOutcome heterodyne_trial(const ExperimentConfig& cfg, std::uint32_t trial) {
    const auto modes = static_cast<std::uint32_t>(cfg.spec.modes);
    double power = 0.0;
    for (std::uint32_t m = 0; m < modes; ++m) {
        // Signal plus one unit of vacuum noise from the joint quadrature measurement.
        Stream stream(cfg.master_seed, Purpose::Heterodyne, trial, m);
        power += std::norm(stream.complex_normal(cfg.spec.n0 + 1.0));
    }
    return {power / modes - 1.0, power};
}

TrialOutcome two_detector_trial(const ExperimentConfig& cfg, std::uint32_t trial) {
    const auto modes = static_cast<std::uint32_t>(cfg.spec.modes);
    double products = 0.0;
    for (std::uint32_t m = 0; m < modes; ++m) {
        const std::complex<double> alpha = mode_amplitude(cfg.spec.n0, cfg.master_seed, trial, m);
        // Balanced divider: each arm sees alpha / sqrt(2).
        const double arm = 0.5 * std::norm(alpha);
        Stream first(cfg.master_seed, Purpose::DetectorOne, trial, m);
        Stream second(cfg.master_seed, Purpose::DetectorTwo, trial, m);
        products += static_cast<double>(poisson(arm, first) * poisson(arm, second));
    }
    const double s = products / modes;
    return {std::sqrt(2.0 * s), s};
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::PhotonCounting: return "photon_counting";
        case EstimatorKind::HeterodyneRadiometer: return "heterodyne_radiometer";
        case EstimatorKind::TwoDetectorCorrelation: return "two_detector_correlation";
    }
    return "unknown";
}

EstimatorKind parse_kind(std::string_view text) {
    for (auto kind : {EstimatorKind::PhotonCounting, EstimatorKind::HeterodyneRadiometer,
                      EstimatorKind::TwoDetectorCorrelation}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw ConfigError("unknown estimator kind '" + std::string(text) + "'");
}

std::string_view to_string(CountingPath path) {
    return path == CountingPath::BoseEinstein ? "bose_einstein" : "conditional_poisson";
}

CountingPath parse_counting_path(std::string_view text) {
    if (text == "bose_einstein") {
        return CountingPath::BoseEinstein;
    }
    if (text == "conditional_poisson") {
        return CountingPath::ConditionalPoisson;
    }
    throw ConfigError("unknown counting path '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
    if (trials < kMinTrials) {
        throw ConfigError("at least " + std::to_string(kMinTrials) + " trials are required");
    }
    if (trials > std::int64_t{0xFFFFFFFF}) {
        throw ConfigError("trial count exceeds the 32-bit substream index");
    }
    if (!(spec.n0 >= physics::kMinOccupation)) {
        throw DomainError("occupation n0 below the supported minimum");
    }
    if (spec.modes < 1 || !spec.modes_exact) {
        throw ConfigError("simulation needs an integral mode count delta_nu*T >= 1");
    }
    if (sample_time && !(*sample_time > 0.0)) {
        throw ConfigError("T_samp must be positive");
    }
}

std::vector<std::complex<double>> sample_mode_amplitudes(const SourceSpec& spec, std::uint64_t seed,
                                                         std::uint32_t trial) {
    std::vector<std::complex<double>> out(static_cast<std::size_t>(spec.modes));
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = mode_amplitude(spec.n0, seed, trial, static_cast<std::uint32_t>(m));
    }
    return out;
}

std::int64_t draw_thermal_count(double n0, CountingPath path, std::uint64_t seed, std::uint32_t trial,
                                std::uint32_t mode) {
    if (path == CountingPath::BoseEinstein) {
        Stream stream(seed, Purpose::BoseEinstein, trial, mode);
        return bose_einstein(n0, stream);
    }
    const double intensity = std::norm(mode_amplitude(n0, seed, trial, mode));
    Stream stream(seed, Purpose::PhotonCount, trial, mode);
    return poisson(intensity, stream);
}

std::vector<TrialOutcome> simulate_trials(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(outcomes.size(), cfg.workers, [&](std::size_t t) {
        const auto trial = static_cast<std::uint32_t>(t);
        switch (cfg.kind) {
            case EstimatorKind::PhotonCounting: outcomes[t] = photon_counting_trial(cfg, trial); break;
            case EstimatorKind::HeterodyneRadiometer: outcomes[t] = heterodyne_trial(cfg, trial); break;
            case EstimatorKind::TwoDetectorCorrelation: outcomes[t] = two_detector_trial(cfg, trial); break;
        }
    });
    return outcomes;
}

SensitivityReport summarize(const ExperimentConfig& cfg, const std::vector<TrialOutcome>& outcomes) {
    const double n0 = cfg.spec.n0;
    std::vector<double> estimates(outcomes.size());
    std::vector<double> summaries(outcomes.size());
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        estimates[t] = outcomes[t].estimate;
        summaries[t] = outcomes[t].raw_summary;
    }

    SensitivityReport report;
    report.kind = cfg.kind;
    report.label = std::string(to_string(cfg.kind));
    if (cfg.kind == EstimatorKind::TwoDetectorCorrelation) {
        report.label += " (representative balanced-divider intensity-correlation estimator)";
    }
    report.trials = static_cast<std::int64_t>(outcomes.size());
    report.modes = cfg.spec.modes;
    report.n0 = n0;
    report.seed = cfg.master_seed;

    const auto boot = stats::bootstrap(
        estimates,
        [n0](std::span<const double> s) {
            const double v = stats::variance(s);
            return std::vector<double>{stats::mean(s), v / (n0 * n0)};
        },
        cfg.master_seed, static_cast<std::uint32_t>(cfg.kind));

    report.mean_estimate = boot[0].estimate;
    report.bias = report.mean_estimate - n0;
    report.rel_sensitivity = boot[1].estimate;
    report.variance = report.rel_sensitivity * n0 * n0;
    report.bootstrap_sigma_mean = boot[0].sigma;
    report.bootstrap_sigma = boot[1].sigma;

    report.bound = fisher::bound_report(cfg.spec).rel_sens_bound;
    report.ratio_to_bound = report.rel_sensitivity / report.bound;
    report.ratio_sigma = report.bootstrap_sigma / report.bound;
    if (cfg.sample_time) {
        report.lkd_claimed = fisher::competitor_sensitivities(cfg.spec, cfg.sample_time).lkd_claimed;
    }

    if (cfg.kind == EstimatorKind::TwoDetectorCorrelation) {
        // E[sqrt(2S)] ~ sqrt(2 E S) - Var(S) / (2 (2 E S)^{3/2})
        const double mean_s = stats::mean(summaries);
        const double var_s = stats::variance(summaries);
        report.asymptotic_bias = mean_s > 0.0 ? -var_s / (2.0 * std::pow(2.0 * mean_s, 1.5)) : 0.0;
    }

    report.expects_unbiased = cfg.kind != EstimatorKind::TwoDetectorCorrelation;
    report.unbiased_ok = !report.expects_unbiased ||
                         std::abs(report.bias) <= kToleranceSigmas * report.bootstrap_sigma_mean;
    report.bound_ok = report.rel_sensitivity >= report.bound - kToleranceSigmas * report.bootstrap_sigma;
    return report;
}

SensitivityReport run_photon_counting(const ExperimentConfig& cfg) {
    if (cfg.kind != EstimatorKind::PhotonCounting) {
        throw ConfigError("run_photon_counting needs kind photon_counting");
    }
    return summarize(cfg, simulate_trials(cfg));
}

SensitivityReport run_heterodyne(const ExperimentConfig& cfg) {
    if (cfg.kind != EstimatorKind::HeterodyneRadiometer) {
        throw ConfigError("run_heterodyne needs kind heterodyne_radiometer");
    }
    return summarize(cfg, simulate_trials(cfg));
}

SensitivityReport run_two_detector(const ExperimentConfig& cfg) {
    if (cfg.kind != EstimatorKind::TwoDetectorCorrelation) {
        throw ConfigError("run_two_detector needs kind two_detector_correlation");
    }
    return summarize(cfg, simulate_trials(cfg));
}

SensitivityReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case EstimatorKind::PhotonCounting: return run_photon_counting(cfg);
        case EstimatorKind::HeterodyneRadiometer: return run_heterodyne(cfg);
        case EstimatorKind::TwoDetectorCorrelation: return run_two_detector(cfg);
    }
    throw ConfigError("unknown estimator kind");
}

ComparisonReport run_comparison(const ComparisonConfig& cfg) {
    ComparisonReport out;
    out.operating_point = cfg.operating_point;
    out.sample_time = cfg.sample_time;
    out.bound = fisher::bound_report(cfg.operating_point);
    out.competitors = fisher::competitor_sensitivities(cfg.operating_point, cfg.sample_time);
    out.lkd_gap_factor = out.bound.rel_sens_bound / *out.competitors.lkd_claimed;
    out.lkd_below_bound = *out.competitors.lkd_claimed < out.bound.rel_sens_bound;

    out.simulation = cfg.simulation;
    out.simulated_at_or_above_bound = true;
    for (auto kind : {EstimatorKind::PhotonCounting, EstimatorKind::HeterodyneRadiometer,
                      EstimatorKind::TwoDetectorCorrelation}) {
        ExperimentConfig experiment;
        experiment.spec = cfg.simulation;
        experiment.kind = kind;
        experiment.trials = cfg.trials;
        experiment.master_seed = cfg.master_seed;
        experiment.sample_time = cfg.sample_time;
        experiment.counting_path = cfg.counting_path;
        experiment.workers = cfg.workers;
        out.simulated.push_back(run_experiment(experiment));
        out.simulated_at_or_above_bound = out.simulated_at_or_above_bound && out.simulated.back().bound_ok;
    }
    return out;
}

}  // namespace qcrb::estimators
