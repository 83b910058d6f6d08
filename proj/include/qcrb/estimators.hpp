#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcrb/fisher.hpp"
#include "qcrb/physics.hpp"
#include "qcrb/rng.hpp"

namespace qcrb::estimators {

using physics::SourceSpec;

enum class EstimatorKind { PhotonCounting, HeterodyneRadiometer, TwoDetectorCorrelation };

std::string_view to_string(EstimatorKind kind);
/// Accepts "photon_counting", "heterodyne_radiometer", "two_detector_correlation".
EstimatorKind parse_kind(std::string_view text);

/// How photon counts are drawn: directly from the Bose-Einstein law, or as
/// Poisson(|alpha|^2) given a thermal coherent amplitude alpha.
enum class CountingPath { BoseEinstein, ConditionalPoisson };

std::string_view to_string(CountingPath path);
CountingPath parse_counting_path(std::string_view text);

inline constexpr std::int64_t kMinTrials = 1000;
inline constexpr std::int64_t kDefaultTrials = 100000;
inline constexpr double kToleranceSigmas = 3.0;

struct TrialOutcome {
    double estimate = 0.0;
    /// Sufficient statistic of the trial: total counts (counting), total
    /// heterodyne power sum |beta|^2 (radiometer), or mean n1 n2 (two-detector).
    double raw_summary = 0.0;
};

struct ExperimentConfig {
    SourceSpec spec;
    EstimatorKind kind = EstimatorKind::PhotonCounting;
    std::int64_t trials = kDefaultTrials;
    std::uint64_t master_seed = 0;
    std::optional<double> sample_time;  // T_samp, for the LKD overlay only
    CountingPath counting_path = CountingPath::BoseEinstein;
    unsigned workers = 1;

    void validate() const;
};

struct SensitivityReport {
    EstimatorKind kind = EstimatorKind::PhotonCounting;
    std::string label;
    std::int64_t trials = 0;
    std::int64_t modes = 0;
    double n0 = 0.0;
    double mean_estimate = 0.0;
    double bias = 0.0;
    double variance = 0.0;
    double rel_sensitivity = 0.0;        // variance / n0^2
    double bootstrap_sigma = 0.0;        // of rel_sensitivity
    double bootstrap_sigma_mean = 0.0;   // of mean_estimate
    double bound = 0.0;                  // (n0+1)/(n0 delta_nu T)
    double ratio_to_bound = 0.0;
    double ratio_sigma = 0.0;            // bootstrap_sigma / bound
    std::optional<double> asymptotic_bias;  // delta-method bias of sqrt(2S), two-detector only
    std::optional<double> lkd_claimed;      // present when T_samp was given
    std::uint64_t seed = 0;

    bool expects_unbiased = false;
    bool unbiased_ok = true;  // |bias| <= 3 sigma_mean when expects_unbiased
    bool bound_ok = true;     // rel_sensitivity >= bound - 3 sigma
};

/// M independent circular complex Gaussian amplitudes with E|alpha|^2 = n0,
/// mode m drawn from the ModeAmplitude substream (seed, trial, m).
std::vector<std::complex<double>> sample_mode_amplitudes(const SourceSpec& spec, std::uint64_t seed,
                                                         std::uint32_t trial);

/// One count of a thermal mode with mean n0 along the given path.
std::int64_t draw_thermal_count(double n0, CountingPath path, std::uint64_t seed, std::uint32_t trial,
                                std::uint32_t mode);

/// Per-trial outcomes in trial order; independent of cfg.workers.
std::vector<TrialOutcome> simulate_trials(const ExperimentConfig& cfg);

SensitivityReport run_photon_counting(const ExperimentConfig& cfg);
SensitivityReport run_heterodyne(const ExperimentConfig& cfg);
SensitivityReport run_two_detector(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
SensitivityReport run_experiment(const ExperimentConfig& cfg);

/// Statistics of a finished set of trials (exposed for tests).
SensitivityReport summarize(const ExperimentConfig& cfg, const std::vector<TrialOutcome>& outcomes);

/// Closed-form curves at an operating point set against the simulated estimators.
struct ComparisonConfig {
    SourceSpec operating_point;
    double sample_time = 0.0;  // T_samp
    /// Simulations run at this spec; M = delta_nu T must stay small enough to simulate.
    SourceSpec simulation;
    std::int64_t trials = kDefaultTrials;
    std::uint64_t master_seed = 0;
    CountingPath counting_path = CountingPath::BoseEinstein;
    unsigned workers = 1;
};

struct ComparisonReport {
    SourceSpec operating_point;
    double sample_time = 0.0;
    fisher::BoundReport bound;
    fisher::CompetitorSensitivities competitors;
    double lkd_gap_factor = 0.0;  // rel_sens_bound / lkd_claimed
    bool lkd_below_bound = false;

    SourceSpec simulation;
    std::vector<SensitivityReport> simulated;  // one per estimator kind
    bool simulated_at_or_above_bound = false;  // every bound_ok flag set
};

ComparisonReport run_comparison(const ComparisonConfig& cfg);

}  // namespace qcrb::estimators
