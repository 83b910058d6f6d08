#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qcrb::stats {

inline constexpr int kDefaultResamples = 500;

double mean(std::span<const double> data);

/// Unbiased (n - 1) sample variance, two-pass.
double variance(std::span<const double> data);

/// Central sample moment of the given order, 1/n normalized.
double central_moment(std::span<const double> data, int order);

/// Raw moment E[x^order].
double raw_moment(std::span<const double> data, int order);

struct BootstrapSummary {
    double estimate = 0.0;  // statistic on the original sample
    double sigma = 0.0;     // standard deviation of the replicates
    double lower = 0.0;     // 2.5th percentile of the replicates
    double upper = 0.0;     // 97.5th percentile
};

/// A statistic evaluated on a sample; may return several values at once so
/// that related quantities share the same resamples.
using MultiStatistic = std::function<std::vector<double>(std::span<const double>)>;

/// Percentile bootstrap. Resample indices come from the Bootstrap Philox
/// substream keyed by `seed` and `stream_id`, so the result is a pure
/// function of its inputs.
std::vector<BootstrapSummary> bootstrap(std::span<const double> data, const MultiStatistic& statistic,
                                        std::uint64_t seed, std::uint32_t stream_id = 0,
                                        int resamples = kDefaultResamples);

BootstrapSummary bootstrap_mean(std::span<const double> data, std::uint64_t seed,
                                std::uint32_t stream_id = 0, int resamples = kDefaultResamples);

}  // namespace qcrb::stats
