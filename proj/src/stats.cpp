#include "qcrb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcrb/errors.hpp"
#include "qcrb/rng.hpp"

namespace qcrb::stats {

double mean(std::span<const double> data) {
    if (data.empty()) {
        throw ConfigError("mean of an empty sample");
    }
    double sum = 0.0;
    for (double x : data) {
        sum += x;
    }
    return sum / static_cast<double>(data.size());
}

double variance(std::span<const double> data) {
    if (data.size() < 2) {
        throw ConfigError("variance needs at least two samples");
    }
    const double m = mean(data);
    double sum = 0.0;
    for (double x : data) {
        sum += (x - m) * (x - m);
    }
    return sum / static_cast<double>(data.size() - 1);
}

double central_moment(std::span<const double> data, int order) {
    const double m = mean(data);
    double sum = 0.0;
    for (double x : data) {
        sum += std::pow(x - m, order);
    }
    return sum / static_cast<double>(data.size());
}

double raw_moment(std::span<const double> data, int order) {
    double sum = 0.0;
    for (double x : data) {
        sum += std::pow(x, order);
    }
    return sum / static_cast<double>(data.size());
}

namespace {

double percentile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double position = q * static_cast<double>(sorted.size() - 1);
    const auto below = static_cast<std::size_t>(std::floor(position));
    const auto above = std::min(below + 1, sorted.size() - 1);
    const double frac = position - static_cast<double>(below);
    return sorted[below] + frac * (sorted[above] - sorted[below]);
}

}  // namespace

std::vector<BootstrapSummary> bootstrap(std::span<const double> data, const MultiStatistic& statistic,
                                        std::uint64_t seed, std::uint32_t stream_id, int resamples) {
    if (data.size() < 2 || resamples < 2) {
        throw ConfigError("bootstrap needs at least two samples and two resamples");
    }
    const std::vector<double> point = statistic(data);
    std::vector<std::vector<double>> replicates(point.size());
    for (auto& r : replicates) {
        r.reserve(static_cast<std::size_t>(resamples));
    }

    const auto n = static_cast<std::uint32_t>(data.size());
    std::vector<double> buffer(data.size());
    for (int b = 0; b < resamples; ++b) {
        rng::Stream stream(seed, rng::Purpose::Bootstrap, static_cast<std::uint32_t>(b), stream_id);
        for (auto& slot : buffer) {
            // Multiply-shift range reduction; bias is at most n / 2^32.
            const auto draw = static_cast<std::uint64_t>(stream()) * n >> 32;
            slot = data[static_cast<std::size_t>(draw)];
        }
        const auto values = statistic(buffer);
        for (std::size_t k = 0; k < values.size(); ++k) {
            replicates[k].push_back(values[k]);
        }
    }

    std::vector<BootstrapSummary> out(point.size());
    for (std::size_t k = 0; k < point.size(); ++k) {
        const auto& r = replicates[k];
        double m = 0.0;
        for (double x : r) {
            m += x;
        }
        m /= static_cast<double>(r.size());
        double ss = 0.0;
        for (double x : r) {
            ss += (x - m) * (x - m);
        }
        out[k].estimate = point[k];
        out[k].sigma = std::sqrt(ss / static_cast<double>(r.size() - 1));
        out[k].lower = percentile(r, 0.025);
        out[k].upper = percentile(r, 0.975);
    }
    return out;
}

BootstrapSummary bootstrap_mean(std::span<const double> data, std::uint64_t seed,
                                std::uint32_t stream_id, int resamples) {
    return bootstrap(
        data, [](std::span<const double> s) { return std::vector<double>{mean(s)}; }, seed,
        stream_id, resamples)[0];
}

}  // namespace qcrb::stats
