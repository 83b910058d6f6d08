#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>

namespace qcrb::rng {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A pure function of (counter, key); there is no hidden state, so any
/// substream can be regenerated from its coordinates alone.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// What a substream is used for; keeps otherwise identical coordinates apart.
enum class Purpose : std::uint32_t {
    ModeAmplitude = 1,
    PhotonCount = 2,
    Heterodyne = 3,
    DetectorOne = 4,
    DetectorTwo = 5,
    Bootstrap = 6,
    FieldSynthesis = 7,
    BoseEinstein = 8,
};

/// Sequential view of one Philox substream addressed by
/// (master_seed, purpose, trial, mode). Satisfies UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint32_t;

    Stream(std::uint64_t master_seed, Purpose purpose, std::uint32_t trial, std::uint32_t mode)
        : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
          base_{trial, static_cast<std::uint32_t>(purpose), mode, 0u} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (used_ == 4) {
            refill();
        }
        return block_[used_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        const std::uint64_t a = (*this)() >> 5;
        const std::uint64_t b = (*this)() >> 6;
        return static_cast<double>(a * 67108864ull + b) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    double uniform_open_low() { return 1.0 - uniform(); }

    /// Two independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() {
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_low()));
        const double angle = 2.0 * 3.14159265358979323846 * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = power.
    std::complex<double> complex_normal(double power) {
        const auto [x, y] = normal_pair();
        const double scale = std::sqrt(0.5 * power);
        return {scale * x, scale * y};
    }

private:
    void refill() {
        auto ctr = base_;
        ctr[3] = block_index_++;
        block_ = Philox4x32::apply(ctr, key_);
        used_ = 0;
    }

    Philox4x32::Key key_;
    Philox4x32::Counter base_;
    Philox4x32::Counter block_{};
    std::uint32_t block_index_ = 0;
    int used_ = 4;
};

}  // namespace qcrb::rng
