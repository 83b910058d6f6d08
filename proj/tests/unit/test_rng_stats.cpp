#include <cmath>
#include <vector>

#include "doctest.h"
#include "qcrb/rng.hpp"
#include "qcrb/stats.hpp"

using namespace qcrb;
using rng::Philox4x32;

TEST_SUITE("rng") {

TEST_CASE("philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::apply(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::apply(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    rng::Stream a(42, rng::Purpose::ModeAmplitude, 7, 3);
    rng::Stream b(42, rng::Purpose::ModeAmplitude, 7, 3);
    rng::Stream other_mode(42, rng::Purpose::ModeAmplitude, 7, 4);
    rng::Stream other_purpose(42, rng::Purpose::PhotonCount, 7, 3);
    rng::Stream other_seed(43, rng::Purpose::ModeAmplitude, 7, 3);
    int same_mode = 0;
    int same_purpose = 0;
    int same_seed = 0;
    for (int i = 0; i < 64; ++i) {
        const auto x = a();
        CHECK(x == b());
        same_mode += x == other_mode();
        same_purpose += x == other_purpose();
        same_seed += x == other_seed();
    }
    CHECK(same_mode == 0);
    CHECK(same_purpose == 0);
    CHECK(same_seed == 0);
}

TEST_CASE("uniform and normal draws have the right moments") {
    rng::Stream s(1, rng::Purpose::Bootstrap, 0, 0);
    const int n = 200000;
    std::vector<double> u(n);
    std::vector<double> z;
    for (int i = 0; i < n; ++i) {
        u[i] = s.uniform();
        CHECK_FALSE((u[i] < 0.0 || u[i] >= 1.0));
    }
    for (int i = 0; i < n / 2; ++i) {
        const auto [x, y] = s.normal_pair();
        z.push_back(x);
        z.push_back(y);
    }
    CHECK(std::abs(stats::mean(u) - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(stats::mean(z)) < 4.0 / std::sqrt(n));
    CHECK(std::abs(stats::variance(z) - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(stats::central_moment(z, 4) - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("complex normal has the requested power") {
    rng::Stream s(9, rng::Purpose::ModeAmplitude, 0, 0);
    const int n = 100000;
    std::vector<double> power(n);
    for (int i = 0; i < n; ++i) {
        power[i] = std::norm(s.complex_normal(2.5));
    }
    // |z|^2 is exponential with mean 2.5.
    CHECK(std::abs(stats::mean(power) - 2.5) < 4.0 * 2.5 / std::sqrt(n));
}

}  // TEST_SUITE

TEST_SUITE("stats") {

TEST_CASE("moments of a small sample") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(stats::mean(x) == 2.5);
    CHECK(stats::variance(x) == doctest::Approx(5.0 / 3.0));
    CHECK(stats::central_moment(x, 2) == doctest::Approx(1.25));
    CHECK(stats::raw_moment(x, 2) == doctest::Approx(7.5));
}

TEST_CASE("bootstrap of the mean matches the standard error") {
    rng::Stream s(5, rng::Purpose::Heterodyne, 0, 0);
    std::vector<double> x(4000);
    for (auto& v : x) {
        v = s.normal_pair().first;
    }
    const auto boot = stats::bootstrap_mean(x, 11);
    CHECK(boot.estimate == stats::mean(x));
    CHECK(boot.sigma == doctest::Approx(std::sqrt(stats::variance(x) / x.size())).epsilon(0.1));
    CHECK(boot.lower < boot.estimate);
    CHECK(boot.upper > boot.estimate);
}

TEST_CASE("bootstrap is a pure function of its inputs") {
    std::vector<double> x;
    for (int i = 0; i < 1000; ++i) {
        x.push_back(std::sin(i * 0.37));
    }
    const auto a = stats::bootstrap_mean(x, 3, 1);
    const auto b = stats::bootstrap_mean(x, 3, 1);
    const auto c = stats::bootstrap_mean(x, 3, 2);
    CHECK(a.sigma == b.sigma);
    CHECK(a.lower == b.lower);
    CHECK(a.sigma != c.sigma);
}

}  // TEST_SUITE
