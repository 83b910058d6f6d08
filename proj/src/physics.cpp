#include "qcrb/physics.hpp"

#include <cmath>
#include <string>

#include "qcrb/errors.hpp"

namespace qcrb::physics {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(value));
    }
}

// Tolerance for treating a floating product as an integer.
bool is_integral(double x) {
    return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

}  // namespace

PlanckOccupation planck_occupation(double nu, double source_temperature) {
    require_positive(nu, "frequency");
    require_positive(source_temperature, "source temperature");
    const double x = PhysicalConstants::h * nu / (PhysicalConstants::k * source_temperature);
    if (x > 700.0) {
        return {0.0, true};
    }
    return {1.0 / std::expm1(x), false};
}

RayleighJeansOccupation rayleigh_jeans_occupation(double nu0, double source_temperature) {
    require_positive(nu0, "center frequency");
    require_positive(source_temperature, "source temperature");
    const double ratio = PhysicalConstants::h * nu0 / (PhysicalConstants::k * source_temperature);
    return {1.0 / ratio, ratio > kRayleighJeansWarnThreshold};
}

double sinc(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    // sin(pi x) = +/- sin(pi r) with r = x - 2 round(x/2) in [-1, 1].
    const double r = x - 2.0 * std::round(0.5 * x);
    return std::sin(kPi * r) / (kPi * x);
}

double coherence_time(double delta_nu) {
    require_positive(delta_nu, "bandwidth");
    return 1.0 / delta_nu;
}

ModeCount mode_count(double delta_nu, double observation_time) {
    require_positive(delta_nu, "bandwidth");
    require_positive(observation_time, "observation time");
    const double product = delta_nu * observation_time;
    if (std::llround(product) < 1 || (product < 1.0 && !is_integral(product))) {
        throw DomainError("delta_nu * T = " + std::to_string(product) +
                          " is below one mode; the single-mode regime is not supported");
    }
    return {static_cast<std::int64_t>(std::llround(product)), is_integral(product)};
}

double SourceSpec::quantum_ratio() const {
    return PhysicalConstants::h * nu0 / (PhysicalConstants::k * source_temperature);
}

SourceSpec SourceSpec::from_temperature(double source_temperature, double nu0, double delta_nu,
                                        double observation_time) {
    require_positive(nu0, "center frequency");
    require_positive(delta_nu, "bandwidth");
    require_positive(observation_time, "observation time");
    if (!(delta_nu < 2.0 * nu0)) {
        throw DomainError("bandwidth must be below twice the center frequency");
    }
    SourceSpec spec;
    spec.source_temperature = source_temperature;
    spec.nu0 = nu0;
    spec.delta_nu = delta_nu;
    spec.observation_time = observation_time;

    const auto rj = rayleigh_jeans_occupation(nu0, source_temperature);
    spec.n0 = rj.value;
    spec.rayleigh_jeans_degraded = rj.degraded;
    spec.tau_c = coherence_time(delta_nu);
    const auto count = mode_count(delta_nu, observation_time);
    spec.modes = count.count;
    spec.modes_exact = count.exact;
    spec.long_observation = observation_time / spec.tau_c >= kLongObservationRatio;
    return spec;
}

SourceSpec SourceSpec::from_occupation(double n0, double nu0, double delta_nu,
                                       double observation_time) {
    require_positive(n0, "occupation n0");
    require_positive(nu0, "center frequency");
    const double temperature = n0 * PhysicalConstants::h * nu0 / PhysicalConstants::k;
    SourceSpec spec = from_temperature(temperature, nu0, delta_nu, observation_time);
    // Keep the caller's n0 bit-exact rather than the round trip through T_s.
    spec.n0 = n0;
    return spec;
}

std::complex<double> CorrelationKernel::operator()(double tau) const {
    const double magnitude = baseband(tau);
    const double phase = 2.0 * kPi * nu0 * tau;
    return {magnitude * std::cos(phase), -magnitude * std::sin(phase)};
}

double CorrelationKernel::baseband(double tau) const {
    if (!std::isfinite(tau)) {
        throw DomainError("correlation lag must be finite");
    }
    return n0 * delta_nu * sinc(delta_nu * tau);
}

}  // namespace qcrb::physics
