#pragma once

#include <complex>
#include <cstdint>

namespace qcrb::physics {

/// Exact SI-2019 defined constants.
struct PhysicalConstants {
    static constexpr double h = 6.62607015e-34;  // J s
    static constexpr double k = 1.380649e-23;    // J/K
};

inline constexpr double kPi = 3.14159265358979323846;

/// Observation time must exceed this many coherence times for the
/// long-observation asymptotics to be trusted.
inline constexpr double kLongObservationRatio = 100.0;

/// Rayleigh-Jeans is flagged as degraded above this value of h nu0 / k T_s.
inline constexpr double kRayleighJeansWarnThreshold = 0.1;

/// Smallest occupation number accepted by estimation-theoretic routines.
inline constexpr double kMinOccupation = 1e-6;

struct PlanckOccupation {
    double value = 0.0;
    bool underflow = false;  // h nu / k T_s > 700; value is exactly 0
};

struct RayleighJeansOccupation {
    double value = 0.0;
    bool degraded = false;  // h nu0 / k T_s > kRayleighJeansWarnThreshold
};

/// Bose-Einstein mean occupation 1/(exp(h nu / k T_s) - 1).
PlanckOccupation planck_occupation(double nu, double source_temperature);

/// Rayleigh-Jeans occupation k T_s / (h nu0).
RayleighJeansOccupation rayleigh_jeans_occupation(double nu0, double source_temperature);

/// sin(pi x)/(pi x), with sinc(0) = 1. Argument reduction keeps zeros at
/// integers accurate to rounding of x itself.
double sinc(double x);

/// 1/delta_nu.
double coherence_time(double delta_nu);

struct ModeCount {
    std::int64_t count = 0;
    bool exact = false;  // delta_nu * T_obs is integral
};

/// round(delta_nu * T_obs); throws DomainError when the product is below 1.
ModeCount mode_count(double delta_nu, double observation_time);

/// Full parameterization of a filtered thermal source observation.
///
/// Build through from_temperature() or from_occupation(); the derived fields
/// (n0, tau_c, M) are filled in and validated there. n0 always follows the
/// Rayleigh-Jeans mapping n0 = k T_s / (h nu0) so that the temperature and
/// occupation parameterizations are interchangeable.
struct SourceSpec {
    double source_temperature = 0.0;  // T_s, K
    double nu0 = 0.0;                 // center frequency, Hz
    double delta_nu = 0.0;            // bandwidth, Hz
    double observation_time = 0.0;    // T, s

    double n0 = 0.0;              // derived occupation
    double tau_c = 0.0;           // derived coherence time, s
    std::int64_t modes = 0;       // derived M = round(delta_nu T)
    bool modes_exact = false;     // delta_nu T integral
    bool long_observation = false;  // T / tau_c >= 100
    bool rayleigh_jeans_degraded = false;

    static SourceSpec from_temperature(double source_temperature, double nu0, double delta_nu,
                                       double observation_time);
    static SourceSpec from_occupation(double n0, double nu0, double delta_nu,
                                      double observation_time);

    /// Real-valued time-bandwidth product delta_nu * T used by the bound formulas.
    double time_bandwidth() const { return delta_nu * observation_time; }

    /// h nu0 / (k T_s).
    double quantum_ratio() const;
};

/// Normally ordered field correlation <E^dagger(t) E(t+tau)> of the flat-band source.
struct CorrelationKernel {
    double n0 = 0.0;
    double delta_nu = 0.0;
    double nu0 = 0.0;

    static CorrelationKernel from_spec(const SourceSpec& spec) {
        return {spec.n0, spec.delta_nu, spec.nu0};
    }

    /// n0 delta_nu sinc(delta_nu tau) exp(-i 2 pi nu0 tau), photons/s.
    std::complex<double> operator()(double tau) const;

    /// Baseband form with the carrier factored out (real, even in tau).
    double baseband(double tau) const;

    /// The phase-sensitive correlation <E(t) E(t')> vanishes for thermal light.
    static constexpr std::complex<double> phase_sensitive(double /*tau*/) { return {0.0, 0.0}; }
};

}  // namespace qcrb::physics
