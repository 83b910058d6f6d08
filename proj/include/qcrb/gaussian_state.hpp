#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "qcrb/hermitian_operator.hpp"
#include "qcrb/modal.hpp"

namespace qcrb::gaussian {

using modal::GaussianStateDescriptor;
using physics::SourceSpec;

/// Largest tail mass accepted without raising the cutoff.
inline constexpr double kMaxTailMass = 1e-12;

/// A single-mode density operator on the Fock states |0>, ..., |D-1>.
struct TruncatedDensityOperator {
    int dim = 0;
    HermitianOperator matrix;
    double tail_mass = 0.0;         // probability beyond the cutoff
    bool below_recommended = false; // cutoff below recommended_cutoff(n0)
};

/// max(64, ceil(40 n0)), raised further until the thermal tail mass is below 1e-12.
int recommended_cutoff(double n0);

/// (n0/(n0+1))^D, the Bose-Einstein weight beyond a cutoff D.
double thermal_tail_mass(double n0, int cutoff);

/// Bose-Einstein law P(k) = (1/(n0+1)) (n0/(n0+1))^k truncated to k < cutoff.
TruncatedDensityOperator thermal_density_operator(double n0, int cutoff);

/// Number operator diag(0, 1, ..., D-1).
HermitianOperator number_operator(int cutoff);

/// chi(xi) = exp(-i xi^T Omega Rbar - (1/2) xi^T Omega sigma Omega^T xi).
std::complex<double> characteristic_function(const GaussianStateDescriptor& desc, std::span<const double> xi);

/// The M-mode product of identical thermal states.
struct MultimodeThermalState {
    double n0 = 0.0;
    std::int64_t mode_count = 0;
    GaussianStateDescriptor descriptor;

    double total_mean_photons() const;
    /// Per-mode marginal; every mode carries the same thermal state.
    TruncatedDensityOperator mode_marginal(int cutoff) const;
};

MultimodeThermalState multimode_state(const SourceSpec& spec);

}  // namespace qcrb::gaussian
