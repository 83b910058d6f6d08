#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qcrb/physics.hpp"

namespace qcrb::modal {

using physics::SourceSpec;

/// The in-band Fourier-series modes: the half-open run
/// {nu0 T - M/2, ..., nu0 T - M/2 + M - 1} of exactly M consecutive indices.
struct ModeSet {
    std::int64_t first = 0;
    std::int64_t count = 0;
    std::int64_t nu0_index = 0;   // nu0 T
    std::int64_t half_width = 0;  // floor(M / 2)
    bool odd_split = false;       // M odd: no mode sits on a band edge

    std::int64_t last() const { return first + count - 1; }
    std::int64_t operator[](std::int64_t i) const { return first + i; }
    bool contains(std::int64_t m) const { return m >= first && m <= last(); }
    std::vector<std::int64_t> indices() const;
    /// Baseband offset m - nu0 T of the i-th mode.
    std::int64_t offset(std::int64_t i) const { return first + i - nu0_index; }
};

/// Requires nu0 T and delta_nu T to be integral.
ModeSet build_mode_set(const SourceSpec& spec);

/// Mean vector and covariance of the multimode Gaussian state, quadrature
/// ordering (q1, p1, q2, p2, ...). The covariance is a direct sum of 2x2
/// blocks; off-block entries are zero by construction.
struct GaussianStateDescriptor {
    Eigen::VectorXd mean;
    std::vector<Eigen::Matrix2d> blocks;

    Eigen::Index mode_count() const { return static_cast<Eigen::Index>(blocks.size()); }
    Eigen::MatrixXd covariance() const;
    /// sigma symmetric positive definite and sigma + (i/2) Omega >= 0.
    bool is_physical(double tolerance = 1e-12) const;
    /// Smallest eigenvalue of sigma.
    double min_covariance_eigenvalue() const;
};

GaussianStateDescriptor assemble_covariance(double n0, const ModeSet& modes);
GaussianStateDescriptor assemble_covariance(const SourceSpec& spec, const ModeSet& modes);

/// Controls the double-integral evaluation of <a_m^dagger a_n>.
struct AppendixQuadratureConfig {
    double c = 5.0;          // end-segment width in coherence times
    int panels_zeta = 32;    // initial outer panels per sub-interval
    int panels_tau = 32;     // initial inner panels over [0, T]
    int max_doublings = 8;
    double rel_tol = 1e-4;

    void validate() const;
};

/// The outer integral split into the two end segments of width c tau_c and the middle.
struct AppendixSplit {
    std::complex<double> head;    // zeta in [-T, -(T - c tau_c)]
    std::complex<double> middle;
    std::complex<double> tail;    // zeta in [T - c tau_c, T]
    double end_segment_bound = 0.0;  // n0 c^2 tau_c / T
};

struct ModalCovariance {
    std::complex<double> value;
    std::complex<double> previous;  // iterate at half the panel count
    AppendixSplit split;
    int panels_zeta = 0;
    int panels_tau = 0;
};

/// <a_m^dagger a_n> from the exact finite-window double integral, refined by
/// panel doubling until two iterates agree to cfg.rel_tol (relative to
/// max(|value|, n0 / (delta_nu T))). Throws NumericalError with both iterates
/// when the doubling budget runs out.
ModalCovariance modal_covariance_numeric_detail(std::int64_t m, std::int64_t n, const SourceSpec& spec,
                                                const AppendixQuadratureConfig& cfg = {});

std::complex<double> modal_covariance_numeric(std::int64_t m, std::int64_t n, const SourceSpec& spec,
                                              const AppendixQuadratureConfig& cfg = {});

struct ModalCovarianceMatrix {
    Eigen::MatrixXcd value;      // (i, j) = <a_{first+i}^dagger a_{first+j}>
    Eigen::MatrixXcd previous;   // half-resolution iterate
    int panels_zeta = 0;
    int panels_tau = 0;
};

/// The full M x M numeric covariance over a mode set, converged jointly.
ModalCovarianceMatrix modal_covariance_matrix_numeric(const SourceSpec& spec, const ModeSet& modes,
                                                      const AppendixQuadratureConfig& cfg = {},
                                                      unsigned workers = 1);

/// Long-observation limit n0 rect((nu0 - m/T)/delta_nu) delta_mn, rect(+-1/2) = 1.
std::complex<double> modal_covariance_asymptotic(std::int64_t m, std::int64_t n, const SourceSpec& spec);

}  // namespace qcrb::modal
