#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcrb/gaussian_state.hpp"
#include "qcrb/hermitian_operator.hpp"
#include "qcrb/physics.hpp"

namespace qcrb::fisher {

using gaussian::TruncatedDensityOperator;
using physics::SourceSpec;

/// Eigenvalue pairs with lambda_i + lambda_j below this are dropped from the
/// Lyapunov solve.
inline constexpr double kEigenvalueFloor = 1e-14;

inline constexpr double kQfiRelativeTolerance = 1e-6;
inline constexpr double kSldEntryTolerance = 1e-8;
inline constexpr double kLyapunovResidualTolerance = 1e-10;

/// Symmetric logarithmic derivative on a truncated Fock space.
struct SLDOperator {
    HermitianOperator matrix;
    int dim() const { return static_cast<int>(matrix.dim()); }
};

/// d rho_th / d n0 = rho_th [N/(n0(n0+1)) - 1/(n0+1)] on the first `cutoff` Fock states.
HermitianOperator drho_dn0(double n0, int cutoff);

/// L = N/(n0(n0+1)) - 1/(n0+1).
SLDOperator sld_analytic(double n0, int cutoff);

struct SLDSolution {
    SLDOperator sld;
    double residual = 0.0;      // max |(L rho + rho L)/2 - drho|
    int dropped_pairs = 0;      // eigenvalue pairs below kEigenvalueFloor
    std::optional<std::string> notice;
};

/// Solves d rho = (L rho + rho L)/2 in rho's eigenbasis: L_ij = 2 drho_ij / (lambda_i + lambda_j).
SLDSolution sld_numeric(const TruncatedDensityOperator& rho, const HermitianOperator& drho);

/// 1/(n0(n0+1)).
double qfi_single_mode(double n0);

/// Re Tr(rho L^2); throws NumericalError if the imaginary residue exceeds 1e-12.
double qfi_numeric(const TruncatedDensityOperator& rho, const SLDOperator& sld);

/// delta_nu T / (n0 (n0+1)), additive over the M modes.
double qfi_total(const SourceSpec& spec);

struct BoundReport {
    double qfi_single = 0.0;
    double qfi_total = 0.0;
    double var_bound = 0.0;            // n0 (n0+1) / (delta_nu T)
    double rel_sens_bound = 0.0;       // (n0+1) / (n0 delta_nu T)
    double temp_rel_sens_bound = 0.0;  // (1 + h nu0 / k T_s) / (delta_nu T)
};

BoundReport bound_report(const SourceSpec& spec);

/// The three closed-form sensitivity curves the bound is compared with.
struct CompetitorSensitivities {
    double radiometer = 0.0;   // 1/(delta_nu T)
    double zmuidzinas = 0.0;   // (n0+1)/(n0 delta_nu T)
    std::optional<double> lkd_claimed;  // 5 T_samp / T + 1/(n0 delta_nu T); needs T_samp
    bool lkd_regime_valid = false;      // 0 < T_samp < tau_c
};

/// The LKD curve is evaluated only when a sample time is given.
CompetitorSensitivities competitor_sensitivities(const SourceSpec& spec,
                                                 std::optional<double> sample_time = std::nullopt);

enum class SweepAxis { Occupation, ObservationTime };

struct SweepPoint {
    SourceSpec spec;
    BoundReport bound;
    CompetitorSensitivities competitors;
};

/// Log-spaced sweep of n0 or T_obs from `low` to `high` (inclusive), other
/// spec fields held fixed. T_samp is held at sample_time.
std::vector<SweepPoint> bound_sweep(const SourceSpec& base, SweepAxis axis, double low, double high, int points,
                                    std::optional<double> sample_time = std::nullopt);

/// One row of the truncated-Fock QFI oracle check.
struct QfiCheck {
    double n0 = 0.0;
    int cutoff = 0;
    double tail_mass = 0.0;
    double qfi_analytic = 0.0;
    double qfi_numeric = 0.0;
    double qfi_relative_error = 0.0;
    double sld_residual = 0.0;
    double sld_max_deviation = 0.0;  // vs the analytic SLD
    double score_mean = 0.0;         // |Tr(rho L)|
    double drho_trace = 0.0;         // |Tr(d rho)|
    int dropped_pairs = 0;
    bool escalated = false;
    bool passed = false;
};

/// With no fixed cutoff, starts at recommended_cutoff and doubles until the
/// tolerances hold (NumericalError if they never do). A fixed cutoff is used
/// as-is and failures are only flagged.
QfiCheck qfi_check(double n0, std::optional<int> fixed_cutoff = std::nullopt);

}  // namespace qcrb::fisher
