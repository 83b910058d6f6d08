#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcrb/modal.hpp"
#include "qcrb/synthesis.hpp"

namespace qcrb::modal {

/// Allowed deviation from the rect-delta asymptote, in units of n0 / (delta_nu T).
inline constexpr double kAppendixDeviationConstant = 5.0;

/// Agreement threshold between the synthesis and quadrature paths, in
/// combined standard errors.
inline constexpr double kAgreementSigmas = 3.0;

struct DeviationStats {
    double max_diagonal = 0.0;     // max_i |C_ii - n0 rect|
    std::int64_t diagonal_at = 0;  // mode index attaining it
    double max_off_diagonal = 0.0; // max_{i != j} |C_ij|
    std::int64_t off_row = 0;
    std::int64_t off_col = 0;
};

struct ElementComparison {
    std::string label;
    std::int64_t m = 0;
    std::int64_t n = 0;
    double quadrature = 0.0;        // Re <a_m^dagger a_n>, quadrature path
    double quadrature_sigma = 0.0;  // last panel-doubling change
    double synthesis = 0.0;         // Re of the ensemble mean
    double synthesis_sigma = 0.0;   // bootstrap sigma
    double z = 0.0;                 // |difference| / combined sigma
    bool agrees = false;
};

struct AppendixRow {
    std::int64_t delta_nu_t = 0;
    double n0 = 0.0;
    double allowed_deviation = 0.0;  // 5 n0 / (delta_nu T)

    DeviationStats quadrature_full;      // over every mode of the set
    DeviationStats quadrature_interior;  // modes in the central half of the band
    double fitted_constant = 0.0;        // max(full deviations) * delta_nu T / n0
    double quadrature_error = 0.0;       // max panel-doubling change
    int panels_zeta = 0;
    int panels_tau = 0;

    AppendixSplit center_split;  // three-way split at m = n = nu0 T

    std::int64_t realizations = 0;
    DeviationStats synthesis_full;
    DeviationStats synthesis_interior;
    double max_anomalous = 0.0;  // max |mean a_m a_n|
    std::vector<ElementComparison> comparisons;

    bool diagonal_within_bound = false;
    bool off_diagonal_within_bound = false;
    bool synthesis_agrees = false;
};

struct AppendixCheck {
    std::vector<AppendixRow> rows;
    bool diagonal_decreasing = false;
    bool off_diagonal_decreasing = false;
    bool all_within_bound = false;
    bool all_agree = false;

    bool passed() const { return diagonal_decreasing && off_diagonal_decreasing && all_within_bound && all_agree; }
};

struct AppendixCheckConfig {
    double n0 = 1.0;
    std::vector<std::int64_t> delta_nu_t = {16, 32, 64};
    double observation_time = 1.0;  // s
    double nu0 = 1.0e6;             // Hz; nu0 T must be integral
    AppendixQuadratureConfig quadrature{};
    SynthesisConfig synthesis{};
    std::int64_t realizations = 10000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

AppendixRow appendix_check_row(const SourceSpec& spec, const AppendixCheckConfig& cfg);
AppendixCheck run_appendix_check(const AppendixCheckConfig& cfg);

}  // namespace qcrb::modal
