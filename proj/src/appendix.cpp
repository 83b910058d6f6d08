#include "qcrb/appendix.hpp"

#include <cmath>

#include "qcrb/errors.hpp"

namespace qcrb::modal {

namespace {

// Central half of the band: |m - nu0 T| <= M/4.
bool interior(const ModeSet& modes, Eigen::Index i) {
    return 4 * std::abs(modes.offset(i)) <= modes.count;
}

DeviationStats deviations(const Eigen::MatrixXcd& cov, const ModeSet& modes, const SourceSpec& spec,
                          bool interior_only) {
    DeviationStats out;
    const Eigen::Index count = cov.rows();
    for (Eigen::Index i = 0; i < count; ++i) {
        if (interior_only && !interior(modes, i)) {
            continue;
        }
        for (Eigen::Index j = 0; j < count; ++j) {
            if (interior_only && !interior(modes, j)) {
                continue;
            }
            const double dev = std::abs(cov(i, j) - modal_covariance_asymptotic(modes[i], modes[j], spec));
            if (i == j) {
                if (dev > out.max_diagonal) {
                    out.max_diagonal = dev;
                    out.diagonal_at = modes[i];
                }
            } else if (dev > out.max_off_diagonal) {
                out.max_off_diagonal = dev;
                out.off_row = modes[i];
                out.off_col = modes[j];
            }
        }
    }
    return out;
}

}  // namespace

AppendixRow appendix_check_row(const SourceSpec& spec, const AppendixCheckConfig& cfg) {
    const ModeSet modes = build_mode_set(spec);
    if (modes.count < 4) {
        throw ConfigError("appendix check needs delta_nu*T >= 4");
    }
    AppendixRow row;
    row.delta_nu_t = modes.count;
    row.n0 = spec.n0;
    row.allowed_deviation = kAppendixDeviationConstant * spec.n0 / spec.time_bandwidth();

    const ModalCovarianceMatrix quad = modal_covariance_matrix_numeric(spec, modes, cfg.quadrature, cfg.workers);
    row.quadrature_full = deviations(quad.value, modes, spec, false);
    row.quadrature_interior = deviations(quad.value, modes, spec, true);
    row.fitted_constant = std::max(row.quadrature_full.max_diagonal, row.quadrature_full.max_off_diagonal) *
                          spec.time_bandwidth() / spec.n0;
    row.quadrature_error = (quad.value - quad.previous).cwiseAbs().maxCoeff();
    row.panels_zeta = quad.panels_zeta;
    row.panels_tau = quad.panels_tau;
    row.center_split = modal_covariance_numeric_detail(modes.nu0_index, modes.nu0_index, spec, cfg.quadrature).split;

    const ModalEnsemble ensemble =
        synthesize_modal_ensemble(spec, modes, cfg.synthesis, cfg.realizations, cfg.seed, cfg.workers);
    const Eigen::MatrixXcd empirical = ensemble.normal_moments();
    row.realizations = ensemble.realizations();
    row.synthesis_full = deviations(empirical, modes, spec, false);
    row.synthesis_interior = deviations(empirical, modes, spec, true);
    row.max_anomalous = ensemble.anomalous_moments().cwiseAbs().maxCoeff();

    const Eigen::Index center = modes.half_width;
    const auto index_of = [&](std::int64_t m) { return static_cast<Eigen::Index>(m - modes.first); };
    struct Pick {
        const char* label;
        Eigen::Index i;
        Eigen::Index j;
    };
    const Pick picks[] = {
        {"center_diagonal", center, center},
        {"edge_diagonal", 0, 0},
        {"center_first_off_diagonal", center, center + 1},
        {"max_off_diagonal", index_of(row.quadrature_full.off_row), index_of(row.quadrature_full.off_col)},
    };
    row.synthesis_agrees = true;
    for (const auto& pick : picks) {
        ElementComparison cmp;
        cmp.label = pick.label;
        cmp.m = modes[pick.i];
        cmp.n = modes[pick.j];
        cmp.quadrature = quad.value(pick.i, pick.j).real();
        cmp.quadrature_sigma = std::abs(quad.value(pick.i, pick.j) - quad.previous(pick.i, pick.j));
        const auto boot = ensemble.normal_bootstrap(pick.i, pick.j);
        cmp.synthesis = boot.first.estimate;
        cmp.synthesis_sigma = boot.first.sigma;
        const double combined = std::hypot(cmp.quadrature_sigma, cmp.synthesis_sigma);
        cmp.z = std::abs(cmp.synthesis - cmp.quadrature) / combined;
        cmp.agrees = cmp.z <= kAgreementSigmas;
        row.synthesis_agrees = row.synthesis_agrees && cmp.agrees;
        row.comparisons.push_back(cmp);
    }

    row.diagonal_within_bound = row.quadrature_full.max_diagonal <= row.allowed_deviation;
    row.off_diagonal_within_bound = row.quadrature_full.max_off_diagonal <= row.allowed_deviation;
    return row;
}

AppendixCheck run_appendix_check(const AppendixCheckConfig& cfg) {
    if (cfg.delta_nu_t.empty()) {
        throw ConfigError("appendix check needs at least one delta_nu*T value");
    }
    AppendixCheck check;
    for (const std::int64_t product : cfg.delta_nu_t) {
        const SourceSpec spec = SourceSpec::from_occupation(
            cfg.n0, cfg.nu0, static_cast<double>(product) / cfg.observation_time, cfg.observation_time);
        check.rows.push_back(appendix_check_row(spec, cfg));
    }
    check.diagonal_decreasing = true;
    check.off_diagonal_decreasing = true;
    check.all_within_bound = true;
    check.all_agree = true;
    for (std::size_t r = 0; r < check.rows.size(); ++r) {
        const auto& row = check.rows[r];
        check.all_within_bound = check.all_within_bound && row.diagonal_within_bound && row.off_diagonal_within_bound;
        check.all_agree = check.all_agree && row.synthesis_agrees;
        if (r > 0) {
            const auto& prev = check.rows[r - 1];
            const bool grows = row.delta_nu_t > prev.delta_nu_t;
            if (grows && !(row.quadrature_full.max_diagonal < prev.quadrature_full.max_diagonal)) {
                check.diagonal_decreasing = false;
            }
            if (grows && !(row.quadrature_full.max_off_diagonal < prev.quadrature_full.max_off_diagonal)) {
                check.off_diagonal_decreasing = false;
            }
        }
    }
    return check;
}

}  // namespace qcrb::modal
