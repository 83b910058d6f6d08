#include "qcrb/fisher.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb::fisher {

namespace {

void require_estimable(double n0) {
    if (!(n0 >= physics::kMinOccupation) || !std::isfinite(n0)) {
        std::ostringstream msg;
        msg << "n0 = " << n0 << " is below the supported minimum " << physics::kMinOccupation;
        throw DomainError(msg.str());
    }
}

Eigen::VectorXd score_diagonal(double n0, int cutoff) {
    Eigen::VectorXd score(cutoff);
    for (int k = 0; k < cutoff; ++k) {
        score(k) = k / (n0 * (n0 + 1.0)) - 1.0 / (n0 + 1.0);
    }
    return score;
}

}  // namespace

HermitianOperator drho_dn0(double n0, int cutoff) {
    require_estimable(n0);
    const auto rho = gaussian::thermal_density_operator(n0, cutoff);
    return HermitianOperator::diagonal(rho.matrix.diagonal_values().cwiseProduct(score_diagonal(n0, cutoff)));
}

SLDOperator sld_analytic(double n0, int cutoff) {
    require_estimable(n0);
    if (cutoff < 2) {
        throw DomainError("Fock cutoff must be at least 2");
    }
    return {HermitianOperator::diagonal(score_diagonal(n0, cutoff))};
}

SLDSolution sld_numeric(const TruncatedDensityOperator& rho, const HermitianOperator& drho) {
    if (rho.matrix.dim() != drho.dim()) {
        throw ConfigError("rho and drho dimensions differ");
    }
    SLDSolution out;
    const Eigen::Index dim = drho.dim();

    if (rho.matrix.is_diagonal() && drho.is_diagonal()) {
        // rho is already in its eigenbasis; only i == j survives.
        const Eigen::VectorXd& lambda = rho.matrix.diagonal_values();
        const Eigen::VectorXd& d = drho.diagonal_values();
        Eigen::VectorXd l = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double denom = 2.0 * lambda(i);
            if (denom < kEigenvalueFloor) {
                ++out.dropped_pairs;
                continue;
            }
            l(i) = 2.0 * d(i) / denom;
        }
        out.sld.matrix = HermitianOperator::diagonal(std::move(l));
    } else {
        const Eigen::MatrixXcd r = rho.matrix.to_dense();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("eigendecomposition of rho failed");
        }
        const Eigen::VectorXd& lambda = solver.eigenvalues();
        const Eigen::MatrixXcd& v = solver.eigenvectors();
        const Eigen::MatrixXcd d_eigen = v.adjoint() * drho.to_dense() * v;
        Eigen::MatrixXcd l_eigen = Eigen::MatrixXcd::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                const double denom = lambda(i) + lambda(j);
                if (denom < kEigenvalueFloor) {
                    ++out.dropped_pairs;
                    continue;
                }
                l_eigen(i, j) = 2.0 * d_eigen(i, j) / denom;
            }
        }
        Eigen::MatrixXcd l = v * l_eigen * v.adjoint();
        l = 0.5 * (l + l.adjoint()).eval();
        out.sld.matrix = HermitianOperator::dense(std::move(l));
    }

    if (out.dropped_pairs > 0) {
        std::ostringstream msg;
        msg << out.dropped_pairs << " eigenvalue pair(s) with lambda_i + lambda_j < " << kEigenvalueFloor
            << " excluded from the SLD (truncated eigenspace)";
        out.notice = msg.str();
    }
    const HermitianOperator lyapunov = out.sld.matrix.symmetrized_product(rho.matrix);
    out.residual = (lyapunov - drho).max_abs();
    return out;
}

double qfi_single_mode(double n0) {
    require_estimable(n0);
    return 1.0 / (n0 * (n0 + 1.0));
}

double qfi_numeric(const TruncatedDensityOperator& rho, const SLDOperator& sld) {
    if (rho.matrix.dim() != sld.matrix.dim()) {
        throw ConfigError("rho and SLD dimensions differ");
    }
    std::complex<double> value;
    if (rho.matrix.is_diagonal() && sld.matrix.is_diagonal()) {
        const auto& l = sld.matrix.diagonal_values();
        value = rho.matrix.diagonal_values().dot(l.cwiseProduct(l));
    } else {
        const Eigen::MatrixXcd l = sld.matrix.to_dense();
        value = (rho.matrix.to_dense() * l * l).trace();
    }
    if (std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value.real()))) {
        std::ostringstream msg;
        msg << "Tr(rho L^2) has imaginary part " << value.imag();
        throw NumericalError(msg.str());
    }
    return value.real();
}

double qfi_total(const SourceSpec& spec) {
    require_estimable(spec.n0);
    return spec.time_bandwidth() / (spec.n0 * (spec.n0 + 1.0));
}

BoundReport bound_report(const SourceSpec& spec) {
    require_estimable(spec.n0);
    const double product = spec.time_bandwidth();
    BoundReport report;
    report.qfi_single = qfi_single_mode(spec.n0);
    report.qfi_total = qfi_total(spec);
    report.var_bound = spec.n0 * (spec.n0 + 1.0) / product;
    report.rel_sens_bound = (spec.n0 + 1.0) / (spec.n0 * product);
    report.temp_rel_sens_bound = (1.0 + spec.quantum_ratio()) / product;
    return report;
}

CompetitorSensitivities competitor_sensitivities(const SourceSpec& spec, std::optional<double> sample_time) {
    require_estimable(spec.n0);
    const double product = spec.time_bandwidth();
    CompetitorSensitivities out;
    out.radiometer = 1.0 / product;
    out.zmuidzinas = (spec.n0 + 1.0) / (spec.n0 * product);
    if (sample_time) {
        if (!(*sample_time > 0.0)) {
            throw DomainError("sample time T_samp must be positive");
        }
        out.lkd_claimed = 5.0 * *sample_time / spec.observation_time + 1.0 / (spec.n0 * product);
        out.lkd_regime_valid = *sample_time < spec.tau_c;
    }
    return out;
}

std::vector<SweepPoint> bound_sweep(const SourceSpec& base, SweepAxis axis, double low, double high, int points,
                                    std::optional<double> sample_time) {
    if (points < 2 || !(low > 0.0) || !(high > low)) {
        throw ConfigError("sweep needs points >= 2 and 0 < low < high");
    }
    std::vector<SweepPoint> out;
    out.reserve(static_cast<std::size_t>(points));
    const double log_low = std::log(low);
    const double step = (std::log(high) - log_low) / (points - 1);
    for (int i = 0; i < points; ++i) {
        // Endpoints exactly as requested, interior points log-spaced.
        const double value = i == 0 ? low : i == points - 1 ? high : std::exp(log_low + step * i);
        const SourceSpec spec =
            axis == SweepAxis::Occupation
                ? SourceSpec::from_occupation(value, base.nu0, base.delta_nu, base.observation_time)
                : SourceSpec::from_occupation(base.n0, base.nu0, base.delta_nu, value);
        out.push_back({spec, bound_report(spec), competitor_sensitivities(spec, sample_time)});
    }
    return out;
}

QfiCheck qfi_check(double n0, std::optional<int> fixed_cutoff) {
    require_estimable(n0);
    const double analytic = qfi_single_mode(n0);
    int cutoff = fixed_cutoff.value_or(gaussian::recommended_cutoff(n0));
    constexpr int kMaxCutoff = 1 << 22;

    for (;;) {
        QfiCheck row;
        row.n0 = n0;
        row.cutoff = cutoff;
        const auto rho = gaussian::thermal_density_operator(n0, cutoff);
        const auto drho = drho_dn0(n0, cutoff);
        const auto solution = sld_numeric(rho, drho);
        const auto reference = sld_analytic(n0, cutoff);

        row.tail_mass = rho.tail_mass;
        row.qfi_analytic = analytic;
        row.qfi_numeric = qfi_numeric(rho, solution.sld);
        row.qfi_relative_error = std::abs(row.qfi_numeric - analytic) / analytic;
        row.sld_residual = solution.residual;
        row.dropped_pairs = solution.dropped_pairs;

        // Entries dropped by the regularization are excluded from the comparison.
        double deviation = 0.0;
        const Eigen::Index dim = cutoff;
        for (Eigen::Index k = 0; k < dim; ++k) {
            const bool dropped = 2.0 * std::real(rho.matrix(k, k)) < kEigenvalueFloor;
            if (!dropped) {
                deviation = std::max(deviation, std::abs(solution.sld.matrix(k, k) - reference.matrix(k, k)));
            }
        }
        if (!solution.sld.matrix.is_diagonal()) {
            deviation = std::max(deviation, (solution.sld.matrix - reference.matrix).max_abs());
        }
        row.sld_max_deviation = deviation;
        row.score_mean = std::abs(rho.matrix.trace_product(solution.sld.matrix));
        row.drho_trace = std::abs(drho.trace());
        row.escalated = !fixed_cutoff && cutoff != gaussian::recommended_cutoff(n0);
        row.passed = row.qfi_relative_error <= kQfiRelativeTolerance && row.sld_max_deviation <= kSldEntryTolerance &&
                     row.sld_residual < kLyapunovResidualTolerance;

        if (row.passed || fixed_cutoff) {
            return row;
        }
        if (cutoff >= kMaxCutoff) {
            std::ostringstream msg;
            msg << "QFI check at n0 = " << n0 << " failed up to cutoff " << cutoff << " (relative error "
                << row.qfi_relative_error << ")";
            throw NumericalError(msg.str());
        }
        cutoff *= 2;
    }
}

}  // namespace qcrb::fisher
