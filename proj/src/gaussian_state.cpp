#include "qcrb/gaussian_state.hpp"

#include <cmath>
#include <string>

#include "qcrb/errors.hpp"

namespace qcrb::gaussian {

namespace {

void require_positive_occupation(double n0) {
    if (!(n0 > 0.0) || !std::isfinite(n0)) {
        throw DomainError("occupation n0 must be positive and finite, got " + std::to_string(n0));
    }
}

}  // namespace

double thermal_tail_mass(double n0, int cutoff) {
    require_positive_occupation(n0);
    // (n0/(n0+1))^D = exp(-D log1p(1/n0)) keeps precision for large n0.
    return std::exp(-static_cast<double>(cutoff) * std::log1p(1.0 / n0));
}

int recommended_cutoff(double n0) {
    require_positive_occupation(n0);
    int cutoff = std::max(64, static_cast<int>(std::ceil(40.0 * n0)));
    while (thermal_tail_mass(n0, cutoff) >= kMaxTailMass) {
        cutoff *= 2;
    }
    return cutoff;
}

TruncatedDensityOperator thermal_density_operator(double n0, int cutoff) {
    require_positive_occupation(n0);
    if (cutoff < 2) {
        throw DomainError("Fock cutoff must be at least 2");
    }
    const double log_ratio = -std::log1p(1.0 / n0);  // log(n0/(n0+1))
    Eigen::VectorXd weights(cutoff);
    for (int k = 0; k < cutoff; ++k) {
        weights(k) = std::exp(k * log_ratio) / (n0 + 1.0);
    }
    TruncatedDensityOperator rho;
    rho.dim = cutoff;
    rho.matrix = HermitianOperator::diagonal(std::move(weights));
    rho.tail_mass = thermal_tail_mass(n0, cutoff);
    rho.below_recommended = cutoff < std::max(64, static_cast<int>(std::ceil(40.0 * n0)));
    return rho;
}

HermitianOperator number_operator(int cutoff) {
    return HermitianOperator::diagonal(Eigen::VectorXd::LinSpaced(cutoff, 0.0, cutoff - 1.0));
}

std::complex<double> characteristic_function(const GaussianStateDescriptor& desc, std::span<const double> xi) {
    const auto modes = static_cast<std::size_t>(desc.mode_count());
    if (xi.size() != 2 * modes || static_cast<std::size_t>(desc.mean.size()) != 2 * modes) {
        throw ConfigError("characteristic function: xi must have length 2M");
    }
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t b = 0; b < modes; ++b) {
        const double x1 = xi[2 * b];
        const double x2 = xi[2 * b + 1];
        // xi^T omega Rbar with omega = [[0, 1], [-1, 0]]
        linear += x1 * desc.mean(2 * b + 1) - x2 * desc.mean(2 * b);
        // y = omega^T xi = (-x2, x1)
        const Eigen::Vector2d y(-x2, x1);
        quadratic += y.dot(desc.blocks[b] * y);
    }
    return std::exp(std::complex<double>(-0.5 * quadratic, -linear));
}

double MultimodeThermalState::total_mean_photons() const {
    // <a^dagger a> = (sigma_qq + sigma_pp - 1) / 2 per mode.
    double total = 0.0;
    for (const auto& block : descriptor.blocks) {
        total += 0.5 * (block.trace() - 1.0);
    }
    return total;
}

TruncatedDensityOperator MultimodeThermalState::mode_marginal(int cutoff) const {
    return thermal_density_operator(n0, cutoff);
}

MultimodeThermalState multimode_state(const SourceSpec& spec) {
    const auto modes = modal::build_mode_set(spec);
    return {spec.n0, modes.count, modal::assemble_covariance(spec, modes)};
}

}  // namespace qcrb::gaussian
