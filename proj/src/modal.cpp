#include "qcrb/modal.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <string>

#include "qcrb/errors.hpp"
#include "qcrb/parallel.hpp"
#include "qcrb/quadrature.hpp"

namespace qcrb::modal {

using physics::kPi;
using physics::sinc;

namespace {

bool is_integral(double x) {
    return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

// nu0 T as a real number, snapped to the nearest integer when it is one.
double center_index(const SourceSpec& spec) {
    const double raw = spec.nu0 * spec.observation_time;
    return is_integral(raw) ? std::round(raw) : raw;
}

// Work in units of T: u = zeta / T in [-1, 1], v = tau / T in [0, 1].
// With s = (m + n) - 2 nu0 T and d = m - n the covariance is
//   n0 M/2 * int du exp(-i pi d u) G_s(1 - |u|),
//   G_s(L) = int_{-L}^{L} sinc(M v) exp(i pi s v) dv = 2 int_0^L sinc(M v) cos(pi s v) dv,
// where M = delta_nu T is real-valued. The sine part of the inner integrand is
// odd on a symmetric interval and drops out.
class InnerCumulative {
public:
    InnerCumulative(double bandwidth_product, double s, int panels)
        : m_(bandwidth_product), s_(s), panels_(panels), cum_(static_cast<std::size_t>(panels) + 1, 0.0) {
        const double width = 1.0 / panels;
        for (int p = 0; p < panels; ++p) {
            cum_[p + 1] = cum_[p] + segment(p * width, (p + 1) * width);
        }
    }

    double operator()(double length) const {
        if (length <= 0.0) {
            return 0.0;
        }
        const double width = 1.0 / panels_;
        int p = static_cast<int>(std::floor(length / width));
        p = std::clamp(p, 0, panels_);
        const double start = p * width;
        double value = cum_[p];
        if (length > start) {
            value += segment(start, length);
        }
        return 2.0 * value;
    }

private:
    double integrand(double v) const { return sinc(m_ * v) * std::cos(kPi * s_ * v); }

    double segment(double a, double b) const {
        const auto& rule = quadrature::gauss_legendre();
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (int g = 0; g < quadrature::kGaussOrder; ++g) {
            sum += rule.weights[g] * integrand(mid + half * rule.nodes[g]);
        }
        return sum * half;
    }

    double m_;
    double s_;
    int panels_;
    std::vector<double> cum_;
};

enum Segment : int { kHead = 0, kMiddle = 1, kTail = 2 };

struct OuterGrid {
    std::vector<double> u;
    std::vector<double> w;
    std::vector<int> segment;
};

OuterGrid make_outer_grid(double split, int panels) {
    OuterGrid grid;
    const auto& rule = quadrature::gauss_legendre();
    auto add = [&](double a, double b, int seg) {
        if (!(b > a)) {
            return;
        }
        const double width = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * width;
            for (int g = 0; g < quadrature::kGaussOrder; ++g) {
                grid.u.push_back(mid + 0.5 * width * rule.nodes[g]);
                grid.w.push_back(0.5 * width * rule.weights[g]);
                grid.segment.push_back(seg);
            }
        }
    };
    add(-1.0, -split, kHead);
    add(-split, 0.0, kMiddle);
    add(0.0, split, kMiddle);
    add(split, 1.0, kTail);
    return grid;
}

struct Geometry {
    double n0;
    double bandwidth_product;  // M = delta_nu T, real
    double split;              // 1 - c / M, clamped to [0, 1]
    double end_bound;          // n0 c^2 / M
};

Geometry make_geometry(const SourceSpec& spec, const AppendixQuadratureConfig& cfg) {
    const double product = spec.time_bandwidth();
    return {spec.n0, product, std::clamp(1.0 - cfg.c / product, 0.0, 1.0),
            spec.n0 * cfg.c * cfg.c / product};
}

std::vector<double> inner_at_nodes(const OuterGrid& grid, const InnerCumulative& inner) {
    std::vector<double> values(grid.u.size());
    for (std::size_t i = 0; i < grid.u.size(); ++i) {
        values[i] = inner(1.0 - std::abs(grid.u[i]));
    }
    return values;
}

std::vector<std::complex<double>> outer_phase(const OuterGrid& grid, double d) {
    std::vector<std::complex<double>> phase(grid.u.size());
    for (std::size_t i = 0; i < grid.u.size(); ++i) {
        const double arg = kPi * d * grid.u[i];
        phase[i] = {grid.w[i] * std::cos(arg), -grid.w[i] * std::sin(arg)};
    }
    return phase;
}

AppendixSplit evaluate_split(const Geometry& geo, const OuterGrid& grid, const std::vector<double>& inner,
                             const std::vector<std::complex<double>>& phase) {
    std::complex<double> parts[3] = {};
    for (std::size_t i = 0; i < grid.u.size(); ++i) {
        parts[grid.segment[i]] += inner[i] * phase[i];
    }
    const double prefactor = 0.5 * geo.n0 * geo.bandwidth_product;
    return {prefactor * parts[kHead], prefactor * parts[kMiddle], prefactor * parts[kTail], geo.end_bound};
}

double convergence_scale(const Geometry& geo, std::complex<double> value) {
    return std::max(std::abs(value), geo.n0 / geo.bandwidth_product);
}

}  // namespace

std::vector<std::int64_t> ModeSet::indices() const {
    std::vector<std::int64_t> out(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = first + i;
    }
    return out;
}

ModeSet build_mode_set(const SourceSpec& spec) {
    const double center = spec.nu0 * spec.observation_time;
    const double width = spec.time_bandwidth();
    if (!is_integral(center) || !is_integral(width)) {
        std::ostringstream msg;
        msg << "mode set needs integral nu0*T and delta_nu*T, got " << center << " and " << width;
        throw ConfigError(msg.str());
    }
    ModeSet set;
    set.nu0_index = std::llround(center);
    set.count = std::llround(width);
    if (set.count < 1) {
        throw ConfigError("mode set needs delta_nu*T >= 1");
    }
    set.half_width = set.count / 2;
    set.first = set.nu0_index - set.half_width;
    set.odd_split = set.count % 2 != 0;
    return set;
}

Eigen::MatrixXd GaussianStateDescriptor::covariance() const {
    const Eigen::Index n = 2 * mode_count();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index b = 0; b < mode_count(); ++b) {
        cov.block<2, 2>(2 * b, 2 * b) = blocks[static_cast<std::size_t>(b)];
    }
    return cov;
}

double GaussianStateDescriptor::min_covariance_eigenvalue() const {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& block : blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(block, Eigen::EigenvaluesOnly);
        lowest = std::min(lowest, solver.eigenvalues().minCoeff());
    }
    return lowest;
}

bool GaussianStateDescriptor::is_physical(double tolerance) const {
    Eigen::Matrix2cd omega_half;
    omega_half << 0.0, std::complex<double>(0.0, 0.5), std::complex<double>(0.0, -0.5), 0.0;
    for (const auto& block : blocks) {
        if ((block - block.transpose()).cwiseAbs().maxCoeff() > tolerance) {
            return false;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> real_solver(block, Eigen::EigenvaluesOnly);
        if (real_solver.eigenvalues().minCoeff() <= 0.0) {
            return false;
        }
        const Eigen::Matrix2cd shifted = block.cast<std::complex<double>>() + omega_half;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(shifted, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -tolerance) {
            return false;
        }
    }
    return true;
}

GaussianStateDescriptor assemble_covariance(double n0, const ModeSet& modes) {
    if (!(n0 >= 0.0) || !std::isfinite(n0)) {
        throw DomainError("occupation must be non-negative and finite");
    }
    GaussianStateDescriptor desc;
    desc.mean = Eigen::VectorXd::Zero(2 * modes.count);
    desc.blocks.assign(static_cast<std::size_t>(modes.count),
                       Eigen::Matrix2d::Identity() * ((2.0 * n0 + 1.0) / 2.0));
    return desc;
}

GaussianStateDescriptor assemble_covariance(const SourceSpec& spec, const ModeSet& modes) {
    return assemble_covariance(spec.n0, modes);
}

void AppendixQuadratureConfig::validate() const {
    if (!(c >= 1.0)) {
        throw ConfigError("appendix split constant c must be >= 1");
    }
    if (panels_zeta < 32 || panels_tau < 32) {
        throw ConfigError("quadrature panel counts must be >= 32");
    }
    if (max_doublings < 1 || !(rel_tol > 0.0)) {
        throw ConfigError("quadrature needs max_doublings >= 1 and rel_tol > 0");
    }
}

ModalCovariance modal_covariance_numeric_detail(std::int64_t m, std::int64_t n, const SourceSpec& spec,
                                                const AppendixQuadratureConfig& cfg) {
    cfg.validate();
    const Geometry geo = make_geometry(spec, cfg);
    const double center = center_index(spec);
    const double s = (static_cast<double>(m) - center) + (static_cast<double>(n) - center);
    const double d = static_cast<double>(m - n);

    ModalCovariance out;
    bool have_previous = false;
    for (int level = 0; level <= cfg.max_doublings; ++level) {
        const int pz = cfg.panels_zeta << level;
        const int pt = cfg.panels_tau << level;
        const OuterGrid grid = make_outer_grid(geo.split, pz);
        const InnerCumulative inner(geo.bandwidth_product, s, pt);
        const AppendixSplit split = evaluate_split(geo, grid, inner_at_nodes(grid, inner), outer_phase(grid, d));
        const std::complex<double> value = split.head + split.middle + split.tail;
        if (have_previous) {
            out.previous = out.value;
        }
        out.value = value;
        out.split = split;
        out.panels_zeta = pz;
        out.panels_tau = pt;
        if (have_previous && std::abs(out.value - out.previous) <= cfg.rel_tol * convergence_scale(geo, value)) {
            return out;
        }
        have_previous = true;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "modal covariance (" << m << ", " << n << ") did not converge; last iterates " << out.previous
        << " and " << out.value;
    throw NumericalError(msg.str());
}

std::complex<double> modal_covariance_numeric(std::int64_t m, std::int64_t n, const SourceSpec& spec,
                                              const AppendixQuadratureConfig& cfg) {
    return modal_covariance_numeric_detail(m, n, spec, cfg).value;
}

ModalCovarianceMatrix modal_covariance_matrix_numeric(const SourceSpec& spec, const ModeSet& modes,
                                                      const AppendixQuadratureConfig& cfg, unsigned workers) {
    cfg.validate();
    const Geometry geo = make_geometry(spec, cfg);
    const double center = center_index(spec);
    const auto count = static_cast<Eigen::Index>(modes.count);
    const double base = static_cast<double>(modes.first) - center;
    const double prefactor = 0.5 * geo.n0 * geo.bandwidth_product;

    // s = 2 base + i + j takes 2M - 1 values, d = i - j likewise.
    const auto sums = static_cast<std::size_t>(2 * count - 1);

    ModalCovarianceMatrix out;
    bool have_previous = false;
    for (int level = 0; level <= cfg.max_doublings; ++level) {
        const int pz = cfg.panels_zeta << level;
        const int pt = cfg.panels_tau << level;
        const OuterGrid grid = make_outer_grid(geo.split, pz);

        std::vector<std::vector<double>> inner(sums);
        std::vector<std::vector<std::complex<double>>> phase(sums);
        parallel_for(sums, workers, [&](std::size_t k) {
            const double s = 2.0 * base + static_cast<double>(k);
            inner[k] = inner_at_nodes(grid, InnerCumulative(geo.bandwidth_product, s, pt));
            const double d = static_cast<double>(k) - static_cast<double>(count - 1);
            phase[k] = outer_phase(grid, d);
        });

        Eigen::MatrixXcd value(count, count);
        parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t row) {
            const auto i = static_cast<Eigen::Index>(row);
            for (Eigen::Index j = 0; j < count; ++j) {
                const auto& g = inner[static_cast<std::size_t>(i + j)];
                const auto& ph = phase[static_cast<std::size_t>(i - j + count - 1)];
                std::complex<double> sum = 0.0;
                for (std::size_t q = 0; q < g.size(); ++q) {
                    sum += g[q] * ph[q];
                }
                value(i, j) = prefactor * sum;
            }
        });

        if (have_previous) {
            out.previous = std::move(out.value);
        }
        out.value = std::move(value);
        out.panels_zeta = pz;
        out.panels_tau = pt;
        if (have_previous) {
            bool converged = true;
            for (Eigen::Index i = 0; i < count && converged; ++i) {
                for (Eigen::Index j = 0; j < count; ++j) {
                    if (std::abs(out.value(i, j) - out.previous(i, j)) >
                        cfg.rel_tol * convergence_scale(geo, out.value(i, j))) {
                        converged = false;
                        break;
                    }
                }
            }
            if (converged) {
                return out;
            }
        }
        have_previous = true;
    }
    Eigen::Index wi = 0;
    Eigen::Index wj = 0;
    (out.value - out.previous).cwiseAbs().maxCoeff(&wi, &wj);
    std::ostringstream msg;
    msg.precision(17);
    msg << "modal covariance matrix did not converge; worst element (" << modes[wi] << ", " << modes[wj]
        << ") last iterates " << out.previous(wi, wj) << " and " << out.value(wi, wj);
    throw NumericalError(msg.str());
}

std::complex<double> modal_covariance_asymptotic(std::int64_t m, std::int64_t n, const SourceSpec& spec) {
    if (m != n) {
        return 0.0;
    }
    // |nu0 - m/T| <= delta_nu/2  <=>  |nu0 T - m| <= delta_nu T / 2, compared in index units.
    const double offset = std::abs(center_index(spec) - static_cast<double>(m));
    const double half = 0.5 * spec.time_bandwidth();
    const bool inside = offset <= half * (1.0 + 1e-12);
    return inside ? spec.n0 : 0.0;
}

}  // namespace qcrb::modal
