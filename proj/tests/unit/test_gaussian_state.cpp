#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "qcrb/errors.hpp"
#include "qcrb/gaussian_state.hpp"
#include "qcrb/rng.hpp"

using namespace qcrb;
using namespace qcrb::gaussian;
using physics::SourceSpec;

namespace {

using Eigen::MatrixXcd;

MatrixXcd annihilation(int dim) {
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

// Tr[rho exp(-i xi^T Omega R)] with xi^T Omega R = xi1 p - xi2 q, the
// exponential taken through the eigendecomposition of the truncated
// quadrature combination.
std::complex<double> fock_characteristic(const MatrixXcd& rho, double xi1, double xi2) {
    const int dim = static_cast<int>(rho.rows());
    const MatrixXcd a = annihilation(dim);
    const MatrixXcd q = (a + a.adjoint()) / std::sqrt(2.0);
    const MatrixXcd p = (a - a.adjoint()) / std::complex<double>(0.0, std::sqrt(2.0));
    const MatrixXcd x = xi1 * p - xi2 * q;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(x);
    const Eigen::VectorXcd phases =
        (eig.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -1.0)).array().exp();
    const MatrixXcd u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    return (rho * u).trace();
}

MatrixXcd thermal_matrix(double n0, int dim) {
    MatrixXcd rho = MatrixXcd::Zero(dim, dim);
    const auto op = thermal_density_operator(n0, dim);
    for (int k = 0; k < dim; ++k) {
        rho(k, k) = op.matrix(k, k);
    }
    return rho;
}

MatrixXcd coherent_matrix(std::complex<double> alpha, int dim) {
    Eigen::VectorXcd psi(dim);
    std::complex<double> c = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k < dim; ++k) {
        psi(k) = c;
        c *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
    return psi * psi.adjoint();
}

modal::GaussianStateDescriptor single_mode(double n0) {
    modal::GaussianStateDescriptor desc;
    desc.mean = Eigen::VectorXd::Zero(2);
    desc.blocks = {((2.0 * n0 + 1.0) / 2.0) * Eigen::Matrix2d::Identity()};
    return desc;
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("bose-einstein weights") {
    const auto rho = thermal_density_operator(1.0, 64);
    CHECK(rho.dim == 64);
    CHECK(rho.matrix(0, 0).real() == 0.5);
    CHECK(rho.matrix(1, 1).real() == 0.25);
    CHECK(rho.matrix(2, 2).real() == 0.125);
    CHECK(rho.matrix.hermiticity_error() == 0.0);
    CHECK(rho.tail_mass == doctest::Approx(std::pow(0.5, 64)));
}

TEST_CASE("trace equals one minus the tail mass") {
    for (double n0 : {0.1, 1.0, 5.0, 30.0}) {
        for (int dim : {8, 64, 300}) {
            const auto rho = thermal_density_operator(n0, dim);
            CHECK(rho.matrix.trace().real() == doctest::Approx(1.0 - rho.tail_mass).epsilon(1e-13));
            for (int k = 1; k < dim; ++k) {
                CHECK(rho.matrix(k, k).real() < rho.matrix(k - 1, k - 1).real());
            }
        }
    }
}

TEST_CASE("recommended cutoff and moment identities") {
    for (double n0 : {0.001, 0.5, 1.0, 2.0, 10.0, 20.0, 100.0}) {
        CAPTURE(n0);
        const int cutoff = recommended_cutoff(n0);
        CHECK(cutoff >= std::max(64, static_cast<int>(std::ceil(40.0 * n0))));
        CHECK(thermal_tail_mass(n0, cutoff) < kMaxTailMass);
        const auto rho = thermal_density_operator(n0, cutoff);
        CHECK_FALSE(rho.below_recommended);
        const auto number = number_operator(cutoff);
        const double mean = rho.matrix.trace_product(number).real();
        const double second = rho.matrix.trace_product(number.symmetrized_product(number)).real();
        CHECK(std::abs(mean - n0) < 1e-10 * std::max(1.0, n0));
        // Gaussian moment factoring: <N^2> = 2 n0^2 + n0.
        CHECK(std::abs(second - (2.0 * n0 * n0 + n0)) < 1e-8 * std::max(1.0, n0 * n0));
    }
    CHECK(recommended_cutoff(2.0) == 80);
    CHECK(recommended_cutoff(1.0) == 64);
}

TEST_CASE("cutoff below the floor is flagged, invalid input rejected") {
    const auto rho = thermal_density_operator(5.0, 4);
    CHECK(rho.below_recommended);
    CHECK(rho.tail_mass == doctest::Approx(std::pow(5.0 / 6.0, 4)));
    CHECK_THROWS_AS(thermal_density_operator(0.0, 64), DomainError);
    CHECK_THROWS_AS(thermal_density_operator(1.0, 1), ConfigError);
}

TEST_CASE("characteristic function basics") {
    const auto vacuum = single_mode(0.0);
    const std::vector<double> zero{0.0, 0.0};
    CHECK(characteristic_function(vacuum, zero) == std::complex<double>(1.0, 0.0));
    const std::vector<double> xi{0.7, -1.1};
    CHECK(characteristic_function(vacuum, xi).real() == doctest::Approx(std::exp(-(0.49 + 1.21) / 4.0)));
    CHECK_THROWS_AS(characteristic_function(vacuum, std::vector<double>{1.0}), ConfigError);

    rng::Stream s(3, rng::Purpose::Bootstrap, 0, 0);
    auto thermal = single_mode(3.0);
    thermal.mean << 0.4, -0.2;
    for (int i = 0; i < 1000; ++i) {
        const auto [a, b] = s.normal_pair();
        const std::vector<double> x{2.0 * a, 2.0 * b};
        CHECK(std::abs(characteristic_function(thermal, x)) <= 1.0);
    }
}

TEST_CASE("characteristic function matches the truncated Fock trace") {
    const auto desc = single_mode(1.0);
    for (double x : {0.3, 1.0}) {
        const std::vector<double> xi{x, 0.0};
        const auto analytic = characteristic_function(desc, xi);
        CHECK(analytic.real() == doctest::Approx(std::exp(-3.0 * x * x / 4.0)).epsilon(1e-14));
        const auto coarse = fock_characteristic(thermal_matrix(1.0, 128), x, 0.0);
        const auto fine = fock_characteristic(thermal_matrix(1.0, 256), x, 0.0);
        CHECK(std::abs(coarse - fine) < 1e-8);
        CHECK(std::abs(fine - analytic) < 1e-8);
    }
}

TEST_CASE("characteristic function phase convention on a displaced state") {
    // Coherent state with <q> = 1, <p> = 0.5: alpha = (q + i p) / sqrt 2.
    modal::GaussianStateDescriptor desc = single_mode(0.0);
    desc.mean << 1.0, 0.5;
    const std::complex<double> alpha(1.0 / std::sqrt(2.0), 0.5 / std::sqrt(2.0));
    for (const auto& [a, b] : {std::pair{0.3, 0.0}, std::pair{0.0, 0.8}, std::pair{-0.6, 0.45}}) {
        const std::vector<double> xi{a, b};
        const auto analytic = characteristic_function(desc, xi);
        const auto coarse = fock_characteristic(coherent_matrix(alpha, 128), a, b);
        const auto fine = fock_characteristic(coherent_matrix(alpha, 256), a, b);
        CHECK(std::abs(coarse - fine) < 1e-8);
        CHECK(std::abs(fine - analytic) < 1e-8);
    }
}

TEST_CASE("multimode thermal state") {
    const auto spec = SourceSpec::from_occupation(2.0, 1000.0, 1.0, 1.0);
    const auto single = multimode_state(spec);
    CHECK(single.mode_count == 1);
    CHECK(single.descriptor.covariance().isApprox(single_mode(2.0).covariance()));

    const auto many = multimode_state(SourceSpec::from_occupation(2.0, 1000.0, 12.0, 1.0));
    CHECK(many.mode_count == 12);
    const Eigen::MatrixXd cov = many.descriptor.covariance();
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
        for (Eigen::Index j = 0; j < cov.cols(); ++j) {
            if (i / 2 != j / 2) {
                CHECK(cov(i, j) == 0.0);
            }
        }
    }
    CHECK(many.total_mean_photons() == doctest::Approx(24.0).epsilon(1e-14));
    const auto marginal = many.mode_marginal(recommended_cutoff(2.0));
    const auto reference = thermal_density_operator(2.0, recommended_cutoff(2.0));
    CHECK((marginal.matrix - reference.matrix).max_abs() == 0.0);
}

}  // TEST_SUITE
