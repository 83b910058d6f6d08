#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qcrb {

/// A Hermitian operator on a truncated Fock space.
///
/// Diagonal operators (the whole thermal family) are stored as their real
/// diagonal so that cutoffs in the thousands stay O(D); anything else is a
/// dense complex matrix.
class HermitianOperator {
public:
    HermitianOperator() = default;

    static HermitianOperator diagonal(Eigen::VectorXd values);
    /// Stores `matrix` as given; callers are responsible for hermiticity,
    /// which hermiticity_error() reports.
    static HermitianOperator dense(Eigen::MatrixXcd matrix);

    Eigen::Index dim() const { return is_diagonal_ ? diag_.size() : dense_.rows(); }
    bool is_diagonal() const { return is_diagonal_; }

    /// Only valid when is_diagonal().
    const Eigen::VectorXd& diagonal_values() const { return diag_; }
    Eigen::MatrixXcd to_dense() const;

    std::complex<double> operator()(Eigen::Index i, Eigen::Index j) const;
    std::complex<double> trace() const;
    /// max |A - A^dagger|.
    double hermiticity_error() const;
    double max_abs() const;

    /// (A B + B A) / 2.
    HermitianOperator symmetrized_product(const HermitianOperator& other) const;
    /// Tr(A B).
    std::complex<double> trace_product(const HermitianOperator& other) const;
    /// A B - B A as a dense matrix (anti-Hermitian in general).
    Eigen::MatrixXcd commutator(const HermitianOperator& other) const;

    HermitianOperator operator-(const HermitianOperator& other) const;

private:
    bool is_diagonal_ = true;
    Eigen::VectorXd diag_;
    Eigen::MatrixXcd dense_;
};

}  // namespace qcrb
