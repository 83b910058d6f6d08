#include "qcrb/hermitian_operator.hpp"

#include "qcrb/errors.hpp"

namespace qcrb {

namespace {

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) {
        throw ConfigError("operator dimension mismatch");
    }
}

}  // namespace

HermitianOperator HermitianOperator::diagonal(Eigen::VectorXd values) {
    HermitianOperator op;
    op.is_diagonal_ = true;
    op.diag_ = std::move(values);
    return op;
}

HermitianOperator HermitianOperator::dense(Eigen::MatrixXcd matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw ConfigError("operator matrix must be square");
    }
    HermitianOperator op;
    op.is_diagonal_ = false;
    op.dense_ = std::move(matrix);
    return op;
}

Eigen::MatrixXcd HermitianOperator::to_dense() const {
    if (!is_diagonal_) {
        return dense_;
    }
    return diag_.cast<std::complex<double>>().asDiagonal();
}

std::complex<double> HermitianOperator::operator()(Eigen::Index i, Eigen::Index j) const {
    if (!is_diagonal_) {
        return dense_(i, j);
    }
    return i == j ? std::complex<double>(diag_(i), 0.0) : std::complex<double>(0.0, 0.0);
}

std::complex<double> HermitianOperator::trace() const {
    return is_diagonal_ ? std::complex<double>(diag_.sum(), 0.0) : dense_.trace();
}

double HermitianOperator::hermiticity_error() const {
    if (is_diagonal_ || dense_.size() == 0) {
        return 0.0;
    }
    return (dense_ - dense_.adjoint()).cwiseAbs().maxCoeff();
}

double HermitianOperator::max_abs() const {
    if (dim() == 0) {
        return 0.0;
    }
    return is_diagonal_ ? diag_.cwiseAbs().maxCoeff() : dense_.cwiseAbs().maxCoeff();
}

HermitianOperator HermitianOperator::symmetrized_product(const HermitianOperator& other) const {
    require_same_dim(*this, other);
    if (is_diagonal_ && other.is_diagonal_) {
        return diagonal(diag_.cwiseProduct(other.diag_));
    }
    const Eigen::MatrixXcd a = to_dense();
    const Eigen::MatrixXcd b = other.to_dense();
    return dense(0.5 * (a * b + b * a));
}

std::complex<double> HermitianOperator::trace_product(const HermitianOperator& other) const {
    require_same_dim(*this, other);
    if (is_diagonal_ && other.is_diagonal_) {
        return {diag_.dot(other.diag_), 0.0};
    }
    if (is_diagonal_) {
        return (diag_.cast<std::complex<double>>().array() * other.dense_.diagonal().array()).sum();
    }
    if (other.is_diagonal_) {
        return (dense_.diagonal().array() * other.diag_.cast<std::complex<double>>().array()).sum();
    }
    // Tr(AB) = sum_ij A_ij B_ji
    return (dense_.array() * other.dense_.transpose().array()).sum();
}

Eigen::MatrixXcd HermitianOperator::commutator(const HermitianOperator& other) const {
    require_same_dim(*this, other);
    if (is_diagonal_ && other.is_diagonal_) {
        return Eigen::MatrixXcd::Zero(dim(), dim());
    }
    const Eigen::MatrixXcd a = to_dense();
    const Eigen::MatrixXcd b = other.to_dense();
    return a * b - b * a;
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
    require_same_dim(*this, other);
    if (is_diagonal_ && other.is_diagonal_) {
        return diagonal(diag_ - other.diag_);
    }
    return dense(to_dense() - other.to_dense());
}

}  // namespace qcrb
