#include "oalab/algebra.hpp"

#include <cmath>
#include <string>

namespace oalab {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* op) {
    if (a != b) {
        throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a) +
                                " and " + std::to_string(b) + " differ");
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eigen(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("Hermitian eigendecomposition did not converge");
    }
    return solver;
}

}  // namespace

double operator_norm(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.adjoint() * m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("operator norm: eigenvalue iteration did not converge");
    }
    const double top = solver.eigenvalues().maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

DynamicalVariable::DynamicalVariable(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw DimensionMismatch("dynamical variable must be a square matrix, got " +
                                std::to_string(entries_.rows()) + "x" +
                                std::to_string(entries_.cols()));
    }
    if (entries_.rows() > kDimCap) {
        throw DimensionMismatch("dimension " + std::to_string(entries_.rows()) +
                                " exceeds the cap of " + std::to_string(kDimCap));
    }
}

DynamicalVariable DynamicalVariable::operator+(const DynamicalVariable& rhs) const {
    require_same_dim(dim(), rhs.dim(), "add");
    return DynamicalVariable(entries_ + rhs.entries_);
}

DynamicalVariable DynamicalVariable::operator-(const DynamicalVariable& rhs) const {
    require_same_dim(dim(), rhs.dim(), "subtract");
    return DynamicalVariable(entries_ - rhs.entries_);
}

DynamicalVariable DynamicalVariable::operator*(const DynamicalVariable& rhs) const {
    return mul(*this, rhs);
}

Observable::Observable(DynamicalVariable value) : value_(std::move(value)) {
    const Matrix& m = value_.matrix();
    const double deviation = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
    // Frobenius norm bounds the operator norm from above, so this scaling is
    // at least as permissive as the operator-norm contract.
    const double scale = std::max(1.0, m.norm());
    if (deviation > tol::kHermitian * scale) {
        throw NotHermitian("observable is not Hermitian: max|m - m*| = " +
                           std::to_string(deviation));
    }
}

Observable Observable::operator+(const Observable& rhs) const {
    return Observable(value_ + rhs.value_);
}

Observable Observable::operator-(const Observable& rhs) const {
    return Observable(value_ - rhs.value_);
}

Projector::Projector(Observable value) : value_(std::move(value)) {
    const Matrix& p = value_.matrix();
    const double idem = operator_norm(p * p - p);
    if (idem > tol::kIdempotent) {
        throw NotAProjector("not idempotent: ||p^2 - p|| = " + std::to_string(idem));
    }
    for (double lambda : spectrum(value_)) {
        if (std::abs(lambda) > tol::kEigen && std::abs(lambda - 1.0) > tol::kEigen) {
            throw NotAProjector("projector eigenvalue " + std::to_string(lambda) +
                                " is neither 0 nor 1");
        }
    }
}

double Projector::rank_trace() const {
    return matrix().trace().real();
}

DynamicalVariable adjoint(const DynamicalVariable& u) {
    return DynamicalVariable(u.matrix().adjoint());
}

DynamicalVariable mul(const DynamicalVariable& u, const DynamicalVariable& v) {
    require_same_dim(u.dim(), v.dim(), "mul");
    return DynamicalVariable(u.matrix() * v.matrix());
}

Observable jordan_product(const Observable& a, const Observable& b) {
    require_same_dim(a.dim(), b.dim(), "jordan_product");
    const Matrix& ma = a.matrix();
    const Matrix& mb = b.matrix();
    const Matrix sum = ma + mb;
    return Observable(0.5 * (sum * sum - ma * ma - mb * mb));
}

std::vector<double> spectrum(const Observable& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("spectrum: eigenvalue iteration did not converge");
    }
    const auto& values = solver.eigenvalues();
    return std::vector<double>(values.data(), values.data() + values.size());
}

double cstar_norm(const DynamicalVariable& u) {
    return operator_norm(u.matrix());
}

bool commutes(const Observable& a, const Observable& b, double tolerance) {
    require_same_dim(a.dim(), b.dim(), "commutes");
    const Matrix commutator = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    const double bound = tolerance * (1.0 + cstar_norm(a) * cstar_norm(b));
    return operator_norm(commutator) <= bound;
}

std::pair<Observable, Observable> hermitian_parts(const DynamicalVariable& u) {
    const Matrix& m = u.matrix();
    const Matrix star = m.adjoint();
    Observable real_part(0.5 * (m + star));
    Observable imag_part(Complex(0.0, -0.5) * (m - star));
    return {std::move(real_part), std::move(imag_part)};
}

HypothesisReport check_hypothesis(const DynamicalVariable& u) {
    HypothesisReport report;

    const Matrix product = u.matrix().adjoint() * u.matrix();
    const auto solver = hermitian_eigen(product);
    const auto& lambda = solver.eigenvalues();
    const double top = std::max(lambda.maxCoeff(), 0.0);
    const double scale = std::max(1.0, top);

    // (a) u*u must be positive semidefinite, hence the square of the
    // Hermitian principal root.
    const bool psd = lambda.minCoeff() >= -tol::kEigen * scale;
    Eigen::VectorXd roots = lambda.cwiseMax(0.0).cwiseSqrt();
    const Matrix root =
        solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
    report.square_residual = operator_norm(root * root - product);
    report.square_decomposition = psd && report.square_residual <= tol::kEigen * scale;

    // (b) faithfulness at numerical scale: ||u*u|| ~ 0 forces ||u|| ~ 0.
    // u*u is Hermitian PSD, so its operator norm is its top eigenvalue.
    report.faithful = top > 1e-12 || cstar_norm(u) <= 1e-6;

    return report;
}

}  // namespace oalab
