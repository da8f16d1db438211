#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

#include "oalab/errors.hpp"

namespace oalab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances, relative to operator norm unless stated otherwise.
/// Chosen two orders of magnitude above double-precision eigensolver noise
/// at the supported dimensions.
namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kIdempotent = 1e-10;
inline constexpr double kEigen = 1e-9;
inline constexpr double kRankCutoff = 1e-10;
inline constexpr double kTraceOne = 1e-10;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kProbabilityClip = 1e-12;
}  // namespace tol

/// Largest matrix dimension the library accepts. Everything is dense complex
/// double precision; desk-scale studies do not need more.
inline constexpr Eigen::Index kDimCap = 64;

/// Operator norm (largest singular value).
double operator_norm(const Matrix& m);

/// General element of the full matrix algebra M_n(C): a dense complex square
/// matrix. Closed under +, scalar multiple, product, and adjoint.
class DynamicalVariable {
  public:
    explicit DynamicalVariable(Matrix entries);

    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

    DynamicalVariable operator+(const DynamicalVariable& rhs) const;
    DynamicalVariable operator-(const DynamicalVariable& rhs) const;
    DynamicalVariable operator-() const { return DynamicalVariable(-entries_); }
    DynamicalVariable operator*(const DynamicalVariable& rhs) const;

    friend DynamicalVariable operator*(Complex scalar, const DynamicalVariable& v) {
        return DynamicalVariable(scalar * v.entries_);
    }
    friend DynamicalVariable operator*(double scalar, const DynamicalVariable& v) {
        return DynamicalVariable(scalar * v.entries_);
    }

  private:
    Matrix entries_;
};

/// Hermitian element of M_n(C); the measurable quantities.
class Observable {
  public:
    explicit Observable(const Matrix& entries) : Observable(DynamicalVariable(entries)) {}
    explicit Observable(DynamicalVariable value);

    Eigen::Index dim() const { return value_.dim(); }
    const Matrix& matrix() const { return value_.matrix(); }
    const DynamicalVariable& variable() const { return value_; }
    operator const DynamicalVariable&() const { return value_; }

    Observable operator+(const Observable& rhs) const;
    Observable operator-(const Observable& rhs) const;
    friend Observable operator*(double scalar, const Observable& a) {
        return Observable(scalar * a.value_);
    }

  private:
    DynamicalVariable value_;
};

/// Idempotent Hermitian element: spectrum contained in {0, 1}.
class Projector {
  public:
    explicit Projector(const Matrix& entries) : Projector(Observable(entries)) {}
    explicit Projector(Observable value);

    Eigen::Index dim() const { return value_.dim(); }
    const Matrix& matrix() const { return value_.matrix(); }
    const Observable& observable() const { return value_; }
    operator const Observable&() const { return value_; }
    operator const DynamicalVariable&() const { return value_.variable(); }

    /// trace(p), the dimension of the range (up to rounding).
    double rank_trace() const;

  private:
    Observable value_;
};

/// Conjugate transpose; an involution of the algebra.
DynamicalVariable adjoint(const DynamicalVariable& u);

/// Associative matrix product. Throws DimensionMismatch.
DynamicalVariable mul(const DynamicalVariable& u, const DynamicalVariable& v);

/// Jordan product a∘b = ((a+b)^2 - a^2 - b^2) / 2. Commutative, not
/// associative in general; equals (ab + ba) / 2.
Observable jordan_product(const Observable& a, const Observable& b);

/// All n eigenvalues of a Hermitian element, ascending, with multiplicity.
std::vector<double> spectrum(const Observable& a);

/// C*-norm: largest singular value, sqrt(max eigenvalue of u*u).
/// Satisfies the C* identity ||u*u|| = ||u||^2.
double cstar_norm(const DynamicalVariable& u);

/// True iff ||ab - ba|| <= tol * (1 + ||a|| * ||b||).
bool commutes(const Observable& a, const Observable& b, double tolerance = tol::kEigen);

/// Unique decomposition u = A + iB with A, B Hermitian:
/// A = (u + u*)/2, B = (u - u*)/(2i).
std::pair<Observable, Observable> hermitian_parts(const DynamicalVariable& u);

/// Per-clause result of checking the two structural conditions on the
/// algebra: (a) u*u is a Hermitian square A^2, (b) u*u = 0 forces u = 0
/// at numerical scale.
struct HypothesisReport {
    bool square_decomposition = false;
    double square_residual = 0.0;
    bool faithful = false;

    bool pass() const { return square_decomposition && faithful; }
};

HypothesisReport check_hypothesis(const DynamicalVariable& u);

}  // namespace oalab
