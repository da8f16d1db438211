#pragma once

#include "oalab/algebra.hpp"

namespace oalab {

/// Stock matrices used across fixtures, scenarios, and tests.

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity(Eigen::Index n);
Matrix zero(Eigen::Index n);

/// Matrix unit E_ij: 1 at (i, j), 0 elsewhere.
Matrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

/// Kronecker product, row-major block layout.
Matrix kron(const Matrix& a, const Matrix& b);

/// Standard basis ket |k> in dimension n.
Vector basis_ket(Eigen::Index n, Eigen::Index k);

/// Rank-1 projector |v><v| / <v|v>.
Matrix ket_projector(const Vector& v);

/// Two-qubit singlet (|01> - |10>) / sqrt(2).
Vector singlet_ket();

/// The four Bell-state kets, in the order phi+, phi-, psi+, psi- (singlet last).
std::vector<Vector> bell_kets();

}  // namespace oalab
