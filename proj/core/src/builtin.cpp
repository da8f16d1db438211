#include "oalab/builtin.hpp"

#include <cmath>

namespace oalab {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix identity(Eigen::Index n) {
    return Matrix::Identity(n, n);
}

Matrix zero(Eigen::Index n) {
    return Matrix::Zero(n, n);
}

Matrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector basis_ket(Eigen::Index n, Eigen::Index k) {
    Vector v = Vector::Zero(n);
    v(k) = 1.0;
    return v;
}

Matrix ket_projector(const Vector& v) {
    const double norm2 = v.squaredNorm();
    return (v * v.adjoint()) / norm2;
}

Vector singlet_ket() {
    Vector v = Vector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return v;
}

std::vector<Vector> bell_kets() {
    const double s = 1.0 / std::sqrt(2.0);
    Vector phi_plus = Vector::Zero(4);
    phi_plus(0) = s;
    phi_plus(3) = s;
    Vector phi_minus = Vector::Zero(4);
    phi_minus(0) = s;
    phi_minus(3) = -s;
    Vector psi_plus = Vector::Zero(4);
    psi_plus(1) = s;
    psi_plus(2) = s;
    Vector psi_minus = singlet_ket();
    return {phi_plus, phi_minus, psi_plus, psi_minus};
}

}  // namespace oalab
