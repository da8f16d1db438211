#include "oalab/random_matrices.hpp"

#include <cmath>

namespace oalab {

Matrix random_ginibre(RandomStream& rng, Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = rng.normal_complex();
        }
    }
    return m;
}

Matrix random_hermitian(RandomStream& rng, Eigen::Index n) {
    const Matrix g = random_ginibre(rng, n);
    return 0.5 * (g + g.adjoint().eval());
}

Matrix random_unitary(RandomStream& rng, Eigen::Index n) {
    const Matrix g = random_ginibre(rng, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        q.col(k) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

Matrix random_density(RandomStream& rng, Eigen::Index n, Eigen::Index rank,
                      double eigen_floor) {
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
    double total = 0.0;
    for (Eigen::Index k = 0; k < rank; ++k) {
        weights(k) = rng.uniform() + eigen_floor;
        total += weights(k);
    }
    weights /= total;
    const Matrix u = random_unitary(rng, n);
    return u * weights.asDiagonal() * u.adjoint();
}

}  // namespace oalab
