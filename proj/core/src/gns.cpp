#include "oalab/gns.hpp"

#include <cmath>

#include "oalab/builtin.hpp"
#include "oalab/random_matrices.hpp"

namespace oalab {

namespace {

// Row-major vectorization: element (i, j) lands at slot i*n + j.
Vector vectorize(const Matrix& m) {
    const Eigen::Index n = m.rows();
    Vector v(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v.segment(i * n, n) = m.row(i).transpose();
    }
    return v;
}

Matrix devectorize(const Vector& v, Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m.row(i) = v.segment(i * n, n).transpose();
    }
    return m;
}

}  // namespace

Vector GnsRepresentation::to_quotient(const DynamicalVariable& u) const {
    if (u.dim() != n_) {
        throw DimensionMismatch("to_quotient: element dimension does not match the algebra");
    }
    const Vector coords = support_.adjoint() * vectorize(u.matrix());
    return sqrt_eigs_.cast<Complex>().asDiagonal() * coords;
}

Matrix GnsRepresentation::represent(const DynamicalVariable& v) const {
    if (v.dim() != n_) {
        throw DimensionMismatch("represent: element dimension does not match the algebra");
    }
    Matrix pi(d_, d_);
    for (Eigen::Index a = 0; a < d_; ++a) {
        pi.col(a) = to_quotient(DynamicalVariable(v.matrix() * preimages_[a]));
    }
    return pi;
}

Matrix GnsRepresentation::basis_map() const {
    Matrix map(n_ * n_, d_);
    for (Eigen::Index i = 0; i < n_; ++i) {
        for (Eigen::Index j = 0; j < n_; ++j) {
            map.row(i * n_ + j) =
                to_quotient(DynamicalVariable(matrix_unit(n_, i, j))).transpose();
        }
    }
    return map;
}

GnsRepresentation build_gns(Eigen::Index n, const QuantumState& psi, double rank_cutoff) {
    if (psi.dim() != n) {
        throw DimensionMismatch("build_gns: state dimension " + std::to_string(psi.dim()) +
                                " does not match requested dimension " + std::to_string(n));
    }
    const Eigen::Index b = n * n;

    // Gram matrix over the matrix units: G[bc] = Psi(E_b* E_c).
    Matrix gram(b, b);
    std::vector<Matrix> units;
    units.reserve(static_cast<std::size_t>(b));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            units.push_back(matrix_unit(n, i, j));
        }
    }
    for (Eigen::Index row = 0; row < b; ++row) {
        const Matrix row_adj = units[static_cast<std::size_t>(row)].adjoint();
        for (Eigen::Index col = 0; col < b; ++col) {
            gram(row, col) = (psi.rho() * row_adj * units[static_cast<std::size_t>(col)])
                                 .trace();
        }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("GNS Gram eigendecomposition did not converge");
    }
    const auto& lambda = solver.eigenvalues();
    const double cutoff = rank_cutoff * std::max(lambda.maxCoeff(), 0.0);

    GnsRepresentation rep;
    rep.n_ = n;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = lambda.size() - 1; k >= 0; --k) {  // descending
        if (lambda(k) > cutoff) {
            kept.push_back(k);
        }
    }
    rep.d_ = static_cast<Eigen::Index>(kept.size());
    rep.support_.resize(b, rep.d_);
    rep.sqrt_eigs_.resize(rep.d_);
    for (Eigen::Index a = 0; a < rep.d_; ++a) {
        rep.support_.col(a) = solver.eigenvectors().col(kept[static_cast<std::size_t>(a)]);
        rep.sqrt_eigs_(a) = std::sqrt(lambda(kept[static_cast<std::size_t>(a)]));
    }
    rep.preimages_.reserve(static_cast<std::size_t>(rep.d_));
    for (Eigen::Index a = 0; a < rep.d_; ++a) {
        const Vector axis = rep.support_.col(a) / rep.sqrt_eigs_(a);
        rep.preimages_.push_back(devectorize(axis, n));
    }
    rep.cyclic_ = rep.to_quotient(DynamicalVariable(identity(n)));
    return rep;
}

GnsRepresentation build_gns(const QuantumState& psi, double rank_cutoff) {
    return build_gns(psi.dim(), psi, rank_cutoff);
}

double verify_cyclic_expectation(const GnsRepresentation& g, const QuantumState& psi,
                                 const DynamicalVariable& b) {
    const Vector omega = g.cyclic_vector();
    const Complex represented = omega.dot(g.represent(b) * omega);
    return std::abs(represented - extend_to_dynamical(psi, b));
}

bool check_faithfulness(const GnsRepresentation& g, std::uint64_t probe_seed, int probes) {
    RandomStream rng = RandomStream::derive(probe_seed, 0x676E73ULL);  // "gns"
    for (int k = 0; k < probes; ++k) {
        Matrix u = random_ginibre(rng, g.source_dim());
        u /= operator_norm(u);
        if (operator_norm(g.represent(DynamicalVariable(u))) <= 1e-6) {
            return false;
        }
    }
    return true;
}

bool cyclicity_check(const GnsRepresentation& g) {
    const Eigen::Index n = g.source_dim();
    Matrix stacked(n * n, g.rep_dim());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Matrix pi = g.represent(DynamicalVariable(matrix_unit(n, i, j)));
            stacked.row(i * n + j) = (pi * g.cyclic_vector()).transpose();
        }
    }
    return matrix_rank(stacked) == g.rep_dim();
}

Eigen::Index matrix_rank(const Matrix& m, double relative_cutoff) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) <= 0.0) {
        return 0;
    }
    const double cutoff = relative_cutoff * sigma(0);
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cutoff) {
        ++rank;
    }
    return rank;
}

}  // namespace oalab
