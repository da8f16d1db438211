#pragma once

#include <cstdint>

#include "oalab/algebra.hpp"
#include "oalab/states.hpp"

namespace oalab {

/// Hilbert-space representation of M_n(C) generated by a state functional:
/// the quotient of the algebra by the null space of <U, V> = Psi(U*V),
/// with the algebra acting by left multiplication.
///
/// Quotient coordinates are orthonormal: the Gram matrix over the matrix-unit
/// basis is eigendecomposed, eigenvalues below a relative cutoff are treated
/// as null directions, and kept eigenvectors are scaled by inverse square
/// roots of their eigenvalues. The standard inner product on the coordinates
/// then reproduces Psi(U*V).
class GnsRepresentation {
  public:
    Eigen::Index source_dim() const { return n_; }
    Eigen::Index rep_dim() const { return d_; }

    /// Image of the identity; the cyclic vector, unit norm.
    const Vector& cyclic_vector() const { return cyclic_; }

    /// Coordinates of the equivalence class of `u`.
    Vector to_quotient(const DynamicalVariable& u) const;

    /// The representation operator: left multiplication by `v` expressed in
    /// quotient coordinates. A *-homomorphism into the d x d matrices.
    Matrix represent(const DynamicalVariable& v) const;

    /// Row b holds the quotient coordinates of the b-th matrix unit
    /// (row-major order), an n^2 x d matrix.
    Matrix basis_map() const;

    friend GnsRepresentation build_gns(Eigen::Index n, const QuantumState& psi,
                                       double rank_cutoff);

  private:
    GnsRepresentation() = default;

    Eigen::Index n_ = 0;
    Eigen::Index d_ = 0;
    Matrix support_;                 // n^2 x d kept Gram eigenvectors, descending
    Eigen::VectorXd sqrt_eigs_;      // d square roots of kept eigenvalues
    std::vector<Matrix> preimages_;  // canonical n x n preimage per coordinate axis
    Vector cyclic_;
};

/// Build the representation from the state functional. The Gram matrix over
/// the n^2 matrix units is formed entry by entry from Psi(E_b* E_c), so the
/// cost grows as n^7; intended for desk-scale dimensions. `rank_cutoff` is
/// relative to the largest Gram eigenvalue and separates null directions
/// from genuinely small ones.
GnsRepresentation build_gns(Eigen::Index n, const QuantumState& psi,
                            double rank_cutoff = tol::kRankCutoff);
GnsRepresentation build_gns(const QuantumState& psi,
                            double rank_cutoff = tol::kRankCutoff);

/// | <Omega, Pi(b) Omega> - Psi(b) |. Contract: at most 1e-9 * (1 + ||b||).
double verify_cyclic_expectation(const GnsRepresentation& g, const QuantumState& psi,
                                 const DynamicalVariable& b);

/// Probe injectivity of the representation with random unit-norm elements:
/// true iff every probe keeps ||Pi(U)|| above 1e-6. On a full matrix algebra
/// the representation is faithful for every state, pure or mixed.
bool check_faithfulness(const GnsRepresentation& g, std::uint64_t probe_seed = 2024,
                        int probes = 32);

/// Validate that the images of the matrix units applied to the cyclic vector
/// span the whole quotient (rank d at the relative cutoff).
bool cyclicity_check(const GnsRepresentation& g);

/// Numerical rank with a cutoff relative to the largest singular value.
Eigen::Index matrix_rank(const Matrix& m, double relative_cutoff = tol::kRankCutoff);

}  // namespace oalab
