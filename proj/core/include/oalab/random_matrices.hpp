#pragma once

#include "oalab/algebra.hpp"
#include "oalab/rng.hpp"

namespace oalab {

/// Complex Ginibre matrix: i.i.d. standard complex normal entries.
Matrix random_ginibre(RandomStream& rng, Eigen::Index n);

/// Random Hermitian matrix (Ginibre plus its adjoint, halved).
Matrix random_hermitian(RandomStream& rng, Eigen::Index n);

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// the R diagonal absorbed into Q.
Matrix random_unitary(RandomStream& rng, Eigen::Index n);

/// Random density matrix of the given rank. Nonzero eigenvalues are kept
/// at least `eigen_floor / n` apart from zero so the rank is unambiguous
/// at the library's rank cutoff.
Matrix random_density(RandomStream& rng, Eigen::Index n, Eigen::Index rank,
                      double eigen_floor = 0.05);

}  // namespace oalab
