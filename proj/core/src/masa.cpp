#include "oalab/masa.hpp"

#include <cmath>
#include <utility>

#include "oalab/random_matrices.hpp"

namespace oalab {

namespace {

constexpr std::uint64_t kCompletionSalt = 0x6D617361ULL;  // "masa"

// Real trace of P*A without forming the product.
double projected_value(const Matrix& p, const Matrix& a) {
    return p.transpose().cwiseProduct(a).sum().real();
}

// Multiply by a phase so the first non-negligible component is real positive.
void fix_phase(Eigen::Ref<Vector> v) {
    const double top = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-9 * top) {
            const Complex phase = v(i) / std::abs(v(i));
            v *= std::conj(phase);
            return;
        }
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eigen(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("joint diagonalization: eigenvalue iteration did not converge");
    }
    return solver;
}

}  // namespace

CommutingFamily::CommutingFamily(std::vector<Observable> members, double tolerance)
    : members_(std::move(members)), tolerance_(tolerance) {
    if (members_.empty()) {
        throw ValidationError("commuting family must be nonempty");
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i].dim() != members_.front().dim()) {
            throw DimensionMismatch("commuting family members must share a dimension");
        }
        for (std::size_t j = i + 1; j < members_.size(); ++j) {
            if (!commutes(members_[i], members_[j], tolerance_)) {
                throw NotCommuting("family members " + std::to_string(i) + " and " +
                                   std::to_string(j) + " do not commute");
            }
        }
    }
}

DeviceType::DeviceType(std::string id, std::vector<Projector> projectors)
    : id_(std::move(id)), projectors_(std::move(projectors)) {
    if (id_.empty()) {
        throw ValidationError("device type id must be nonempty");
    }
    if (projectors_.empty()) {
        throw ValidationError("device type needs at least one projector");
    }
    const Eigen::Index n = projectors_.front().dim();
    if (static_cast<Eigen::Index>(projectors_.size()) != n) {
        throw ValidationError("device type '" + id_ + "' needs exactly " +
                              std::to_string(n) + " rank-1 projectors, got " +
                              std::to_string(projectors_.size()));
    }

    // For an idempotent Hermitian matrix the trace equals the rank, so unit
    // trace pins each projector to rank 1 (maximality in M_n).
    Matrix sum = Matrix::Zero(n, n);
    Matrix basis(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Matrix& p = projectors_[k].matrix();
        if (p.rows() != n) {
            throw DimensionMismatch("device type '" + id_ + "': projector dimensions differ");
        }
        if (std::abs(projectors_[k].rank_trace() - 1.0) > tol::kEigen) {
            throw NotAProjector("device type '" + id_ + "': projector " + std::to_string(k) +
                                " is not rank 1 (trace " +
                                std::to_string(projectors_[k].rank_trace()) + ")");
        }
        sum += p;
        Eigen::Index column = 0;
        p.colwise().norm().maxCoeff(&column);
        basis.col(k) = p.col(column) / p.col(column).norm();
    }
    if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kIdempotent) {
        throw ValidationError("device type '" + id_ + "': projectors do not resolve the identity");
    }
    const Matrix gram = basis.adjoint() * basis;
    if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kIdempotent) {
        throw ValidationError("device type '" + id_ + "': projectors are not orthogonal");
    }
}

bool DeviceType::contains(const Observable& a) const {
    if (a.dim() != dim()) {
        throw DimensionMismatch("contains: observable dimension " + std::to_string(a.dim()) +
                                " does not match device dimension " + std::to_string(dim()));
    }
    const Matrix& m = a.matrix();
    Matrix reconstructed = Matrix::Zero(dim(), dim());
    for (const Projector& p : projectors_) {
        const double value = projected_value(p.matrix(), m) / p.rank_trace();
        reconstructed += value * p.matrix();
    }
    const double scale = std::max(1.0, operator_norm(m));
    return operator_norm(m - reconstructed) <= tol::kEigen * scale;
}

std::vector<double> DeviceType::eigenvalues(const Observable& a) const {
    if (!contains(a)) {
        throw NotInSubalgebra("observable does not lie in device type '" + id_ + "'");
    }
    std::vector<double> values;
    values.reserve(projectors_.size());
    for (const Projector& p : projectors_) {
        values.push_back(projected_value(p.matrix(), a.matrix()) / p.rank_trace());
    }
    return values;
}

double DeviceType::eigenvalue(Eigen::Index k, const Observable& a) const {
    if (k < 0 || k >= dim()) {
        throw ValidationError("character index " + std::to_string(k) + " out of range for '" +
                              id_ + "'");
    }
    return eigenvalues(a)[static_cast<std::size_t>(k)];
}

void DeviceRegistry::add(DeviceType device) {
    if (has(device.id())) {
        throw ValidationError("device type '" + device.id() + "' registered twice");
    }
    if (!devices_.empty() && device.dim() != dim()) {
        throw DimensionMismatch("device type '" + device.id() +
                                "' does not match the registry dimension");
    }
    devices_.push_back(std::move(device));
}

bool DeviceRegistry::has(const std::string& id) const {
    for (const DeviceType& d : devices_) {
        if (d.id() == id) {
            return true;
        }
    }
    return false;
}

const DeviceType& DeviceRegistry::device(const std::string& id) const {
    for (const DeviceType& d : devices_) {
        if (d.id() == id) {
            return d;
        }
    }
    throw UnknownDeviceType("device type '" + id + "' is not registered");
}

Eigen::Index DeviceRegistry::dim() const {
    if (devices_.empty()) {
        throw ValidationError("registry is empty");
    }
    return devices_.front().dim();
}

DeviceType masa_from_family(std::string id, const CommutingFamily& family,
                            std::uint64_t rng_seed) {
    const Eigen::Index n = family.dim();

    // Refine the trivial decomposition by each member in turn: inside every
    // current joint eigenspace, split by the member's eigenvalue clusters.
    std::vector<Matrix> blocks{Matrix::Identity(n, n)};
    for (const Observable& member : family.members()) {
        const double cluster_gap =
            tol::kEigen * std::max(1.0, operator_norm(member.matrix()));
        std::vector<Matrix> refined;
        for (const Matrix& block : blocks) {
            if (block.cols() == 1) {
                refined.push_back(block);
                continue;
            }
            const Matrix compressed = block.adjoint() * member.matrix() * block;
            const auto solver = hermitian_eigen(compressed);
            const auto& lambda = solver.eigenvalues();
            Eigen::Index start = 0;
            for (Eigen::Index k = 1; k <= lambda.size(); ++k) {
                if (k == lambda.size() || lambda(k) - lambda(k - 1) > cluster_gap) {
                    refined.push_back(block * solver.eigenvectors().middleCols(start, k - start));
                    start = k;
                }
            }
        }
        blocks = std::move(refined);
    }

    // Degenerate joint eigenspaces: diagonalize a seeded random Hermitian
    // perturbation inside each to reach rank 1.
    RandomStream rng = RandomStream::derive(rng_seed, kCompletionSalt);
    std::vector<Vector> basis;
    basis.reserve(n);
    for (const Matrix& block : blocks) {
        if (block.cols() == 1) {
            basis.emplace_back(block.col(0));
            continue;
        }
        const Matrix perturbation = random_hermitian(rng, block.cols());
        const auto solver = hermitian_eigen(perturbation);
        for (Eigen::Index k = 0; k < block.cols(); ++k) {
            basis.emplace_back(block * solver.eigenvectors().col(k));
        }
    }

    std::vector<Projector> projectors;
    projectors.reserve(n);
    for (Vector& v : basis) {
        fix_phase(v);
        v /= v.norm();
        projectors.emplace_back(Matrix(v * v.adjoint()));
    }
    DeviceType device(std::move(id), std::move(projectors));

    for (std::size_t i = 0; i < family.members().size(); ++i) {
        if (!device.contains(family.members()[i])) {
            throw EigenFailure("joint diagonalization failed: family member " +
                               std::to_string(i) + " is not in the span of the projectors");
        }
    }
    return device;
}

std::vector<Character> characters_of(const DeviceType& device) {
    std::vector<Character> characters;
    characters.reserve(device.dim());
    for (Eigen::Index k = 0; k < device.dim(); ++k) {
        characters.push_back({device.id(), k});
    }
    return characters;
}

double evaluate(const Character& chi, const Observable& a, const DeviceRegistry& registry) {
    return registry.device(chi.device).eigenvalue(chi.index, a);
}

}  // namespace oalab
