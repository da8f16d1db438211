#include "oalab/states.hpp"

#include <cmath>

namespace oalab {

namespace {

double trace_product_real(const Matrix& l, const Matrix& r) {
    return l.transpose().cwiseProduct(r).sum().real();
}

}  // namespace

QuantumState::QuantumState(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() < 1 || rho_.rows() != rho_.cols()) {
        throw NotAState("density matrix must be square");
    }
    const double scale = std::max(1.0, rho_.norm());
    if ((rho_ - rho_.adjoint().eval()).cwiseAbs().maxCoeff() > tol::kHermitian * scale) {
        throw NotAState("density matrix is not Hermitian");
    }
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > tol::kTraceOne) {
        throw NotAState("density matrix trace is " + std::to_string(trace) + ", expected 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("density matrix eigendecomposition did not converge");
    }
    if (solver.eigenvalues().minCoeff() < -tol::kPositivity) {
        throw NotAState("density matrix has eigenvalue " +
                        std::to_string(solver.eigenvalues().minCoeff()) + " below zero");
    }
}

QuantumState QuantumState::pure(const Vector& ket) {
    const double norm2 = ket.squaredNorm();
    if (norm2 <= 0.0) {
        throw NotAState("pure state requires a nonzero ket");
    }
    return QuantumState((ket * ket.adjoint()) / norm2);
}

QuantumState QuantumState::maximally_mixed(Eigen::Index n) {
    return QuantumState(Matrix::Identity(n, n) / static_cast<double>(n));
}

Eigen::Index ElementaryState::character_index(const std::string& device_id) const {
    const auto it = assignment.find(device_id);
    if (it == assignment.end()) {
        throw ValidationError("elementary state assigns no character to device '" +
                              device_id + "'");
    }
    return it->second;
}

void validate_elementary_state(const ElementaryState& e, const DeviceRegistry& registry) {
    for (const DeviceType& d : registry.devices()) {
        const auto it = e.assignment.find(d.id());
        if (it == e.assignment.end()) {
            throw ValidationError("elementary state misses device '" + d.id() + "'");
        }
        if (it->second < 0 || it->second >= d.dim()) {
            throw ValidationError("character index " + std::to_string(it->second) +
                                  " out of range for device '" + d.id() + "'");
        }
    }
    for (const auto& [id, index] : e.assignment) {
        if (!registry.has(id)) {
            throw UnknownDeviceType("elementary state assigns unknown device '" + id + "'");
        }
    }
}

bool is_stable(const ElementaryState& e, const Observable& a, const DeviceRegistry& registry) {
    const double tolerance = tol::kEigen * std::max(1.0, cstar_norm(a));
    bool have_reference = false;
    double reference = 0.0;
    for (const DeviceType& d : registry.devices()) {
        if (!d.contains(a)) {
            continue;
        }
        const double value = d.eigenvalue(e.character_index(d.id()), a);
        if (have_reference && std::abs(value - reference) > tolerance) {
            return false;
        }
        reference = have_reference ? reference : value;
        have_reference = true;
    }
    return true;
}

EquivalenceClass equivalence_class(const ElementaryState& e, const std::string& device_id,
                                   const DeviceRegistry& registry) {
    const DeviceType& d = registry.device(device_id);
    const Eigen::Index k = e.character_index(device_id);
    if (k < 0 || k >= d.dim()) {
        throw ValidationError("character index out of range for device '" + device_id + "'");
    }
    return EquivalenceClass{Character{device_id, k}};
}

double quantum_mean(const QuantumState& s, const Observable& a) {
    if (s.dim() != a.dim()) {
        throw DimensionMismatch("quantum_mean: state dimension " + std::to_string(s.dim()) +
                                " vs observable dimension " + std::to_string(a.dim()));
    }
    return trace_product_real(s.rho(), a.matrix());
}

Complex extend_to_dynamical(const QuantumState& s, const DynamicalVariable& u) {
    if (s.dim() != u.dim()) {
        throw DimensionMismatch("extend_to_dynamical: dimension mismatch");
    }
    return s.rho().transpose().cwiseProduct(u.matrix()).sum();
}

QuantumState state_from_class(const EquivalenceClass& c, const DeviceRegistry& registry) {
    const DeviceType& d = registry.device(c.character.device);
    if (c.character.index < 0 || c.character.index >= d.dim()) {
        throw ValidationError("character index out of range for device '" +
                              c.character.device + "'");
    }
    const Projector& p = d.projectors()[static_cast<std::size_t>(c.character.index)];
    return QuantumState(p.matrix() / p.rank_trace());
}

}  // namespace oalab
