#pragma once

#include <map>
#include <string>

#include "oalab/algebra.hpp"
#include "oalab/masa.hpp"

namespace oalab {

/// Positive normalized linear functional on M_n(C), represented by its
/// density matrix: Psi(A) = trace(rho * A).
class QuantumState {
  public:
    explicit QuantumState(Matrix rho);

    Eigen::Index dim() const { return rho_.rows(); }
    const Matrix& rho() const { return rho_; }

    static QuantumState pure(const Vector& ket);
    static QuantumState maximally_mixed(Eigen::Index n);

  private:
    Matrix rho_;
};

/// One character per registered device type: the complete description of a
/// single experimental act. The assignment maps device id to character index.
struct ElementaryState {
    std::map<std::string, Eigen::Index> assignment;

    Eigen::Index character_index(const std::string& device_id) const;

    friend bool operator==(const ElementaryState&, const ElementaryState&) = default;
};

/// The class of elementary states sharing one device type's character.
struct EquivalenceClass {
    Character character;

    friend bool operator==(const EquivalenceClass&, const EquivalenceClass&) = default;
};

/// Check that the elementary state assigns a valid character index to every
/// registered device type. Throws ValidationError if not.
void validate_elementary_state(const ElementaryState& e, const DeviceRegistry& registry);

/// True iff the values assigned to `a` agree (within eigenvalue tolerance)
/// across all registered device types whose subalgebra contains `a`.
/// Vacuously true when at most one such device type exists.
bool is_stable(const ElementaryState& e, const Observable& a, const DeviceRegistry& registry);

/// Restriction of the elementary state to one device type.
EquivalenceClass equivalence_class(const ElementaryState& e, const std::string& device_id,
                                   const DeviceRegistry& registry);

/// Quantum mean trace(rho * a). The imaginary residue of the trace is below
/// 1e-12 for valid inputs; the real part is returned.
double quantum_mean(const QuantumState& s, const Observable& a);

/// Unique linear extension to the full algebra: Psi(A) + i*Psi(B) for the
/// Hermitian parts (A, B) of u; equals trace(rho * u).
Complex extend_to_dynamical(const QuantumState& s, const DynamicalVariable& u);

/// Preparation: the pure state rho = P_k / trace(P_k) of the class projector.
QuantumState state_from_class(const EquivalenceClass& c, const DeviceRegistry& registry);

}  // namespace oalab
