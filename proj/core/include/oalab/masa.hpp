#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oalab/algebra.hpp"
#include "oalab/rng.hpp"

namespace oalab {

/// A nonempty list of pairwise-commuting observables of equal dimension.
/// Commutation is checked at construction.
class CommutingFamily {
  public:
    explicit CommutingFamily(std::vector<Observable> members,
                             double tolerance = tol::kEigen);

    const std::vector<Observable>& members() const { return members_; }
    double tolerance() const { return tolerance_; }
    Eigen::Index dim() const { return members_.front().dim(); }

  private:
    std::vector<Observable> members_;
    double tolerance_;
};

/// A measuring-device type: a maximal abelian subalgebra of M_n(C), encoded
/// by a complete set of n rank-1 orthogonal projectors (a joint eigenbasis).
class DeviceType {
  public:
    DeviceType(std::string id, std::vector<Projector> projectors);

    const std::string& id() const { return id_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(projectors_.size()); }
    const std::vector<Projector>& projectors() const { return projectors_; }

    /// True iff `a` lies in the subalgebra spanned by the projectors:
    /// ||a - sum_k c_k P_k|| within tolerance, c_k = trace(P_k a)/trace(P_k).
    bool contains(const Observable& a) const;

    /// The values c_k assigned to `a` by each character, in projector order.
    /// Throws NotInSubalgebra if `a` is not contained.
    std::vector<double> eigenvalues(const Observable& a) const;

    /// Value assigned to `a` by character k. Throws NotInSubalgebra.
    double eigenvalue(Eigen::Index k, const Observable& a) const;

  private:
    std::string id_;
    std::vector<Projector> projectors_;
};

/// One joint measurement outcome of a device type: the multiplicative
/// functional picking the k-th joint eigenvalue. Characters are compared by
/// (device id, index).
struct Character {
    std::string device;
    Eigen::Index index = 0;

    friend bool operator==(const Character&, const Character&) = default;
};

/// Finite set of registered device types over a common dimension.
/// Stands in for the paper-level index set of all device types.
class DeviceRegistry {
  public:
    DeviceRegistry() = default;

    void add(DeviceType device);

    bool has(const std::string& id) const;
    const DeviceType& device(const std::string& id) const;
    const std::vector<DeviceType>& devices() const { return devices_; }
    std::size_t size() const { return devices_.size(); }
    bool empty() const { return devices_.empty(); }
    Eigen::Index dim() const;

  private:
    std::vector<DeviceType> devices_;
};

/// Build a maximal abelian subalgebra containing the family, by simultaneous
/// diagonalization. Degenerate joint eigenspaces are completed to rank 1 by
/// diagonalizing a seeded random Hermitian perturbation inside each such
/// eigenspace, so the same seed reproduces the device bit-identically.
///
/// Joint eigenspaces are ordered by ascending eigenvalue at every split;
/// basis vectors are phase-fixed (first nonzero component real positive).
DeviceType masa_from_family(std::string id, const CommutingFamily& family,
                            std::uint64_t rng_seed);

/// All n characters of a device type, one per projector index.
std::vector<Character> characters_of(const DeviceType& device);

/// Value of the observable under a character, resolved through the registry.
double evaluate(const Character& chi, const Observable& a, const DeviceRegistry& registry);

}  // namespace oalab
