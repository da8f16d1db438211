#pragma once

#include <cstdint>
#include <vector>

#include "oalab/algebra.hpp"
#include "oalab/masa.hpp"
#include "oalab/states.hpp"

namespace oalab {

/// Finite union of disjoint closed intervals on the extended real line.
/// Construction sorts and merges overlapping or touching pieces.
class IntervalUnion {
  public:
    struct Interval {
        double lo;
        double hi;
    };

    explicit IntervalUnion(std::vector<Interval> intervals);

    static IntervalUnion full_line();
    static IntervalUnion empty();

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool contains(double x, double margin = 0.0) const;

  private:
    std::vector<Interval> intervals_;
};

/// Sum of the eigenprojectors of `a` whose eigenvalue falls in the window.
/// Endpoint membership carries an eigenvalue-tolerance margin; returns the
/// zero projector when no eigenvalue qualifies.
Projector spectral_projector(const Observable& a, const IntervalUnion& window);

/// Measurement of whether an observable's value lies in a window; the
/// measured quantity is the derived projector.
struct YesNoExperiment {
    Observable observable;
    IntervalUnion window;
    Projector projector;

    YesNoExperiment(Observable a, IntervalUnion s);
};

/// State reduction after a "yes" answer: rho -> p rho p / trace(p rho p).
/// Throws ZeroProbability when the yes-probability is at most 1e-12.
QuantumState collapse(const QuantumState& psi, const Projector& p);

/// Residuals of the identities a collapsed state must satisfy, probed with
/// random unit-norm dynamical variables.
struct ReductionIdentitiesReport {
    double normalization_residual = 0.0;   // |Psi'(p) - 1| and |Psi'(I) - 1|
    double schwarz_residual = 0.0;         // positive part of |Psi'(A(I-p))|^2 - Psi'(A*A) Psi'(I-p)
    double projection_residual = 0.0;      // |Psi'(A) - Psi'(Ap)|, (pA), (pAp)
    int trials = 0;

    bool pass() const {
        return normalization_residual <= 1e-10 && schwarz_residual <= tol::kEigen &&
               projection_residual <= tol::kEigen;
    }
};

ReductionIdentitiesReport verify_reduction_identities(const QuantumState& psi_prime,
                                                      const Projector& p, int trials,
                                                      std::uint64_t seed);

struct ConditionalMeanEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::size_t conditioned = 0;  // draws with p-value 1
    std::size_t total = 0;
};

/// Classical conditional mean of pAp given p = 1, estimated by sampling
/// elementary states over a device type containing both pAp and p. The
/// device is built from the pair with the given seed unless one is supplied.
/// Converges to quantum_mean(collapse(psi, p), a) = Psi(pAp) / Psi(p).
ConditionalMeanEstimate conditional_mean_empirical(const QuantumState& psi, const Observable& a,
                                                   const Projector& p, std::size_t samples,
                                                   std::uint64_t seed);
ConditionalMeanEstimate conditional_mean_empirical(const QuantumState& psi, const Observable& a,
                                                   const Projector& p, const DeviceType& eta,
                                                   std::size_t samples, std::uint64_t seed);

struct YesNoStep {
    double probability;
    QuantumState state;
};

/// Fold collapse along the "yes" branch of each experiment in order,
/// recording the yes-probability at every step. Throws ZeroProbability at
/// the step where the branch dies.
std::vector<YesNoStep> sequential_yes_no(const QuantumState& psi,
                                         const std::vector<YesNoExperiment>& experiments);

}  // namespace oalab
