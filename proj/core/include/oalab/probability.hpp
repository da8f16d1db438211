#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oalab/masa.hpp"
#include "oalab/states.hpp"

namespace oalab {

/// Outcome distribution of one device type in one state:
/// probs[k] = trace(rho * P_k), noise-clipped and renormalized.
struct BornDistribution {
    std::string device;
    std::vector<double> probs;
};

BornDistribution born_distribution(const QuantumState& s, const DeviceType& d);

/// Reproducible Monte-Carlo ensemble: same (state, registry, seed, N) gives
/// bit-identical draws, independent of evaluation order. Each draw's
/// characters come from the SplitMix64 stream keyed by (seed, draw index,
/// device id hash); characters for different device types are independent.
struct EnsembleSample {
    QuantumState state;
    std::uint64_t seed = 0;
    std::vector<ElementaryState> draws;

    std::size_t size() const { return draws.size(); }
};

/// Draw one elementary state: one character per registered device type.
ElementaryState sample_elementary_state(const QuantumState& s, const DeviceRegistry& registry,
                                        std::uint64_t seed, std::uint64_t draw_index = 0);

EnsembleSample sample_ensemble(const QuantumState& s, const DeviceRegistry& registry,
                               std::uint64_t seed, std::size_t count);

/// CSV with columns (draw, xi, character_index), one row per draw and device.
void write_ensemble_csv(std::ostream& out, const EnsembleSample& sample);

struct MeanEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::size_t count = 0;
};

/// Sample mean of the observable's character values under one device type.
/// Converges to quantum_mean(s, a). Throws NotInSubalgebra.
MeanEstimate ensemble_mean(const EnsembleSample& sample, const Observable& a,
                           const std::string& device_id, const DeviceRegistry& registry);

/// Device-independence check for an observable shared by two device types:
/// analytic outcome distributions must agree to 1e-12, empirical frequencies
/// within 3 combined standard errors.
struct MarginalAgreementReport {
    std::vector<double> values;  // distinct eigenvalues of the observable, ascending
    std::vector<double> analytic_first;
    std::vector<double> analytic_second;
    std::vector<double> empirical_first;
    std::vector<double> empirical_second;
    double max_analytic_gap = 0.0;
    bool analytic_pass = false;
    bool empirical_pass = false;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    bool pass() const { return analytic_pass && empirical_pass; }
};

MarginalAgreementReport check_marginal_agreement(const QuantumState& s, const Observable& a,
                                                 const std::string& first_device,
                                                 const std::string& second_device,
                                                 const DeviceRegistry& registry,
                                                 std::size_t samples, std::uint64_t seed);

/// Correlation table of a two-party, two-setting, two-outcome scenario:
/// e[i][j] is the expectation of the product of Alice's setting i and Bob's
/// setting j. Entries must lie in [-1, 1] up to 1e-9.
class ScenarioCorrelations {
  public:
    explicit ScenarioCorrelations(std::array<std::array<double, 2>, 2> e);

    double e(int i, int j) const { return e_[i][j]; }
    const std::array<std::array<double, 2>, 2>& table() const { return e_; }

  private:
    std::array<std::array<double, 2>, 2> e_;
};

/// Correlations from a state and four dichotomic settings. Alice's settings
/// must commute with Bob's. Throws NotDichotomic, NotCommuting.
ScenarioCorrelations correlations_from_state(const QuantumState& s, const Observable& a1,
                                             const Observable& a2, const Observable& b1,
                                             const Observable& b2);

/// E11 + E12 + E21 - E22.
double chsh_value(const ScenarioCorrelations& c);
double chsh_value(const QuantumState& s, const Observable& a1, const Observable& a2,
                  const Observable& b1, const Observable& b2);

/// A violated facet of the classical correlation polytope.
struct FacetWitness {
    std::array<int, 4> signs{};  // coefficients of (E11, E12, E21, E22)
    double value = 0.0;

    std::string description() const;
};

struct FeasibilityResult {
    bool feasible = false;
    std::optional<FacetWitness> witness;
};

/// Decide whether any probability distribution over the 16 deterministic
/// assignments reproduces the four correlations. With entries confined to
/// [-1, 1] (enforced by ScenarioCorrelations), the eight CHSH facets are a
/// complete description, so the test is exact.
FeasibilityResult joint_measure_feasibility(const ScenarioCorrelations& c);

}  // namespace oalab
