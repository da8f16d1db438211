// Acceptance suite: every release criterion checked at its stated tolerance,
// one pass/fail line per criterion. Exit code is the number of failures.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "oalab/builtin.hpp"
#include "oalab/gns.hpp"
#include "oalab/probability.hpp"
#include "oalab/reduction.hpp"
#include "oalab/scenario.hpp"
#include "lp_oracle.hpp"
#include "test_helpers.hpp"

using namespace oalab;

namespace {

const std::string kScenarioDir = OALAB_SCENARIO_DIR;

struct Criterion {
    int number;
    const char* title;
    bool pass;
    std::string detail;
};

std::vector<Criterion> results;

void record(int number, const char* title, bool pass, std::string detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number, title,
                detail.c_str());
    std::fflush(stdout);
    results.push_back({number, title, pass, std::move(detail)});
}

std::string fmt(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3g", x);
    return buffer;
}

DeviceType masa_of(const std::string& id, std::vector<Observable> members,
                   std::uint64_t seed) {
    return masa_from_family(id, CommutingFamily(std::move(members)), seed);
}

// 1. Character axioms: unit, zero, square positivity, spectrum membership,
//    and spectrum exhaustion with multiplicity.
void criterion_characters() {
    RandomStream rng(1001);
    const std::array<Eigen::Index, 4> dims{2, 3, 4, 8};
    int masas = 0;
    double worst = 0.0;
    bool pass = true;
    for (Eigen::Index n : dims) {
        for (int m = 0; m < 50; ++m, ++masas) {
            const DeviceType device =
                masa_of("m", {Observable(random_hermitian(rng, n))}, 5000 + masas);
            const auto unit_values = device.eigenvalues(Observable(identity(n)));
            const auto zero_values = device.eigenvalues(Observable(zero(n)));
            for (double v : unit_values) {
                worst = std::max(worst, std::abs(v - 1.0));
            }
            for (double v : zero_values) {
                worst = std::max(worst, std::abs(v));
            }
            for (int o = 0; o < 50; ++o) {
                const Observable a = test::random_contained_observable(rng, device);
                const auto values = device.eigenvalues(a);
                const auto square_values =
                    device.eigenvalues(Observable(a.matrix() * a.matrix()));
                std::vector<double> sigma = spectrum(a);
                for (double v : square_values) {
                    pass = pass && v >= -1e-9;
                }
                for (double v : values) {
                    double nearest = 1e300;
                    for (double lambda : sigma) {
                        nearest = std::min(nearest, std::abs(v - lambda));
                    }
                    pass = pass && nearest <= 1e-9;
                }
                pass = pass && test::multiset_equal(values, sigma, 1e-9);
            }
        }
    }
    pass = pass && worst <= 1e-9;
    record(1, "character axioms and spectrum exhaustion", pass,
           "200 device types, 50 observables each; max unit/zero residual " + fmt(worst));
}

// 2. C* identity.
void criterion_cstar() {
    RandomStream rng(1002);
    double worst = 0.0;
    bool pass = true;
    for (Eigen::Index n : {2, 3, 4, 8}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const DynamicalVariable u(random_ginibre(rng, n));
            const double norm = cstar_norm(u);
            const double product_norm = cstar_norm(mul(adjoint(u), u));
            const double residual = std::abs(product_norm - norm * norm) / (norm * norm);
            worst = std::max(worst, residual);
            pass = pass && residual <= 1e-9;
        }
    }
    record(2, "C* identity on 4000 random elements", pass, "max relative residual " + fmt(worst));
}

// 3. Monte-Carlo ensemble means match the analytic quantum mean.
void criterion_born_means() {
    RandomStream rng(1003);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = (trial % 2 == 0) ? 2 : 4;
        const QuantumState s(random_density(rng, n, n));
        DeviceRegistry registry;
        registry.add(masa_of("d", {Observable(random_hermitian(rng, n))}, 9000 + trial));
        const Observable a = test::random_contained_observable(rng, registry.device("d"));
        const EnsembleSample sample = sample_ensemble(s, registry, 40000 + trial, 10000);
        const MeanEstimate est = ensemble_mean(sample, a, "d", registry);
        const double target = quantum_mean(s, a);
        if (std::abs(est.mean - target) <= 3.0 * est.stderr_of_mean + 1e-12) {
            ++hits;
        }
    }
    record(3, "ensemble means reproduce quantum means", hits >= 99,
           std::to_string(hits) + "/100 trials within 3 standard errors");
}

// 4. Device independence of marginals on the two-qubit fixture.
void criterion_marginals() {
    const Observable shared(kron(pauli_z(), identity(2)));
    DeviceRegistry registry;
    registry.add(masa_of("ZZ", {shared, Observable(kron(identity(2), pauli_z()))}, 1));
    registry.add(masa_of("ZX", {shared, Observable(kron(identity(2), pauli_x()))}, 1));
    const MarginalAgreementReport report = check_marginal_agreement(
        QuantumState::pure(singlet_ket()), shared, "ZZ", "ZX", registry, 100000, 2024);
    record(4, "device-independent marginals (two-qubit fixture)",
           report.analytic_pass && report.empirical_pass,
           "analytic gap " + fmt(report.max_analytic_gap) + ", empirical " +
               (report.empirical_pass ? "within 3 sigma" : "out of bounds"));
}

// 5. Hilbert-space representation: expectation fidelity, dimension law,
//    homomorphism and *-map residuals.
void criterion_gns() {
    RandomStream rng(1005);
    double worst_expectation = 0.0;
    double worst_morphism = 0.0;
    bool dims_ok = true;
    int pairs = 0;
    for (Eigen::Index n : {2, 3, 4}) {
        for (int s = 0; s < 112; ++s) {
            const Eigen::Index rank =
                1 + static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
            const QuantumState psi(random_density(rng, n, rank));
            const GnsRepresentation rep = build_gns(n, psi);
            dims_ok = dims_ok && rep.rep_dim() == n * rank;
            for (int probe = 0; probe < 3; ++probe, ++pairs) {
                const DynamicalVariable b(random_ginibre(rng, n));
                const double residual = verify_cyclic_expectation(rep, psi, b) /
                                        (1.0 + cstar_norm(b));
                worst_expectation = std::max(worst_expectation, residual);
            }
            const DynamicalVariable u(random_ginibre(rng, n));
            const DynamicalVariable v(random_ginibre(rng, n));
            worst_morphism = std::max(
                worst_morphism,
                operator_norm(rep.represent(mul(u, v)) - rep.represent(u) * rep.represent(v)));
            worst_morphism = std::max(
                worst_morphism,
                operator_norm(rep.represent(adjoint(u)) - rep.represent(u).adjoint().eval()));
        }
    }
    const bool pass = worst_expectation <= 1e-9 && worst_morphism <= 1e-8 && dims_ok;
    record(5, "representation fidelity and dimension law", pass,
           std::to_string(pairs) + " pairs; max expectation residual " + fmt(worst_expectation) +
               ", max morphism residual " + fmt(worst_morphism));
}

// 6. Reduction: identities on collapsed states, empirical conditional means,
//    idempotence, and reproducibility of yes-no experiments.
void criterion_reduction() {
    RandomStream rng(1006);
    bool identities_ok = true;
    double worst_identity = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const QuantumState psi(random_density(rng, 4, 4));
        const Projector p = test::random_projector(rng, 4, 1 + (rep % 3));
        const QuantumState reduced = collapse(psi, p);
        const ReductionIdentitiesReport report =
            verify_reduction_identities(reduced, p, 100, 7000 + rep);
        identities_ok = identities_ok && report.pass();
        worst_identity = std::max({worst_identity, report.normalization_residual,
                                   report.schwarz_residual, report.projection_residual});

        const QuantumState again = collapse(reduced, p);
        identities_ok =
            identities_ok && (reduced.rho() - again.rho()).cwiseAbs().maxCoeff() <= 1e-12;

        const YesNoExperiment experiment(p.observable(), IntervalUnion({{0.5, 1.5}}));
        const auto chain = sequential_yes_no(psi, {experiment, experiment});
        identities_ok = identities_ok && std::abs(chain[1].probability - 1.0) <= 1e-12;
    }

    int hits = 0;
    int trials = 0;
    RandomStream cond_rng(1007);
    while (trials < 100) {
        const Eigen::Index n = (trials % 2 == 0) ? 2 : 4;
        const QuantumState psi(random_density(cond_rng, n, n));
        const Projector p =
            test::random_projector(cond_rng, n, 1 + (trials % n));
        if (quantum_mean(psi, p) < 0.05) {
            continue;  // keep the conditioned subsample well populated
        }
        const Observable a(random_hermitian(cond_rng, n));
        ++trials;
        const ConditionalMeanEstimate est =
            conditional_mean_empirical(psi, a, p, 10000, 8000 + trials);
        const double target = quantum_mean(collapse(psi, p), a);
        if (std::abs(est.mean - target) <= 3.0 * est.stderr_of_mean + 1e-12) {
            ++hits;
        }
    }
    const bool pass = identities_ok && hits >= 99;
    record(6, "state reduction as classical conditioning", pass,
           "identity residual " + fmt(worst_identity) + "; " + std::to_string(hits) +
               "/100 conditional-mean trials within 3 standard errors");
}

// 7. Bell demonstration: Tsirelson value, infeasibility witness, feasibility
//    of compatible scenarios, facet test vs brute-force linear program.
void criterion_bell() {
    const QuantumState singlet = QuantumState::pure(singlet_ket());
    const Observable a1(kron(pauli_z(), identity(2)));
    const Observable a2(kron(pauli_x(), identity(2)));
    const Matrix down = -(pauli_z() + pauli_x()) / std::sqrt(2.0);
    const Matrix side = (pauli_x() - pauli_z()) / std::sqrt(2.0);
    const Observable b1(kron(identity(2), down));
    const Observable b2(kron(identity(2), side));

    const ScenarioCorrelations correlations =
        correlations_from_state(singlet, a1, a2, b1, b2);
    const double chsh = chsh_value(correlations);
    const double tsirelson = 2.0 * std::numbers::sqrt2;
    bool pass = std::abs(chsh - tsirelson) <= 1e-9;

    const FeasibilityResult infeasible = joint_measure_feasibility(correlations);
    pass = pass && !infeasible.feasible && infeasible.witness.has_value() &&
           infeasible.witness->value > 2.0;

    // compatible scenario: all four settings picked inside one device type
    RandomStream rng(1008);
    for (int rep = 0; rep < 20; ++rep) {
        const DeviceType device =
            masa_of("c", {Observable(random_hermitian(rng, 4))}, 6000 + rep);
        const auto dichotomic = [&] {
            Matrix m = zero(4);
            for (const Projector& proj : device.projectors()) {
                m += (rng.uniform() < 0.5 ? -1.0 : 1.0) * proj.matrix();
            }
            return Observable(m);
        };
        const QuantumState s(random_density(rng, 4, 4));
        const ScenarioCorrelations compatible =
            correlations_from_state(s, dichotomic(), dichotomic(), dichotomic(), dichotomic());
        pass = pass && joint_measure_feasibility(compatible).feasible;
    }

    int agreements = 0;
    int compared = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::array<std::array<double, 2>, 2> e;
        for (auto& row : e) {
            for (double& value : row) {
                value = 2.0 * rng.uniform() - 1.0;
            }
        }
        double margin = 10.0;
        for (int mask = 0; mask < 16; ++mask) {
            int parity = 1;
            double s = 0.0;
            const std::array<double, 4> flat{e[0][0], e[0][1], e[1][0], e[1][1]};
            for (int k = 0; k < 4; ++k) {
                const int sign = (mask & (1 << k)) ? -1 : 1;
                parity *= sign;
                s += sign * flat[static_cast<std::size_t>(k)];
            }
            if (parity == -1) {
                margin = std::min(margin, std::abs(2.0 - s));
            }
        }
        if (margin < 1e-6) {
            continue;  // boundary points are decided by tolerance, not geometry
        }
        ++compared;
        if (joint_measure_feasibility(ScenarioCorrelations(e)).feasible ==
            test::lp_joint_measure_feasible(e)) {
            ++agreements;
        }
    }
    pass = pass && agreements == compared && compared >= 990;
    record(7, "Bell demonstration and joint-measure feasibility", pass,
           "chsh " + fmt(chsh) + "; facet vs LP " + std::to_string(agreements) + "/" +
               std::to_string(compared));
}

// 8. Determinism: stable-output reports are byte-identical across reruns.
void criterion_determinism() {
    RunOptions stable;
    stable.stable_output = true;
    bool pass = true;
    std::string detail;
    for (const char* name : {"spin_half.json", "chsh_singlet.json", "reduction_demo.json"}) {
        const std::string path = kScenarioDir + "/" + name;
        const std::string first = run_scenario_file(path, stable).report.dump();
        const std::string second = run_scenario_file(path, stable).report.dump();
        const bool same = first == second;
        pass = pass && same;
        detail += std::string(name) + (same ? " ok; " : " DIFFERS; ");
    }
    record(8, "byte-identical stable-output reports", pass, detail);
}

}  // namespace

int main() {
    criterion_characters();
    criterion_cstar();
    criterion_born_means();
    criterion_marginals();
    criterion_gns();
    criterion_reduction();
    criterion_bell();
    criterion_determinism();

    int failures = 0;
    for (const Criterion& c : results) {
        failures += c.pass ? 0 : 1;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failures);
    return failures;
}
