#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oalab/builtin.hpp"
#include "oalab/probability.hpp"
#include "lp_oracle.hpp"
#include "test_helpers.hpp"

using namespace oalab;
using test::index_of_value;

namespace {

DeviceType masa_of(const std::string& id, std::vector<Observable> members,
                   std::uint64_t seed = 1) {
    return masa_from_family(id, CommutingFamily(std::move(members)), seed);
}

DeviceRegistry z_registry() {
    DeviceRegistry registry;
    registry.add(masa_of("Z", {Observable(pauli_z())}));
    return registry;
}

// Dichotomic observable along a Bloch direction.
Matrix bloch(double theta) {
    return std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
}

const double kRoot2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("born distribution") {
    const DeviceRegistry registry = z_registry();
    const DeviceType& z = registry.device("Z");
    const Eigen::Index plus = index_of_value(z, Observable(pauli_z()), +1.0);
    const Eigen::Index minus = 1 - plus;

    const BornDistribution mixed = born_distribution(QuantumState::maximally_mixed(2), z);
    CHECK(mixed.probs[static_cast<std::size_t>(plus)] == doctest::Approx(0.5));
    CHECK(mixed.probs[static_cast<std::size_t>(minus)] == doctest::Approx(0.5));

    const BornDistribution ground =
        born_distribution(QuantumState::pure(basis_ket(2, 0)), z);
    CHECK(ground.probs[static_cast<std::size_t>(plus)] == doctest::Approx(1.0));
    CHECK(ground.probs[static_cast<std::size_t>(minus)] == doctest::Approx(0.0));

    Vector plus_ket(2);
    plus_ket << 1.0 / kRoot2, 1.0 / kRoot2;
    const BornDistribution balanced = born_distribution(QuantumState::pure(plus_ket), z);
    CHECK(balanced.probs[0] == doctest::Approx(0.5));
    CHECK(balanced.probs[1] == doctest::Approx(0.5));

    CHECK_THROWS_AS(born_distribution(QuantumState::maximally_mixed(4), z),
                    DimensionMismatch);
}

TEST_CASE("sampling: determinism and degenerate outcomes") {
    const DeviceRegistry registry = z_registry();
    const QuantumState ground = QuantumState::pure(basis_ket(2, 0));
    const Eigen::Index plus = index_of_value(registry.device("Z"), Observable(pauli_z()), +1.0);

    for (std::uint64_t draw = 0; draw < 64; ++draw) {
        const ElementaryState e = sample_elementary_state(ground, registry, 5, draw);
        CHECK(e.character_index("Z") == plus);
    }

    const EnsembleSample a = sample_ensemble(ground, registry, 5, 100);
    const EnsembleSample b = sample_ensemble(ground, registry, 5, 100);
    CHECK(a.draws == b.draws);

    // single-draw API agrees with the bulk sampler
    const QuantumState mixed = QuantumState::maximally_mixed(2);
    const EnsembleSample bulk = sample_ensemble(mixed, registry, 9, 50);
    for (std::uint64_t k = 0; k < 50; ++k) {
        CHECK(sample_elementary_state(mixed, registry, 9, k) == bulk.draws[k]);
    }
}

TEST_CASE("sampled frequencies obey the binomial bound") {
    const DeviceRegistry registry = z_registry();
    const std::size_t n = 100000;
    const EnsembleSample sample =
        sample_ensemble(QuantumState::maximally_mixed(2), registry, 12345, n);
    const Eigen::Index plus = index_of_value(registry.device("Z"), Observable(pauli_z()), +1.0);
    std::size_t hits = 0;
    for (const ElementaryState& e : sample.draws) {
        hits += (e.character_index("Z") == plus) ? 1 : 0;
    }
    const double frequency = static_cast<double>(hits) / static_cast<double>(n);
    CHECK(std::abs(frequency - 0.5) <= 3.0 * std::sqrt(0.25 / static_cast<double>(n)));
}

TEST_CASE("ensemble mean") {
    const DeviceRegistry registry = z_registry();
    const Observable sigma_z(pauli_z());

    const EnsembleSample ground =
        sample_ensemble(QuantumState::pure(basis_ket(2, 0)), registry, 3, 2000);
    const MeanEstimate exact = ensemble_mean(ground, sigma_z, "Z", registry);
    CHECK(std::abs(exact.mean - 1.0) <= 1e-12);
    CHECK(exact.stderr_of_mean <= 1e-12);

    const EnsembleSample mixed =
        sample_ensemble(QuantumState::maximally_mixed(2), registry, 4, 100000);
    const MeanEstimate balanced = ensemble_mean(mixed, sigma_z, "Z", registry);
    CHECK(std::abs(balanced.mean) <= 3.0 * balanced.stderr_of_mean);

    const MeanEstimate unit = ensemble_mean(mixed, Observable(identity(2)), "Z", registry);
    CHECK(std::abs(unit.mean - 1.0) <= 1e-12);

    CHECK_THROWS_AS(ensemble_mean(mixed, Observable(pauli_x()), "Z", registry),
                    NotInSubalgebra);
}

TEST_CASE("law of large numbers across seeded trials") {
    RandomStream rng(51);
    int hits = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const Eigen::Index n = (t % 2 == 0) ? 2 : 4;
        const QuantumState s(random_density(rng, n, n));
        DeviceRegistry registry;
        registry.add(masa_of("D", {Observable(random_hermitian(rng, n))}, 100 + t));
        const Observable a =
            test::random_contained_observable(rng, registry.device("D"));
        const EnsembleSample sample = sample_ensemble(s, registry, 1000 + t, 10000);
        const MeanEstimate est = ensemble_mean(sample, a, "D", registry);
        const double target = quantum_mean(s, a);
        if (std::abs(est.mean - target) <= 3.0 * est.stderr_of_mean + 1e-12) {
            ++hits;
        }
    }
    CHECK(hits >= trials - 1);
}

TEST_CASE("marginal agreement across device types") {
    const Observable shared(kron(pauli_z(), identity(2)));
    DeviceRegistry registry;
    registry.add(masa_of("ZZ", {shared, Observable(kron(identity(2), pauli_z()))}));
    registry.add(masa_of("ZX", {shared, Observable(kron(identity(2), pauli_x()))}));
    const QuantumState singlet = QuantumState::pure(singlet_ket());

    const MarginalAgreementReport report =
        check_marginal_agreement(singlet, shared, "ZZ", "ZX", registry, 20000, 21);
    CHECK(report.analytic_pass);
    CHECK(report.max_analytic_gap <= 1e-12);
    CHECK(report.empirical_pass);
    REQUIRE(report.values.size() == 2);
    CHECK(report.analytic_first[0] == doctest::Approx(0.5));
    CHECK(report.analytic_first[1] == doctest::Approx(0.5));

    // same device on both slots is trivially in agreement
    const MarginalAgreementReport same =
        check_marginal_agreement(singlet, shared, "ZZ", "ZZ", registry, 1000, 3);
    CHECK(same.pass());
    CHECK(same.max_analytic_gap == 0.0);

    // identity: a point mass at value 1 for every device type
    const MarginalAgreementReport point = check_marginal_agreement(
        singlet, Observable(identity(4)), "ZZ", "ZX", registry, 1000, 4);
    CHECK(point.pass());
    REQUIRE(point.values.size() == 1);
    CHECK(point.analytic_first[0] == doctest::Approx(1.0));
    CHECK(point.empirical_first[0] == doctest::Approx(1.0));

    CHECK_THROWS_AS(check_marginal_agreement(singlet, Observable(kron(pauli_y(), identity(2))),
                                             "ZZ", "ZX", registry, 10, 1),
                    NotInSubalgebra);
}

TEST_CASE("chsh value at the optimal singlet settings") {
    const QuantumState singlet = QuantumState::pure(singlet_ket());
    const Observable a1(kron(pauli_z(), identity(2)));
    const Observable a2(kron(pauli_x(), identity(2)));
    const Observable b1(kron(identity(2), Matrix(-bloch(std::numbers::pi / 4.0))));
    const Observable b2(kron(identity(2), Matrix(bloch(3.0 * std::numbers::pi / 4.0))));

    const double value = chsh_value(singlet, a1, a2, b1, b2);
    CHECK(std::abs(value - 2.8284271247461903) <= 1e-9);

    const ScenarioCorrelations c = correlations_from_state(singlet, a1, a2, b1, b2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(c.e(i, j)) <= 1.0 + 1e-9);
        }
    }

    // repeated settings collapse to twice one correlation
    const double doubled = chsh_value(singlet, a1, a1, b1, b1);
    CHECK(doubled == doctest::Approx(2.0 * c.e(0, 0)).epsilon(1e-12));
}

TEST_CASE("chsh rejects bad settings") {
    const QuantumState singlet = QuantumState::pure(singlet_ket());
    const Observable a1(kron(pauli_z(), identity(2)));
    const Observable b1(kron(identity(2), pauli_z()));
    Matrix half_spectrum = Matrix::Zero(4, 4);
    half_spectrum(0, 0) = 0.5;
    half_spectrum(1, 1) = -0.5;
    half_spectrum(2, 2) = 0.5;
    half_spectrum(3, 3) = -0.5;
    CHECK_THROWS_AS(chsh_value(singlet, Observable(half_spectrum), a1, b1, b1), NotDichotomic);
    CHECK_THROWS_AS(
        chsh_value(singlet, a1, a1, Observable(kron(pauli_x(), identity(2))), b1),
        NotCommuting);
}

TEST_CASE("product states respect the classical bound") {
    RandomStream rng(61);
    for (int rep = 0; rep < 25; ++rep) {
        const Matrix rho_a = random_density(rng, 2, 2);
        const Matrix rho_b = random_density(rng, 2, 2);
        const QuantumState product(kron(rho_a, rho_b));
        const auto angle = [&] { return rng.uniform() * 2.0 * std::numbers::pi; };
        const Observable a1(kron(bloch(angle()), identity(2)));
        const Observable a2(kron(bloch(angle()), identity(2)));
        const Observable b1(kron(identity(2), bloch(angle())));
        const Observable b2(kron(identity(2), bloch(angle())));
        const ScenarioCorrelations c = correlations_from_state(product, a1, a2, b1, b2);
        CHECK(chsh_value(c) <= 2.0 + 1e-9);
        CHECK(joint_measure_feasibility(c).feasible);
    }
}

TEST_CASE("deterministic strategies cap chsh at two") {
    double best = 0.0;
    for (int v = 0; v < 16; ++v) {
        const double a1 = (v & 1) ? 1.0 : -1.0;
        const double a2 = (v & 2) ? 1.0 : -1.0;
        const double b1 = (v & 4) ? 1.0 : -1.0;
        const double b2 = (v & 8) ? 1.0 : -1.0;
        best = std::max(best, std::abs(a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2));
    }
    CHECK(best == doctest::Approx(2.0));

    // correlations mixed from deterministic assignments stay feasible
    RandomStream rng(67);
    for (int rep = 0; rep < 50; ++rep) {
        std::array<double, 16> weights{};
        double total = 0.0;
        for (double& w : weights) {
            w = rng.uniform();
            total += w;
        }
        std::array<std::array<double, 2>, 2> e{{{0.0, 0.0}, {0.0, 0.0}}};
        for (int v = 0; v < 16; ++v) {
            const double w = weights[static_cast<std::size_t>(v)] / total;
            const double a1 = (v & 1) ? 1.0 : -1.0;
            const double a2 = (v & 2) ? 1.0 : -1.0;
            const double b1 = (v & 4) ? 1.0 : -1.0;
            const double b2 = (v & 8) ? 1.0 : -1.0;
            e[0][0] += w * a1 * b1;
            e[0][1] += w * a1 * b2;
            e[1][0] += w * a2 * b1;
            e[1][1] += w * a2 * b2;
        }
        const ScenarioCorrelations c(e);
        CHECK(chsh_value(c) <= 2.0 + 1e-9);
        CHECK(joint_measure_feasibility(c).feasible);
    }
}

TEST_CASE("joint measure feasibility") {
    const ScenarioCorrelations zeros({{{0.0, 0.0}, {0.0, 0.0}}});
    CHECK(joint_measure_feasibility(zeros).feasible);

    const double q = 1.0 / kRoot2;
    const ScenarioCorrelations tsirelson({{{q, q}, {q, -q}}});
    const FeasibilityResult violated = joint_measure_feasibility(tsirelson);
    CHECK_FALSE(violated.feasible);
    REQUIRE(violated.witness.has_value());
    CHECK(violated.witness->value == doctest::Approx(2.0 * kRoot2));
    CHECK(violated.witness->signs == std::array<int, 4>{1, 1, 1, -1});

    CHECK_THROWS_AS(ScenarioCorrelations({{{1.5, 0.0}, {0.0, 0.0}}}), ValidationError);
}

TEST_CASE("facet test agrees with the brute-force LP oracle") {
    RandomStream rng(71);
    int compared = 0;
    for (int rep = 0; rep < 300; ++rep) {
        std::array<std::array<double, 2>, 2> e;
        double margin = 10.0;
        for (auto& row : e) {
            for (double& value : row) {
                value = 2.0 * rng.uniform() - 1.0;
            }
        }
        const ScenarioCorrelations c(e);
        // facet margin: skip vectors within numerical reach of the boundary
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
            continue;
        }
        ++compared;
        CHECK(joint_measure_feasibility(c).feasible == test::lp_joint_measure_feasible(e));
    }
    CHECK(compared >= 290);  // random draws essentially never sit on a facet
}

TEST_CASE("ensemble CSV export") {
    const DeviceRegistry registry = z_registry();
    const EnsembleSample sample =
        sample_ensemble(QuantumState::maximally_mixed(2), registry, 8, 5);
    std::ostringstream out;
    write_ensemble_csv(out, sample);
    std::istringstream lines(out.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "draw,xi,character_index");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find(",Z,") != std::string::npos);
    }
    CHECK(rows == 5);
}
