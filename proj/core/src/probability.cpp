#include "oalab/probability.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "oalab/rng.hpp"

namespace oalab {

namespace {

std::size_t index_from_uniform(const std::vector<double>& probs, double u) {
    double cumulative = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) {
            return k;
        }
    }
    // Rounding can leave the cumulative sum a hair below 1.
    return probs.size() - 1;
}

std::vector<BornDistribution> born_cache(const QuantumState& s, const DeviceRegistry& registry) {
    std::vector<BornDistribution> cache;
    cache.reserve(registry.size());
    for (const DeviceType& d : registry.devices()) {
        cache.push_back(born_distribution(s, d));
    }
    return cache;
}

ElementaryState draw_with_cache(const std::vector<BornDistribution>& cache,
                                std::uint64_t seed, std::uint64_t draw_index) {
    ElementaryState e;
    for (const BornDistribution& born : cache) {
        RandomStream stream = RandomStream::derive(seed, draw_index, fnv1a(born.device));
        e.assignment[born.device] =
            static_cast<Eigen::Index>(index_from_uniform(born.probs, stream.uniform()));
    }
    return e;
}

MeanEstimate estimate_from_values(const std::vector<double>& values) {
    MeanEstimate est;
    est.count = values.size();
    if (values.empty()) {
        return est;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    est.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - est.mean) * (v - est.mean);
        }
        const double variance = ss / static_cast<double>(values.size() - 1);
        est.stderr_of_mean = std::sqrt(variance / static_cast<double>(values.size()));
    }
    return est;
}

// Index of the nearest cluster value for each character value.
std::vector<std::size_t> cluster_indices(const std::vector<double>& clusters,
                                         const std::vector<double>& character_values,
                                         double gap) {
    std::vector<std::size_t> out;
    out.reserve(character_values.size());
    for (double value : character_values) {
        std::size_t best = 0;
        double best_distance = std::abs(value - clusters[0]);
        for (std::size_t j = 1; j < clusters.size(); ++j) {
            const double distance = std::abs(value - clusters[j]);
            if (distance < best_distance) {
                best = j;
                best_distance = distance;
            }
        }
        if (best_distance > gap) {
            throw EigenFailure("character value does not match any eigenvalue cluster");
        }
        out.push_back(best);
    }
    return out;
}

std::vector<double> accumulate_clusters(std::size_t cluster_count,
                                        const std::vector<std::size_t>& indices,
                                        const std::vector<double>& weights) {
    std::vector<double> out(cluster_count, 0.0);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        out[indices[k]] += weights[k];
    }
    return out;
}

void require_dichotomic(const Observable& a, const char* label) {
    for (double lambda : spectrum(a)) {
        if (std::abs(lambda - 1.0) > tol::kEigen && std::abs(lambda + 1.0) > tol::kEigen) {
            throw NotDichotomic(std::string(label) + ": eigenvalue " + std::to_string(lambda) +
                                " is neither +1 nor -1");
        }
    }
}

}  // namespace

BornDistribution born_distribution(const QuantumState& s, const DeviceType& d) {
    if (s.dim() != d.dim()) {
        throw DimensionMismatch("born_distribution: state dimension " +
                                std::to_string(s.dim()) + " vs device dimension " +
                                std::to_string(d.dim()));
    }
    BornDistribution born;
    born.device = d.id();
    born.probs.reserve(static_cast<std::size_t>(d.dim()));
    double sum = 0.0;
    for (const Projector& p : d.projectors()) {
        double prob = p.matrix().transpose().cwiseProduct(s.rho()).sum().real();
        if (prob < 0.0) {
            if (prob < -tol::kProbabilityClip) {
                throw NotAState("born probability " + std::to_string(prob) +
                                " below the noise floor");
            }
            prob = 0.0;
        }
        born.probs.push_back(prob);
        sum += prob;
    }
    if (std::abs(sum - 1.0) > tol::kTraceOne) {
        throw NotAState("born probabilities sum to " + std::to_string(sum));
    }
    for (double& p : born.probs) {
        p /= sum;
    }
    return born;
}

ElementaryState sample_elementary_state(const QuantumState& s, const DeviceRegistry& registry,
                                        std::uint64_t seed, std::uint64_t draw_index) {
    if (registry.empty()) {
        throw ValidationError("sampling requires a nonempty registry");
    }
    return draw_with_cache(born_cache(s, registry), seed, draw_index);
}

EnsembleSample sample_ensemble(const QuantumState& s, const DeviceRegistry& registry,
                               std::uint64_t seed, std::size_t count) {
    if (registry.empty()) {
        throw ValidationError("sampling requires a nonempty registry");
    }
    const auto cache = born_cache(s, registry);
    EnsembleSample sample{s, seed, {}};
    sample.draws.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        sample.draws.push_back(draw_with_cache(cache, seed, static_cast<std::uint64_t>(i)));
    }
    return sample;
}

void write_ensemble_csv(std::ostream& out, const EnsembleSample& sample) {
    out << "draw,xi,character_index\n";
    for (std::size_t i = 0; i < sample.draws.size(); ++i) {
        for (const auto& [device, index] : sample.draws[i].assignment) {
            out << i << ',' << device << ',' << index << '\n';
        }
    }
}

MeanEstimate ensemble_mean(const EnsembleSample& sample, const Observable& a,
                           const std::string& device_id, const DeviceRegistry& registry) {
    const DeviceType& d = registry.device(device_id);
    const std::vector<double> values = d.eigenvalues(a);  // throws NotInSubalgebra
    std::vector<double> draws;
    draws.reserve(sample.size());
    for (const ElementaryState& e : sample.draws) {
        draws.push_back(values[static_cast<std::size_t>(e.character_index(device_id))]);
    }
    return estimate_from_values(draws);
}

MarginalAgreementReport check_marginal_agreement(const QuantumState& s, const Observable& a,
                                                 const std::string& first_device,
                                                 const std::string& second_device,
                                                 const DeviceRegistry& registry,
                                                 std::size_t samples, std::uint64_t seed) {
    const DeviceType& first = registry.device(first_device);
    const DeviceType& second = registry.device(second_device);
    const std::vector<double> first_values = first.eigenvalues(a);
    const std::vector<double> second_values = second.eigenvalues(a);

    const double gap = tol::kEigen * std::max(1.0, cstar_norm(a));
    std::vector<double> clusters;
    for (double lambda : spectrum(a)) {
        if (clusters.empty() || lambda - clusters.back() > gap) {
            clusters.push_back(lambda);
        }
    }

    MarginalAgreementReport report;
    report.values = clusters;
    report.samples = samples;
    report.seed = seed;

    const std::vector<std::size_t> first_map = cluster_indices(clusters, first_values, gap);
    const std::vector<std::size_t> second_map = cluster_indices(clusters, second_values, gap);

    const BornDistribution first_born = born_distribution(s, first);
    const BornDistribution second_born = born_distribution(s, second);
    report.analytic_first = accumulate_clusters(clusters.size(), first_map, first_born.probs);
    report.analytic_second = accumulate_clusters(clusters.size(), second_map, second_born.probs);

    report.max_analytic_gap = 0.0;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
        report.max_analytic_gap = std::max(
            report.max_analytic_gap,
            std::abs(report.analytic_first[j] - report.analytic_second[j]));
    }
    report.analytic_pass = report.max_analytic_gap <= 1e-12;

    const EnsembleSample sample = sample_ensemble(s, registry, seed, samples);
    std::vector<double> first_counts(clusters.size(), 0.0);
    std::vector<double> second_counts(clusters.size(), 0.0);
    for (const ElementaryState& e : sample.draws) {
        first_counts[first_map[static_cast<std::size_t>(e.character_index(first_device))]] += 1.0;
        second_counts[second_map[static_cast<std::size_t>(e.character_index(second_device))]] += 1.0;
    }

    report.empirical_pass = true;
    const double n = static_cast<double>(samples);
    for (std::size_t j = 0; j < clusters.size(); ++j) {
        const double f1 = first_counts[j] / n;
        const double f2 = second_counts[j] / n;
        report.empirical_first.push_back(f1);
        report.empirical_second.push_back(f2);
        const double combined =
            std::sqrt(f1 * (1.0 - f1) / n + f2 * (1.0 - f2) / n);
        if (std::abs(f1 - f2) > 3.0 * combined + 1e-12) {
            report.empirical_pass = false;
        }
    }
    return report;
}

ScenarioCorrelations::ScenarioCorrelations(std::array<std::array<double, 2>, 2> e) : e_(e) {
    for (const auto& row : e_) {
        for (double value : row) {
            if (std::abs(value) > 1.0 + tol::kEigen) {
                throw ValidationError("correlation " + std::to_string(value) +
                                      " lies outside [-1, 1]");
            }
        }
    }
}

ScenarioCorrelations correlations_from_state(const QuantumState& s, const Observable& a1,
                                             const Observable& a2, const Observable& b1,
                                             const Observable& b2) {
    const std::array<const Observable*, 2> alice{&a1, &a2};
    const std::array<const Observable*, 2> bob{&b1, &b2};
    require_dichotomic(a1, "A1");
    require_dichotomic(a2, "A2");
    require_dichotomic(b1, "B1");
    require_dichotomic(b2, "B2");
    std::array<std::array<double, 2>, 2> e{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (!commutes(*alice[i], *bob[j])) {
                throw NotCommuting("setting A" + std::to_string(i + 1) +
                                   " does not commute with B" + std::to_string(j + 1));
            }
            e[i][j] = quantum_mean(s, Observable(mul(*alice[i], *bob[j])));
        }
    }
    return ScenarioCorrelations(e);
}

double chsh_value(const ScenarioCorrelations& c) {
    return c.e(0, 0) + c.e(0, 1) + c.e(1, 0) - c.e(1, 1);
}

double chsh_value(const QuantumState& s, const Observable& a1, const Observable& a2,
                  const Observable& b1, const Observable& b2) {
    return chsh_value(correlations_from_state(s, a1, a2, b1, b2));
}

std::string FacetWitness::description() const {
    const char* names[4] = {"E11", "E12", "E21", "E22"};
    std::string text;
    for (int k = 0; k < 4; ++k) {
        text += (signs[k] > 0) ? "+" : "-";
        text += names[k];
        if (k < 3) {
            text += " ";
        }
    }
    return text + " = " + std::to_string(value) + " > 2";
}

FeasibilityResult joint_measure_feasibility(const ScenarioCorrelations& c) {
    FeasibilityResult result;
    result.feasible = true;
    double worst = 2.0;
    for (int mask = 0; mask < 16; ++mask) {
        std::array<int, 4> signs;
        int parity = 1;
        for (int k = 0; k < 4; ++k) {
            signs[k] = (mask & (1 << k)) ? -1 : 1;
            parity *= signs[k];
        }
        if (parity != -1) {
            continue;
        }
        const double value = signs[0] * c.e(0, 0) + signs[1] * c.e(0, 1) +
                             signs[2] * c.e(1, 0) + signs[3] * c.e(1, 1);
        if (value > 2.0 + tol::kEigen && value > worst) {
            worst = value;
            result.feasible = false;
            result.witness = FacetWitness{signs, value};
        }
    }
    return result;
}

}  // namespace oalab
