#include "oalab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oalab/builtin.hpp"
#include "oalab/probability.hpp"
#include "oalab/random_matrices.hpp"

namespace oalab {

namespace {

constexpr std::uint64_t kEtaSalt = 0x657461ULL;  // "eta"

ConditionalMeanEstimate estimate_conditional(const std::vector<double>& values,
                                             std::size_t total) {
    if (values.empty()) {
        throw ZeroProbability("no draw satisfied the condition p = 1");
    }
    ConditionalMeanEstimate est;
    est.total = total;
    est.conditioned = values.size();
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
        est.stderr_of_mean = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                                       static_cast<double>(values.size()));
    }
    return est;
}

}  // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (const Interval& piece : intervals_) {
        if (std::isnan(piece.lo) || std::isnan(piece.hi) || piece.lo > piece.hi) {
            throw ValidationError("interval endpoints must satisfy lo <= hi");
        }
    }
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& piece : intervals_) {
        if (!merged.empty() && piece.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, piece.hi);
        } else {
            merged.push_back(piece);
        }
    }
    intervals_ = std::move(merged);
}

IntervalUnion IntervalUnion::full_line() {
    return IntervalUnion({{-std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()}});
}

IntervalUnion IntervalUnion::empty() {
    return IntervalUnion({});
}

bool IntervalUnion::contains(double x, double margin) const {
    for (const Interval& piece : intervals_) {
        if (x >= piece.lo - margin && x <= piece.hi + margin) {
            return true;
        }
    }
    return false;
}

Projector spectral_projector(const Observable& a, const IntervalUnion& window) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("spectral projector: eigenvalue iteration did not converge");
    }
    const double margin = tol::kEigen * std::max(1.0, cstar_norm(a));
    const Eigen::Index n = a.dim();
    Matrix sum = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (window.contains(solver.eigenvalues()(k), margin)) {
            const Vector v = solver.eigenvectors().col(k);
            sum += v * v.adjoint();
        }
    }
    return Projector(sum);
}

YesNoExperiment::YesNoExperiment(Observable a, IntervalUnion s)
    : observable(std::move(a)),
      window(std::move(s)),
      projector(spectral_projector(observable, window)) {}

QuantumState collapse(const QuantumState& psi, const Projector& p) {
    if (psi.dim() != p.dim()) {
        throw DimensionMismatch("collapse: state and projector dimensions differ");
    }
    const Matrix compressed = p.matrix() * psi.rho() * p.matrix();
    const double weight = compressed.trace().real();
    if (weight <= tol::kProbabilityClip) {
        throw ZeroProbability("collapse: the yes-probability is zero; the conditional state "
                              "is undefined");
    }
    // Symmetrize away the rounding drift of the two-sided product.
    const Matrix reduced = 0.5 * (compressed + compressed.adjoint().eval()) / weight;
    return QuantumState(reduced);
}

ReductionIdentitiesReport verify_reduction_identities(const QuantumState& psi_prime,
                                                      const Projector& p, int trials,
                                                      std::uint64_t seed) {
    ReductionIdentitiesReport report;
    report.trials = trials;

    const Eigen::Index n = psi_prime.dim();
    const DynamicalVariable identity_var(identity(n));
    const DynamicalVariable projector_var = p;

    report.normalization_residual =
        std::max(std::abs(quantum_mean(psi_prime, p) - 1.0),
                 std::abs(quantum_mean(psi_prime, Observable(identity(n))) - 1.0));

    RandomStream rng = RandomStream::derive(seed, kEtaSalt, trials);
    for (int t = 0; t < trials; ++t) {
        Matrix probe = random_ginibre(rng, n);
        probe /= operator_norm(probe);
        const DynamicalVariable a(probe);

        const Complex mean_a = extend_to_dynamical(psi_prime, a);
        const Complex tail =
            extend_to_dynamical(psi_prime, mul(a, identity_var - projector_var));
        const double gram = extend_to_dynamical(psi_prime, mul(adjoint(a), a)).real();
        const double miss =
            quantum_mean(psi_prime, Observable(identity(n) - p.matrix()));
        report.schwarz_residual = std::max(
            report.schwarz_residual, std::norm(tail) - gram * std::max(miss, 0.0));

        const double right = std::abs(mean_a - extend_to_dynamical(psi_prime, mul(a, projector_var)));
        const double left = std::abs(mean_a - extend_to_dynamical(psi_prime, mul(projector_var, a)));
        const double both = std::abs(
            mean_a - extend_to_dynamical(psi_prime, mul(mul(projector_var, a), projector_var)));
        report.projection_residual =
            std::max({report.projection_residual, right, left, both});
    }
    report.schwarz_residual = std::max(report.schwarz_residual, 0.0);
    return report;
}

ConditionalMeanEstimate conditional_mean_empirical(const QuantumState& psi, const Observable& a,
                                                   const Projector& p, std::size_t samples,
                                                   std::uint64_t seed) {
    const Matrix compressed = p.matrix() * a.matrix() * p.matrix();
    const Observable a_p(0.5 * (compressed + compressed.adjoint().eval()));
    const CommutingFamily family({a_p, p.observable()});
    const DeviceType eta =
        masa_from_family("eta", family, RandomStream::derive(seed, kEtaSalt).next_u64());
    return conditional_mean_empirical(psi, a, p, eta, samples, seed);
}

ConditionalMeanEstimate conditional_mean_empirical(const QuantumState& psi, const Observable& a,
                                                   const Projector& p, const DeviceType& eta,
                                                   std::size_t samples, std::uint64_t seed) {
    const Matrix compressed = p.matrix() * a.matrix() * p.matrix();
    const Observable a_p(0.5 * (compressed + compressed.adjoint().eval()));

    const std::vector<double> p_values = eta.eigenvalues(p.observable());
    const std::vector<double> a_values = eta.eigenvalues(a_p);

    DeviceRegistry registry;
    registry.add(eta);
    const EnsembleSample sample = sample_ensemble(psi, registry, seed, samples);

    std::vector<double> conditioned;
    conditioned.reserve(samples);
    for (const ElementaryState& e : sample.draws) {
        const auto k = static_cast<std::size_t>(e.character_index(eta.id()));
        if (p_values[k] > 0.5) {
            conditioned.push_back(a_values[k]);
        }
    }
    return estimate_conditional(conditioned, samples);
}

std::vector<YesNoStep> sequential_yes_no(const QuantumState& psi,
                                         const std::vector<YesNoExperiment>& experiments) {
    if (experiments.empty()) {
        throw ValidationError("sequential_yes_no requires at least one experiment");
    }
    std::vector<YesNoStep> trace;
    trace.reserve(experiments.size());
    QuantumState current = psi;
    for (std::size_t step = 0; step < experiments.size(); ++step) {
        const Projector& p = experiments[step].projector;
        const double probability = quantum_mean(current, p);
        if (probability <= tol::kProbabilityClip) {
            throw ZeroProbability("yes-branch died at step " + std::to_string(step));
        }
        current = collapse(current, p);
        trace.push_back({probability, current});
    }
    return trace;
}

}  // namespace oalab
