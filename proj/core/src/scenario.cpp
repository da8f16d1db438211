#include "oalab/scenario.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "oalab/builtin.hpp"
#include "oalab/random_matrices.hpp"
#include "oalab/rng.hpp"

namespace oalab {

namespace {

constexpr std::uint64_t kDeviceSalt = 0x646576ULL;  // "dev"
constexpr std::uint64_t kTaskSalt = 0x7461736BULL;  // "task"

// ------------------------------------------------------------------
// Operator expressions
// ------------------------------------------------------------------

struct ExprValue {
    bool is_matrix = false;
    double scalar = 0.0;
    Matrix matrix;

    static ExprValue from_scalar(double x) { return {false, x, {}}; }
    static ExprValue from_matrix(Matrix m) { return {true, 0.0, std::move(m)}; }
};

class ExpressionParser {
  public:
    explicit ExpressionParser(const std::string& text) : text_(text) {}

    Matrix parse_matrix() {
        ExprValue value = expression();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("trailing input");
        }
        if (!value.is_matrix) {
            fail("expression evaluates to a scalar, expected an operator");
        }
        return value.matrix;
    }

  private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError("operator expression '" + text_ + "' at offset " +
                         std::to_string(pos_) + ": " + message);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprValue expression() {
        ExprValue left = term();
        while (true) {
            skip_ws();
            if (consume('+')) {
                left = add(left, term(), +1.0);
            } else if (consume('-')) {
                left = add(left, term(), -1.0);
            } else {
                return left;
            }
        }
    }

    ExprValue term() {
        ExprValue left = unary();
        while (true) {
            skip_ws();
            if (consume('*')) {
                left = multiply(left, unary());
            } else if (consume('/')) {
                left = divide(left, unary());
            } else {
                return left;
            }
        }
    }

    ExprValue unary() {
        skip_ws();
        if (consume('-')) {
            ExprValue value = unary();
            if (value.is_matrix) {
                value.matrix = -value.matrix;
            } else {
                value.scalar = -value.scalar;
            }
            return value;
        }
        return primary();
    }

    ExprValue primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (consume('(')) {
            ExprValue value = expression();
            if (!consume(')')) {
                fail("expected ')'");
            }
            return value;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return ExprValue::from_scalar(number());
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return name_or_call();
        }
        fail("unexpected character");
    }

    double number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == 'e' || text_[pos_] == 'E' ||
                ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
            ++pos_;
        }
        try {
            return std::stod(text_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            fail("bad numeric literal");
        }
    }

    ExprValue name_or_call() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name = text_.substr(start, pos_ - start);
        if (consume('(')) {
            std::vector<ExprValue> args;
            if (!consume(')')) {
                args.push_back(expression());
                while (consume(',')) {
                    args.push_back(expression());
                }
                if (!consume(')')) {
                    fail("expected ')' after arguments of " + name);
                }
            }
            return call(name, args);
        }
        if (name == "pauli_x") {
            return ExprValue::from_matrix(pauli_x());
        }
        if (name == "pauli_y") {
            return ExprValue::from_matrix(pauli_y());
        }
        if (name == "pauli_z") {
            return ExprValue::from_matrix(pauli_z());
        }
        fail("unknown name '" + name + "'");
    }

    ExprValue call(const std::string& name, const std::vector<ExprValue>& args) {
        if (name == "id" || name == "identity") {
            if (args.size() != 1 || args[0].is_matrix) {
                fail(name + " takes one scalar argument");
            }
            const double n = args[0].scalar;
            if (n < 1 || n != std::floor(n)) {
                fail(name + " needs a positive integer dimension");
            }
            return ExprValue::from_matrix(identity(static_cast<Eigen::Index>(n)));
        }
        if (name == "diag") {
            if (args.empty()) {
                fail("diag needs at least one entry");
            }
            Matrix m = Matrix::Zero(static_cast<Eigen::Index>(args.size()),
                                    static_cast<Eigen::Index>(args.size()));
            for (std::size_t k = 0; k < args.size(); ++k) {
                if (args[k].is_matrix) {
                    fail("diag entries must be scalars");
                }
                m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = args[k].scalar;
            }
            return ExprValue::from_matrix(std::move(m));
        }
        if (name == "kron") {
            if (args.size() != 2 || !args[0].is_matrix || !args[1].is_matrix) {
                fail("kron takes two operator arguments");
            }
            return ExprValue::from_matrix(kron(args[0].matrix, args[1].matrix));
        }
        if (name == "sqrt") {
            if (args.size() != 1 || args[0].is_matrix || args[0].scalar < 0.0) {
                fail("sqrt takes one nonnegative scalar");
            }
            return ExprValue::from_scalar(std::sqrt(args[0].scalar));
        }
        fail("unknown function '" + name + "'");
    }

    ExprValue add(const ExprValue& a, const ExprValue& b, double sign) {
        if (a.is_matrix != b.is_matrix) {
            fail("cannot add a scalar and an operator");
        }
        if (a.is_matrix) {
            if (a.matrix.rows() != b.matrix.rows()) {
                fail("operator dimensions differ in addition");
            }
            return ExprValue::from_matrix(a.matrix + sign * b.matrix);
        }
        return ExprValue::from_scalar(a.scalar + sign * b.scalar);
    }

    ExprValue multiply(const ExprValue& a, const ExprValue& b) {
        if (a.is_matrix && b.is_matrix) {
            if (a.matrix.cols() != b.matrix.rows()) {
                fail("operator dimensions differ in product");
            }
            return ExprValue::from_matrix(a.matrix * b.matrix);
        }
        if (a.is_matrix) {
            return ExprValue::from_matrix(b.scalar * a.matrix);
        }
        if (b.is_matrix) {
            return ExprValue::from_matrix(a.scalar * b.matrix);
        }
        return ExprValue::from_scalar(a.scalar * b.scalar);
    }

    ExprValue divide(const ExprValue& a, const ExprValue& b) {
        if (b.is_matrix) {
            fail("cannot divide by an operator");
        }
        if (b.scalar == 0.0) {
            fail("division by zero");
        }
        if (a.is_matrix) {
            return ExprValue::from_matrix(a.matrix / b.scalar);
        }
        return ExprValue::from_scalar(a.scalar / b.scalar);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

// ------------------------------------------------------------------
// Spec parsing
// ------------------------------------------------------------------

const Json& require_field(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return *it;
}

std::string string_field(const Json& j, const char* key) {
    const Json& field = require_field(j, key);
    if (!field.is_string()) {
        throw ParseError(std::string("field '") + key + "' must be a string");
    }
    return field.get<std::string>();
}

Observable observable_field(const Json& task, const char* key, Eigen::Index dimension) {
    const Matrix m = parse_operator(string_field(task, key));
    if (m.rows() != dimension) {
        throw ValidationError(std::string("operator in field '") + key + "' has dimension " +
                              std::to_string(m.rows()) + ", scenario dimension is " +
                              std::to_string(dimension));
    }
    return Observable(m);
}

Vector ket_from_json(const Json& entries) {
    if (!entries.is_array() || entries.empty()) {
        throw ParseError("'pure' must be a nonempty array of amplitudes");
    }
    Vector ket(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const Json& cell = entries[k];
        if (cell.is_number()) {
            ket(static_cast<Eigen::Index>(k)) = cell.get<double>();
        } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                   cell[1].is_number()) {
            ket(static_cast<Eigen::Index>(k)) =
                Complex(cell[0].get<double>(), cell[1].get<double>());
        } else {
            throw ParseError("ket amplitudes must be numbers or [re, im] pairs");
        }
    }
    return ket;
}

double window_endpoint(const Json& cell) {
    if (cell.is_number()) {
        return cell.get<double>();
    }
    if (cell.is_string()) {
        const std::string text = cell.get<std::string>();
        if (text == "inf" || text == "+inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (text == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
    }
    throw ParseError("window endpoints must be numbers or \"inf\" / \"-inf\"");
}

IntervalUnion window_field(const Json& task) {
    const Json& field = require_field(task, "window");
    if (!field.is_array()) {
        throw ParseError("'window' must be an array of [lo, hi] intervals");
    }
    std::vector<IntervalUnion::Interval> intervals;
    for (const Json& piece : field) {
        if (!piece.is_array() || piece.size() != 2) {
            throw ParseError("'window' entries must be [lo, hi] pairs");
        }
        intervals.push_back({window_endpoint(piece[0]), window_endpoint(piece[1])});
    }
    return IntervalUnion(std::move(intervals));
}

}  // namespace

Matrix parse_operator(const std::string& text) {
    ExpressionParser parser(text);
    return parser.parse_matrix();
}

QuantumState state_from_spec(const Json& spec, Eigen::Index dimension) {
    if (!spec.is_object()) {
        throw ParseError("state spec must be a JSON object");
    }
    QuantumState state = [&] {
        if (spec.contains("rho")) {
            return state_from_json(spec);
        }
        if (spec.contains("pure")) {
            return QuantumState::pure(ket_from_json(spec.at("pure")));
        }
        if (spec.contains("named")) {
            const std::string name = string_field(spec, "named");
            if (name == "maximally_mixed") {
                return QuantumState::maximally_mixed(dimension);
            }
            if (name == "singlet") {
                return QuantumState::pure(singlet_ket());
            }
            throw ValidationError("unknown named state '" + name + "'");
        }
        throw ParseError("state spec needs 'rho', 'pure', or 'named'");
    }();
    if (state.dim() != dimension) {
        throw ValidationError("state dimension " + std::to_string(state.dim()) +
                              " does not match scenario dimension " +
                              std::to_string(dimension));
    }
    return state;
}

DeviceType device_from_spec(const Json& spec, Eigen::Index dimension,
                            std::uint64_t scenario_seed) {
    if (!spec.is_object()) {
        throw ParseError("device spec must be a JSON object");
    }
    const std::string id = string_field(spec, "id");
    DeviceType device = [&] {
        if (spec.contains("projectors")) {
            return device_from_json(spec);
        }
        if (spec.contains("generators")) {
            const Json& generators = spec.at("generators");
            if (!generators.is_array() || generators.empty()) {
                throw ParseError("device 'generators' must be a nonempty array");
            }
            std::vector<Observable> members;
            for (const Json& g : generators) {
                if (!g.is_string()) {
                    throw ParseError("device generators must be operator expressions");
                }
                members.emplace_back(parse_operator(g.get<std::string>()));
            }
            const std::uint64_t seed =
                RandomStream::derive(scenario_seed, fnv1a(id), kDeviceSalt).next_u64();
            return masa_from_family(id, CommutingFamily(std::move(members)), seed);
        }
        if (spec.contains("named")) {
            const std::string name = string_field(spec, "named");
            if (name == "computational") {
                std::vector<Projector> projectors;
                for (Eigen::Index k = 0; k < dimension; ++k) {
                    projectors.emplace_back(ket_projector(basis_ket(dimension, k)));
                }
                return DeviceType(id, std::move(projectors));
            }
            if (name == "bell_basis") {
                std::vector<Projector> projectors;
                for (const Vector& ket : bell_kets()) {
                    projectors.emplace_back(ket_projector(ket));
                }
                return DeviceType(id, std::move(projectors));
            }
            throw ValidationError("unknown named device '" + name + "'");
        }
        throw ParseError("device spec needs 'projectors', 'generators', or 'named'");
    }();
    if (device.dim() != dimension) {
        throw ValidationError("device '" + id + "' has dimension " +
                              std::to_string(device.dim()) +
                              ", scenario dimension is " + std::to_string(dimension));
    }
    return device;
}

Scenario load_scenario(const Json& doc, const RunOptions& options) {
    if (!doc.is_object()) {
        throw ParseError("scenario must be a JSON object");
    }
    const Json& dim = require_field(doc, "dimension");
    if (!dim.is_number_integer() || dim.get<Eigen::Index>() < 1) {
        throw ParseError("'dimension' must be a positive integer");
    }

    Scenario sc{.name = doc.value("name", std::string("scenario")),
                .dimension = dim.get<Eigen::Index>(),
                .seed = doc.value("seed", std::uint64_t{0}),
                .samples = doc.value("samples", std::size_t{10000}),
                .state = QuantumState::maximally_mixed(dim.get<Eigen::Index>()),
                .registry = {},
                .tasks = {}};
    if (options.seed) {
        sc.seed = *options.seed;
    }
    if (options.samples) {
        sc.samples = *options.samples;
    }
    if (sc.samples == 0) {
        throw ValidationError("'samples' must be positive");
    }

    sc.state = state_from_spec(require_field(doc, "state"), sc.dimension);

    const Json& registry = require_field(doc, "registry");
    if (!registry.is_array() || registry.empty()) {
        throw ParseError("'registry' must be a nonempty array of device specs");
    }
    for (const Json& spec : registry) {
        sc.registry.add(device_from_spec(spec, sc.dimension, sc.seed));
    }

    if (doc.contains("tasks")) {
        const Json& tasks = doc.at("tasks");
        if (!tasks.is_array()) {
            throw ParseError("'tasks' must be an array");
        }
        for (const Json& task : tasks) {
            if (!task.is_object() || !task.contains("type") || !task.at("type").is_string()) {
                throw ParseError("each task needs a string 'type'");
            }
            sc.tasks.push_back(task);
        }
    }
    return sc;
}

namespace {

// ------------------------------------------------------------------
// Task execution
// ------------------------------------------------------------------

bool within(double left, double right, double tolerance) {
    return std::abs(left - right) <= tolerance;
}

Json run_ensemble_mean(const Scenario& sc, const Json& task, const RunOptions& options,
                       std::uint64_t task_seed) {
    const Observable a = observable_field(task, "observable", sc.dimension);
    const std::string device = string_field(task, "device");
    const EnsembleSample sample = sample_ensemble(sc.state, sc.registry, task_seed, sc.samples);
    const MeanEstimate est = ensemble_mean(sample, a, device, sc.registry);
    const double analytic = quantum_mean(sc.state, a);

    bool pass = within(est.mean, analytic,
                       3.0 * est.stderr_of_mean +
                           options.tolerance_scale * 1e-12 * (1.0 + std::abs(analytic)));
    Json out{{"type", "ensemble_mean"},
             {"device", device},
             {"observable", task.at("observable")},
             {"analytic", analytic},
             {"empirical", est.mean},
             {"stderr", est.stderr_of_mean},
             {"samples", est.count},
             {"seed", task_seed}};
    if (task.contains("expect")) {
        const double expect = task.at("expect").get<double>();
        out["expect"] = expect;
        pass = pass && within(analytic, expect,
                              options.tolerance_scale * tol::kEigen * (1.0 + std::abs(expect)));
    }
    if (task.contains("export_csv")) {
        const std::string path = string_field(task, "export_csv");
        std::ofstream file(path);
        if (!file) {
            throw ValidationError("cannot open '" + path + "' for the ensemble CSV");
        }
        write_ensemble_csv(file, sample);
        out["export_csv"] = path;
    }
    out["pass"] = pass;
    return out;
}

Json run_marginal_agreement(const Scenario& sc, const Json& task, const RunOptions& options,
                            std::uint64_t task_seed) {
    const Observable a = observable_field(task, "observable", sc.dimension);
    const std::string first = string_field(task, "device");
    const std::string second = string_field(task, "device2");
    const MarginalAgreementReport report = check_marginal_agreement(
        sc.state, a, first, second, sc.registry, sc.samples, task_seed);
    const bool analytic_pass =
        report.max_analytic_gap <= options.tolerance_scale * 1e-12;
    return Json{{"type", "marginal_agreement"},
                {"observable", task.at("observable")},
                {"device", first},
                {"device2", second},
                {"values", report.values},
                {"analytic", report.analytic_first},
                {"analytic2", report.analytic_second},
                {"empirical", report.empirical_first},
                {"empirical2", report.empirical_second},
                {"max_analytic_gap", report.max_analytic_gap},
                {"samples", report.samples},
                {"seed", report.seed},
                {"pass", analytic_pass && report.empirical_pass}};
}

ScenarioCorrelations correlations_from_task(const Scenario& sc, const Json& task) {
    if (task.contains("E")) {
        const Json& e = task.at("E");
        if (!e.is_array() || e.size() != 2 || !e[0].is_array() || e[0].size() != 2 ||
            !e[1].is_array() || e[1].size() != 2) {
            throw ParseError("'E' must be a 2x2 array");
        }
        return ScenarioCorrelations({{{e[0][0].get<double>(), e[0][1].get<double>()},
                                      {e[1][0].get<double>(), e[1][1].get<double>()}}});
    }
    return correlations_from_state(sc.state, observable_field(task, "a1", sc.dimension),
                                   observable_field(task, "a2", sc.dimension),
                                   observable_field(task, "b1", sc.dimension),
                                   observable_field(task, "b2", sc.dimension));
}

Json run_chsh(const Scenario& sc, const Json& task, const RunOptions& options) {
    const ScenarioCorrelations correlations = correlations_from_task(sc, task);
    const double chsh = chsh_value(correlations);
    const FeasibilityResult feasibility = joint_measure_feasibility(correlations);
    Json out = correlations_report(correlations, chsh, feasibility);
    out["type"] = "chsh";
    bool pass = true;
    if (task.contains("expect")) {
        const double expect = task.at("expect").get<double>();
        out["expect"] = expect;
        pass = within(chsh, expect,
                      options.tolerance_scale * tol::kEigen * (1.0 + std::abs(expect)));
    }
    out["pass"] = pass;
    return out;
}

Json run_joint_measure(const Scenario& sc, const Json& task, const RunOptions&) {
    const ScenarioCorrelations correlations = correlations_from_task(sc, task);
    const FeasibilityResult feasibility = joint_measure_feasibility(correlations);
    Json out = correlations_report(correlations, chsh_value(correlations), feasibility);
    out["type"] = "joint_measure";
    bool pass = true;
    if (task.contains("expect")) {
        const std::string expect = string_field(task, "expect");
        if (expect != "feasible" && expect != "infeasible") {
            throw ValidationError("joint_measure 'expect' must be feasible or infeasible");
        }
        out["expect"] = expect;
        pass = (expect == "feasible") == feasibility.feasible;
    }
    out["pass"] = pass;
    return out;
}

Json run_gns(const Scenario& sc, const Json& task, const RunOptions& options,
             std::uint64_t task_seed) {
    const int probes = task.value("probes", 64);
    if (probes < 1) {
        throw ValidationError("gns 'probes' must be positive");
    }
    const GnsRepresentation rep = build_gns(sc.dimension, sc.state);

    RandomStream rng = RandomStream::derive(task_seed, 0x70726F6265ULL);  // "probe"
    double max_residual = 0.0;
    bool residual_pass = true;
    for (int k = 0; k < probes; ++k) {
        const DynamicalVariable b(random_ginibre(rng, sc.dimension));
        const double residual = verify_cyclic_expectation(rep, sc.state, b);
        max_residual = std::max(max_residual, residual);
        residual_pass = residual_pass &&
                        residual <= options.tolerance_scale * tol::kEigen *
                                        (1.0 + cstar_norm(b));
    }
    const Eigen::Index expected_dim = sc.dimension * matrix_rank(sc.state.rho());
    const bool faithful = check_faithfulness(rep, task_seed);
    const bool cyclic = cyclicity_check(rep);
    return Json{{"type", "gns"},
                {"source_dim", rep.source_dim()},
                {"rep_dim", rep.rep_dim()},
                {"expected_rep_dim", expected_dim},
                {"max_residual", max_residual},
                {"probes", probes},
                {"faithful", faithful},
                {"cyclic", cyclic},
                {"pass", residual_pass && faithful && cyclic &&
                             rep.rep_dim() == expected_dim}};
}

Json run_collapse(const Scenario& sc, const Json& task, const RunOptions& options,
                  std::uint64_t task_seed) {
    const Observable a = observable_field(task, "observable", sc.dimension);
    const IntervalUnion window = window_field(task);
    const Projector p = spectral_projector(a, window);
    const int trials = task.value("trials", 200);

    const double yes_probability = quantum_mean(sc.state, p);
    const QuantumState collapsed = collapse(sc.state, p);
    const double analytic = quantum_mean(collapsed, a);
    const ConditionalMeanEstimate empirical =
        conditional_mean_empirical(sc.state, a, p, sc.samples, task_seed);
    const ReductionIdentitiesReport identities =
        verify_reduction_identities(collapsed, p, trials, task_seed);

    const bool mean_pass = within(
        empirical.mean, analytic,
        3.0 * empirical.stderr_of_mean +
            options.tolerance_scale * 1e-12 * (1.0 + std::abs(analytic)));
    return Json{{"type", "collapse"},
                {"observable", task.at("observable")},
                {"yes_probability", yes_probability},
                {"analytic", analytic},
                {"empirical", Json{{"mean", empirical.mean},
                                   {"stderr", empirical.stderr_of_mean},
                                   {"N", empirical.total},
                                   {"conditioned", empirical.conditioned},
                                   {"seed", task_seed}}},
                {"identities", Json{{"normalization", identities.normalization_residual},
                                    {"schwarz", identities.schwarz_residual},
                                    {"projection", identities.projection_residual}}},
                {"pass", mean_pass && identities.pass()}};
}

Json dispatch_task(const Scenario& sc, const Json& task, const RunOptions& options,
                   std::size_t index) {
    const std::string type = task.at("type").get<std::string>();
    const std::uint64_t task_seed =
        RandomStream::derive(sc.seed, kTaskSalt, static_cast<std::uint64_t>(index)).next_u64();
    if (type == "ensemble_mean") {
        return run_ensemble_mean(sc, task, options, task_seed);
    }
    if (type == "marginal_agreement") {
        return run_marginal_agreement(sc, task, options, task_seed);
    }
    if (type == "chsh") {
        return run_chsh(sc, task, options);
    }
    if (type == "joint_measure") {
        return run_joint_measure(sc, task, options);
    }
    if (type == "gns") {
        return run_gns(sc, task, options, task_seed);
    }
    if (type == "collapse") {
        return run_collapse(sc, task, options, task_seed);
    }
    throw ValidationError("unknown task type '" + type + "'");
}

}  // namespace

RunResult run_scenario(const Json& doc, const RunOptions& options) {
    const auto started = std::chrono::system_clock::now();
    const Scenario sc = load_scenario(doc, options);

    RunResult result;
    Json tasks = Json::array();
    result.pass = true;
    for (std::size_t i = 0; i < sc.tasks.size(); ++i) {
        const auto tick = std::chrono::steady_clock::now();
        Json out = dispatch_task(sc, sc.tasks[i], options, i);
        const auto tock = std::chrono::steady_clock::now();
        out["index"] = i;
        if (!options.stable_output) {
            out["wall_ms"] =
                std::chrono::duration<double, std::milli>(tock - tick).count();
        }
        const bool task_pass = out.at("pass").get<bool>();
        if (!task_pass) {
            result.pass = false;
            result.failed_tasks.push_back(std::to_string(i) + ":" +
                                          out.at("type").get<std::string>());
        }
        tasks.push_back(std::move(out));
    }

    result.report = Json{{"scenario", sc.name},
                         {"dimension", sc.dimension},
                         {"seed", sc.seed},
                         {"samples", sc.samples},
                         {"tasks", std::move(tasks)},
                         {"pass", result.pass}};
    if (!result.failed_tasks.empty()) {
        result.report["failed"] = result.failed_tasks;
    }
    if (!options.stable_output) {
        const auto finished = std::chrono::system_clock::now();
        const auto to_ms = [](auto t) {
            return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch())
                .count();
        };
        result.report["timestamps"] =
            Json{{"started_unix_ms", to_ms(started)}, {"finished_unix_ms", to_ms(finished)}};
    }
    return result;
}

RunResult run_scenario_file(const std::string& path, const RunOptions& options) {
    std::ifstream file(path);
    if (!file) {
        throw ParseError("cannot open scenario file '" + path + "'");
    }
    Json doc;
    try {
        doc = Json::parse(file);
    } catch (const Json::parse_error& err) {
        throw ParseError("scenario file '" + path + "': " + err.what());
    }
    return run_scenario(doc, options);
}

std::vector<CharacterTableRow> character_table(const DeviceRegistry& registry,
                                               const Observable& a) {
    std::vector<const DeviceType*> containing;
    for (const DeviceType& d : registry.devices()) {
        if (d.dim() == a.dim() && d.contains(a)) {
            containing.push_back(&d);
        }
    }
    if (containing.empty()) {
        throw NotInSubalgebra("no registered device type contains the observable");
    }

    const double tolerance = tol::kEigen * std::max(1.0, cstar_norm(a));
    std::vector<std::vector<double>> values;
    values.reserve(containing.size());
    for (const DeviceType* d : containing) {
        values.push_back(d->eigenvalues(a));
    }

    std::vector<CharacterTableRow> rows;
    for (std::size_t di = 0; di < containing.size(); ++di) {
        for (std::size_t k = 0; k < values[di].size(); ++k) {
            CharacterTableRow row;
            row.device = containing[di]->id();
            row.index = static_cast<Eigen::Index>(k);
            row.value = values[di][k];
            for (std::size_t dj = 0; dj < containing.size() && !row.stability_risk; ++dj) {
                if (dj == di) {
                    continue;
                }
                bool found = false;
                for (double other : values[dj]) {
                    if (std::abs(other - row.value) <= tolerance) {
                        found = true;
                        break;
                    }
                }
                row.stability_risk = !found;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace oalab
