#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oalab/gns.hpp"
#include "oalab/json_io.hpp"
#include "oalab/probability.hpp"
#include "oalab/reduction.hpp"

namespace oalab {

/// Parse an operator expression into a matrix. The grammar supports scalar
/// literals, + - * / and unary minus, parentheses, the atoms pauli_x,
/// pauli_y, pauli_z, and the calls id(n), diag(x, ...), kron(a, b), sqrt(x).
/// Scalars and matrices mix through * and /; addition is matrix-matrix or
/// scalar-scalar only.
Matrix parse_operator(const std::string& text);

/// Build a state from its JSON spec: {"rho": matrix}, {"pure": [entries]},
/// or {"named": "maximally_mixed" | "singlet"}.
QuantumState state_from_spec(const Json& spec, Eigen::Index dimension);

/// Build a device type from its JSON spec: explicit {"projectors": [...]},
/// {"generators": [expr, ...]} (joint-diagonalized with a seed derived from
/// the scenario seed and the device id), or {"named": "computational" |
/// "bell_basis"}.
DeviceType device_from_spec(const Json& spec, Eigen::Index dimension,
                            std::uint64_t scenario_seed);

struct RunOptions {
    std::optional<std::uint64_t> seed;       // overrides the scenario seed
    std::optional<std::size_t> samples;      // overrides the scenario sample size
    bool stable_output = false;              // drop timestamps and wall times
    double tolerance_scale = 1.0;            // scales task assertion tolerances
};

/// A validated scenario: state, registry, and the task list to execute.
struct Scenario {
    std::string name;
    Eigen::Index dimension = 0;
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    QuantumState state;
    DeviceRegistry registry;
    std::vector<Json> tasks;
};

Scenario load_scenario(const Json& doc, const RunOptions& options);

struct RunResult {
    Json report;
    bool pass = false;
    std::vector<std::string> failed_tasks;
};

/// Execute all tasks in order and assemble the report document.
/// Throws ParseError / ValidationError; task assertion failures are
/// reported through `pass`, not exceptions.
RunResult run_scenario(const Json& doc, const RunOptions& options = {});
RunResult run_scenario_file(const std::string& path, const RunOptions& options = {});

struct CharacterTableRow {
    std::string device;
    Eigen::Index index = 0;
    double value = 0.0;
    /// Set when some other registered device containing the observable has
    /// no character with this value, so no stable assignment can extend it.
    bool stability_risk = false;
};

/// Per-device, per-character values of an observable across the registry.
/// Throws NotInSubalgebra when no registered device contains it.
std::vector<CharacterTableRow> character_table(const DeviceRegistry& registry,
                                               const Observable& a);

}  // namespace oalab
