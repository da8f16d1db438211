#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "oalab/builtin.hpp"
#include "oalab/json_io.hpp"
#include "oalab/rng.hpp"
#include "oalab/scenario.hpp"

namespace {

using oalab::Json;

constexpr int kExitPass = 0;
constexpr int kExitTaskFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    bool stable_output = false;
    double tolerance_scale = 1.0;

    oalab::RunOptions run_options() const {
        return {seed, samples, stable_output, tolerance_scale};
    }
};

void emit(const Json& doc, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream file(output_path);
    if (!file) {
        throw oalab::ValidationError("cannot open output file '" + output_path + "'");
    }
    file << doc.dump(2) << "\n";
}

int run_command(const std::string& path, const std::string& output_path,
                const GlobalOptions& globals) {
    const oalab::RunResult result = oalab::run_scenario_file(path, globals.run_options());
    emit(result.report, output_path);
    if (!result.pass) {
        for (const std::string& task : result.failed_tasks) {
            std::cerr << "task failed: " << task << "\n";
        }
        return kExitTaskFailure;
    }
    return kExitPass;
}

Json state_spec_from_text(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        try {
            return Json::parse(text);
        } catch (const Json::parse_error& err) {
            throw oalab::ParseError(std::string("state spec: ") + err.what());
        }
    }
    return Json{{"named", text}};
}

int gns_command(Eigen::Index dim, const std::string& state_text, int probes,
                const std::string& output_path, const GlobalOptions& globals) {
    const Json doc{{"name", "gns"},
                   {"dimension", dim},
                   {"seed", globals.seed.value_or(1)},
                   {"samples", 1},
                   {"state", state_spec_from_text(state_text)},
                   {"registry", Json::array({Json{{"id", "basis"}, {"named", "computational"}}})},
                   {"tasks", Json::array({Json{{"type", "gns"}, {"probes", probes}}})}};
    oalab::RunOptions options = globals.run_options();
    options.samples.reset();  // sampling is not part of this subcommand
    const oalab::RunResult result = oalab::run_scenario(doc, options);
    Json report = result.report.at("tasks").at(0);
    report.erase("index");
    if (report.contains("wall_ms")) {
        report.erase("wall_ms");
    }
    emit(report, output_path);
    return result.pass ? kExitPass : kExitTaskFailure;
}

int chsh_command(Eigen::Index dim, const std::string& state_text, const std::string& a1,
                 const std::string& a2, const std::string& b1, const std::string& b2,
                 const std::string& output_path) {
    const oalab::QuantumState state =
        oalab::state_from_spec(state_spec_from_text(state_text), dim);
    const auto setting = [&](const std::string& text) {
        const oalab::Matrix m = oalab::parse_operator(text);
        if (m.rows() != dim) {
            throw oalab::ValidationError("setting '" + text + "' has dimension " +
                                         std::to_string(m.rows()) + ", expected " +
                                         std::to_string(dim));
        }
        return oalab::Observable(m);
    };
    const oalab::ScenarioCorrelations correlations = oalab::correlations_from_state(
        state, setting(a1), setting(a2), setting(b1), setting(b2));
    const Json report = oalab::correlations_report(
        correlations, oalab::chsh_value(correlations),
        oalab::joint_measure_feasibility(correlations));
    emit(report, output_path);
    return kExitPass;
}

int collapse_command(Eigen::Index dim, const std::string& state_text,
                     const std::string& observable, const std::string& window_text,
                     const std::string& output_path, const GlobalOptions& globals) {
    Json window;
    try {
        window = Json::parse(window_text);
    } catch (const Json::parse_error& err) {
        throw oalab::ParseError(std::string("window: ") + err.what());
    }
    const Json doc{{"name", "collapse-demo"},
                   {"dimension", dim},
                   {"seed", globals.seed.value_or(1)},
                   {"samples", globals.samples.value_or(100000)},
                   {"state", state_spec_from_text(state_text)},
                   {"registry", Json::array({Json{{"id", "basis"}, {"named", "computational"}}})},
                   {"tasks", Json::array({Json{{"type", "collapse"},
                                               {"observable", observable},
                                               {"window", window}}})}};
    const oalab::RunResult result = oalab::run_scenario(doc, globals.run_options());
    Json report = result.report.at("tasks").at(0);
    report.erase("index");
    if (report.contains("wall_ms")) {
        report.erase("wall_ms");
    }
    emit(report, output_path);
    return result.pass ? kExitPass : kExitTaskFailure;
}

oalab::DeviceRegistry load_registry_file(const std::string& path, std::uint64_t seed) {
    std::ifstream file(path);
    if (!file) {
        throw oalab::ParseError("cannot open registry file '" + path + "'");
    }
    Json doc;
    try {
        doc = Json::parse(file);
    } catch (const Json::parse_error& err) {
        throw oalab::ParseError("registry file '" + path + "': " + err.what());
    }
    if (!doc.is_array() || doc.empty()) {
        throw oalab::ParseError("registry file must be a nonempty JSON array");
    }
    oalab::DeviceRegistry registry;
    for (const Json& entry : doc) {
        if (entry.contains("projectors")) {
            registry.add(oalab::device_from_json(entry));
            continue;
        }
        // Spec-form entry: infer the dimension from its generators, or read
        // an explicit "dimension" field for named devices.
        Eigen::Index dim = 0;
        if (entry.contains("generators") && entry.at("generators").is_array() &&
            !entry.at("generators").empty() && entry.at("generators")[0].is_string()) {
            dim = oalab::parse_operator(entry.at("generators")[0].get<std::string>()).rows();
        } else if (entry.contains("dimension")) {
            dim = entry.at("dimension").get<Eigen::Index>();
        } else if (entry.value("named", "") == std::string("bell_basis")) {
            dim = 4;
        } else {
            throw oalab::ParseError("registry entry needs 'projectors', 'generators', or "
                                    "'named' with 'dimension'");
        }
        registry.add(oalab::device_from_spec(entry, dim, seed));
    }
    return registry;
}

int character_table_command(const std::string& registry_path, const std::string& observable_text,
                            bool as_json, const GlobalOptions& globals) {
    const oalab::DeviceRegistry registry =
        load_registry_file(registry_path, globals.seed.value_or(0));
    const oalab::Observable a(oalab::parse_operator(observable_text));
    const auto rows = oalab::character_table(registry, a);

    if (as_json) {
        Json out = Json::array();
        for (const auto& row : rows) {
            out.push_back(Json{{"device", row.device},
                               {"index", row.index},
                               {"value", row.value},
                               {"stability_risk", row.stability_risk}});
        }
        emit(out, "");
        return kExitPass;
    }
    std::cout << std::left << std::setw(16) << "device" << std::setw(8) << "index"
              << std::setw(24) << "value" << "stability\n";
    for (const auto& row : rows) {
        std::cout << std::left << std::setw(16) << row.device << std::setw(8) << row.index
                  << std::setw(24) << std::setprecision(15) << row.value
                  << (row.stability_risk ? "AT RISK" : "ok") << "\n";
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional operator-algebra laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions globals;
    std::uint64_t seed_value = 0;
    std::size_t samples_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the scenario seed");
    auto* samples_opt =
        app.add_option("--samples", samples_value, "override the scenario sample size");
    app.add_flag("--stable-output", globals.stable_output,
                 "omit timestamps and wall times from reports");
    app.add_option("--tolerance-scale", globals.tolerance_scale,
                   "scale factor for task assertion tolerances")
        ->check(CLI::PositiveNumber);

    std::string scenario_path;
    std::string output_path;
    auto* run = app.add_subcommand("run", "execute a scenario file and emit its report");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("-o,--output", output_path, "write the report here instead of stdout");

    Eigen::Index gns_dim = 2;
    std::string gns_state = "maximally_mixed";
    int gns_probes = 64;
    std::string gns_output;
    auto* gns = app.add_subcommand("gns", "build the state's Hilbert-space representation");
    gns->add_option("--dim", gns_dim, "algebra dimension");
    gns->add_option("--state", gns_state, "state spec (JSON object or named state)");
    gns->add_option("--probes", gns_probes, "number of random expectation probes");
    gns->add_option("-o,--output", gns_output, "write the report here instead of stdout");

    Eigen::Index chsh_dim = 4;
    std::string chsh_state = "singlet";
    std::string a1 = "kron(pauli_z, id(2))";
    std::string a2 = "kron(pauli_x, id(2))";
    std::string b1 = "kron(id(2), -(pauli_z + pauli_x) / sqrt(2))";
    std::string b2 = "kron(id(2), (pauli_x - pauli_z) / sqrt(2))";
    std::string chsh_output;
    auto* chsh = app.add_subcommand(
        "chsh", "correlation table, CHSH value, and joint-measure feasibility");
    chsh->add_option("--dim", chsh_dim, "system dimension");
    chsh->add_option("--state", chsh_state, "state spec (JSON object or named state)");
    chsh->add_option("--a1", a1, "Alice setting 1");
    chsh->add_option("--a2", a2, "Alice setting 2");
    chsh->add_option("--b1", b1, "Bob setting 1");
    chsh->add_option("--b2", b2, "Bob setting 2");
    chsh->add_option("-o,--output", chsh_output, "write the report here instead of stdout");

    Eigen::Index collapse_dim = 4;
    std::string collapse_state = "maximally_mixed";
    std::string collapse_observable = "diag(1, 2, 3, 4)";
    std::string collapse_window = "[[1.5, 4.5]]";
    std::string collapse_output;
    auto* collapse_demo = app.add_subcommand(
        "collapse-demo", "conditional mean against the reduced state, with identity residuals");
    collapse_demo->add_option("--dim", collapse_dim, "system dimension");
    collapse_demo->add_option("--state", collapse_state, "state spec");
    collapse_demo->add_option("--observable", collapse_observable, "measured observable");
    collapse_demo->add_option("--window", collapse_window, "yes-window, JSON [[lo, hi], ...]");
    collapse_demo->add_option("-o,--output", collapse_output,
                              "write the report here instead of stdout");

    std::string registry_path;
    std::string observable_text;
    bool table_json = false;
    auto* table = app.add_subcommand("character-table",
                                     "per-device, per-character values of an observable");
    table->add_option("registry", registry_path, "registry JSON file")->required();
    table->add_option("observable", observable_text, "observable expression")->required();
    table->add_flag("--json", table_json, "emit the table as JSON");

    CLI11_PARSE(app, argc, argv);

    if (*seed_opt) {
        globals.seed = seed_value;
    }
    if (*samples_opt) {
        if (samples_value == 0) {
            std::cerr << "error: --samples must be positive\n";
            return kExitValidation;
        }
        globals.samples = samples_value;
    }

    try {
        if (*run) {
            return run_command(scenario_path, output_path, globals);
        }
        if (*gns) {
            return gns_command(gns_dim, gns_state, gns_probes, gns_output, globals);
        }
        if (*chsh) {
            return chsh_command(chsh_dim, chsh_state, a1, a2, b1, b2, chsh_output);
        }
        if (*collapse_demo) {
            return collapse_command(collapse_dim, collapse_state, collapse_observable,
                                    collapse_window, collapse_output, globals);
        }
        if (*table) {
            return character_table_command(registry_path, observable_text, table_json, globals);
        }
    } catch (const oalab::ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kExitParse;
    } catch (const oalab::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    }
    return kExitPass;
}
