#pragma once

#include <nlohmann/json.hpp>

#include "oalab/masa.hpp"
#include "oalab/probability.hpp"
#include "oalab/states.hpp"

namespace oalab {

using Json = nlohmann::json;

/// Matrix wire format: {"dim": n, "re": [[...]], "im": [[...]]} with an
/// optional "hermitian" flag that the reader enforces.
Json matrix_to_json(const Matrix& m, bool hermitian_flag = false);
Matrix matrix_from_json(const Json& j);

/// Device type: {"id": ..., "projectors": [matrix, ...]}.
Json device_to_json(const DeviceType& d);
DeviceType device_from_json(const Json& j);

/// Registry file: a JSON array of device types.
Json registry_to_json(const DeviceRegistry& registry);
DeviceRegistry registry_from_json(const Json& j);

/// Quantum state: {"rho": matrix}.
Json state_to_json(const QuantumState& s);
QuantumState state_from_json(const Json& j);

/// Elementary state: {"assignment": {device: index}}.
Json elementary_to_json(const ElementaryState& e);
ElementaryState elementary_from_json(const Json& j);

/// Correlations report: {"E": [[..]], "chsh": x, "joint_measure": ...,
/// "witness": ...}.
Json correlations_report(const ScenarioCorrelations& c, double chsh,
                         const FeasibilityResult& feasibility);

}  // namespace oalab
