#include "oalab/json_io.hpp"

namespace oalab {

namespace {

const Json& require_field(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return *it;
}

Eigen::MatrixXd real_plane_from_json(const Json& j, Eigen::Index n, const char* key) {
    const Json& plane = require_field(j, key);
    if (!plane.is_array() || static_cast<Eigen::Index>(plane.size()) != n) {
        throw ParseError(std::string("field '") + key + "' must hold " + std::to_string(n) +
                         " rows");
    }
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = plane[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ParseError(std::string("field '") + key + "' row " + std::to_string(i) +
                             " must hold " + std::to_string(n) + " numbers");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const Json& cell = row[static_cast<std::size_t>(k)];
            if (!cell.is_number()) {
                throw ParseError(std::string("field '") + key + "' contains a non-number");
            }
            out(i, k) = cell.get<double>();
        }
    }
    return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m, bool hermitian_flag) {
    const Eigen::Index n = m.rows();
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < n; ++i) {
        Json re_row = Json::array();
        Json im_row = Json::array();
        for (Eigen::Index j = 0; j < n; ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    Json out{{"dim", n}, {"re", std::move(re)}, {"im", std::move(im)}};
    if (hermitian_flag) {
        out["hermitian"] = true;
    }
    return out;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ParseError("matrix must be a JSON object");
    }
    const Json& dim = require_field(j, "dim");
    if (!dim.is_number_integer() || dim.get<Eigen::Index>() < 1) {
        throw ParseError("matrix 'dim' must be a positive integer");
    }
    const Eigen::Index n = dim.get<Eigen::Index>();
    const Eigen::MatrixXd re = real_plane_from_json(j, n, "re");
    const Eigen::MatrixXd im = real_plane_from_json(j, n, "im");
    const Matrix m = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
    if (j.value("hermitian", false)) {
        Observable check(m);  // throws NotHermitian when the flag lies
        return check.matrix();
    }
    return m;
}

Json device_to_json(const DeviceType& d) {
    Json projectors = Json::array();
    for (const Projector& p : d.projectors()) {
        projectors.push_back(matrix_to_json(p.matrix(), true));
    }
    return Json{{"id", d.id()}, {"projectors", std::move(projectors)}};
}

DeviceType device_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ParseError("device type must be a JSON object");
    }
    const Json& id = require_field(j, "id");
    if (!id.is_string()) {
        throw ParseError("device 'id' must be a string");
    }
    const Json& projectors = require_field(j, "projectors");
    if (!projectors.is_array() || projectors.empty()) {
        throw ParseError("device 'projectors' must be a nonempty array");
    }
    std::vector<Projector> loaded;
    loaded.reserve(projectors.size());
    for (const Json& entry : projectors) {
        loaded.emplace_back(matrix_from_json(entry));
    }
    return DeviceType(id.get<std::string>(), std::move(loaded));
}

Json registry_to_json(const DeviceRegistry& registry) {
    Json out = Json::array();
    for (const DeviceType& d : registry.devices()) {
        out.push_back(device_to_json(d));
    }
    return out;
}

DeviceRegistry registry_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("registry must be a JSON array of device types");
    }
    DeviceRegistry registry;
    for (const Json& entry : j) {
        registry.add(device_from_json(entry));
    }
    return registry;
}

Json state_to_json(const QuantumState& s) {
    return Json{{"rho", matrix_to_json(s.rho(), true)}};
}

QuantumState state_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ParseError("state must be a JSON object with field 'rho'");
    }
    return QuantumState(matrix_from_json(require_field(j, "rho")));
}

Json elementary_to_json(const ElementaryState& e) {
    Json assignment = Json::object();
    for (const auto& [device, index] : e.assignment) {
        assignment[device] = index;
    }
    return Json{{"assignment", std::move(assignment)}};
}

ElementaryState elementary_from_json(const Json& j) {
    const Json& assignment = require_field(j, "assignment");
    if (!assignment.is_object()) {
        throw ParseError("'assignment' must map device ids to character indices");
    }
    ElementaryState e;
    for (const auto& [device, index] : assignment.items()) {
        if (!index.is_number_integer() || index.get<Eigen::Index>() < 0) {
            throw ParseError("character index for '" + device +
                             "' must be a nonnegative integer");
        }
        e.assignment[device] = index.get<Eigen::Index>();
    }
    return e;
}

Json correlations_report(const ScenarioCorrelations& c, double chsh,
                         const FeasibilityResult& feasibility) {
    Json e = Json::array();
    for (int i = 0; i < 2; ++i) {
        e.push_back(Json::array({c.e(i, 0), c.e(i, 1)}));
    }
    Json out{{"E", std::move(e)},
             {"chsh", chsh},
             {"joint_measure", feasibility.feasible ? "feasible" : "infeasible"}};
    if (feasibility.witness) {
        out["witness"] = feasibility.witness->description();
    }
    return out;
}

}  // namespace oalab
