#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pvt/equilibria.hpp"
#include "pvt/model.hpp"
#include "pvt/ode.hpp"
#include "pvt/pde.hpp"
#include "pvt/transition.hpp"

namespace pvt {

using json = nlohmann::json;

// --- model files --------------------------------------------------------------

json to_json(const CoefficientModel& model);

/// Accepts "coeffs" with each polynomial as a number or an array of up to six
/// coefficients, or, for the vdw and landau presets, a "params" object.
/// Throws ParseError on malformed documents.
CoefficientModel model_from_json(const json& doc);
CoefficientModel load_model(const std::string& path);

/// FNV-1a over the canonical JSON text of the model.
std::uint64_t model_hash(const CoefficientModel& model);
std::string model_hash_hex(const CoefficientModel& model);

// --- results --------------------------------------------------------------------

json to_json(const ThermoState& state);
json to_json(const ReducedCoeffs& rc);
json to_json(const EquilibriumSet& set);
json to_json(const TransitionReport& report);
json to_json(const AndrewsPoint& point);
json to_json(const SaddleNode& sn);
json to_json(const CriticalCurve& curve);
json to_json(const TransitionFunctionTable& table);
json to_json(const ThermoSignature& sig);
json to_json(const CoexistenceCurve& curve);
json to_json(const MetastableWindow& window);
json to_json(const IntegratorConfig& cfg);
json to_json(const PdeConfig& cfg);
json to_json(const Trajectory& traj, const IntegratorConfig& cfg);

/// Shortest text that reads back to the same double; "nan" / "inf" otherwise.
std::string format_number(double v);

std::string critical_curve_csv(const CriticalCurve& curve);
std::string transition_rows_csv(const std::vector<TransitionRow>& rows);
std::string bifurcation_csv(const std::vector<BifurcationRow>& rows);
std::string coexistence_csv(const CoexistenceCurve& curve);
std::string trajectory_csv(const Trajectory& traj);
std::string snapshot_csv(const Field1D& fields);

/// Writes to a temporary sibling file and renames it over `path`. Throws
/// InvalidArgument when the file cannot be written.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace pvt
