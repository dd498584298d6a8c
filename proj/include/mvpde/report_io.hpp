#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "mvpde/analysis.hpp"
#include "mvpde/trajectory.hpp"

namespace mvpde {

// JSON documents use stable field names; non-finite numbers become null.

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const DecayReport& report);
nlohmann::json to_json(const EnergyReport& report);
nlohmann::json to_json(const std::vector<BlowupPrediction>& predictions);
/// Outcome, step counts and the last frame's diagnostics.
nlohmann::json summary_json(const Trajectory& traj);

std::string to_text(const ConditionReport& report);
std::string to_text(const std::vector<BlowupPrediction>& predictions);

}  // namespace mvpde
