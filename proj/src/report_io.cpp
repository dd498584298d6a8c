#include "mvpde/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mvpde/csv.hpp"

namespace mvpde {
namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json inputs_json(const Inputs& inputs) {
  json out = json::object();
  for (const auto& [key, value] : inputs) out[key] = number(value);
  return out;
}

}  // namespace

json to_json(const ConditionReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"id", e.id},
                       {"verdict", to_string(e.verdict)},
                       {"margin", number(e.margin)},
                       {"tolerance", number(e.tolerance)},
                       {"inputs", inputs_json(e.inputs)}});
  }
  return {{"criteria", entries}};
}

json to_json(const DecayReport& r) {
  json out = {{"times", numbers(r.times)},
              {"norms", numbers(r.norms)},
              {"F", numbers(r.F)},
              {"envelope_general", numbers(r.envelope_general)},
              {"slack_general", numbers(r.slack_general)},
              {"worst_violation", number(r.worst_violation)}};
  if (!r.envelope_sharp.empty()) {
    out["envelope_sharp"] = numbers(r.envelope_sharp);
    out["slack_sharp"] = numbers(r.slack_sharp);
  }
  if (!r.envelope_deg.empty()) {
    out["envelope_deg"] = numbers(r.envelope_deg);
    out["slack_deg"] = numbers(r.slack_deg);
  }
  if (!r.energy_residual.empty()) {
    out["energy_residual"] = numbers(r.energy_residual);
    out["max_energy_residual"] = number(r.max_energy_residual);
  }
  return out;
}

json to_json(const EnergyReport& r) {
  json out = {{"times", numbers(r.times)}};
  if (!r.script_E.empty()) {
    out["script_E"] = {{"values", numbers(r.script_E)},
                       {"violations", r.script_violations},
                       {"max_jump", number(r.script_max_jump)},
                       {"asserted", r.script_asserted}};
  }
  if (!r.E_deg.empty()) {
    out["E_deg"] = {{"values", numbers(r.E_deg)},
                    {"violations", r.deg_violations},
                    {"max_jump", number(r.deg_max_jump)},
                    {"asserted", r.deg_asserted}};
  }
  return out;
}

json to_json(const std::vector<BlowupPrediction>& predictions) {
  json out = json::array();
  for (const auto& p : predictions) {
    out.push_back({{"method", to_string(p.method)},
                   {"t_prime", number(p.t_prime)},
                   {"inputs", inputs_json(p.inputs)}});
  }
  return {{"predictions", out}};
}

json summary_json(const Trajectory& traj) {
  json out = {{"outcome", outcome_name(traj.outcome)},
              {"frames", traj.frames.size()},
              {"accepted_steps", traj.accepted_steps},
              {"rejected_steps", traj.rejected_steps},
              {"clamped_values", traj.clamped_values}};
  if (const auto* b = std::get_if<BlownUp>(&traj.outcome)) {
    out["blowup"] = {{"t_detect", number(b->event.t_detect)},
                     {"sup_norm", number(b->event.sup_norm)},
                     {"l2_norm", number(b->event.l2_norm)},
                     {"last_dt", number(b->event.last_dt)}};
  }
  if (const auto* s = std::get_if<StalledStep>(&traj.outcome)) {
    out["stalled_at"] = number(s->t);
  }
  if (!traj.frames.empty()) {
    const auto& last = traj.frames.back();
    out["final"] = {{"t", number(last.t)},
                    {"l2", number(last.diag.l2)},
                    {"h1_semi", number(last.diag.h1_semi)},
                    {"sup", number(last.diag.sup)},
                    {"m", number(last.diag.m)}};
  }
  return out;
}

std::string to_text(const ConditionReport& report) {
  std::ostringstream out;
  for (const auto& e : report.entries) {
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %-12s margin %s\n", e.id.c_str(),
                  to_string(e.verdict), format_real(e.margin).c_str());
    out << line;
    for (const auto& [key, value] : e.inputs) {
      out << "    " << key << " = " << format_real(value) << '\n';
    }
  }
  return out.str();
}

std::string to_text(const std::vector<BlowupPrediction>& predictions) {
  std::ostringstream out;
  for (const auto& p : predictions) {
    out << to_string(p.method) << ": t' = " << format_real(p.t_prime) << '\n';
    for (const auto& [key, value] : p.inputs) {
      out << "    " << key << " = " << format_real(value) << '\n';
    }
  }
  return out.str();
}

}  // namespace mvpde
