#include "mvpde/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"

#include "mvpde/analysis.hpp"
#include "mvpde/config.hpp"
#include "mvpde/mvt.hpp"
#include "mvpde/report_io.hpp"
#include "mvpde/solvers.hpp"
#include "mvpde/sweep.hpp"

namespace mvpde {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out_dir = ".";
  bool quiet = false;
  bool deterministic = true;
  std::string assert_mode = "none";
};

// Files are rendered in memory first and only written once every
// computation has succeeded.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string body) {
    files_.emplace_back(dir_ / name, std::move(body));
  }

  void add(const std::string& name, const std::function<void(std::ostream&)>& render) {
    std::ostringstream s;
    render(s);
    add(name, s.str());
  }

  void flush() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
    for (const auto& [path, body] : files_) {
      std::ofstream file(path, std::ios::binary);
      if (!file) throw IoError("cannot open " + path.string() + " for writing");
      file << body;
      file.flush();
      if (!file) throw IoError("write failed for " + path.string());
    }
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> files_;
};

double lambda1_for(const RunConfig& cfg, BoundaryKind bc) {
  try {
    return SpectralInfo::make(bc, cfg.problem.domain, cfg.check.lambda1_override)
        .lambda1();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("check.lambda1_override: ") + e.what());
  }
}

GridField check_field(const RunConfig& cfg) {
  return sample_initial_data(cfg.problem.initial,
                             GridSpec(cfg.problem.domain, cfg.check.n),
                             cfg.problem.bc);
}

int outcome_status(const Trajectory& traj, Expectation expect) {
  const bool blown = traj.blown_up();
  if (expect == Expectation::Blowup && !blown) return kExitUnexpectedOutcome;
  if (expect != Expectation::Blowup && blown) return kExitUnexpectedOutcome;
  return kExitSuccess;
}

bool holds(const ConditionReport& r, const char* id) {
  return r.at(id).verdict == Verdict::Holds;
}

int cmd_solve(const RunConfig& cfg, const Options& opt, std::ostream& out) {
  const Trajectory traj = solve(cfg.problem, cfg.solve);
  Outputs files(opt.out_dir);
  files.add(cfg.outputs.csv.value_or("trajectory.csv"),
            [&](std::ostream& o) { write_trajectory_csv(o, traj); });
  if (cfg.outputs.frames) {
    files.add(*cfg.outputs.frames, [&](std::ostream& o) { write_frames_csv(o, traj); });
  }
  json doc = summary_json(traj);
  doc["expect"] = to_string(cfg.expect);
  int status = outcome_status(traj, cfg.expect);
  if (status == kExitSuccess && cfg.expect == Expectation::Decay &&
      traj.frames.back().diag.l2 > traj.frames.front().diag.l2) {
    status = kExitCheckFailed;
  }
  doc["exit_status"] = status;
  files.add(cfg.outputs.report.value_or("solve.json"), doc.dump(2) + "\n");
  files.flush();
  if (!opt.quiet) out << doc.dump(2) << '\n';
  return status;
}

int cmd_check(const RunConfig& cfg, const Options& opt, std::ostream& out) {
  const bool degenerate = cfg.problem.degenerate.has_value();
  const bool want_decay = !degenerate;
  const bool want_blowup = cfg.check.sandwich.has_value();
  const bool want_wang = cfg.check.wang.has_value();
  if ((want_decay || want_blowup) && !cfg.check.s_interval) {
    throw ConfigError("check.s_interval: missing required key");
  }
  if (opt.assert_mode == "blowup" && !want_blowup && !want_wang) {
    throw ConfigError("check: --assert blowup needs check.sandwich or check.wang");
  }
  const double lambda1 = want_decay ? lambda1_for(cfg, cfg.problem.bc) : 0.0;

  json doc = json::object();
  std::ostringstream text;
  bool decay = false, blowup = false, all = true;
  auto record = [&](const char* name, const ConditionReport& r) {
    doc[name] = to_json(r);
    text << "[" << name << "]\n" << to_text(r);
    all = all && r.all_hold();
  };
  if (want_decay) {
    const auto r = evaluate_decay_criteria(cfg.problem, *cfg.check.s_interval,
                                           lambda1, cfg.check.n);
    record("decay", r);
    decay = holds(r, "positivity") || holds(r, "inf-bound") || holds(r, "avg-bound");
  }
  if (want_blowup) {
    const auto r = evaluate_blowup_criterion(check_field(cfg), cfg.problem.nu,
                                             *cfg.check.sandwich, cfg.problem.potential,
                                             *cfg.check.s_interval);
    record("blowup", r);
    blowup = holds(r, "sandwich-verify") && holds(r, "criterion");
  }
  if (want_wang) {
    const auto r = evaluate_wang_criteria(check_field(cfg), cfg.check.wang->d,
                                          cfg.check.wang->p);
    record("wang", r);
    decay = decay || holds(r, "wang-decay");
    blowup = blowup || holds(r, "wang-blowup");
  }

  int status = kExitSuccess;
  if (opt.assert_mode == "decay" && !decay) status = kExitCheckFailed;
  if (opt.assert_mode == "blowup" && !blowup) status = kExitCheckFailed;
  if (opt.assert_mode == "all" && !all) status = kExitCheckFailed;
  doc["assert"] = opt.assert_mode;
  doc["exit_status"] = status;

  Outputs files(opt.out_dir);
  files.add(cfg.outputs.report.value_or("check.json"), doc.dump(2) + "\n");
  files.flush();
  if (!opt.quiet) out << text.str();
  return status;
}

int cmd_sweep(const RunConfig& cfg, const Options& opt, std::ostream& out) {
  const GridSpec grid(cfg.problem.domain, cfg.sweep.n);
  const SweepGrid sweep = run_sweep(cfg.problem.initial, grid, cfg.sweep.d_samples,
                                    cfg.sweep.p_samples, cfg.sweep.d_max,
                                    cfg.sweep.p_max);
  const ContourResult contour = extract_contour(sweep);
  Outputs files(opt.out_dir);
  files.add(cfg.outputs.csv.value_or("sweep.csv"),
            [&](std::ostream& o) { write_sweep_csv(o, sweep, contour.level); });
  files.add(cfg.outputs.svg.value_or("sweep.svg"),
            [&](std::ostream& o) { write_sweep_svg(o, sweep, contour); });

  const int total = static_cast<int>(sweep.values.size());
  int status = kExitSuccess;
  if (cfg.expect == Expectation::Decay && contour.cells_decaying != total) {
    status = kExitCheckFailed;
  }
  const auto [gmin, gmax] = std::minmax_element(sweep.values.begin(), sweep.values.end());
  json doc = {{"level", contour.level},
              {"cells", total},
              {"cells_decaying", contour.cells_decaying},
              {"polylines", contour.segments.size()},
              {"g_min", *gmin},
              {"g_max", *gmax},
              {"exit_status", status}};
  files.add(cfg.outputs.report.value_or("sweep.json"), doc.dump(2) + "\n");
  files.flush();
  if (!opt.quiet) out << doc.dump(2) << '\n';
  return status;
}

int cmd_predict(const RunConfig& cfg, const Options& opt, std::ostream& out) {
  const bool generic = cfg.check.sandwich && !cfg.problem.degenerate;
  if (!generic && !cfg.problem.degenerate) {
    throw ConfigError("check.sandwich: predict needs sandwich bounds or "
                      "problem.degenerate");
  }
  const GridField u0 = sample_initial_data(
      cfg.problem.initial, GridSpec(cfg.problem.domain, cfg.solve.n), cfg.problem.bc);
  const NormRequest l2[] = {NormRequest::l2()};
  const NormReport norms = field_norms(u0, l2);
  const Trajectory traj = solve(cfg.problem, cfg.solve);

  std::vector<BlowupPrediction> predictions;
  json doc = json::object();
  if (cfg.problem.degenerate) {
    predictions = predict_blowup(norms, cfg.problem.domain.measure(), std::nullopt,
                                 cfg.problem.degenerate);
  }
  if (generic) {
    const auto path = mean_value_path(traj, cfg.problem.potential);
    try {
      const auto p = predict_blowup(norms, cfg.problem.domain.measure(),
                                    cfg.check.sandwich, std::nullopt,
                                    xi_square_series(traj, path));
      predictions.insert(predictions.end(), p.begin(), p.end());
    } catch (const NotReachedError& e) {
      doc["generic_threshold_not_reached"] = e.what();
    }
  }
  doc.update(to_json(predictions));
  doc["numerical"] = summary_json(traj);
  const int status = outcome_status(traj, cfg.expect);
  doc["exit_status"] = status;

  Outputs files(opt.out_dir);
  files.add(cfg.outputs.report.value_or("predict.json"), doc.dump(2) + "\n");
  files.flush();
  if (!opt.quiet) {
    out << to_text(predictions);
    if (doc.contains("generic_threshold_not_reached")) {
      out << "generic_threshold: " << doc["generic_threshold_not_reached"].get<std::string>()
          << '\n';
    }
    out << "numerical: " << outcome_name(traj.outcome);
    if (const auto* b = std::get_if<BlownUp>(&traj.outcome)) {
      out << " at t = " << format_real(b->event.t_detect);
    }
    out << '\n';
  }
  return status;
}

int cmd_verify(const RunConfig& cfg, const Options& opt, std::ostream& out) {
  const auto& problem = cfg.problem;
  const bool degenerate = problem.degenerate.has_value();
  const double lambda1 =
      degenerate && !cfg.check.lambda1_override
          ? SpectralInfo::make(BoundaryKind::MixedNeumannDirichlet, problem.domain)
                .lambda1()
          : lambda1_for(cfg, problem.bc);
  const Trajectory traj = solve(problem, cfg.solve);

  DecayReport decay;
  EnergyReport energy;
  if (degenerate) {
    const auto xi_d = weighted_mean_path(traj, problem.degenerate->d);
    const auto chi = chi_path(traj, problem.degenerate->p);
    MeanValuePath path{chi.times, {}, chi.chi};
    for (const auto& f : traj.frames) path.m.push_back(f.diag.m);
    decay = verify_trajectory(traj, path, lambda1, &xi_d, &chi);
    energy = energy_monitor(traj, std::nullopt, problem.degenerate);
  } else {
    const auto path = mean_value_path(traj, problem.potential);
    decay = verify_trajectory(traj, path, lambda1);
    if (cfg.check.sandwich) energy = energy_monitor(traj, cfg.check.sandwich, std::nullopt);
  }

  // The sharp envelope uses the continuous lambda1; the discrete operator's
  // smaller first eigenvalue is granted as an explicit allowance.
  const double tol = cfg.check.envelope_tol;
  const double lambda_h = discrete_lambda1(traj.frames.front().u.grid, problem.bc);
  const double gap = std::max(0.0, problem.nu * (lambda1 - lambda_h));
  double worst_general = 0.0, worst_sharp = 0.0, worst_deg = 0.0;
  bool envelopes_ok = true;
  for (std::size_t k = 0; k < decay.times.size(); ++k) {
    worst_general = std::max(worst_general, decay.slack_general[k]);
    envelopes_ok = envelopes_ok && decay.slack_general[k] <= tol;
    if (!decay.slack_sharp.empty()) {
      const double allowance = std::expm1(gap * decay.times[k]);
      worst_sharp = std::max(worst_sharp, decay.slack_sharp[k] - allowance);
      envelopes_ok = envelopes_ok && decay.slack_sharp[k] <= tol + allowance;
    }
    if (!decay.slack_deg.empty()) {
      const double allowance = std::expm1(gap * decay.times[k]);
      worst_deg = std::max(worst_deg, decay.slack_deg[k] - allowance);
      envelopes_ok = envelopes_ok && decay.slack_deg[k] <= tol + allowance;
    }
  }
  // Frame-level quadrature cannot follow the singular approach to blow-up,
  // so the identity is asserted on runs that reach t_end only.
  const bool energy_identity_ok = decay.energy_residual.empty() || traj.blown_up() ||
                                  decay.max_energy_residual <= cfg.check.energy_tol;
  const bool monotone_ok = energy.asserted_monotone();

  json doc = {{"summary", summary_json(traj)},
              {"lambda1", lambda1},
              {"discrete_lambda1", lambda_h},
              {"decay", to_json(decay)},
              {"checks",
               {{"envelopes", envelopes_ok},
                {"worst_general_slack", worst_general},
                {"worst_sharp_slack", worst_sharp},
                {"worst_degenerate_slack", worst_deg},
                {"energy_identity", energy_identity_ok},
                {"energy_monotone", monotone_ok}}}};
  if (!energy.times.empty()) doc["energy"] = to_json(energy);
  if (!traj.blown_up()) {
    try {
      doc["fitted_rate"] = fit_decay_rate(traj);
    } catch (const DegenerateFieldError&) {
      doc["fitted_rate"] = nullptr;
    }
  }
  int status = outcome_status(traj, cfg.expect);
  if (status == kExitSuccess && !(envelopes_ok && energy_identity_ok && monotone_ok)) {
    status = kExitCheckFailed;
  }
  doc["exit_status"] = status;

  Outputs files(opt.out_dir);
  files.add(cfg.outputs.report.value_or("verify.json"), doc.dump(2) + "\n");
  if (cfg.outputs.csv) {
    files.add(*cfg.outputs.csv, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
  }
  if (cfg.outputs.frames) {
    files.add(*cfg.outputs.frames, [&](std::ostream& o) { write_frames_csv(o, traj); });
  }
  files.flush();
  if (!opt.quiet) {
    out << "outcome: " << outcome_name(traj.outcome) << '\n';
    if (doc.contains("fitted_rate") && doc["fitted_rate"].is_number()) {
      out << "fitted rate: " << format_real(doc["fitted_rate"].get<double>()) << '\n';
    }
    out << "envelopes: " << (envelopes_ok ? "ok" : "VIOLATED")
        << "\nenergy identity: " << (energy_identity_ok ? "ok" : "VIOLATED")
        << "\nenergy monotone: " << (monotone_ok ? "ok" : "VIOLATED") << '\n';
  }
  return status;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-value analysis of semilinear parabolic equations"};
  app.require_subcommand(1);
  Options opt;
  using Command = int (*)(const RunConfig&, const Options&, std::ostream&);
  const std::pair<const char*, Command> commands[] = {
      {"solve", cmd_solve},     {"check", cmd_check},   {"sweep", cmd_sweep},
      {"predict", cmd_predict}, {"verify", cmd_verify},
  };
  const char* help[] = {"integrate the configured problem",
                        "evaluate decay and blow-up criteria on the initial data",
                        "sweep g(d, p) and extract the 4/pi^2 contour",
                        "predict blow-up times",
                        "solve and verify envelopes and energy identities"};
  int index = 0;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help[index++]);
    sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_flag("--quiet", opt.quiet, "suppress console reports");
    sub->add_flag("--seedless-deterministic", opt.deterministic,
                  "deterministic mode (the only mode)");
    if (std::string(name) == "check") {
      sub->add_option("--assert", opt.assert_mode, "exit 1 unless the criteria hold")
          ->check(CLI::IsMember({"none", "decay", "blowup", "all"}));
    }
  }

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();  // program name
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  Command run = nullptr;
  std::string chosen;
  for (const auto& [name, fn] : commands) {
    if (app.got_subcommand(name)) {
      run = fn;
      chosen = name;
    }
  }
  try {
    const RunConfig cfg = load_config(opt.config);
    if (!opt.quiet) out << "# mvpde " << chosen << " at " << timestamp() << '\n';
    return run(cfg, opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace mvpde
