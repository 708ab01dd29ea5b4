#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "svcmisc/csv.hpp"
#include "svcmisc/errors.hpp"
#include "svcmisc/metrics.hpp"
#include "svcmisc/misc_output.hpp"
#include "svcmisc/motion_data.hpp"
#include "svcmisc/param_fit.hpp"
#include "svcmisc/scenario.hpp"
#include "svcmisc/simulator.hpp"

#ifndef SVCMISC_VERSION
#define SVCMISC_VERSION "dev"
#endif

namespace svcmisc::cli {
namespace {

struct ScenarioArgs {
  ShuttleConfig shuttle;
  std::string condition = "static";
  double tau_head = 0.0;
  std::optional<double> stop_time;
  double g0 = kDefaultGravity;
  std::string out;
  std::string timeline;
};

// Output-parameter overrides; unset values keep the variant defaults or the
// --params file.
struct ParamArgs {
  std::string variant;
  std::string params_file;
  std::map<std::string, double> values;
};

struct SimulateArgs {
  std::string motion;
  ParamArgs params;
  SvcParams svc;
  double dt = 0.01;
  int stride = 10;
  bool clamp = false;
  double resample = 0.0;
  std::string out;
};

struct FitArgs {
  std::vector<std::string> motion;
  std::vector<std::string> misc;
  std::string variant;
  SvcParams svc;
  FitConfig fit;
  bool per_condition = false;
  double resample = 0.0;
  std::string out;
  std::string diagnostics;
};

struct EvalArgs {
  std::vector<std::string> obs;
  std::vector<std::string> pred;
  std::vector<std::string> motion;
  std::string params_file;
  SvcParams svc;
  double dt = 0.01;
  double resample = 0.0;
  std::string out;
};

struct Common {
  std::string config;
  std::string manifest;
  std::uint64_t seed = 1;
};

std::string derived_path(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix;
}

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config, "Flat key=value file; command-line flags take precedence");
  sub->add_option("--manifest", common.manifest, "Run manifest path (default: <out>.manifest)");
  sub->add_option("--seed", common.seed, "Random seed");
}

void add_svc_options(CLI::App* sub, SvcParams& svc) {
  sub->add_option("--g0", svc.g0, "Gravity magnitude, m/s^2");
  sub->add_option("--k-a", svc.k_a, "SVC gain K_a");
  sub->add_option("--k-w", svc.k_w, "SVC gain K_w");
  sub->add_option("--k-ac", svc.k_ac, "SVC gain K_ac");
  sub->add_option("--k-wc", svc.k_wc, "SVC gain K_wc");
  sub->add_option("--k-vc", svc.k_vc, "SVC gain K_vc");
  sub->add_option("--tau", svc.tau, "Mayne time constant, s");
  sub->add_option("--tau-d", svc.tau_d, "Canal time constant, s");
}

void add_param_options(CLI::App* sub, ParamArgs& p) {
  sub->add_option("--params", p.params_file, "Output-parameter CSV (param,value)");
  static const char* names[] = {"beta1", "beta2", "b", "gain", "exponent", "tau-i"};
  for (const char* name : names) {
    sub->add_option_function<double>(
        std::string("--") + name, [&p, name](double v) { p.values[name] = v; },
        "Output parameter override");
  }
}

OutputParams resolve_params(const ParamArgs& args) {
  const OutputVariant v = parse_variant(args.variant);
  OutputParams p = args.params_file.empty() ? default_params(v) : read_params_csv(args.params_file, v);
  // CLI names map onto each variant's parameter slots.
  static const std::map<OutputVariant, std::vector<std::string>> slots = {
      {OutputVariant::MsiBase, {"b", "tau-i", "gain"}},
      {OutputVariant::OmanAP, {"beta1", "beta2", "exponent"}},
      {OutputVariant::OmanBP, {"beta1", "beta2", "exponent"}},
      {OutputVariant::OmanHill, {"beta1", "beta2", "b", "gain"}},
  };
  std::vector<double> x = to_vector(p);
  const auto& names = slots.at(v);
  for (const auto& [name, value] : args.values) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      throw std::invalid_argument("--" + name + " does not apply to variant " + std::string(to_string(v)));
    x[static_cast<std::size_t>(it - names.begin())] = value;
  }
  p = from_vector(v, x);
  validate(p);
  return p;
}

std::optional<double> optional_dt(double v) {
  if (v > 0.0) return v;
  return std::nullopt;
}

MotionTrace load_motion(const std::string& path, double g0, double resample) {
  LoadedMotion lm = load_motion_csv(path, g0, optional_dt(resample));
  if (lm.inferred_acceleration)
    std::cerr << "warning: " << path << ": no ax,ay,az columns; inferred a = f - (0,0," << g0
              << ") assuming a static upright head\n";
  return std::move(lm.trace);
}

// Writes every option of the subcommand as key=value (repeated keys for
// multi-valued options). The file is accepted back by --config.
void write_manifest(const std::string& path, const CLI::App& sub, const SvcParams* svc) {
  auto out = csv::open_output(path);
  out << "# svcmisc run manifest\n";
  out << "subcommand=" << sub.get_name() << '\n';
  out << "version=" << SVCMISC_VERSION << '\n';
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "manifest") continue;
    if (opt->count() > 0) {
      if (opt->get_expected_min() == 0) {
        out << name << "=true\n";
      } else {
        for (const auto& r : opt->results()) out << name << '=' << r << '\n';
      }
    } else if (opt->get_expected_min() == 0) {
      out << name << "=false\n";
    } else if (!opt->get_default_str().empty()) {
      out << name << '=' << opt->get_default_str() << '\n';
    }
  }
  if (svc) {
    out << "# resolved SVC parameters\n";
    out << "svc.K_a=" << csv::format_number(svc->k_a) << '\n';
    out << "svc.K_w=" << csv::format_number(svc->k_w) << '\n';
    out << "svc.K_ac=" << csv::format_number(svc->k_ac) << '\n';
    out << "svc.K_wc=" << csv::format_number(svc->k_wc) << '\n';
    out << "svc.K_vc=" << csv::format_number(svc->k_vc) << '\n';
    out << "svc.tau=" << csv::format_number(svc->tau) << '\n';
    out << "svc.tau_d=" << csv::format_number(svc->tau_d) << '\n';
    out << "svc.g0=" << csv::format_number(svc->g0) << '\n';
  }
  csv::finish_output(out, path);
}

// Appends `--key value` for config-file entries whose option was not given
// on the command line.
void inject_config(std::vector<std::string>& args, const CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  const auto on_command_line = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
    const auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "subcommand" || key == "version" || key.rfind("svc.", 0) == 0) continue;
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (!opt) throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (key == "config" || on_command_line("--" + key)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") extra.push_back("--" + key);
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

void print_metrics_line(const std::string& label, std::span<const double> obs, std::span<const double> pred) {
  std::cout << label << ": n=" << obs.size() << " mae=" << csv::format_number(mean_abs_error(obs, pred));
  try {
    std::cout << " pearson_r=" << csv::format_number(pearson_r(obs, pred));
  } catch (const std::invalid_argument&) {
    std::cout << " pearson_r=undefined (zero variance)";
  }
  std::cout << '\n';
}

int cmd_scenario(const ScenarioArgs& a, const Common& common, const CLI::App& sub) {
  ShuttleConfig cfg = a.shuttle;
  if (a.stop_time) cfg.stop_time = *a.stop_time;
  const AccelProfile profile = shuttle_accel_profile(cfg);
  const HeadTiltCondition condition{parse_head_tilt(a.condition), a.tau_head};
  const MotionTrace motion = head_motion(profile, condition, a.g0);
  const std::string timeline = a.timeline.empty() ? derived_path(a.out, "_timeline.csv") : a.timeline;
  write_motion_csv(a.out, motion);
  write_timeline_csv(timeline, profile);
  write_manifest(common.manifest.empty() ? a.out + ".manifest" : common.manifest, sub, nullptr);
  std::cout << "scenario: condition=" << a.condition << " duration=" << csv::format_number(profile.duration())
            << " s samples=" << motion.size() << " traverses=" << profile.traverses().size() << '\n';
  return kOk;
}

int cmd_simulate(const SimulateArgs& a, const Common& common, const CLI::App& sub) {
  const OutputParams params = resolve_params(a.params);
  const MotionTrace motion = load_motion(a.motion, a.svc.g0, a.resample);
  SimConfig cfg;
  cfg.dt_sim = a.dt;
  cfg.record_stride = a.stride;
  cfg.clamp_output = a.clamp;
  const SimResult result = simulate(motion, a.svc, params, cfg);
  write_result_csv(a.out, result);
  write_manifest(common.manifest.empty() ? a.out + ".manifest" : common.manifest, sub, &a.svc);
  const auto peak = std::max_element(result.misc.begin(), result.misc.end());
  std::cout << "simulate: variant=" << to_string(variant_of(params)) << " records=" << result.size()
            << " peak_misc=" << csv::format_number(*peak) << '\n';
  return kOk;
}

std::vector<ConditionData> load_conditions(const std::vector<std::string>& motion,
                                           const std::vector<std::string>& misc, const SvcParams& svc,
                                           double resample) {
  if (motion.size() != misc.size())
    throw std::invalid_argument("--motion and --misc must be given the same number of times");
  std::vector<ConditionData> out;
  for (std::size_t i = 0; i < motion.size(); ++i)
    out.push_back({load_motion(motion[i], svc.g0, resample), load_misc_csv(misc[i], MiscKind::Observed)});
  return out;
}

void report_fit(const FitResult& r, OutputVariant v, const std::string& label) {
  std::cout << label << "variant=" << to_string(v) << " J=" << csv::format_number(r.J) << " best_start="
            << r.best_start << '\n';
  const auto names = parameter_names(v);
  const auto values = to_vector(r.best_params);
  for (std::size_t i = 0; i < names.size(); ++i)
    std::cout << "  " << names[i] << '=' << csv::format_number(values[i]) << '\n';
  std::vector<double> pooled_obs, pooled_pred;
  for (std::size_t c = 0; c < r.observed.size(); ++c) {
    print_metrics_line("  condition " + std::to_string(c + 1), r.observed[c], r.predicted[c]);
    pooled_obs.insert(pooled_obs.end(), r.observed[c].begin(), r.observed[c].end());
    pooled_pred.insert(pooled_pred.end(), r.predicted[c].begin(), r.predicted[c].end());
  }
  if (r.observed.size() > 1) print_metrics_line("  pooled", pooled_obs, pooled_pred);
  std::size_t converged = 0;
  for (const auto& s : r.starts) converged += s.converged ? 1 : 0;
  if (converged < r.starts.size())
    std::cout << "  " << (r.starts.size() - converged) << " of " << r.starts.size()
              << " starts did not converge (see diagnostics)\n";
}

int cmd_fit(FitArgs a, const Common& common, const CLI::App& sub) {
  const OutputVariant v = parse_variant(a.variant);
  a.fit.rng_seed = common.seed;
  const auto conditions = load_conditions(a.motion, a.misc, a.svc, a.resample);
  const std::string diagnostics = a.diagnostics.empty() ? derived_path(a.out, "_diagnostics.csv") : a.diagnostics;
  if (a.per_condition) {
    const auto results = fit_each_condition(v, conditions, a.svc, a.fit);
    for (std::size_t c = 0; c < results.size(); ++c) {
      const std::string suffix = "_cond" + std::to_string(c + 1);
      write_params_csv(derived_path(a.out, suffix + ".csv"), results[c].best_params, results[c].J);
      write_diagnostics_csv(derived_path(diagnostics, suffix + ".csv"), v, results[c]);
      report_fit(results[c], v, "fit condition " + std::to_string(c + 1) + ": ");
    }
  } else {
    const FitResult r = fit(v, conditions, a.svc, a.fit);
    write_params_csv(a.out, r.best_params, r.J);
    write_diagnostics_csv(diagnostics, v, r);
    report_fit(r, v, "fit: ");
  }
  write_manifest(common.manifest.empty() ? a.out + ".manifest" : common.manifest, sub, &a.svc);
  return kOk;
}

// Model values at the observation instants, nearest predicted sample.
std::vector<double> align(const MiscTrace& obs, const MiscTrace& pred, const std::string& pred_name) {
  if (pred.empty()) throw DataError(pred_name + ": no predictions");
  const auto pt = pred.times();
  const double half = pt.size() > 1 ? 0.5 * (pt[1] - pt[0]) : 0.0;
  std::vector<double> out;
  for (const auto& o : obs.observations()) {
    auto it = std::lower_bound(pt.begin(), pt.end(), o.t);
    std::size_t i = static_cast<std::size_t>(it - pt.begin());
    if (i == pt.size() || (i > 0 && o.t - pt[i - 1] <= pt[i] - o.t)) --i;
    if (std::abs(pt[i] - o.t) > half + 1e-9)
      throw DataError("length mismatch: " + pred_name + " has no prediction near t=" + csv::format_number(o.t));
    out.push_back(pred[i].value);
  }
  return out;
}

int cmd_eval(const EvalArgs& a, const Common& common, const CLI::App& sub) {
  std::vector<MiscTrace> observed;
  for (const auto& p : a.obs) observed.push_back(load_misc_csv(p, MiscKind::Observed));

  std::vector<std::vector<double>> predicted;
  if (!a.pred.empty()) {
    if (a.pred.size() != a.obs.size()) throw std::invalid_argument("--obs and --pred counts differ");
    for (std::size_t c = 0; c < a.pred.size(); ++c)
      predicted.push_back(align(observed[c], load_misc_csv(a.pred[c], MiscKind::Predicted), a.pred[c]));
  } else {
    if (a.motion.size() != a.obs.size() || a.params_file.empty())
      throw std::invalid_argument("eval needs --pred per --obs, or --motion per --obs with --params");
    const OutputParams params = read_params_csv(a.params_file);
    std::vector<ConditionData> conditions;
    for (std::size_t c = 0; c < a.motion.size(); ++c)
      conditions.push_back({load_motion(a.motion[c], a.svc.g0, a.resample), observed[c]});
    SimConfig sim;
    sim.dt_sim = a.dt;
    predicted = FitProblem(conditions, a.svc, sim).predict(params);
  }

  auto out = csv::open_output(a.out);
  out << "scope,n,pearson_r,mae\n";
  std::vector<double> pooled_obs, pooled_pred;
  const auto row = [&](const std::string& scope, std::span<const double> o, std::span<const double> p) {
    if (o.size() != p.size()) throw DataError("length mismatch in " + scope);
    std::string r = "nan";
    try {
      r = csv::format_number(pearson_r(o, p));
    } catch (const std::invalid_argument&) {
      std::cerr << "warning: " << scope << ": pearson_r undefined (zero variance)\n";
    }
    const double mae = mean_abs_error(o, p);
    out << scope << ',' << o.size() << ',' << r << ',' << csv::format_number(mae) << '\n';
    std::cout << scope << ": n=" << o.size() << " pearson_r=" << r << " mae=" << csv::format_number(mae) << '\n';
  };
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const auto o = observed[c].values();
    row("condition_" + std::to_string(c + 1), o, predicted[c]);
    pooled_obs.insert(pooled_obs.end(), o.begin(), o.end());
    pooled_pred.insert(pooled_pred.end(), predicted[c].begin(), predicted[c].end());
  }
  row("pooled", pooled_obs, pooled_pred);
  csv::finish_output(out, a.out);
  write_manifest(common.manifest.empty() ? a.out + ".manifest" : common.manifest, sub, &a.svc);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& input) {
  CLI::App app{"Subjective-vertical-conflict motion sickness simulation and fitting", "svcmisc"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", SVCMISC_VERSION);

  Common common;
  ScenarioArgs sc;
  SimulateArgs sim;
  FitArgs ft;
  EvalArgs ev;

  auto* scenario = app.add_subcommand("scenario", "Synthesize fore-aft shuttle head motion");
  add_common(scenario, common);
  scenario->add_option("--condition", sc.condition, "Head-tilt condition: static|move")
      ->check(CLI::IsMember({"static", "move"}));
  scenario->add_option("--tau-head", sc.tau_head, "Head pursuit lag, s (0 = perfect GIA alignment)");
  scenario->add_option("--distance", sc.shuttle.distance, "Traverse distance, m");
  scenario->add_option("--v-max", sc.shuttle.v_max, "Maximum speed, m/s");
  scenario->add_option("--a-peak", sc.shuttle.a_peak, "Peak acceleration, m/s^2");
  scenario->add_option("--dwell", sc.shuttle.dwell, "Pause after each traverse, s");
  scenario->add_option("--set-duration", sc.shuttle.set_duration, "Motion set length, s");
  scenario->add_option("--n-sets", sc.shuttle.n_sets, "Number of motion sets");
  scenario->add_option("--break-duration", sc.shuttle.break_duration, "Break between sets, s");
  scenario->add_option("--recovery-duration", sc.shuttle.recovery_duration, "Recovery period, s");
  scenario->add_option("--stop-time", sc.stop_time, "Stop motion early at this time, s");
  scenario->add_option("--dt", sc.shuttle.dt, "Sample spacing, s");
  scenario->add_option("--g0", sc.g0, "Gravity magnitude, m/s^2");
  scenario->add_option("--variant", sim.params.variant, "Accepted for flag compatibility; unused");
  scenario->add_option("--out", sc.out, "Motion CSV output")->required();
  scenario->add_option("--timeline", sc.timeline, "Timeline CSV output (default: <out>_timeline.csv)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate conflict and MISC for a motion CSV");
  add_common(simulate_cmd, common);
  simulate_cmd->add_option("--motion", sim.motion, "Motion CSV")->required();
  simulate_cmd->add_option("--variant", sim.params.variant, "msibase|omanap|omanbp|omanhill")->required();
  add_param_options(simulate_cmd, sim.params);
  add_svc_options(simulate_cmd, sim.svc);
  simulate_cmd->add_option("--dt", sim.dt, "Integration step, s");
  simulate_cmd->add_option("--stride", sim.stride, "Record every n-th step");
  simulate_cmd->add_flag("--clamp", sim.clamp, "Clamp MISC to [0,10]");
  simulate_cmd->add_option("--resample", sim.resample, "Resample motion to this spacing first, s");
  simulate_cmd->add_option("--out", sim.out, "Result CSV (t,dv_norm,misc)")->required();

  auto* fit_cmd = app.add_subcommand("fit", "Fit output-part parameters to observed MISC");
  add_common(fit_cmd, common);
  fit_cmd->add_option("--motion", ft.motion, "Motion CSV (repeat per condition)")->required();
  fit_cmd->add_option("--misc", ft.misc, "Observed MISC CSV (repeat per condition)")->required();
  fit_cmd->add_option("--variant", ft.variant, "msibase|omanap|omanbp|omanhill")->required();
  add_svc_options(fit_cmd, ft.svc);
  fit_cmd->add_option("--starts", ft.fit.n_starts, "Number of optimizer starts");
  fit_cmd->add_option("--max-iters", ft.fit.max_iters, "Iterations per start");
  fit_cmd->add_option("--rel-tol", ft.fit.rel_tol, "Relative tolerance on J");
  fit_cmd->add_option("--threads", ft.fit.n_threads, "Worker threads (0 = hardware)");
  fit_cmd->add_option("--dt", ft.fit.sim.dt_sim, "Integration step, s");
  fit_cmd->add_flag("--per-condition", ft.per_condition, "Fit each condition separately");
  fit_cmd->add_option("--resample", ft.resample, "Resample motion to this spacing first, s");
  fit_cmd->add_option("--out", ft.out, "Fitted parameter CSV")->required();
  fit_cmd->add_option("--diagnostics", ft.diagnostics, "Per-start diagnostics CSV");

  auto* eval_cmd = app.add_subcommand("eval", "Pearson r and mean absolute error of predictions");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--obs", ev.obs, "Observed MISC CSV (repeat per condition)")->required();
  eval_cmd->add_option("--pred", ev.pred, "Predicted MISC CSV (repeat per condition)");
  eval_cmd->add_option("--motion", ev.motion, "Motion CSV to predict from (repeat per condition)");
  eval_cmd->add_option("--params", ev.params_file, "Parameter CSV used with --motion");
  eval_cmd->add_option("--variant", sim.params.variant, "Accepted for flag compatibility; unused");
  add_svc_options(eval_cmd, ev.svc);
  eval_cmd->add_option("--dt", ev.dt, "Integration step, s");
  eval_cmd->add_option("--resample", ev.resample, "Resample motion to this spacing first, s");
  eval_cmd->add_option("--out", ev.out, "Metrics CSV")->required();

  std::vector<std::string> args(input.begin() + (input.empty() ? 0 : 1), input.end());
  try {
    // --config is read before parsing so its values act as lower-precedence defaults.
    if (!args.empty()) {
      const CLI::App* sub = app.get_subcommand_no_throw(args.front());
      for (std::size_t i = 0; sub && i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        if (!path.empty()) {
          inject_config(args, *sub, path);
          break;
        }
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (scenario->parsed()) return cmd_scenario(sc, common, *scenario);
    if (simulate_cmd->parsed()) return cmd_simulate(sim, common, *simulate_cmd);
    if (fit_cmd->parsed()) return cmd_fit(ft, common, *fit_cmd);
    if (eval_cmd->parsed()) return cmd_eval(ev, common, *eval_cmd);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric abort: " << e.what() << " (t=" << csv::format_number(e.time())
              << ", state index " << e.state_index() << ")\n";
    return kNumeric;
  } catch (const ExclusionError& e) {
    std::cerr << "excluded: " << e.what() << '\n';
    return kExcluded;
  } catch (const ConvergenceError& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace svcmisc::cli
