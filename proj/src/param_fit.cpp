#include "svcmisc/param_fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "svcmisc/csv.hpp"
#include "svcmisc/errors.hpp"
#include "svcmisc/nelder_mead.hpp"

namespace svcmisc {
namespace {

// Any feasible objective is far below this; infeasible points rank by how
// far outside the bounds they are.
constexpr double kPenalty = 1e30;
constexpr double kInitialStep = 0.5;

bool has_beta_pair(OutputVariant v) {
  return v != OutputVariant::MsiBase;
}

double bound_violation(std::span<const double> x, std::span<const ParamBounds> bounds) {
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < bounds[i].lo) dist += std::log(bounds[i].lo / x[i]);
    if (x[i] > bounds[i].hi) dist += std::log(x[i] / bounds[i].hi);
  }
  return dist;
}

std::vector<double> draw_start(OutputVariant v, std::span<const ParamBounds> bounds, std::mt19937_64& rng) {
  const auto log_uniform = [&rng](double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
  };
  std::vector<double> x(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    double lo = bounds[i].lo;
    // beta2 must exceed beta1.
    if (has_beta_pair(v) && i == 1) lo = std::max(lo, x[0] * 1.01);
    x[i] = lo < bounds[i].hi ? log_uniform(lo, bounds[i].hi) : bounds[i].hi;
  }
  return x;
}

}  // namespace

std::vector<ParamBounds> FitBounds::for_variant(OutputVariant v) const {
  switch (v) {
    case OutputVariant::MsiBase: return {b, tau_i, gain};
    case OutputVariant::OmanAP:
    case OutputVariant::OmanBP: return {beta1, beta2, exponent};
    case OutputVariant::OmanHill: return {beta1, beta2, b, gain};
  }
  return {};
}

void FitConfig::validate() const {
  if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (n_threads < 0) throw std::invalid_argument("n_threads must be >= 0");
  for (const ParamBounds& pb : {bounds.beta1, bounds.beta2, bounds.exponent, bounds.b, bounds.gain, bounds.tau_i}) {
    if (!(pb.lo > 0.0) || !(pb.hi >= pb.lo) || !std::isfinite(pb.hi))
      throw std::invalid_argument("parameter bounds must be positive with lo <= hi");
  }
}

double objective_j(std::span<const std::vector<double>> observed,
                   std::span<const std::vector<double>> predictions) {
  if (observed.size() != predictions.size())
    throw std::invalid_argument("objective_j: condition count mismatch");
  double j = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    if (observed[c].size() != predictions[c].size())
      throw std::invalid_argument("objective_j: length mismatch in condition " + std::to_string(c));
    for (std::size_t i = 0; i < observed[c].size(); ++i) {
      const double r = observed[c][i] - predictions[c][i];
      j += r * r;
    }
  }
  return j;
}

double objective_j(std::span<const MiscTrace> observed, std::span<const std::vector<double>> predictions) {
  std::vector<std::vector<double>> obs;
  obs.reserve(observed.size());
  for (const auto& m : observed) obs.push_back(m.values());
  return objective_j(std::span<const std::vector<double>>(obs), predictions);
}

std::vector<double> to_search_space(const OutputParams& params) {
  std::vector<double> x = to_vector(params);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::log(x[i]);
  if (has_beta_pair(variant_of(params))) z[1] = std::log(x[1] / x[0] - 1.0);
  return z;
}

OutputParams from_search_space(OutputVariant v, std::span<const double> z) {
  std::vector<double> x(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) x[i] = std::exp(z[i]);
  if (has_beta_pair(v)) x[1] = x[0] * (1.0 + std::exp(z[1]));
  return from_vector(v, x);
}

FitProblem::FitProblem(std::span<const ConditionData> conditions, const SvcParams& svc, const SimConfig& sim) {
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    const ConditionData& cd = conditions[c];
    if (cd.observed.empty()) throw DataError("condition " + std::to_string(c + 1) + ": no MISC observations");
    const auto times = cd.observed.times();
    const double half = 0.5 * sim.dt_sim;
    if (times.front() < cd.motion.t0() - half || times.back() > cd.motion.t_end() + half)
      throw DataError("condition " + std::to_string(c + 1) + ": MISC observations outside the motion span");

    SimConfig cfg = sim;
    cfg.record_stride = std::numeric_limits<int>::max();
    cfg.t_end = std::min(cd.motion.t_end(), std::max(times.back(), cd.motion.t0()) + 1.0);
    tapes_.push_back(build_conflict_tape(cd.motion, svc, cfg));
    steps_.push_back(steps_for_times(tapes_.back(), times));
    observed_.push_back(cd.observed.values());
  }
}

std::vector<std::vector<double>> FitProblem::predict(const OutputParams& params) const {
  std::vector<const ConflictTape*> tapes;
  for (const auto& t : tapes_) tapes.push_back(&t);
  return misc_at_steps(tapes, params, steps_);
}

double FitProblem::objective(const OutputParams& params) const {
  const auto pred = predict(params);
  double j = 0.0;
  for (std::size_t c = 0; c < pred.size(); ++c) {
    for (std::size_t i = 0; i < pred[c].size(); ++i) {
      const double r = observed_[c][i] - pred[c][i];
      j += r * r;
    }
  }
  return std::isfinite(j) ? j : kPenalty;
}

FitResult fit(OutputVariant variant, std::span<const ConditionData> conditions, const SvcParams& svc,
              const FitConfig& cfg) {
  cfg.validate();
  if (conditions.empty()) throw std::invalid_argument("fit: no conditions");
  const bool any_symptom = std::any_of(conditions.begin(), conditions.end(), [](const ConditionData& c) {
    const auto v = c.observed.values();
    return std::any_of(v.begin(), v.end(), [](double m) { return m != 0.0; });
  });
  if (!any_symptom) throw ExclusionError("no symptoms: every observed MISC is zero; participant excluded");

  const FitProblem problem(conditions, svc, cfg.sim);
  const std::vector<ParamBounds> bounds = cfg.bounds.for_variant(variant);

  const Objective objective = [&](std::span<const double> z) {
    for (double v : z)
      if (!std::isfinite(v) || std::abs(v) > 700.0) return kPenalty * 2.0;
    const OutputParams p = from_search_space(variant, z);
    const auto x = to_vector(p);
    const double violation = bound_violation(x, bounds);
    if (violation > 0.0) return kPenalty * (1.0 + violation);
    if (has_beta_pair(variant) && !(x[0] < x[1])) return kPenalty;
    return problem.objective(p);
  };

  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::vector<double>> initial(static_cast<std::size_t>(cfg.n_starts));
  for (auto& x : initial) x = draw_start(variant, bounds, rng);

  NelderMeadOptions nm;
  nm.max_iters = cfg.max_iters;
  nm.rel_tol = cfg.rel_tol;
  nm.step.assign(bounds.size(), kInitialStep);

  std::vector<NelderMeadResult> runs(initial.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < initial.size(); i = next++)
      runs[i] = nelder_mead(objective, to_search_space(from_vector(variant, initial[i])), nm);
  };
  unsigned n_threads = cfg.n_threads > 0 ? static_cast<unsigned>(cfg.n_threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(initial.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  FitResult result;
  result.starts.reserve(runs.size());
  bool any_converged = false;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    StartDiagnostics d;
    d.initial = initial[i];
    d.final = to_vector(from_search_space(variant, runs[i].x));
    d.J = runs[i].f;
    d.converged = runs[i].converged;
    d.iterations = runs[i].iterations;
    d.evaluations = runs[i].evaluations;
    any_converged = any_converged || d.converged;
    result.starts.push_back(std::move(d));
  }
  // Lowest J; ties go to the earliest start.
  result.best_start = 0;
  for (std::size_t i = 1; i < result.starts.size(); ++i)
    if (result.starts[i].J < result.starts[result.best_start].J) result.best_start = i;

  if (!any_converged) throw ConvergenceError("no optimizer start converged within max_iters");
  if (!(result.starts[result.best_start].J < kPenalty))
    throw ConvergenceError("no optimizer start reached a feasible parameter set");

  result.best_params = from_vector(variant, result.starts[result.best_start].final);
  result.observed = problem.observed();
  result.predicted = problem.predict(result.best_params);
  result.J = objective_j(std::span<const std::vector<double>>(result.observed),
                         std::span<const std::vector<double>>(result.predicted));
  for (std::size_t c = 0; c < result.observed.size(); ++c) {
    std::vector<double> r(result.observed[c].size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = result.observed[c][i] - result.predicted[c][i];
    result.residuals.push_back(std::move(r));
  }
  return result;
}

std::vector<FitResult> fit_each_condition(OutputVariant variant, std::span<const ConditionData> conditions,
                                          const SvcParams& svc, const FitConfig& cfg) {
  std::vector<FitResult> out;
  out.reserve(conditions.size());
  for (std::size_t c = 0; c < conditions.size(); ++c) out.push_back(fit(variant, conditions.subspan(c, 1), svc, cfg));
  return out;
}

void write_params_csv(const std::string& path, const OutputParams& params, std::optional<double> J) {
  auto out = csv::open_output(path);
  const OutputVariant v = variant_of(params);
  out << "param,value\n";
  out << "variant," << to_string(v) << '\n';
  const auto names = parameter_names(v);
  const auto values = to_vector(params);
  for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << ',' << csv::format_number(values[i]) << '\n';
  if (J) out << "J," << csv::format_number(*J) << '\n';
  csv::finish_output(out, path);
}

OutputParams read_params_csv(const std::string& path, std::optional<OutputVariant> expected) {
  const csv::Table table = csv::read_file(path);
  const auto cp = table.column("param");
  const auto cv = table.column("value");
  if (cp == csv::Table::npos || cv == csv::Table::npos)
    throw DataError(path + ": expected header 'param,value'");

  std::optional<OutputVariant> variant;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r][cp] != "variant") continue;
    try {
      variant = parse_variant(table.rows[r][cv]);
    } catch (const std::invalid_argument& e) {
      throw DataError(path + ": " + e.what());
    }
  }
  if (variant && expected && *variant != *expected)
    throw DataError(path + ": parameter file is for variant " + std::string(to_string(*variant)) +
                    ", expected " + std::string(to_string(*expected)));
  if (!variant) variant = expected;
  if (!variant) throw DataError(path + ": missing 'variant' row");

  const auto names = parameter_names(*variant);
  std::vector<double> values(names.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto it = std::find(names.begin(), names.end(), table.rows[r][cp]);
    if (it != names.end()) values[static_cast<std::size_t>(it - names.begin())] = table.number(r, cv);
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (std::isnan(values[i])) throw DataError(path + ": missing parameter '" + names[i] + "'");
  OutputParams p = from_vector(*variant, values);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
  return p;
}

void write_diagnostics_csv(const std::string& path, OutputVariant variant, const FitResult& result) {
  auto out = csv::open_output(path);
  const auto names = parameter_names(variant);
  out << "start";
  for (const auto& n : names) out << ",init_" << n;
  for (const auto& n : names) out << ",final_" << n;
  out << ",J,converged,iterations,evaluations\n";
  for (std::size_t i = 0; i < result.starts.size(); ++i) {
    const auto& d = result.starts[i];
    out << i;
    for (double v : d.initial) out << ',' << csv::format_number(v);
    for (double v : d.final) out << ',' << csv::format_number(v);
    out << ',' << csv::format_number(d.J) << ',' << (d.converged ? 1 : 0) << ',' << d.iterations << ','
        << d.evaluations << '\n';
  }
  csv::finish_output(out, path);
}

}  // namespace svcmisc
