#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcmisc/misc_output.hpp"
#include "svcmisc/motion_data.hpp"
#include "svcmisc/simulator.hpp"
#include "svcmisc/svc_observer.hpp"

namespace svcmisc {

// One experimental condition of a participant: the head motion and the
// MISC reports observed during it.
struct ConditionData {
  MotionTrace motion;
  MiscTrace observed;
};

struct ParamBounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitBounds {
  ParamBounds beta1{1.0, 600.0};     // s
  ParamBounds beta2{60.0, 7200.0};   // s
  ParamBounds exponent{0.1, 10.0};   // M_AP, M_BP
  ParamBounds b{0.01, 10.0};         // m/s^2
  ParamBounds gain{0.01, 1000.0};    // P, G
  ParamBounds tau_i{10.0, 7200.0};   // s

  // Bounds in parameter_names(v) order.
  std::vector<ParamBounds> for_variant(OutputVariant v) const;
};

struct FitConfig {
  int n_starts = 32;
  int max_iters = 2000;
  double rel_tol = 1e-8;
  FitBounds bounds;
  std::uint64_t rng_seed = 1;
  int n_threads = 0;  // 0: one per hardware thread
  SimConfig sim;

  void validate() const;
};

struct StartDiagnostics {
  std::vector<double> initial;  // natural parameters
  std::vector<double> final;
  double J = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
};

struct FitResult {
  OutputParams best_params;
  double J = 0.0;
  std::vector<std::vector<double>> observed;     // per condition
  std::vector<std::vector<double>> predicted;    // raw model MISC at the report times
  std::vector<std::vector<double>> residuals;    // observed - predicted
  std::vector<StartDiagnostics> starts;
  std::size_t best_start = 0;
};

// Sum of squared residuals over all conditions and report instants.
double objective_j(std::span<const MiscTrace> observed, std::span<const std::vector<double>> predictions);
double objective_j(std::span<const std::vector<double>> observed,
                   std::span<const std::vector<double>> predictions);

// Maps natural parameters to the unconstrained search space and back:
// log for every positive parameter, and beta2 = beta1 * (1 + exp(q)) so
// beta1 < beta2 holds for every search point.
std::vector<double> to_search_space(const OutputParams& params);
OutputParams from_search_space(OutputVariant v, std::span<const double> z);

// Precomputed observer tapes for a set of conditions; evaluates model MISC
// at the report instants for any output parameter set.
class FitProblem {
 public:
  FitProblem(std::span<const ConditionData> conditions, const SvcParams& svc, const SimConfig& sim);

  std::size_t size() const noexcept { return tapes_.size(); }
  const std::vector<std::vector<double>>& observed() const noexcept { return observed_; }
  std::vector<std::vector<double>> predict(const OutputParams& params) const;
  double objective(const OutputParams& params) const;

 private:
  std::vector<ConflictTape> tapes_;
  std::vector<std::vector<std::size_t>> steps_;
  std::vector<std::vector<double>> observed_;
};

// Multi-start Nelder-Mead fit of one parameter set shared by all
// conditions. Throws ExclusionError when every observation is zero and
// ConvergenceError when no start converges.
FitResult fit(OutputVariant variant, std::span<const ConditionData> conditions, const SvcParams& svc,
              const FitConfig& cfg);

// Separate fit per condition.
std::vector<FitResult> fit_each_condition(OutputVariant variant, std::span<const ConditionData> conditions,
                                          const SvcParams& svc, const FitConfig& cfg);

// `param,value` rows: variant, each parameter, J.
void write_params_csv(const std::string& path, const OutputParams& params, std::optional<double> J = {});
// Reads a parameter file written by write_params_csv (or by hand). The
// variant row is required unless expected is given; they must agree.
OutputParams read_params_csv(const std::string& path, std::optional<OutputVariant> expected = {});
// One row per start.
void write_diagnostics_csv(const std::string& path, OutputVariant variant, const FitResult& result);

}  // namespace svcmisc
