#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcmisc/misc_output.hpp"
#include "svcmisc/motion_data.hpp"
#include "svcmisc/svc_observer.hpp"

namespace svcmisc {

struct SimConfig {
  double dt_sim = 0.01;        // s; must not exceed the trace spacing
  bool clamp_output = false;   // clamp recorded MISC to [0,10]
  int record_stride = 10;      // keep every n-th step
  std::optional<double> t_end; // stop early (absolute time); default: end of trace

  void validate(const MotionTrace& motion) const;
};

struct SimResult {
  OutputVariant variant = OutputVariant::OmanHill;
  std::vector<double> t;        // recorded times, s
  std::vector<Vec3> dv;         // conflict vector dv = v_s - v_s_hat
  std::vector<double> dv_norm;  // |dv|, m/s^2
  std::vector<double> misc;     // model MISC (raw unless clamp_output)
  SvcState final_svc;
  OutputState final_output;

  std::size_t size() const noexcept { return t.size(); }
  MiscTrace misc_trace() const;
};

// Conflict magnitudes at the four RK4 stages of every step of the observer
// integration. The observer does not depend on the output part, so
// integrating the output filters against this tape reproduces the joint
// RK4 integration exactly, without re-running the observer for every
// output parameter set.
struct ConflictTape {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<std::array<double, 4>> stage_dv;  // per step: k1, k2, k3, k4 stages

  int record_stride = 1;
  std::vector<Vec3> recorded_dv;  // dv at steps 0, stride, 2*stride, ... (and the last step)
  std::vector<std::size_t> recorded_steps;
  SvcState final_state;

  double time_of_step(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double t_end() const { return time_of_step(steps); }
};

// Observer pass. Throws NumericError on a non-finite state and
// std::invalid_argument on configuration errors.
ConflictTape build_conflict_tape(const MotionTrace& motion, const SvcParams& svc,
                                 const SimConfig& cfg);

// Output pass over a tape; records MISC on the tape's recorded steps.
SimResult integrate_output(const ConflictTape& tape, const OutputParams& params,
                           bool clamp_output = false);

// Raw MISC after exactly steps[i] steps (steps must be non-decreasing and
// at most tape.steps). Returns NaN entries if the output state diverges.
std::vector<double> misc_at_steps(const ConflictTape& tape, const OutputParams& params,
                                  std::span<const std::size_t> steps);
// Same for several tapes at once, one step list per tape.
std::vector<std::vector<double>> misc_at_steps(std::span<const ConflictTape* const> tapes,
                                               const OutputParams& params,
                                               std::span<const std::vector<std::size_t>> steps);

// End-to-end simulation: observer from rest equilibrium, output filters
// from zero, classical RK4 at cfg.dt_sim with linearly interpolated input.
SimResult simulate(const MotionTrace& motion, const SvcParams& svc, const OutputParams& params,
                   const SimConfig& cfg = {});

// Nearest recorded point for each requested time. Times more than half a
// recording interval outside the span throw std::out_of_range.
std::vector<double> sample_at(const SimResult& result, std::span<const double> times);

// Step index nearest to each time on the tape's integration grid.
std::vector<std::size_t> steps_for_times(const ConflictTape& tape, std::span<const double> times);

// `t,dv_norm,misc` at 9 significant digits.
void write_result_csv(const std::string& path, const SimResult& result);

}  // namespace svcmisc
