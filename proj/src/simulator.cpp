#include "svcmisc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "output_kernels.hpp"
#include "svcmisc/csv.hpp"
#include "svcmisc/errors.hpp"

namespace svcmisc {
namespace {

constexpr double kStepTolerance = 1e-9;

using detail::Pack;
using detail::State;

bool finite(const State<double>& x) {
  return std::isfinite(x.s1) && std::isfinite(x.s2) && std::isfinite(x.f1) && std::isfinite(x.f2);
}

int first_non_finite(const State<double>& x) {
  const double v[] = {x.s1, x.s2, x.f1, x.f2};
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(v[i])) return i;
  return -1;
}

template <class K>
double misc_of(const K& kern, const State<double>& x) {
  const double u_o = kern.pathway_output(x);
  if (u_o < 0.0) throw std::logic_error("negative pathway output; state not reachable");
  return kern.post_map(u_o);
}

template <class P>
SimResult integrate_output_impl(const ConflictTape& tape, const P& p, bool clamp) {
  SimResult r;
  r.variant = variant_of(OutputParams{p});
  const detail::Kernel<P> kern(p);
  const std::size_t n_rec = tape.recorded_steps.size();
  r.t.reserve(n_rec);
  r.dv.reserve(n_rec);
  r.dv_norm.reserve(n_rec);
  r.misc.reserve(n_rec);

  const auto record = [&](std::size_t rec, const State<double>& x) {
    const double m = misc_of(kern, x);
    r.t.push_back(tape.time_of_step(tape.recorded_steps[rec]));
    r.dv.push_back(tape.recorded_dv[rec]);
    r.dv_norm.push_back(tape.recorded_dv[rec].norm());
    r.misc.push_back(clamp ? clamp_misc(m) : m);
  };

  State<double> x;
  std::size_t rec = 0;
  const double h = tape.dt;
  for (std::size_t k = 0; k < tape.steps; ++k) {
    if (rec < n_rec && tape.recorded_steps[rec] == k) record(rec++, x);
    const auto& c = tape.stage_dv[k];
    x = detail::rk4_step<detail::Kernel<P>, double>(kern, x, h, kern.template input<double>(c[0]),
                                                    kern.template input<double>(c[1]),
                                                    kern.template input<double>(c[2]),
                                                    kern.template input<double>(c[3]));
    if (!finite(x)) {
      const int idx = first_non_finite(x);
      throw NumericError(tape.time_of_step(k + 1), SvcState::kSize + idx,
                         "non-finite output state " + std::to_string(idx) + " at t=" +
                             csv::format_number(tape.time_of_step(k + 1)));
    }
  }
  if (rec < n_rec && tape.recorded_steps[rec] == tape.steps) record(rec++, x);
  r.final_svc = tape.final_state;
  r.final_output = detail::from_state(x);
  return r;
}

// Records raw MISC into out at every requested step index.
struct StepRecorder {
  std::span<const std::size_t> steps;
  std::vector<double>* out;
  std::size_t next = 0;

  std::size_t last() const { return steps.empty() ? 0 : steps.back(); }
  template <class K>
  void record(const K& kern, std::size_t k, double u_o) {
    while (next < steps.size() && steps[next] == k) {
      out->push_back(u_o >= 0.0 ? kern.post_map(u_o) : std::numeric_limits<double>::quiet_NaN());
      ++next;
    }
  }
};

template <class K>
void run_single(const K& kern, const ConflictTape& tape, StepRecorder& rec, State<double> x, std::size_t k0) {
  const std::size_t last = rec.last();
  for (std::size_t k = k0;; ++k) {
    rec.record(kern, k, kern.pathway_output(x));
    if (k >= last) return;
    const auto& u = tape.stage_dv[k];
    x = detail::rk4_step<K, double>(kern, x, tape.dt, kern.template input<double>(u[0]),
                                    kern.template input<double>(u[1]), kern.template input<double>(u[2]),
                                    kern.template input<double>(u[3]));
    if (!finite(x)) return;
  }
}

// Two tapes share one packed integration until the shorter one is done; the
// longer one then continues alone.
template <class K>
void run_pair(const K& kern, const ConflictTape& ta, const ConflictTape& tb, StepRecorder& ra,
              StepRecorder& rb) {
  const std::size_t common = std::min(ra.last(), rb.last());
  State<Pack> x;
  std::size_t k = 0;
  for (;; ++k) {
    const Pack u_o = kern.pathway_output(x);
    ra.record(kern, k, u_o[0]);
    rb.record(kern, k, u_o[1]);
    if (k >= common) break;
    const auto& a = ta.stage_dv[k];
    const auto& b = tb.stage_dv[k];
    x = detail::rk4_step<K, Pack>(kern, x, ta.dt, kern.template input<Pack>(Pack{a[0], b[0]}),
                                  kern.template input<Pack>(Pack{a[1], b[1]}),
                                  kern.template input<Pack>(Pack{a[2], b[2]}),
                                  kern.template input<Pack>(Pack{a[3], b[3]}));
    const State<double> xa{x.s1[0], x.s2[0], x.f1[0], x.f2[0]};
    const State<double> xb{x.s1[1], x.s2[1], x.f1[1], x.f2[1]};
    if (!finite(xa) || !finite(xb)) {
      if (finite(xa)) run_single(kern, ta, ra, xa, k + 1);
      if (finite(xb)) run_single(kern, tb, rb, xb, k + 1);
      return;
    }
  }
  const State<double> xa{x.s1[0], x.s2[0], x.f1[0], x.f2[0]};
  const State<double> xb{x.s1[1], x.s2[1], x.f1[1], x.f2[1]};
  // Both lanes hold the state at step k; steps already recorded are skipped.
  if (ra.last() > k) run_single(kern, ta, ra, xa, k);
  if (rb.last() > k) run_single(kern, tb, rb, xb, k);
}

template <class P>
std::vector<std::vector<double>> misc_at_steps_impl(std::span<const ConflictTape* const> tapes, const P& p,
                                                    std::span<const std::vector<std::size_t>> steps) {
  const detail::Kernel<P> kern(p);
  const std::size_t n = tapes.size();
  std::vector<std::vector<double>> out(n);
  std::vector<StepRecorder> rec;
  rec.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    out[c].reserve(steps[c].size());
    rec.push_back({steps[c], &out[c]});
  }
  std::size_t c = 0;
  // Packed only when the tapes share a step size.
  for (; c + 1 < n; c += 2) {
    if (tapes[c]->dt == tapes[c + 1]->dt) {
      run_pair(kern, *tapes[c], *tapes[c + 1], rec[c], rec[c + 1]);
    } else {
      run_single(kern, *tapes[c], rec[c], {}, 0);
      run_single(kern, *tapes[c + 1], rec[c + 1], {}, 0);
    }
  }
  if (c < n) run_single(kern, *tapes[c], rec[c], {}, 0);
  for (std::size_t i = 0; i < n; ++i) out[i].resize(steps[i].size(), std::numeric_limits<double>::quiet_NaN());
  return out;
}

}  // namespace

void SimConfig::validate(const MotionTrace& motion) const {
  if (!(dt_sim > 0.0) || !std::isfinite(dt_sim))
    throw std::invalid_argument("dt_sim must be positive");
  if (dt_sim > motion.dt() + kStepTolerance)
    throw std::invalid_argument("dt_sim " + csv::format_number(dt_sim) +
                                " exceeds motion sample spacing " + csv::format_number(motion.dt()));
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (t_end) {
    if (!(*t_end > motion.t0()) || *t_end > motion.t_end() + kStepTolerance)
      throw std::invalid_argument("t_end " + csv::format_number(*t_end) + " outside motion span");
  }
}

MiscTrace SimResult::misc_trace() const {
  std::vector<MiscObservation> obs;
  obs.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) obs.push_back({t[i], std::max(misc[i], 0.0)});
  return MiscTrace(std::move(obs), MiscKind::Predicted);
}

ConflictTape build_conflict_tape(const MotionTrace& motion, const SvcParams& svc,
                                 const SimConfig& cfg) {
  svc.validate();
  cfg.validate(motion);

  ConflictTape tape;
  tape.t0 = motion.t0();
  tape.dt = cfg.dt_sim;
  tape.record_stride = cfg.record_stride;
  const double t_stop = cfg.t_end.value_or(motion.t_end());
  tape.steps = static_cast<std::size_t>(std::floor((t_stop - tape.t0) / cfg.dt_sim + kStepTolerance));
  if (tape.steps == 0) throw std::invalid_argument("simulation span shorter than one step");
  tape.stage_dv.resize(tape.steps);

  const auto stride = static_cast<std::size_t>(cfg.record_stride);
  const std::size_t n_rec = tape.steps / stride + 1 + (tape.steps % stride != 0 ? 1 : 0);
  tape.recorded_dv.reserve(n_rec);
  tape.recorded_steps.reserve(n_rec);

  SvcState y = initial_state(svc);
  const double h = cfg.dt_sim;
  MotionSample in0 = motion.at(tape.t0);
  FeedbackSolution fb;
  for (std::size_t k = 0; k < tape.steps; ++k) {
    const MotionSample in_mid = motion.at(tape.t0 + (static_cast<double>(k) + 0.5) * h);
    const MotionSample in1 = motion.at(tape.time_of_step(k + 1));
    auto& c = tape.stage_dv[k];

    const SvcState k1 = derivatives(y, in0, svc, &fb);
    c[0] = conflict_norm(fb);
    if (k % stride == 0) {
      tape.recorded_dv.push_back(fb.delta_v);
      tape.recorded_steps.push_back(k);
    }
    const SvcState k2 = derivatives(y + k1 * (0.5 * h), in_mid, svc, &fb);
    c[1] = conflict_norm(fb);
    const SvcState k3 = derivatives(y + k2 * (0.5 * h), in_mid, svc, &fb);
    c[2] = conflict_norm(fb);
    const SvcState k4 = derivatives(y + k3 * h, in1, svc, &fb);
    c[3] = conflict_norm(fb);
    y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);

    if (const int idx = y.first_non_finite(); idx >= 0) {
      throw NumericError(tape.time_of_step(k + 1), static_cast<std::size_t>(idx),
                         "non-finite observer state " + std::to_string(idx) + " at t=" +
                             csv::format_number(tape.time_of_step(k + 1)));
    }
    in0 = in1;
  }
  tape.recorded_dv.push_back(resolve_feedback(y, in0, svc).delta_v);
  tape.recorded_steps.push_back(tape.steps);
  tape.final_state = y;
  return tape;
}

SimResult integrate_output(const ConflictTape& tape, const OutputParams& params, bool clamp_output) {
  validate(params);
  return std::visit([&](const auto& p) { return integrate_output_impl(tape, p, clamp_output); },
                    params);
}

std::vector<std::vector<double>> misc_at_steps(std::span<const ConflictTape* const> tapes,
                                               const OutputParams& params,
                                               std::span<const std::vector<std::size_t>> steps) {
  if (tapes.size() != steps.size()) throw std::invalid_argument("misc_at_steps: tape/step count mismatch");
  for (std::size_t c = 0; c < tapes.size(); ++c) {
    const auto& sc = steps[c];
    for (std::size_t i = 0; i < sc.size(); ++i) {
      if (sc[i] > tapes[c]->steps || (i > 0 && sc[i] < sc[i - 1]))
        throw std::invalid_argument("misc_at_steps: steps must be non-decreasing and within the tape");
    }
  }
  return std::visit([&](const auto& p) { return misc_at_steps_impl(tapes, p, steps); }, params);
}

std::vector<double> misc_at_steps(const ConflictTape& tape, const OutputParams& params,
                                  std::span<const std::size_t> steps) {
  const ConflictTape* tapes[] = {&tape};
  const std::vector<std::vector<std::size_t>> s = {std::vector<std::size_t>(steps.begin(), steps.end())};
  return misc_at_steps(tapes, params, s).front();
}

SimResult simulate(const MotionTrace& motion, const SvcParams& svc, const OutputParams& params,
                   const SimConfig& cfg) {
  validate(params);
  return integrate_output(build_conflict_tape(motion, svc, cfg), params, cfg.clamp_output);
}

std::vector<double> sample_at(const SimResult& result, std::span<const double> times) {
  if (result.t.empty()) throw std::out_of_range("sample_at: empty result");
  const double half = result.t.size() > 1 ? 0.5 * (result.t[1] - result.t[0]) : 0.0;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= result.t.front() - half - kStepTolerance) || !(t <= result.t.back() + half + kStepTolerance))
      throw std::out_of_range("sample_at: t=" + csv::format_number(t) + " outside simulated span");
    auto it = std::lower_bound(result.t.begin(), result.t.end(), t);
    std::size_t i = static_cast<std::size_t>(it - result.t.begin());
    if (i == result.t.size()) {
      i = result.t.size() - 1;
    } else if (i > 0 && (t - result.t[i - 1]) <= (result.t[i] - t)) {
      --i;
    }
    out.push_back(result.misc[i]);
  }
  return out;
}

std::vector<std::size_t> steps_for_times(const ConflictTape& tape, std::span<const double> times) {
  std::vector<std::size_t> out;
  out.reserve(times.size());
  for (double t : times) {
    const double pos = (t - tape.t0) / tape.dt;
    if (pos < -0.5 - kStepTolerance || pos > static_cast<double>(tape.steps) + 0.5 + kStepTolerance)
      throw std::out_of_range("t=" + csv::format_number(t) + " outside simulated span");
    const double k = std::clamp(std::round(pos), 0.0, static_cast<double>(tape.steps));
    out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

void write_result_csv(const std::string& path, const SimResult& result) {
  auto out = csv::open_output(path);
  out << "t,dv_norm,misc\n";
  for (std::size_t i = 0; i < result.size(); ++i) {
    out << csv::format_number(result.t[i]) << ',' << csv::format_number(result.dv_norm[i]) << ','
        << csv::format_number(result.misc[i]) << '\n';
  }
  csv::finish_output(out, path);
}

}  // namespace svcmisc
