#include "svcmisc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "svcmisc/csv.hpp"

namespace svcmisc {
namespace {

constexpr double kTimeEps = 1e-12;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("shuttle ") + name + " must be positive");
}

// Earth-to-head coordinates for a head pitched by theta about y.
Vec3 to_head(double theta, const Vec3& earth) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * earth.x() - s * earth.z(), earth.y(), s * earth.x() + c * earth.z()};
}

}  // namespace

void ShuttleConfig::validate() const {
  require_positive(distance, "distance");
  require_positive(v_max, "v_max");
  require_positive(a_peak, "a_peak");
  require_positive(set_duration, "set_duration");
  require_positive(dt, "dt");
  if (n_sets < 1) throw std::invalid_argument("shuttle n_sets must be >= 1");
  if (!(dwell >= 0.0)) throw std::invalid_argument("shuttle dwell must be non-negative");
  if (!(break_duration >= 0.0)) throw std::invalid_argument("shuttle break_duration must be non-negative");
  if (!(recovery_duration >= 0.0))
    throw std::invalid_argument("shuttle recovery_duration must be non-negative");
  if (stop_time && !(*stop_time >= 0.0)) throw std::invalid_argument("shuttle stop_time must be >= 0");
  const TraverseShape shape = solve_traverse(distance, v_max, a_peak);
  if (shape.duration() > set_duration)
    throw std::invalid_argument("shuttle traverse does not fit in one set");
}

HeadTilt parse_head_tilt(std::string_view name) {
  if (name == "static") return HeadTilt::Static;
  if (name == "move") return HeadTilt::Move;
  throw std::invalid_argument("unknown head-tilt condition '" + std::string(name) +
                              "' (expected static|move)");
}

std::string_view to_string(HeadTilt mode) {
  return mode == HeadTilt::Static ? "static" : "move";
}

TraverseShape solve_traverse(double distance, double v_max, double a_peak) {
  if (!(distance > 0.0) || !(v_max > 0.0) || !(a_peak > 0.0) || !std::isfinite(distance) ||
      !std::isfinite(v_max) || !std::isfinite(a_peak))
    throw std::invalid_argument("unsolvable traverse profile: distance, v_max and a_peak must be positive");
  TraverseShape s;
  s.accel = a_peak;
  if (a_peak * distance > v_max * v_max) {
    s.trapezoidal = true;
    s.v_peak = v_max;
    s.t_accel = v_max / a_peak;
    s.t_cruise = (distance - v_max * v_max / a_peak) / v_max;
  } else {
    s.v_peak = std::sqrt(a_peak * distance);
    s.t_accel = s.v_peak / a_peak;
    s.t_cruise = 0.0;
  }
  return s;
}

AccelProfile::AccelProfile(const ShuttleConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  shape_ = solve_traverse(cfg_.distance, cfg_.v_max, cfg_.a_peak);
  const double traverse_time = shape_.duration();
  const double unit = traverse_time + cfg_.dwell;

  for (int s = 0; s < cfg_.n_sets; ++s) {
    const double set_start = s * (cfg_.set_duration + cfg_.break_duration);
    const double set_end = set_start + cfg_.set_duration;
    phases_.push_back({"set_" + std::to_string(s + 1), set_start, set_end});
    for (int i = 0;; ++i) {
      const double offset = i * unit;
      if (offset + traverse_time > cfg_.set_duration + kTimeEps) break;
      traverses_.push_back({set_start + offset, i % 2 == 0 ? 1.0 : -1.0});
    }
    if (s + 1 < cfg_.n_sets)
      phases_.push_back({"break_" + std::to_string(s + 1), set_end, set_end + cfg_.break_duration});
  }
  motion_end_ = cfg_.n_sets * cfg_.set_duration + (cfg_.n_sets - 1) * cfg_.break_duration;

  if (cfg_.stop_time && *cfg_.stop_time < motion_end_) {
    const double stop = *cfg_.stop_time;
    std::erase_if(traverses_, [stop](const Traverse& tr) { return tr.t_start >= stop; });
    motion_end_ = stop;
    if (!traverses_.empty())
      motion_end_ = std::max(stop, traverses_.back().t_start + traverse_time);
    std::erase_if(phases_, [this](const Phase& p) { return p.t_start >= motion_end_; });
    if (!phases_.empty()) phases_.back().t_end = std::min(phases_.back().t_end, motion_end_);
  }
  phases_.push_back({"recovery", motion_end_, motion_end_ + cfg_.recovery_duration});
  duration_ = motion_end_ + cfg_.recovery_duration;
}

const Traverse* AccelProfile::traverse_at(double t) const {
  auto it = std::upper_bound(traverses_.begin(), traverses_.end(), t,
                             [](double v, const Traverse& tr) { return v < tr.t_start; });
  if (it == traverses_.begin()) return nullptr;
  --it;
  return (t < it->t_start + shape_.duration()) ? &*it : nullptr;
}

double AccelProfile::accel_at(double t) const {
  const Traverse* tr = traverse_at(t);
  if (!tr) return 0.0;
  const double tau = t - tr->t_start;
  if (tau < shape_.t_accel) return tr->direction * shape_.accel;
  if (tau < shape_.t_accel + shape_.t_cruise) return 0.0;
  return -tr->direction * shape_.accel;
}

double AccelProfile::velocity_at(double t) const {
  const Traverse* tr = traverse_at(t);
  if (!tr) return 0.0;
  const double tau = t - tr->t_start;
  double v = 0.0;
  if (tau < shape_.t_accel)
    v = shape_.accel * tau;
  else if (tau < shape_.t_accel + shape_.t_cruise)
    v = shape_.v_peak;
  else
    v = shape_.v_peak - shape_.accel * (tau - shape_.t_accel - shape_.t_cruise);
  return tr->direction * v;
}

double AccelProfile::next_change_after(double t) const {
  auto it = std::upper_bound(traverses_.begin(), traverses_.end(), t,
                             [](double v, const Traverse& tr) { return v < tr.t_start; });
  if (it != traverses_.begin()) {
    const Traverse& tr = *std::prev(it);
    const double marks[] = {tr.t_start + shape_.t_accel, tr.t_start + shape_.t_accel + shape_.t_cruise,
                            tr.t_start + shape_.duration()};
    for (double m : marks)
      if (m > t) return m;
  }
  return it == traverses_.end() ? std::numeric_limits<double>::infinity() : it->t_start;
}

AccelProfile shuttle_accel_profile(const ShuttleConfig& cfg) {
  return AccelProfile(cfg);
}

MotionTrace head_motion(const AccelProfile& profile, const HeadTiltCondition& condition, double g0) {
  if (!(condition.tau_head >= 0.0)) throw std::invalid_argument("tau_head must be non-negative");
  const double dt = profile.config().dt;
  const auto n = static_cast<std::size_t>(std::llround(profile.duration() / dt)) + 1;

  std::vector<double> ax(n);
  for (std::size_t k = 0; k < n; ++k) ax[k] = profile.accel_at(static_cast<double>(k) * dt);

  std::vector<double> theta(n, 0.0);
  std::vector<double> theta_rate(n, 0.0);
  if (condition.mode == HeadTilt::Move) {
    const auto target_at = [&](double t) { return std::atan2(profile.accel_at(t), g0); };
    if (condition.tau_head == 0.0) {
      for (std::size_t k = 0; k < n; ++k) theta[k] = std::atan2(ax[k], g0);
      // Piecewise constant between accel changes, so differences vanish
      // except across a change.
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k == 0 ? 0 : k - 1;
        const std::size_t hi = k + 1 == n ? k : k + 1;
        theta_rate[k] = (theta[hi] - theta[lo]) / (static_cast<double>(hi - lo) * dt);
      }
    } else {
      const double tau = condition.tau_head;
      double th = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double tk = static_cast<double>(k) * dt;
        theta[k] = th;
        theta_rate[k] = (target_at(tk) - th) / tau;
        if (k + 1 == n) break;
        const double t_next = static_cast<double>(k + 1) * dt;
        // Exact first-order propagation across each constant-target piece.
        double t = tk;
        while (t < t_next) {
          const double tn = std::min(profile.next_change_after(t), t_next);
          const double target = target_at(t);
          th = target + (th - target) * std::exp(-(tn - t) / tau);
          t = tn;
        }
      }
    }
  }

  std::vector<MotionSample> samples(n);
  for (std::size_t k = 0; k < n; ++k) {
    MotionSample& s = samples[k];
    s.t = static_cast<double>(k) * dt;
    s.f = to_head(theta[k], Vec3(ax[k], 0.0, g0));
    s.a = to_head(theta[k], Vec3(ax[k], 0.0, 0.0));
    s.omega = Vec3(0.0, theta_rate[k], 0.0);
  }
  return MotionTrace(std::move(samples));
}

void write_timeline_csv(const std::string& path, const AccelProfile& profile) {
  auto out = csv::open_output(path);
  out << "t,phase\n";
  for (const auto& p : profile.phases()) out << csv::format_number(p.t_start) << ',' << p.name << '\n';
  csv::finish_output(out, path);
}

std::vector<double> report_times(double duration, double interval) {
  if (!(interval > 0.0)) throw std::invalid_argument("report interval must be positive");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double t = k * interval;
    if (t > duration + kTimeEps) break;
    out.push_back(t);
  }
  return out;
}

std::optional<double> first_report_reaching(std::span<const double> times, std::span<const double> misc,
                                            double threshold) {
  if (times.size() != misc.size()) throw std::invalid_argument("report series length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::round(misc[i]) >= threshold) return times[i];
  return std::nullopt;
}

}  // namespace svcmisc
