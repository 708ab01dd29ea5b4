#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcmisc/motion_data.hpp"

namespace svcmisc {

// Fore-aft shuttle session: n_sets motion sets separated by breaks, then a
// stationary recovery period.
struct ShuttleConfig {
  double distance = 3.0;            // m per traverse
  double v_max = 1.67;              // m/s
  double a_peak = 1.0;              // m/s^2
  double dwell = 0.5;               // s pause after each traverse
  double set_duration = 300.0;      // s
  int n_sets = 4;
  double break_duration = 30.0;     // s
  double recovery_duration = 300.0; // s
  double dt = 0.01;                 // s sample spacing
  // Session stopped early (e.g. a report reached MISC 6): the traverse in
  // progress is completed, then recovery begins.
  std::optional<double> stop_time;

  // Throws std::invalid_argument on non-positive values or an unsolvable
  // traverse profile.
  void validate() const;
};

enum class HeadTilt {
  Static,  // head held on the Earth vertical
  Move,    // head pitched to align with the GIA
};

struct HeadTiltCondition {
  HeadTilt mode = HeadTilt::Static;
  double tau_head = 0.0;  // s first-order pursuit lag; 0 = perfect tracking
};

HeadTilt parse_head_tilt(std::string_view name);
std::string_view to_string(HeadTilt mode);

// Velocity plan of one traverse (acceleration, cruise, deceleration).
struct TraverseShape {
  double accel = 0.0;     // m/s^2
  double v_peak = 0.0;    // m/s
  double t_accel = 0.0;   // s, equal to the deceleration time
  double t_cruise = 0.0;  // s
  bool trapezoidal = false;

  double duration() const { return 2.0 * t_accel + t_cruise; }
};

// Trapezoidal when a_peak * distance > v_max^2, else triangular with
// v_peak = sqrt(a_peak * distance).
TraverseShape solve_traverse(double distance, double v_max, double a_peak);

struct Traverse {
  double t_start = 0.0;
  double direction = 1.0;  // +1 forward, -1 backward
};

struct Phase {
  std::string name;  // set_k, break_k or recovery
  double t_start = 0.0;
  double t_end = 0.0;
};

// Piecewise-constant Earth-frame fore-aft acceleration of a session.
class AccelProfile {
 public:
  explicit AccelProfile(const ShuttleConfig& cfg);

  const ShuttleConfig& config() const noexcept { return cfg_; }
  const TraverseShape& shape() const noexcept { return shape_; }
  const std::vector<Traverse>& traverses() const noexcept { return traverses_; }
  const std::vector<Phase>& phases() const noexcept { return phases_; }
  double duration() const noexcept { return duration_; }
  double motion_end() const noexcept { return motion_end_; }

  // Right-continuous acceleration a_x(t), m/s^2.
  double accel_at(double t) const;
  double velocity_at(double t) const;
  // First time strictly after t at which a_x may change (infinity if none).
  double next_change_after(double t) const;

 private:
  const Traverse* traverse_at(double t) const;

  ShuttleConfig cfg_;
  TraverseShape shape_;
  std::vector<Traverse> traverses_;
  std::vector<Phase> phases_;
  double duration_ = 0.0;
  double motion_end_ = 0.0;
};

AccelProfile shuttle_accel_profile(const ShuttleConfig& cfg);

// Head-frame motion sampled every cfg.dt over the whole session.
MotionTrace head_motion(const AccelProfile& profile, const HeadTiltCondition& condition,
                        double g0 = kDefaultGravity);

// `t,phase` rows, one per phase start.
void write_timeline_csv(const std::string& path, const AccelProfile& profile);

// Report instants 0, interval, 2*interval, ... not exceeding duration.
std::vector<double> report_times(double duration, double interval = 60.0);

// Time of the first report whose rounded MISC reaches threshold.
std::optional<double> first_report_reaching(std::span<const double> times,
                                            std::span<const double> misc, double threshold = 6.0);

}  // namespace svcmisc
