#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcmisc/vec3.hpp"

namespace svcmisc {

inline constexpr double kDefaultGravity = 9.81;

// One head-motion sample in the head frame.
struct MotionSample {
  double t = 0.0;            // s
  Vec3 f = Vec3::Zero();     // specific force (GIA), m/s^2
  Vec3 omega = Vec3::Zero(); // angular velocity, rad/s
  Vec3 a = Vec3::Zero();     // true inertial acceleration, m/s^2
};

// Uniformly sampled head-motion input. Immutable once constructed.
class MotionTrace {
 public:
  // Validates: at least 2 samples, finite values, t >= 0, strictly increasing
  // timestamps on a uniform grid (within 1e-9 s). Throws DataError.
  explicit MotionTrace(std::vector<MotionSample> samples);

  double dt() const noexcept { return dt_; }
  double t0() const noexcept { return samples_.front().t; }
  double t_end() const noexcept { return samples_.back().t; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::vector<MotionSample>& samples() const noexcept { return samples_; }
  const MotionSample& operator[](std::size_t i) const { return samples_[i]; }

  // Linear interpolation of every channel at time t, clamped to the end
  // samples outside the span. The returned sample carries t.
  MotionSample at(double t) const;

 private:
  std::vector<MotionSample> samples_;
  double dt_ = 0.0;
};

struct MiscObservation {
  double t = 0.0;      // s
  double value = 0.0;  // MISC, 0..10
};

enum class MiscKind {
  Observed,   // integer ratings 0..10
  Predicted,  // non-negative reals
};

// Time-stamped MISC series with strictly increasing timestamps.
class MiscTrace {
 public:
  MiscTrace() = default;
  MiscTrace(std::vector<MiscObservation> obs, MiscKind kind);

  MiscKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }
  const std::vector<MiscObservation>& observations() const noexcept { return obs_; }
  const MiscObservation& operator[](std::size_t i) const { return obs_[i]; }

  std::vector<double> times() const;
  std::vector<double> values() const;

 private:
  std::vector<MiscObservation> obs_;
  MiscKind kind_ = MiscKind::Observed;
};

struct LoadedMotion {
  MotionTrace trace;
  // True when the file had no a-columns and a was inferred as f - (0,0,g).
  bool inferred_acceleration = false;
};

// Reads `t,fx,fy,fz,wx,wy,wz[,ax,ay,az]` without checking grid uniformity.
std::vector<MotionSample> read_motion_samples(const std::string& path, double gravity_magnitude,
                                              bool* inferred_acceleration = nullptr);

// Reads and validates a motion CSV. With resample_dt set, the samples are
// first resampled onto a uniform grid; otherwise non-uniform spacing is an
// error.
LoadedMotion load_motion_csv(const std::string& path, double gravity_magnitude = kDefaultGravity,
                             std::optional<double> resample_dt = std::nullopt);

// Writes all ten channels at 17 significant digits (lossless round trip).
void write_motion_csv(const std::string& path, const MotionTrace& trace);

// Reads `t,misc`. Observed traces require integer values in [0,10]; predicted
// traces accept any finite value >= 0. Extra columns are ignored, so a
// simulator output file (`t,dv_norm,misc`) loads as a predicted trace.
MiscTrace load_misc_csv(const std::string& path, MiscKind kind = MiscKind::Observed);

void write_misc_csv(const std::string& path, const MiscTrace& trace);

// Per-channel linear interpolation onto t0, t0+dt, ... up to the last input
// time. Queries beyond the last sample are clamped to it.
MotionTrace resample_linear(std::span<const MotionSample> samples, double dt);

}  // namespace svcmisc
