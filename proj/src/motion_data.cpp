#include "svcmisc/motion_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "svcmisc/csv.hpp"
#include "svcmisc/errors.hpp"

namespace svcmisc {
namespace {

constexpr double kGridTolerance = 1e-9;

MotionSample lerp(const MotionSample& lo, const MotionSample& hi, double w, double t) {
  MotionSample s;
  s.t = t;
  s.f = lo.f + w * (hi.f - lo.f);
  s.omega = lo.omega + w * (hi.omega - lo.omega);
  s.a = lo.a + w * (hi.a - lo.a);
  return s;
}

void check_finite(const MotionSample& s, std::size_t index) {
  if (!std::isfinite(s.t) || !is_finite(s.f) || !is_finite(s.omega) || !is_finite(s.a))
    throw DataError("motion sample " + std::to_string(index) + ": non-finite value");
}

void check_increasing(std::span<const MotionSample> samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t))
      throw DataError("motion sample " + std::to_string(i) + ": non-increasing timestamp " +
                      csv::format_number(samples[i].t));
  }
}

}  // namespace

MotionTrace::MotionTrace(std::vector<MotionSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw DataError("motion trace needs at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    check_finite(samples_[i], i);
    if (samples_[i].t < 0.0) throw DataError("motion sample " + std::to_string(i) + ": negative time");
  }
  check_increasing(samples_);

  const std::size_t n = samples_.size();
  dt_ = (samples_.back().t - samples_.front().t) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = samples_.front().t + static_cast<double>(i) * dt_;
    if (std::abs(samples_[i].t - expected) > kGridTolerance) {
      throw DataError("non-uniform spacing at sample " + std::to_string(i) + " (t=" +
                      csv::format_number(samples_[i].t) + ", expected " +
                      csv::format_number(expected) + ")");
    }
  }
}

MotionSample MotionTrace::at(double t) const {
  if (t <= samples_.front().t) {
    MotionSample s = samples_.front();
    s.t = t;
    return s;
  }
  if (t >= samples_.back().t) {
    MotionSample s = samples_.back();
    s.t = t;
    return s;
  }
  const double pos = (t - samples_.front().t) / dt_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= samples_.size() - 1) i = samples_.size() - 2;
  const double w = pos - static_cast<double>(i);
  return lerp(samples_[i], samples_[i + 1], w, t);
}

MiscTrace::MiscTrace(std::vector<MiscObservation> obs, MiscKind kind)
    : obs_(std::move(obs)), kind_(kind) {
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    const auto& o = obs_[i];
    const std::string where = "MISC sample " + std::to_string(i) + " (t=" + csv::format_number(o.t) + ")";
    if (!std::isfinite(o.t) || !std::isfinite(o.value)) throw DataError(where + ": non-finite value");
    if (i > 0 && !(o.t > obs_[i - 1].t)) throw DataError(where + ": non-increasing timestamp");
    if (kind_ == MiscKind::Observed) {
      if (o.value < 0.0 || o.value > 10.0)
        throw DataError(where + ": value " + csv::format_number(o.value) + " outside MISC range [0,10]");
      if (o.value != std::round(o.value))
        throw DataError(where + ": non-integer observed value " + csv::format_number(o.value));
    } else if (o.value < 0.0) {
      throw DataError(where + ": negative predicted value");
    }
  }
}

std::vector<double> MiscTrace::times() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.t);
  return out;
}

std::vector<double> MiscTrace::values() const {
  std::vector<double> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.value);
  return out;
}

std::vector<MotionSample> read_motion_samples(const std::string& path, double gravity_magnitude,
                                              bool* inferred_acceleration) {
  const csv::Table table = csv::read_file(path);
  static const std::array<const char*, 7> required = {"t", "fx", "fy", "fz", "wx", "wy", "wz"};
  std::array<std::size_t, 7> col{};
  for (std::size_t k = 0; k < required.size(); ++k) {
    col[k] = table.column(required[k]);
    if (col[k] == csv::Table::npos)
      throw DataError(path + ": missing required column '" + required[k] + "'");
  }
  const std::array<std::size_t, 3> acol = {table.column("ax"), table.column("ay"), table.column("az")};
  const bool has_a = std::all_of(acol.begin(), acol.end(), [](auto c) { return c != csv::Table::npos; });
  if (!has_a && std::any_of(acol.begin(), acol.end(), [](auto c) { return c != csv::Table::npos; }))
    throw DataError(path + ": acceleration columns must be all of ax,ay,az or none");

  if (table.rows.size() < 2) throw DataError(path + ": fewer than 2 data rows");

  std::vector<MotionSample> samples;
  samples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    MotionSample s;
    s.t = table.number(r, col[0]);
    s.f = {table.number(r, col[1]), table.number(r, col[2]), table.number(r, col[3])};
    s.omega = {table.number(r, col[4]), table.number(r, col[5]), table.number(r, col[6])};
    if (has_a)
      s.a = {table.number(r, acol[0]), table.number(r, acol[1]), table.number(r, acol[2])};
    else
      s.a = s.f - Vec3(0.0, 0.0, gravity_magnitude);
    samples.push_back(s);
  }
  check_increasing(samples);
  if (inferred_acceleration) *inferred_acceleration = !has_a;
  return samples;
}

LoadedMotion load_motion_csv(const std::string& path, double gravity_magnitude,
                             std::optional<double> resample_dt) {
  bool inferred = false;
  auto samples = read_motion_samples(path, gravity_magnitude, &inferred);
  if (resample_dt) return {resample_linear(samples, *resample_dt), inferred};
  return {MotionTrace(std::move(samples)), inferred};
}

void write_motion_csv(const std::string& path, const MotionTrace& trace) {
  auto out = csv::open_output(path);
  out << "t,fx,fy,fz,wx,wy,wz,ax,ay,az\n";
  const auto num = [](double v) { return csv::format_number(v, 17); };
  for (const auto& s : trace.samples()) {
    out << num(s.t) << ',' << num(s.f.x()) << ',' << num(s.f.y()) << ',' << num(s.f.z()) << ','
        << num(s.omega.x()) << ',' << num(s.omega.y()) << ',' << num(s.omega.z()) << ','
        << num(s.a.x()) << ',' << num(s.a.y()) << ',' << num(s.a.z()) << '\n';
  }
  csv::finish_output(out, path);
}

MiscTrace load_misc_csv(const std::string& path, MiscKind kind) {
  const csv::Table table = csv::read_file(path);
  const auto ct = table.column("t");
  const auto cm = table.column("misc");
  if (ct == csv::Table::npos) throw DataError(path + ": missing required column 't'");
  if (cm == csv::Table::npos) throw DataError(path + ": missing required column 'misc'");
  std::vector<MiscObservation> obs;
  obs.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    obs.push_back({table.number(r, ct), table.number(r, cm)});
  try {
    return MiscTrace(std::move(obs), kind);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_misc_csv(const std::string& path, const MiscTrace& trace) {
  auto out = csv::open_output(path);
  out << "t,misc\n";
  for (const auto& o : trace.observations())
    out << csv::format_number(o.t) << ',' << csv::format_number(o.value) << '\n';
  csv::finish_output(out, path);
}

MotionTrace resample_linear(std::span<const MotionSample> samples, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DataError("resample: dt must be positive");
  if (samples.empty()) throw DataError("resample: empty input");
  check_increasing(samples);

  const double t0 = samples.front().t;
  const double span = samples.back().t - t0;
  if (span < dt - kGridTolerance) throw DataError("resample: input spans less than one step");
  const auto n = static_cast<std::size_t>(std::ceil(span / dt - kGridTolerance)) + 1;

  std::vector<MotionSample> out;
  out.reserve(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    while (j + 1 < samples.size() && samples[j + 1].t <= t + kGridTolerance) ++j;
    const MotionSample& lo = samples[j];
    if (std::abs(t - lo.t) <= kGridTolerance) {
      // On a source sample: copy it verbatim.
      MotionSample s = lo;
      out.push_back(s);
    } else if (j + 1 >= samples.size()) {
      MotionSample s = lo;
      s.t = t;
      out.push_back(s);
    } else {
      const MotionSample& hi = samples[j + 1];
      out.push_back(lerp(lo, hi, (t - lo.t) / (hi.t - lo.t), t));
    }
  }
  return MotionTrace(std::move(out));
}

}  // namespace svcmisc
