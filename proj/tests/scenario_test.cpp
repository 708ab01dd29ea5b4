#include <gtest/gtest.h>

#include <cmath>

#include "svcmisc/csv.hpp"
#include "svcmisc/scenario.hpp"
#include "test_util.hpp"

namespace svcmisc {
namespace {

constexpr double kG = kDefaultGravity;

// Composite Simpson on [a, b] with n (even) panels.
template <class Fn>
double simpson(Fn&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

TEST(Traverse, DefaultTrapezoid) {
  const TraverseShape s = solve_traverse(3.0, 1.67, 1.0);
  EXPECT_TRUE(s.trapezoidal);
  EXPECT_DOUBLE_EQ(s.t_accel, 1.67);
  EXPECT_NEAR(0.5 * s.accel * s.t_accel * s.t_accel, 1.394, 5e-4);
  EXPECT_NEAR(s.v_peak * s.t_cruise, 0.211, 5e-4);
  EXPECT_NEAR(s.t_cruise, 0.126, 5e-4);
  EXPECT_NEAR(s.duration(), 3.47, 5e-3);
}

TEST(Traverse, TriangularWhenSlowAccel) {
  const TraverseShape s = solve_traverse(3.0, 1.67, 0.5);
  EXPECT_FALSE(s.trapezoidal);
  EXPECT_NEAR(s.v_peak, std::sqrt(1.5), 1e-15);
  EXPECT_NEAR(s.v_peak, 1.2247, 1e-4);
  EXPECT_EQ(s.t_cruise, 0.0);
}

TEST(Traverse, Unsolvable) {
  try {
    solve_traverse(3.0, 1.67, 0.0);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("unsolvable"), std::string::npos);
  }
  EXPECT_THROW(solve_traverse(-1.0, 1.67, 1.0), std::invalid_argument);
  ShuttleConfig cfg;
  cfg.a_peak = 0.0;
  EXPECT_THROW(AccelProfile{cfg}, std::invalid_argument);
  cfg = ShuttleConfig{};
  cfg.set_duration = 2.0;
  EXPECT_THROW(AccelProfile{cfg}, std::invalid_argument);
}

TEST(AccelProfile, DisplacementClosure) {
  for (double a_peak : {1.0, 0.5, 2.5}) {
    ShuttleConfig cfg;
    cfg.a_peak = a_peak;
    const AccelProfile prof(cfg);
    const double T = prof.shape().duration();
    for (std::size_t i = 0; i < 3; ++i) {
      const Traverse& tr = prof.traverses()[i];
      const double x = simpson([&](double t) { return prof.velocity_at(t); }, tr.t_start, tr.t_start + T, 200000);
      EXPECT_NEAR(x, tr.direction * cfg.distance, 1e-6) << "a_peak " << a_peak << " traverse " << i;
      EXPECT_EQ(prof.velocity_at(tr.t_start + T), 0.0);
      EXPECT_NEAR(prof.velocity_at(tr.t_start + 1e-9), 0.0, 1e-8);
    }
  }
}

TEST(AccelProfile, VelocityIsIntegralOfAcceleration) {
  const AccelProfile prof(ShuttleConfig{});
  const double t0 = prof.traverses()[1].t_start;
  for (double t = t0; t < t0 + prof.shape().duration(); t += 0.37) {
    const double v = simpson([&](double s) { return prof.accel_at(s); }, t0, t, 20000);
    EXPECT_NEAR(v, prof.velocity_at(t), 1e-3) << t;
  }
}

TEST(AccelProfile, TimelineAtDefaults) {
  const AccelProfile prof(ShuttleConfig{});
  EXPECT_DOUBLE_EQ(prof.duration(), 1590.0);
  EXPECT_DOUBLE_EQ(prof.motion_end(), 1290.0);
  std::vector<std::string> names;
  for (const auto& p : prof.phases()) names.push_back(p.name);
  EXPECT_EQ(names, (std::vector<std::string>{"set_1", "break_1", "set_2", "break_2", "set_3", "break_3",
                                             "set_4", "recovery"}));
  EXPECT_DOUBLE_EQ(prof.phases()[1].t_start, 300.0);
  EXPECT_DOUBLE_EQ(prof.phases()[2].t_start, 330.0);
  for (const auto& tr : prof.traverses()) {
    const double local = std::fmod(tr.t_start, 330.0);
    EXPECT_LE(local + prof.shape().duration(), 300.0 + 1e-9);
  }
  // Directions alternate inside each set, so the chair returns home.
  EXPECT_EQ(prof.traverses()[0].direction, 1.0);
  EXPECT_EQ(prof.traverses()[1].direction, -1.0);
  EXPECT_EQ(prof.accel_at(310.0), 0.0);
  EXPECT_EQ(prof.accel_at(1500.0), 0.0);
  EXPECT_EQ(prof.accel_at(0.0), 1.0);
}

TEST(AccelProfile, StopCompletesTraverseThenRecovers) {
  ShuttleConfig cfg;
  cfg.stop_time = 100.0;
  const AccelProfile prof(cfg);
  const Traverse& last = prof.traverses().back();
  EXPECT_LT(last.t_start, 100.0);
  EXPECT_GE(last.t_start + prof.shape().duration(), 100.0);
  EXPECT_DOUBLE_EQ(prof.motion_end(), last.t_start + prof.shape().duration());
  EXPECT_DOUBLE_EQ(prof.duration(), prof.motion_end() + 300.0);
  ASSERT_EQ(prof.phases().size(), 2u);
  EXPECT_EQ(prof.phases()[0].name, "set_1");
  EXPECT_EQ(prof.phases()[1].name, "recovery");
  EXPECT_DOUBLE_EQ(prof.phases()[1].t_start, prof.motion_end());
}

TEST(AccelProfile, StopDuringBreak) {
  ShuttleConfig cfg;
  cfg.stop_time = 315.0;
  const AccelProfile prof(cfg);
  EXPECT_DOUBLE_EQ(prof.motion_end(), 315.0);
  EXPECT_EQ(prof.phases().back().name, "recovery");
  EXPECT_EQ(prof.phases()[prof.phases().size() - 2].name, "break_1");
}

TEST(HeadMotion, StaticCondition) {
  const AccelProfile prof(ShuttleConfig{});
  const MotionTrace m = head_motion(prof, {HeadTilt::Static, 0.0});
  EXPECT_EQ(m.size(), 159001u);
  EXPECT_DOUBLE_EQ(m.t_end(), 1590.0);
  EXPECT_DOUBLE_EQ(m.dt(), 0.01);
  for (const auto& s : m.samples()) {
    ASSERT_EQ(s.omega, Vec3::Zero());
    ASSERT_EQ(s.f, Vec3(s.a.x(), 0, kG));
    ASSERT_EQ(s.a.y(), 0.0);
    ASSERT_EQ(s.a.z(), 0.0);
  }
  EXPECT_EQ(m.at(1400.0).f, Vec3(0, 0, kG));
}

TEST(HeadMotion, MoveAlignsHeadWithGia) {
  const AccelProfile prof(ShuttleConfig{});
  const MotionTrace m = head_motion(prof, {HeadTilt::Move, 0.0});
  bool rotated = false;
  for (const auto& s : m.samples()) {
    const double ax = prof.accel_at(s.t);
    ASSERT_LE(std::abs(s.f.x()), 1e-9) << s.t;
    ASSERT_EQ(s.f.y(), 0.0);
    ASSERT_NEAR(s.f.norm(), std::hypot(ax, kG), 1e-12 * kG);
    ASSERT_NEAR(s.a.norm(), std::abs(ax), 1e-12);
    rotated = rotated || s.omega.y() != 0.0;
  }
  EXPECT_TRUE(rotated);
  const MotionSample& mid = m.at(0.5);
  EXPECT_NEAR(mid.f.z(), 9.8608, 1e-4);
  // Head-frame a is (cos, 0, sin) * a_x, which exposes the pitch.
  EXPECT_NEAR(std::atan2(mid.a.z(), mid.a.x()), 0.10158, 1e-5);
}

TEST(HeadMotion, MoveWithoutAccelerationEqualsStatic) {
  ShuttleConfig cfg;
  cfg.stop_time = 0.0;
  cfg.recovery_duration = 30.0;
  const AccelProfile prof(cfg);
  ASSERT_TRUE(prof.traverses().empty());
  const MotionTrace a = head_motion(prof, {HeadTilt::Static, 0.0});
  const MotionTrace b = head_motion(prof, {HeadTilt::Move, 0.0});
  const MotionTrace c = head_motion(prof, {HeadTilt::Move, 0.4});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].f, b[i].f);
    EXPECT_EQ(a[i].omega, b[i].omega);
    EXPECT_EQ(a[i].a, c[i].a);
    EXPECT_EQ(a[i].f, c[i].f);
  }
}

TEST(HeadMotion, RotationSignMatchesFrameKinematics) {
  // With a lagged head the pitch moves smoothly inside each constant-accel
  // piece; a head-frame view of a fixed Earth vector obeys df/dt = -w x f.
  ShuttleConfig cfg;
  cfg.n_sets = 1;
  cfg.set_duration = 20.0;
  cfg.recovery_duration = 5.0;
  cfg.dt = 0.001;
  const AccelProfile prof(cfg);
  const MotionTrace m = head_motion(prof, {HeadTilt::Move, 0.3});
  int checked = 0;
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    const double t = m[k].t;
    if (prof.next_change_after(t - 2 * cfg.dt) <= t + 2 * cfg.dt) continue;
    const Vec3 dfdt = (m[k + 1].f - m[k - 1].f) / (2 * cfg.dt);
    if (m[k].omega.norm() < 1e-3) continue;
    const Vec3 expected = -m[k].omega.cross(m[k].f);
    ASSERT_LE((dfdt - expected).norm(), 1e-3 * expected.norm() + 1e-6) << t;
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(HeadMotion, LagRelaxesTowardTarget) {
  ShuttleConfig cfg;
  cfg.n_sets = 1;
  cfg.set_duration = 10.0;
  cfg.recovery_duration = 5.0;
  const AccelProfile prof(cfg);
  const MotionTrace m = head_motion(prof, {HeadTilt::Move, 0.2});
  // After 1.5 s of constant accel (7.5 time constants) the lag is gone.
  const MotionSample& s = m.at(1.5);
  EXPECT_LE(std::abs(s.f.x()), 1e-3 * kG);
  EXPECT_GT(std::abs(m.at(0.05).f.x()), 0.1);
  EXPECT_THROW(head_motion(prof, {HeadTilt::Move, -1.0}), std::invalid_argument);
}

TEST(HeadTiltNames, ParseAndPrint) {
  EXPECT_EQ(parse_head_tilt("static"), HeadTilt::Static);
  EXPECT_EQ(parse_head_tilt("move"), HeadTilt::Move);
  EXPECT_EQ(to_string(HeadTilt::Move), "move");
  EXPECT_THROW(parse_head_tilt("tilt"), std::invalid_argument);
}

TEST(Reports, TimesAndThreshold) {
  EXPECT_EQ(report_times(180.0), (std::vector<double>{0, 60, 120, 180}));
  EXPECT_EQ(report_times(179.0).size(), 3u);
  const std::vector<double> t = {0, 60, 120, 180};
  const std::vector<double> low = {0, 2.2, 5.4, 3.0};
  const std::vector<double> high = {0, 2.2, 5.5, 7.0};
  EXPECT_FALSE(first_report_reaching(t, low).has_value());
  EXPECT_EQ(first_report_reaching(t, high), 120.0);
  EXPECT_THROW(first_report_reaching(t, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Timeline, CsvRows) {
  test::TempDir dir;
  write_timeline_csv(dir.file("tl.csv"), AccelProfile(ShuttleConfig{}));
  const auto table = csv::read_file(dir.file("tl.csv"));
  ASSERT_EQ(table.header, (std::vector<std::string>{"t", "phase"}));
  ASSERT_EQ(table.rows.size(), 8u);
  EXPECT_EQ(table.rows.back()[0], "1290");
  EXPECT_EQ(table.rows.back()[1], "recovery");
}

}  // namespace
}  // namespace svcmisc
