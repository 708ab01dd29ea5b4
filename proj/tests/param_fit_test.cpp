#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "svcmisc/csv.hpp"
#include "svcmisc/errors.hpp"
#include "svcmisc/nelder_mead.hpp"
#include "svcmisc/param_fit.hpp"
#include "svcmisc/scenario.hpp"
#include "test_util.hpp"

namespace svcmisc {
namespace {

// Short two-condition session with reports every 20 s.
struct SmallSession {
  std::vector<MotionTrace> motions;
  std::vector<std::vector<double>> times;
};

SmallSession small_session() {
  ShuttleConfig cfg;
  cfg.n_sets = 2;
  cfg.set_duration = 60.0;
  cfg.break_duration = 10.0;
  cfg.recovery_duration = 40.0;
  const AccelProfile prof(cfg);
  SmallSession s;
  for (auto mode : {HeadTilt::Static, HeadTilt::Move}) {
    s.motions.push_back(head_motion(prof, {mode, 0.0}));
    s.times.push_back(report_times(prof.duration(), 20.0));
  }
  return s;
}

std::vector<ConditionData> synthetic_conditions(const SmallSession& s, const OutputParams& truth, bool quantize) {
  std::vector<ConditionData> out;
  for (std::size_t c = 0; c < s.motions.size(); ++c) {
    const SimResult r = simulate(s.motions[c], SvcParams{}, truth);
    const auto v = sample_at(r, s.times[c]);
    std::vector<MiscObservation> obs;
    for (std::size_t i = 0; i < v.size(); ++i) obs.push_back({s.times[c][i], quantize ? std::round(v[i]) : v[i]});
    out.push_back({s.motions[c], MiscTrace(obs, quantize ? MiscKind::Observed : MiscKind::Predicted)});
  }
  return out;
}

TEST(ObjectiveJ, Examples) {
  const std::vector<std::vector<double>> obs = {{1, 2}, {3}};
  EXPECT_EQ(objective_j(obs, obs), 0.0);
  const std::vector<std::vector<double>> pred = {{0, 1}, {1}};
  EXPECT_DOUBLE_EQ(objective_j(obs, pred), 6.0);
  const std::vector<MiscTrace> traces = {MiscTrace({{0, 1}, {60, 2}}, MiscKind::Observed),
                                         MiscTrace({{0, 3}}, MiscKind::Observed)};
  EXPECT_DOUBLE_EQ(objective_j(traces, pred), 6.0);
  const std::vector<std::vector<double>> short_pred = {{0, 1}, {}};
  EXPECT_THROW(objective_j(obs, short_pred), std::invalid_argument);
  const std::vector<std::vector<double>> one_cond = {{0, 1}};
  EXPECT_THROW(objective_j(obs, one_cond), std::invalid_argument);
}

TEST(ObjectiveJ, PermutationInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int n = 0; n < 100; ++n) {
    std::vector<std::vector<double>> obs(4), pred(4);
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t len = 1 + rng() % 20;
      for (std::size_t i = 0; i < len; ++i) {
        obs[c].push_back(std::round(u(rng)));
        pred[c].push_back(u(rng));
      }
    }
    const double j = objective_j(obs, pred);
    std::vector<std::size_t> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<double>> po, pp;
    for (auto i : perm) {
      po.push_back(obs[i]);
      pp.push_back(pred[i]);
    }
    EXPECT_NEAR(objective_j(po, pp), j, 1e-12 * j);
  }
}

TEST(SearchSpace, ConstraintsHoldEverywhere) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 5.0);
  for (auto v : kAllVariants) {
    const std::size_t dim = parameter_names(v).size();
    for (int k = 0; k < 500; ++k) {
      std::vector<double> z(dim);
      for (auto& zi : z) zi = n(rng);
      const OutputParams p = from_search_space(v, z);
      ASSERT_NO_THROW(validate(p));
      const auto back = to_search_space(p);
      for (std::size_t i = 0; i < dim; ++i) ASSERT_NEAR(back[i], z[i], 1e-9 * (1 + std::abs(z[i])));
    }
  }
}

TEST(NelderMead, Rosenbrock) {
  const Objective f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions opts;
  opts.max_iters = 5000;
  opts.step = {0.5, 0.5};
  const auto r = nelder_mead(f, {-1.2, 1.0}, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 2e-3);
  EXPECT_EQ(r.best_history.size(), static_cast<std::size_t>(r.iterations));
  for (std::size_t i = 1; i < r.best_history.size(); ++i) ASSERT_LE(r.best_history[i], r.best_history[i - 1]);
  EXPECT_EQ(r.best_history.back(), r.f);
}

TEST(NelderMead, NanTreatedAsWorst) {
  const Objective f = [](std::span<const double> x) {
    return x[0] < 0.0 ? std::nan("") : (x[0] - 2.0) * (x[0] - 2.0);
  };
  NelderMeadOptions opts;
  opts.step = {1.0};
  const auto r = nelder_mead(f, {0.5}, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 2.0, 1e-3);
}

TEST(NelderMead, IterationBudget) {
  const Objective f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  NelderMeadOptions opts;
  opts.max_iters = 3;
  opts.step = {1.0, 1.0};
  const auto r = nelder_mead(f, {5.0, 5.0}, opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
}

TEST(FitProblem, PredictionsMatchSimulation) {
  const SmallSession s = small_session();
  const OutputParams p = OmanHillParams{20.0, 200.0, 0.1, 10.0};
  const auto conds = synthetic_conditions(s, p, false);
  const FitProblem problem(conds, SvcParams{}, SimConfig{});
  const auto pred = problem.predict(p);
  ASSERT_EQ(pred.size(), 2u);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(pred[c], conds[c].observed.values());
  EXPECT_EQ(problem.objective(p), 0.0);
}

TEST(Fit, NoiseFreeRoundTrip) {
  const SmallSession s = small_session();
  const OutputParams truth = OmanHillParams{20.0, 200.0, 0.1, 10.0};
  const auto conds = synthetic_conditions(s, truth, false);
  FitConfig cfg;
  cfg.n_starts = 4;
  const FitResult r = fit(OutputVariant::OmanHill, conds, SvcParams{}, cfg);
  EXPECT_LE(r.J, 1e-6);
  EXPECT_EQ(r.J, r.starts[r.best_start].J);
  for (const auto& st : r.starts) EXPECT_LE(r.J, st.J);
  const auto x = to_vector(r.best_params);
  const auto b = cfg.bounds.for_variant(OutputVariant::OmanHill);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_GE(x[i], b[i].lo);
    EXPECT_LE(x[i], b[i].hi);
  }
  EXPECT_LT(x[0], x[1]);
  ASSERT_EQ(r.residuals.size(), 2u);
  EXPECT_EQ(r.residuals[0].size(), s.times[0].size());
}

TEST(Fit, DeterministicAcrossThreadCounts) {
  const SmallSession s = small_session();
  const auto conds = synthetic_conditions(s, OmanApParams{20.0, 200.0, 1.3}, false);
  FitConfig cfg;
  cfg.n_starts = 3;
  cfg.rng_seed = 42;
  cfg.n_threads = 1;
  const FitResult a = fit(OutputVariant::OmanAP, conds, SvcParams{}, cfg);
  cfg.n_threads = 3;
  const FitResult b = fit(OutputVariant::OmanAP, conds, SvcParams{}, cfg);
  EXPECT_EQ(to_vector(a.best_params), to_vector(b.best_params));
  EXPECT_EQ(a.J, b.J);
  for (std::size_t i = 0; i < a.starts.size(); ++i) EXPECT_EQ(a.starts[i].initial, b.starts[i].initial);
  cfg.rng_seed = 43;
  const FitResult c = fit(OutputVariant::OmanAP, conds, SvcParams{}, cfg);
  EXPECT_NE(c.starts[0].initial, a.starts[0].initial);
}

TEST(Fit, StartsDrawnInsideBounds) {
  const SmallSession s = small_session();
  const auto conds = synthetic_conditions(s, MsiBaseParams{0.2, 100.0, 10.0}, true);
  FitConfig cfg;
  cfg.n_starts = 6;
  cfg.max_iters = 40;
  cfg.rel_tol = 1e-2;
  try {
    const FitResult r = fit(OutputVariant::MsiBase, conds, SvcParams{}, cfg);
    const auto b = cfg.bounds.for_variant(OutputVariant::MsiBase);
    for (const auto& st : r.starts)
      for (std::size_t i = 0; i < st.initial.size(); ++i) {
        EXPECT_GE(st.initial[i], b[i].lo);
        EXPECT_LE(st.initial[i], b[i].hi);
      }
  } catch (const ConvergenceError&) {
    GTEST_SKIP() << "no start converged within the small budget";
  }
}

TEST(Fit, AllZeroObservationsExcluded) {
  const SmallSession s = small_session();
  std::vector<ConditionData> conds;
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<MiscObservation> obs;
    for (double t : s.times[c]) obs.push_back({t, 0.0});
    conds.push_back({s.motions[c], MiscTrace(obs, MiscKind::Observed)});
  }
  EXPECT_THROW(fit(OutputVariant::OmanHill, conds, SvcParams{}, FitConfig{}), ExclusionError);
}

TEST(Fit, NoConvergenceReported) {
  const SmallSession s = small_session();
  const auto conds = synthetic_conditions(s, OmanHillParams{20.0, 200.0, 0.1, 10.0}, true);
  FitConfig cfg;
  cfg.n_starts = 2;
  cfg.max_iters = 2;
  EXPECT_THROW(fit(OutputVariant::OmanHill, conds, SvcParams{}, cfg), ConvergenceError);
}

TEST(Fit, ObservationsOutsideMotionRejected) {
  const SmallSession s = small_session();
  std::vector<ConditionData> conds = {
      {s.motions[0], MiscTrace({{0, 0}, {s.motions[0].t_end() + 60.0, 3}}, MiscKind::Observed)}};
  EXPECT_THROW(fit(OutputVariant::OmanHill, conds, SvcParams{}, FitConfig{}), DataError);
}

TEST(Fit, EachConditionSeparately) {
  const SmallSession s = small_session();
  const auto conds = synthetic_conditions(s, OmanApParams{20.0, 200.0, 1.3}, false);
  FitConfig cfg;
  cfg.n_starts = 2;
  const auto rs = fit_each_condition(OutputVariant::OmanAP, conds, SvcParams{}, cfg);
  ASSERT_EQ(rs.size(), 2u);
  for (const auto& r : rs) {
    EXPECT_EQ(r.observed.size(), 1u);
    EXPECT_LE(r.J, 1e-4);
  }
}

TEST(ParamsCsv, RoundTripAndErrors) {
  test::TempDir dir;
  for (auto v : kAllVariants) {
    const OutputParams p = default_params(v);
    const auto path = dir.file(std::string(to_string(v)) + ".csv");
    write_params_csv(path, p, 1.25);
    EXPECT_EQ(to_vector(read_params_csv(path)), to_vector(p));
    EXPECT_EQ(variant_of(read_params_csv(path, v)), v);
  }
  EXPECT_THROW(read_params_csv(dir.file("omanhill.csv"), OutputVariant::OmanAP), DataError);
  const auto no_variant = dir.write("nv.csv", "param,value\nbeta1,10\nbeta2,100\nM_AP,2\n");
  EXPECT_THROW(read_params_csv(no_variant), DataError);
  EXPECT_EQ(to_vector(read_params_csv(no_variant, OutputVariant::OmanAP)), (std::vector<double>{10, 100, 2}));
  EXPECT_THROW(read_params_csv(dir.write("m.csv", "param,value\nvariant,omanap\nbeta1,10\n")), DataError);
  EXPECT_THROW(read_params_csv(dir.write("o.csv", "param,value\nvariant,omanap\nbeta1,100\nbeta2,10\nM_AP,1\n")),
               DataError);
  EXPECT_THROW(read_params_csv(dir.file("absent.csv")), IoError);
}

TEST(DiagnosticsCsv, OneRowPerStart) {
  test::TempDir dir;
  FitResult r;
  r.starts.resize(3, StartDiagnostics{{1, 2, 3, 4}, {5, 6, 7, 8}, 0.5, true, 10, 20});
  write_diagnostics_csv(dir.file("d.csv"), OutputVariant::OmanHill, r);
  const auto t = csv::read_file(dir.file("d.csv"));
  EXPECT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.header.front(), "start");
  EXPECT_TRUE(t.has_column("final_G"));
  EXPECT_EQ(t.rows[2][t.column("converged")], "1");
}

}  // namespace
}  // namespace svcmisc
