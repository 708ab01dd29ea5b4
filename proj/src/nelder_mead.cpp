#include "svcmisc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace svcmisc {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty parameter vector");
  if (opts.step.size() != n) throw std::invalid_argument("nelder_mead: step size mismatch");

  NelderMeadResult res;
  const auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opts.step[i];
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  const auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = fv[order[i]];
    }
    simplex = std::move(s);
    fv = std::move(v);
  };
  const auto along = [&](std::vector<double>& out, double coef) {
    // out = centroid + coef * (centroid - worst)
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (centroid[j] - simplex[n][j]);
  };

  sort_vertices();
  while (true) {
    const double spread = fv[n] - fv[0];
    if (std::isfinite(fv[0]) && spread <= opts.rel_tol * std::abs(fv[0]) + opts.abs_tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iters) break;
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    for (double& c : centroid) c /= static_cast<double>(n);

    along(xr, kReflect);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      along(xe, kReflect * kExpand);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      bool shrink = false;
      if (fr < fv[n]) {
        along(xc, kReflect * kContract);  // outside contraction
        const double fc = eval(xc);
        if (fc <= fr) {
          simplex[n] = xc;
          fv[n] = fc;
        } else {
          shrink = true;
        }
      } else {
        along(xc, -kContract);  // inside contraction
        const double fc = eval(xc);
        if (fc < fv[n]) {
          simplex[n] = xc;
          fv[n] = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + kShrink * (simplex[i][j] - simplex[0][j]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
    sort_vertices();
    res.best_history.push_back(fv[0]);
  }
  res.x = simplex[0];
  res.f = fv[0];
  return res;
}

}  // namespace svcmisc
