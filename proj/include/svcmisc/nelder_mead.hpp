#pragma once

#include <functional>
#include <span>
#include <vector>

namespace svcmisc {

struct NelderMeadOptions {
  int max_iters = 2000;
  // Converged when f_worst - f_best <= rel_tol * |f_best| + abs_tol.
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  // Initial simplex offsets: x0 + step[i] * e_i.
  std::vector<double> step;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_history;  // best vertex value after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

// Unconstrained simplex minimization (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts);

}  // namespace svcmisc
