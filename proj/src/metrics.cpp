#include "svcmisc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace svcmisc {

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson_r: need at least 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson_r: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

double mean_abs_error(std::span<const double> obs, std::span<const double> pred) {
  if (obs.size() != pred.size()) throw std::invalid_argument("mean_abs_error: length mismatch");
  if (obs.empty()) throw std::invalid_argument("mean_abs_error: empty series");
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) sum += std::abs(obs[i] - pred[i]);
  return sum / static_cast<double>(obs.size());
}

}  // namespace svcmisc
