#pragma once

#include <span>

namespace svcmisc {

// Sample Pearson correlation. Throws std::invalid_argument on length
// mismatch, fewer than 2 points, or zero variance in either series.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Mean of |obs - pred|. Throws std::invalid_argument on length mismatch or
// empty input.
double mean_abs_error(std::span<const double> obs, std::span<const double> pred);

}  // namespace svcmisc
