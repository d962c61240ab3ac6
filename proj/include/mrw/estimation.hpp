#pragma once

#include <cstdint>
#include <vector>

#include "mrw/sgp_sim.hpp"

namespace mrw {

/// Per-interval ranges (max - min of the cumulative log price), the
/// volatility proxy behind the logvariogram.
struct RangeSeries {
  std::vector<double> values;  // all > 0
  double interval = 1.0;       // time units per range
  std::size_t dropped_blocks = 0;
};

struct VariogramEstimate {
  std::vector<std::int64_t> lags;  // strictly increasing, starting at 1
  std::vector<double> values;      // V(j) >= 0
  std::vector<std::int64_t> pair_counts;
};

struct LambdaFit {
  double lambda2_hat = 0.0;
  double intercept_hat = 0.0;
  double residual_rms = 0.0;
  std::int64_t j_min = 0;
  std::int64_t j_max = 0;
};

/// Split the cumulative path into disjoint blocks of steps_per_interval
/// samples and emit max - min per block. Zero-range blocks are dropped
/// and counted.
RangeSeries log_ranges(const MrwPath& path, std::size_t steps_per_interval);

/// V(j) = mean over i of (ln R_{i+j} - ln R_i)^2, all overlapping pairs.
VariogramEstimate empirical_variogram(const RangeSeries& ranges, std::int64_t max_lag);

/// Ordinary least squares of V(j) on (1, ln j) over lags in [j_min, j_max];
/// the slope is 2 lambda^2.
LambdaFit fit_loglinear(const VariogramEstimate& vario, std::int64_t j_min, std::int64_t j_max);

}  // namespace mrw
