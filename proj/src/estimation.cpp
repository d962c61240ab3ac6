#include "mrw/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrw {

RangeSeries log_ranges(const MrwPath& path, std::size_t steps_per_interval) {
  if (steps_per_interval < 2)
    throw std::invalid_argument("log_ranges: steps_per_interval must be >= 2");
  const std::size_t n = path.cumulative.size();
  if (n < steps_per_interval)
    throw std::invalid_argument("log_ranges: path shorter than one interval");

  RangeSeries out;
  out.interval = static_cast<double>(steps_per_interval) * path.params.tau;
  const std::size_t blocks = n / steps_per_interval;
  out.values.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto begin = path.cumulative.begin() + static_cast<std::ptrdiff_t>(b * steps_per_interval);
    const auto end = begin + static_cast<std::ptrdiff_t>(steps_per_interval);
    const auto [lo, hi] = std::minmax_element(begin, end);
    const double range = *hi - *lo;
    if (range > 0.0)
      out.values.push_back(range);
    else
      ++out.dropped_blocks;
  }
  return out;
}

VariogramEstimate empirical_variogram(const RangeSeries& ranges, std::int64_t max_lag) {
  const auto n = static_cast<std::int64_t>(ranges.values.size());
  if (max_lag < 1) throw std::invalid_argument("empirical_variogram: max_lag must be >= 1");
  if (max_lag >= n)
    throw std::invalid_argument("empirical_variogram: max_lag must be < number of ranges");

  std::vector<double> ln_r(ranges.values.size());
  for (std::size_t i = 0; i < ranges.values.size(); ++i) {
    if (!(ranges.values[i] > 0.0))
      throw std::invalid_argument("empirical_variogram: ranges must be positive");
    ln_r[i] = std::log(ranges.values[i]);
  }

  VariogramEstimate v;
  v.lags.reserve(static_cast<std::size_t>(max_lag));
  for (std::int64_t j = 1; j <= max_lag; ++j) {
    double acc = 0.0;
    const std::int64_t pairs = n - j;
    for (std::int64_t i = 0; i < pairs; ++i) {
      const double d = ln_r[static_cast<std::size_t>(i + j)] - ln_r[static_cast<std::size_t>(i)];
      acc += d * d;
    }
    v.lags.push_back(j);
    v.values.push_back(acc / static_cast<double>(pairs));
    v.pair_counts.push_back(pairs);
  }
  return v;
}

LambdaFit fit_loglinear(const VariogramEstimate& vario, std::int64_t j_min, std::int64_t j_max) {
  if (j_min < 1 || j_max < j_min)
    throw std::invalid_argument("fit_loglinear: need 1 <= j_min <= j_max");

  double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  std::int64_t m = 0;
  for (std::size_t i = 0; i < vario.lags.size(); ++i) {
    const std::int64_t j = vario.lags[i];
    if (j < j_min || j > j_max) continue;
    const double x = std::log(static_cast<double>(j));
    const double y = vario.values[i];
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
    ++m;
  }
  if (m < 3) throw std::invalid_argument("fit_loglinear: window must contain at least 3 lags");

  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom <= 0.0) throw std::runtime_error("fit_loglinear: singular design");
  const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / static_cast<double>(m);

  double rss = 0.0;
  for (std::size_t i = 0; i < vario.lags.size(); ++i) {
    const std::int64_t j = vario.lags[i];
    if (j < j_min || j > j_max) continue;
    const double res = vario.values[i] - intercept - slope * std::log(static_cast<double>(j));
    rss += res * res;
  }

  LambdaFit fit;
  fit.lambda2_hat = 0.5 * slope;
  fit.intercept_hat = intercept;
  fit.residual_rms = std::sqrt(rss / static_cast<double>(m));
  fit.j_min = j_min;
  fit.j_max = j_max;
  return fit;
}

}  // namespace mrw
