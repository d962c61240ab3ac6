#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mrw/estimation.hpp"

using namespace mrw;

namespace {

MrwPath path_from(std::vector<double> cumulative) {
  MrwPath p;
  p.params = MrwParams{};
  p.params.tau = 1.0 / 16.0;
  p.cumulative = std::move(cumulative);
  p.returns.assign(p.cumulative.size(), 0.0);
  return p;
}

RangeSeries ranges_from(std::vector<double> values) {
  RangeSeries r;
  r.values = std::move(values);
  r.interval = 1.0;
  return r;
}

}  // namespace

TEST_CASE("log_ranges block semantics") {
  // monotone block: range = last - first
  std::vector<double> cum;
  for (int i = 0; i < 16; ++i) cum.push_back(0.5 * i);
  RangeSeries r = log_ranges(path_from(cum), 16);
  REQUIRE(r.values.size() == 1);
  CHECK(r.values[0] == doctest::Approx(0.5 * 15).epsilon(1e-15));

  // 32 samples with 16 per interval -> 2 ranges
  cum.clear();
  for (int i = 0; i < 32; ++i) cum.push_back(std::sin(0.3 * i));
  r = log_ranges(path_from(cum), 16);
  CHECK(r.values.size() == 2);

  // constant path: all blocks dropped
  r = log_ranges(path_from(std::vector<double>(32, 1.0)), 16);
  CHECK(r.values.empty());
  CHECK(r.dropped_blocks == 2);

  CHECK_THROWS_AS(log_ranges(path_from({1.0, 2.0}), 1), std::invalid_argument);
  CHECK_THROWS_AS(log_ranges(path_from({1.0}), 16), std::invalid_argument);
}

TEST_CASE("variogram of trivial series") {
  // all ranges equal -> V == 0
  VariogramEstimate v = empirical_variogram(ranges_from(std::vector<double>(20, 3.0)), 5);
  for (double val : v.values) CHECK(val == 0.0);
  CHECK(v.lags.front() == 1);
  CHECK(std::is_sorted(v.lags.begin(), v.lags.end()));

  // alternating {a, b}: V(1) = (ln a - ln b)^2, V(2) = 0
  std::vector<double> alt;
  for (int i = 0; i < 16; ++i) alt.push_back(i % 2 == 0 ? 2.0 : 5.0);
  v = empirical_variogram(ranges_from(alt), 2);
  const double d = std::log(2.0) - std::log(5.0);
  CHECK(v.values[0] == doctest::Approx(d * d).epsilon(1e-14));
  CHECK(v.values[1] == doctest::Approx(0.0));
  CHECK(v.pair_counts[0] == 15);
  CHECK(v.pair_counts[1] == 14);
}

TEST_CASE("variogram rejects bad input") {
  CHECK_THROWS_AS(empirical_variogram(ranges_from({1.0, 2.0}), 5), std::invalid_argument);
  CHECK_THROWS_AS(empirical_variogram(ranges_from({1.0, -2.0, 1.0}), 1), std::invalid_argument);
}

TEST_CASE("variogram estimator invariances") {
  std::vector<double> base = {1.2, 3.4, 0.7, 2.2, 1.9, 4.1, 0.9, 2.8, 1.5, 3.3};
  VariogramEstimate v0 = empirical_variogram(ranges_from(base), 4);

  // scale invariance: multiplying all ranges by c > 0 leaves V unchanged, exactly
  std::vector<double> scaled = base;
  for (double& x : scaled) x *= 17.5;
  VariogramEstimate vs = empirical_variogram(ranges_from(scaled), 4);
  for (std::size_t i = 0; i < v0.values.size(); ++i)
    CHECK(vs.values[i] == doctest::Approx(v0.values[i]).epsilon(1e-12));

  // time reversal invariance
  std::vector<double> rev(base.rbegin(), base.rend());
  VariogramEstimate vr = empirical_variogram(ranges_from(rev), 4);
  for (std::size_t i = 0; i < v0.values.size(); ++i)
    CHECK(vr.values[i] == doctest::Approx(v0.values[i]).epsilon(1e-12));
}

TEST_CASE("loglinear fit recovers exact lines") {
  VariogramEstimate v;
  for (std::int64_t j = 1; j <= 50; ++j) {
    v.lags.push_back(j);
    v.values.push_back(0.29 + 0.04 * std::log(static_cast<double>(j)));
    v.pair_counts.push_back(100);
  }
  LambdaFit fit = fit_loglinear(v, 1, 50);
  CHECK(fit.lambda2_hat == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(fit.intercept_hat == doctest::Approx(0.29).epsilon(1e-12));
  CHECK(fit.residual_rms < 1e-12);

  // constant variogram -> zero slope
  for (auto& val : v.values) val = 0.7;
  fit = fit_loglinear(v, 1, 50);
  CHECK(fit.lambda2_hat == doctest::Approx(0.0));
  CHECK(fit.intercept_hat == doctest::Approx(0.7));
}

TEST_CASE("fit equivariance under vertical shifts") {
  VariogramEstimate v;
  for (std::int64_t j = 1; j <= 30; ++j) {
    v.lags.push_back(j);
    v.values.push_back(0.1 + 0.05 * std::log(static_cast<double>(j)) +
                       0.001 * std::sin(static_cast<double>(j)));
    v.pair_counts.push_back(10);
  }
  LambdaFit f0 = fit_loglinear(v, 1, 30);
  for (auto& val : v.values) val += 0.37;
  LambdaFit f1 = fit_loglinear(v, 1, 30);
  CHECK(f1.lambda2_hat == doctest::Approx(f0.lambda2_hat).epsilon(1e-12));
  CHECK(f1.intercept_hat == doctest::Approx(f0.intercept_hat + 0.37).epsilon(1e-12));
}

TEST_CASE("doubling the intraday resolution leaves the estimator in place") {
  // ranges themselves carry a discretisation bias (16 sub-steps measure
  // ~8% short of 32), but it is multiplicative and cancels in the
  // log-differences; the paired lambda2 estimates barely move
  MrwParams p;
  p.sigma = 1.0;
  p.lambda2 = 0.02;
  p.T = 2048.0;
  p.tau = 1.0 / 32.0;
  const int days = 756, sub = 32;
  double mean_dl2 = 0.0;
  int n_full_in_band = 0, n_half_in_band = 0;
  const int n_paths = 12;
  for (int i = 0; i < n_paths; ++i) {
    GaussianSequence lv =
        sample_logvol(p, static_cast<std::size_t>(days) * sub, 5000 + static_cast<std::uint64_t>(i));
    MrwPath path = synthesize_path(lv, 6000 + static_cast<std::uint64_t>(i));
    RangeSeries full = log_ranges(path, 32);

    MrwPath thin;
    thin.params = p;
    thin.params.tau = 1.0 / 16.0;
    for (std::size_t k = 1; k < path.cumulative.size(); k += 2)
      thin.cumulative.push_back(path.cumulative[k]);
    thin.returns.assign(thin.cumulative.size(), 0.0);
    RangeSeries half = log_ranges(thin, 16);

    const LambdaFit f_full = fit_loglinear(empirical_variogram(full, 50), 1, 50);
    const LambdaFit f_half = fit_loglinear(empirical_variogram(half, 50), 1, 50);
    mean_dl2 += f_full.lambda2_hat - f_half.lambda2_hat;
    if (std::abs(f_full.intercept_hat - 0.29) < 0.08) ++n_full_in_band;
    if (std::abs(f_half.intercept_hat - 0.29) < 0.08) ++n_half_in_band;
  }
  mean_dl2 /= n_paths;
  CHECK(std::abs(mean_dl2) < 0.002);  // paired shift well under the CI width
  CHECK(n_full_in_band >= n_paths - 2);
  CHECK(n_half_in_band >= n_paths - 2);
}

TEST_CASE("fit window preconditions") {
  VariogramEstimate v;
  for (std::int64_t j = 1; j <= 10; ++j) {
    v.lags.push_back(j);
    v.values.push_back(1.0);
    v.pair_counts.push_back(1);
  }
  CHECK_THROWS_AS(fit_loglinear(v, 5, 6), std::invalid_argument);  // only 2 lags
  CHECK_THROWS_AS(fit_loglinear(v, 0, 5), std::invalid_argument);
}
