#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

namespace mrw {

/// Endpoint / interior singularity classes the 1d integrator removes or
/// isolates before running adaptive Gauss-Kronrod.
enum class SingularityKind {
  none,
  inv_sqrt_left,   // integrand ~ 1/sqrt(s - a) near a
  inv_sqrt_right,  // integrand ~ 1/sqrt(b - s) near b
  inv_sqrt_both,   // integrand ~ 1/sqrt((s - a)(b - s))
  log_interior,    // integrable log singularity at an interior point
};

struct SingularitySpec {
  SingularityKind kind = SingularityKind::none;
  std::optional<double> location;  // required iff kind == log_interior

  static SingularitySpec none() { return {}; }
  static SingularitySpec inv_sqrt_left() { return {SingularityKind::inv_sqrt_left, {}}; }
  static SingularitySpec inv_sqrt_right() { return {SingularityKind::inv_sqrt_right, {}}; }
  static SingularitySpec inv_sqrt_both() { return {SingularityKind::inv_sqrt_both, {}}; }
  static SingularitySpec log_at(double where) { return {SingularityKind::log_interior, where}; }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;  // false when the evaluation budget ran out
};

using Integrand1d = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

inline constexpr double kDefaultTol1d = 1e-8;
inline constexpr double kDefaultTol2d = 1e-6;

/// Integrate f over (a, b); b may be +infinity (mapped by s = a + tan^2).
/// Inverse-square-root endpoint weights are removed exactly by
/// substitution (s = a + (b-a) sin^2 v and relatives); interior log
/// singularities are split at the given location and left to the
/// adaptive refinement, which handles them.
QuadratureResult integrate_1d(const Integrand1d& f, double a, double b,
                              SingularitySpec spec = {}, double tol = kDefaultTol1d,
                              int max_intervals = 4000);

struct Domain2d {
  double ax, bx;
  double ay, by;
};

struct Specs2d {
  SingularitySpec x = {};
  SingularitySpec y = {};
  // When set, the inner (y) integral is split at y = x before refining:
  // this is how a log singularity along the diagonal is kept away from
  // the quadrature nodes.
  bool split_inner_at_outer = false;
};

QuadratureResult integrate_2d(const Integrand2d& f, const Domain2d& domain,
                              const Specs2d& specs = {}, double tol = kDefaultTol2d);

/// Per-dimension sampling law for the Monte Carlo cubature.
enum class McWeight {
  uniform,
  arcsine,  // density 1/(pi sqrt((x-lo)(hi-x))): absorbs inverse-sqrt edge factors
};

struct McDomain4d {
  std::array<double, 4> lo;
  std::array<double, 4> hi;
  std::array<McWeight, 4> weight = {McWeight::uniform, McWeight::uniform,
                                    McWeight::uniform, McWeight::uniform};
};

using Integrand4d = std::function<double(const std::array<double, 4>&)>;

/// Monte Carlo estimate of the 4d integral of f. Arcsine-weighted
/// dimensions divide the integrand by the sampling density, so a
/// 1/sqrt((x-lo)(hi-x)) factor in f cancels exactly. The estimate is
/// deterministic for a given (seed, n_samples, n_shards) and independent
/// of the number of worker threads.
QuadratureResult integrate_4d_mc(const Integrand4d& f, const McDomain4d& domain,
                                 std::int64_t n_samples = 1'000'000, std::uint64_t seed = 20259,
                                 int threads = 1);

}  // namespace mrw
