#include "mrw/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "mrw/rng.hpp"

namespace mrw {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

void WindowGeometry::validate() const {
  if (!(L > 0.0)) throw std::invalid_argument("WindowGeometry: L must be > 0");
  if (T && !(2.0 * L < *T))
    throw std::invalid_argument("WindowGeometry: finite-T kernel requires 2L < T");
}

double g_map(double t, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("g_map: L must be > 0");
  const double x = t / L + 1.0;
  if (t > 0.0) return x - std::sqrt(x * x - 1.0);
  if (t < -2.0 * L) return x + std::sqrt(x * x - 1.0);
  throw std::domain_error("g_map: t must lie outside [-2L, 0]");
}

double kernel_K(double t, double s) {
  if (!(t > 0.0) || !(s < 0.0)) throw std::domain_error("kernel_K: need t > 0 and s < 0");
  return std::sqrt(t) / (M_PI * (t - s) * std::sqrt(-s));
}

double kernel_K_L(double t, double s, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("kernel_K_L: L must be > 0");
  if (!(s > -2.0 * L && s < 0.0))
    throw std::domain_error("kernel_K_L: s must lie in (-2L, 0)");
  if (std::min(-s, s + 2.0 * L) < 1e-12 * L)
    throw std::domain_error("kernel_K_L: too close to the 1/sqrt endpoints; integrate instead");
  const double g = g_map(t, L);
  const double u = 1.0 + s / L;
  const double root = std::sqrt(1.0 - u * u);  // = sqrt(-s(2L+s))/L
  return (1.0 / (M_PI * L)) * (1.0 - g * g) / ((1.0 - g) * (1.0 - g) - 2.0 * g * s / L) / root;
}

double phi(double s) {
  if (!(s > -1.0 && s < 0.0)) throw std::domain_error("phi: s must lie in (-1, 0)");
  return 1.0 / (2.0 * M_PI * kLn2 * std::sqrt(-s - s * s));
}

double k_conv_phi_quadrature(double x, double tol) {
  if (x < 0.0) throw std::domain_error("k_conv_phi: x must be >= 0");
  auto f = [x](double s) { return std::log(1.0 / std::abs(x - s)) * phi(s); };
  return integrate_1d(f, -1.0, 0.0, SingularitySpec::inv_sqrt_both(), tol).value;
}

namespace {

double k_conv_phi_closed(double x) {
  return 1.0 - std::log(std::sqrt(x) + std::sqrt(x + 1.0)) / kLn2;
}

// The closed form is implementer-derived; it only becomes the fast path
// after agreeing with the quadrature route on a grid.
bool verify_k_conv_phi_closed_form() {
  for (int i = 0; i <= 20; ++i) {
    const double x = 10.0 * static_cast<double>(i) / 20.0;
    if (std::abs(k_conv_phi_closed(x) - k_conv_phi_quadrature(x, 1e-9)) > 1e-6) return false;
  }
  return true;
}

std::once_flag g_kphi_once;
bool g_kphi_closed_ok = false;

void ensure_kphi_mode() {
  std::call_once(g_kphi_once, [] { g_kphi_closed_ok = verify_k_conv_phi_closed_form(); });
}

}  // namespace

bool k_conv_phi_uses_closed_form() {
  ensure_kphi_mode();
  return g_kphi_closed_ok;
}

double k_conv_phi(double x) {
  if (x < 0.0) throw std::domain_error("k_conv_phi: x must be >= 0");
  ensure_kphi_mode();
  return g_kphi_closed_ok ? k_conv_phi_closed(x) : k_conv_phi_quadrature(x);
}

double phi_LT(double s, double L, double T) {
  if (!(L > 0.0)) throw std::invalid_argument("phi_LT: L must be > 0");
  if (!(T >= 2.0 * L)) throw std::domain_error("phi_LT: requires T >= 2L");
  if (!(s > -2.0 * L && s < 0.0)) throw std::domain_error("phi_LT: s must lie in (-2L, 0)");
  return 1.0 / ((2.0 * M_PI * kLn2 + M_PI * std::log(T / (2.0 * L))) *
                std::sqrt(-s * (s + 2.0 * L)));
}

double k_LT_correction_coefficient(double t, double L, double T) {
  if (!(L > 0.0)) throw std::invalid_argument("kernel_K_LT: L must be > 0");
  if (!(2.0 * L < T)) throw std::domain_error("kernel_K_LT: requires 2L < T");
  if (!(t > 0.0 && t < T - 2.0 * L))
    throw std::domain_error("kernel_K_LT: t must lie in (0, T - 2L)");
  return (k_conv_phi(t / (2.0 * L)) - 1.0) / (1.0 + std::log(T / (2.0 * L)) / (2.0 * kLn2));
}

double kernel_K_LT(double t, double s, double L, double T) {
  const double coeff = k_LT_correction_coefficient(t, L, T);
  const double base = kernel_K_L(t, s, L);
  return base + coeff / (M_PI * std::sqrt(-s * (2.0 * L + s)));
}

namespace {

// After s = tan^2(theta) in both variables the weight becomes flat:
// C = (4/pi^2) int int ln|tan^2 a - tan^2 b| da db over (0, pi/2)^2.
double pred_constant_integrand(double a, double b) {
  const double ta = std::tan(a), tb = std::tan(b);
  const double d = std::abs(ta * ta - tb * tb);
  return d > 0.0 ? std::log(d) : 0.0;
}

std::once_flag g_cpred_once;
ForecastConstants g_cpred;

}  // namespace

ForecastConstants compute_pred_constant(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("compute_pred_constant: tol must be > 0");
  std::call_once(g_cpred_once, [tol] {
    const double eps = 1e-12;
    Specs2d specs;
    specs.split_inner_at_outer = true;  // log singularity on the diagonal
    QuadratureResult q = integrate_2d(pred_constant_integrand,
                                      {eps, M_PI / 2 - eps, eps, M_PI / 2 - eps}, specs,
                                      tol * M_PI * M_PI / 4.0);
    if (!q.converged)
      throw std::runtime_error("compute_pred_constant: quadrature did not converge");
    const double c = 4.0 / (M_PI * M_PI) * q.value;
    // Sanity band around the published figure. The accurate value of the
    // integral is 2 ln 2 ~ 1.386, slightly above the rounded 1.33.
    if (std::abs(c - 1.33) > 0.10)
      throw std::runtime_error("compute_pred_constant: value failed the sanity gate");
    g_cpred = {c, 4.0 / (M_PI * M_PI) * q.error_estimate + tol};
  });
  return g_cpred;
}

QuadratureResult pred_constant_mc(std::int64_t n_samples, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, stream::mc);
  double sum = 0.0, sum2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double a = 0.5 * M_PI * rng.uniform();
    const double b = 0.5 * M_PI * rng.uniform();
    const double y = pred_constant_integrand(a, b);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / static_cast<double>(n_samples);
  const double var = std::max(0.0, sum2 / static_cast<double>(n_samples) - mean * mean);
  QuadratureResult r;
  r.value = mean;  // average of ln|..| equals C up to the (4/pi^2)(pi/2)^2 = 1 factor
  r.error_estimate = std::sqrt(var / static_cast<double>(n_samples));
  r.evaluations = n_samples;
  return r;
}

double residual_variance(std::int64_t n, const ForecastConstants& constants) {
  if (n < 1) throw std::invalid_argument("residual_variance: n must be >= 1");
  return std::log(static_cast<double>(n)) + constants.c_pred;
}

}  // namespace mrw
