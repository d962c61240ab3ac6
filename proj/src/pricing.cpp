#include "mrw/pricing.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mrw/kernels.hpp"
#include "mrw/quadrature.hpp"
#include "mrw/rng.hpp"
#include "mrw/sgp_sim.hpp"

namespace mrw {

void PricingInputs::validate() const {
  if (!(spot_S0 > 0.0)) throw std::invalid_argument("PricingInputs: spot must be > 0");
  if (!(maturity_t > 0.0)) throw std::invalid_argument("PricingInputs: maturity must be > 0");
  if (!(window_L > 0.0)) throw std::invalid_argument("PricingInputs: window_L must be > 0");
  if (T && !(maturity_t < *T - 2.0 * window_L))
    throw std::invalid_argument("PricingInputs: need maturity_t < T - 2L");
  if (history.sigmas.empty()) throw std::invalid_argument("PricingInputs: empty history");
}

namespace {

// Smooth factor of K_L: K_L(t,s) = b_factor(t,s,L) / (pi sqrt(-s(2L+s))).
// Internal integration paths use this form so the inverse-sqrt weight can
// be cancelled analytically against sampling densities / substitutions.
double b_factor(double t, double s, double L) {
  const double x = t / L + 1.0;
  const double g = x - std::sqrt(x * x - 1.0);  // t > 0 branch
  return (1.0 - g * g) / ((1.0 - g) * (1.0 - g) - 2.0 * g * s / L);
}

// Natural cubic spline on a uniform grid.
class UniformSpline {
 public:
  UniformSpline(double a, double b, std::vector<double> y) : a_(a), y_(std::move(y)) {
    const std::size_t n = y_.size();
    h_ = (b - a) / static_cast<double>(n - 1);
    m_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> diag(n - 2, 4.0), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i)
      rhs[i - 1] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
    for (std::size_t i = 1; i < n - 2; ++i) {  // Thomas elimination
      const double w = 1.0 / diag[i - 1];
      diag[i] -= w;
      rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 2] = rhs[n - 3] / diag[n - 3];
    for (std::size_t i = n - 3; i >= 1; --i) {
      m_[i] = (rhs[i - 1] - m_[i + 1]) / diag[i - 1];
      if (i == 1) break;
    }
  }

  double operator()(double x) const {
    const std::size_t n = y_.size();
    double u = (x - a_) / h_;
    auto i = static_cast<std::size_t>(std::max(0.0, std::min(u, static_cast<double>(n - 2))));
    if (i > n - 2) i = n - 2;
    const double dl = u - static_cast<double>(i);
    const double dr = 1.0 - dl;
    return dr * y_[i] + dl * y_[i + 1] +
           h_ * h_ / 6.0 *
               ((dr * dr * dr - dr) * m_[i] + (dl * dl * dl - dl) * m_[i + 1]);
  }

 private:
  double a_;
  double h_ = 1.0;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives
};

}  // namespace

KurtosisResult kurtosis_limit(double t, double L, double lambda2, const McBudget& mc,
                              double rel_se_tolerance) {
  if (!(t > 0.0 && L > 0.0)) throw std::invalid_argument("kurtosis_limit: need t > 0, L > 0");
  if (lambda2 < 0.0) throw std::invalid_argument("kurtosis_limit: lambda2 must be >= 0");

  // Q = int K_L(s,u) K_L(s',u') ln(|s-u'||s'-u| / (|s-s'||u-u'|)); the
  // 1/(pi sqrt(-u(2L+u))) factors cancel against the arcsine densities.
  McDomain4d domain;
  domain.lo = {0.0, 0.0, -2.0 * L, -2.0 * L};
  domain.hi = {t, t, 0.0, 0.0};
  domain.weight = {McWeight::uniform, McWeight::uniform, McWeight::arcsine, McWeight::arcsine};

  auto integrand = [L](const std::array<double, 4>& x) {
    const double s = x[0], sp = x[1], u = x[2], up = x[3];
    const double d1 = std::abs(s - up), d2 = std::abs(sp - u);
    const double d3 = std::abs(s - sp), d4 = std::abs(u - up);
    if (d3 == 0.0 || d4 == 0.0) return 0.0;  // measure-zero; avoid inf
    const double lncr = std::log(d1) + std::log(d2) - std::log(d3) - std::log(d4);
    const double k1 = b_factor(s, u, L) / (M_PI * std::sqrt(-u * (2.0 * L + u)));
    const double k2 = b_factor(sp, up, L) / (M_PI * std::sqrt(-up * (2.0 * L + up)));
    return k1 * k2 * lncr;
  };

  QuadratureResult q = integrate_4d_mc(integrand, domain, mc.n_samples, mc.seed, mc.threads);

  KurtosisResult out;
  out.q_over_t2 = q.value / (t * t);
  out.q_std_error = q.error_estimate / (t * t);
  out.evaluations = q.evaluations;
  const double expo = 4.0 * lambda2 * out.q_over_t2;
  out.value = 3.0 * (std::exp(expo) - 1.0);
  out.std_error = 3.0 * std::exp(expo) * 4.0 * lambda2 * out.q_std_error;
  out.converged = (out.value == 0.0) || (out.std_error <= rel_se_tolerance * std::abs(out.value));
  return out;
}

KurtosisTerms kurtosis_finite_T_terms(double t, double L, double T, double quad_tol) {
  if (!(L > 0.0 && 2.0 * L < T)) throw std::invalid_argument("kurtosis_finite_T: need 2L < T");
  if (!(t > 0.0 && t < T - 2.0 * L))
    throw std::invalid_argument("kurtosis_finite_T: need 0 < t < T - 2L");

  const double half_pi = 0.5 * M_PI;
  auto sigma_of = [L](double v) {
    const double sv = std::sin(v);
    return -2.0 * L * sv * sv;
  };
  auto corr_coeff = [&](double s) { return k_LT_correction_coefficient(s, L, T); };

  // I1(u) = int_0^t ln(T / (x - u)) dx for u < 0  (x - u stays below T).
  auto i1 = [&](double u) {
    const double a = -u, b = t - u;
    return t * std::log(T) - (b * std::log(b) - b - (a * std::log(a) - a));
  };

  KurtosisTerms terms;
  terms.ea2 = t * t * (std::log(T / t) + 1.5);

  // s = w^2 removes the sqrt cusp of g_L and of the correction at s -> 0.
  const double wmax = std::sqrt(t);
  auto kernel_s_integral = [&](double v) {
    const double u = sigma_of(v);
    auto f = [&](double w) {
      const double s = w * w;
      return (b_factor(s, u, L) + corr_coeff(s)) * 2.0 * w;
    };
    return integrate_1d(f, 0.0, wmax, {}, quad_tol * 0.01).value;
  };

  auto eab_outer = [&](double v) { return kernel_s_integral(v) * i1(sigma_of(v)); };
  terms.eab = 2.0 / M_PI * integrate_1d(eab_outer, 1e-9, half_pi - 1e-9, {}, quad_tol).value;

  // G on a fine grid, splined; then the 2d log-diagonal integral.
  const std::size_t grid_n = 801;
  std::vector<double> gvals(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double v = half_pi * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    const double vc = std::min(std::max(v, 1e-9), half_pi - 1e-9);
    gvals[i] = kernel_s_integral(vc);
  }
  UniformSpline gspline(0.0, half_pi, std::move(gvals));

  auto eb2_integrand = [&](double v, double vp) {
    const double diff = 2.0 * L * std::abs(std::sin(v - vp)) * std::sin(v + vp);
    if (diff <= 0.0) return 0.0;
    return gspline(v) * gspline(vp) * std::log(T / diff);
  };
  Specs2d specs;
  specs.split_inner_at_outer = true;
  QuadratureResult eb2 = integrate_2d(eb2_integrand, {0.0, half_pi, 0.0, half_pi}, specs, quad_tol);
  terms.eb2 = (2.0 / M_PI) * (2.0 / M_PI) * eb2.value;
  return terms;
}

KurtosisResult kurtosis_finite_T(double t, double L, double T, double lambda2, double quad_tol) {
  if (lambda2 < 0.0) throw std::invalid_argument("kurtosis_finite_T: lambda2 must be >= 0");
  const KurtosisTerms terms = kurtosis_finite_T_terms(t, L, T, quad_tol);
  const double variance = terms.ea2 - 2.0 * terms.eab + terms.eb2;

  KurtosisResult out;
  out.q_over_t2 = variance / (t * t);
  const double expo = 4.0 * lambda2 * out.q_over_t2;
  out.value = 3.0 * (std::exp(expo) - 1.0);
  out.converged = true;
  return out;
}

SmileCurve smile_curve(const PricingInputs& inputs, const std::vector<double>& strikes,
                       const ForecastConstants& constants, const McBudget& mc) {
  inputs.validate();
  for (double k : strikes)
    if (!(k > 0.0)) throw std::invalid_argument("smile_curve: strikes must be positive");

  const double t = inputs.maturity_t;
  const double sigma_t2 =
      forecast_variance(inputs.history, t, inputs.history.tau, inputs.lambda2, constants);
  if (!(sigma_t2 > 0.0)) throw std::runtime_error("smile_curve: non-positive forecast variance");

  KurtosisResult kappa =
      inputs.T ? kurtosis_finite_T(t, inputs.window_L, *inputs.T, inputs.lambda2)
               : kurtosis_limit(t, inputs.window_L, inputs.lambda2, mc);

  SmileCurve curve;
  curve.strikes = strikes;
  curve.sigma_t2 = sigma_t2;
  curve.kappa_t = kappa.value;
  curve.kappa_std_error = kappa.std_error;
  curve.implied_vols.reserve(strikes.size());
  const double base = std::sqrt(sigma_t2) / std::sqrt(t);
  const double s0 = inputs.spot_S0;
  for (double k : strikes) {
    const double moneyness2 = (k - s0) * (k - s0) / (s0 * s0 * sigma_t2);
    curve.implied_vols.push_back(base * (1.0 + kappa.value * (moneyness2 - 1.0)));
  }
  return curve;
}

double call_price(const PricingInputs& inputs, double strike, double smile_vol) {
  if (!(smile_vol > 0.0)) throw std::invalid_argument("call_price: smile_vol must be > 0");
  if (!(strike >= 0.0)) throw std::invalid_argument("call_price: strike must be >= 0");
  const double s0 = inputs.spot_S0;
  if (strike == 0.0) return s0;
  const double sd = smile_vol * std::sqrt(inputs.maturity_t);
  const double d1 = std::log(s0 / strike) / sd + 0.5 * sd;
  const double d2 = d1 - sd;
  auto ncdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  return s0 * ncdf(d1) - strike * ncdf(d2);
}

double approx_mrw_small_lambda(const MrwParams& params, double t, std::uint64_t seed,
                               std::size_t grid_steps) {
  params.validate();
  if (!(t > 0.0)) throw std::invalid_argument("approx_mrw_small_lambda: t must be > 0");
  if (params.lambda2 > 0.05)
    throw std::invalid_argument("approx_mrw_small_lambda: requires lambda2 <= 0.05");
  if (grid_steps < 2) throw std::invalid_argument("approx_mrw_small_lambda: grid too small");

  MrwParams grid_params = params;
  grid_params.tau = t / static_cast<double>(grid_steps);

  GaussianSequence x = sample_logvol(grid_params, grid_steps, seed);
  double mean_x = 0.0;
  for (double v : x.values) mean_x += v;
  mean_x /= static_cast<double>(grid_steps);

  Rng rng = Rng::substream(seed, stream::noise);
  const double eps = rng.gauss();
  const double lam = params.lambda();
  const double drift = params.lambda2 * std::log(params.T * std::exp(1.5) / t);
  return params.sigma * std::sqrt(t) * std::exp(lam * mean_x - drift) * eps;
}

}  // namespace mrw
