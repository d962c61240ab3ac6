#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrw/forecast.hpp"
#include "mrw/params.hpp"

namespace mrw {

struct McBudget {
  std::int64_t n_samples = 4'000'000;
  std::uint64_t seed = 20259;
  int threads = 1;
};

struct KurtosisResult {
  double value = 0.0;      // kappa_t
  double std_error = 0.0;  // propagated MC standard error (0 for quadrature)
  double q_over_t2 = 0.0;  // the exponent integral divided by t^2
  double q_std_error = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;
};

struct PricingInputs {
  double spot_S0 = 100.0;
  double maturity_t = 0.25;
  double window_L = 1.0;
  std::optional<double> T;  // empty: infinite-correlation-length limit
  double lambda2 = 0.02;
  VolHistory history;

  void validate() const;
};

struct SmileCurve {
  std::vector<double> strikes;
  std::vector<double> implied_vols;
  double sigma_t2 = 0.0;
  double kappa_t = 0.0;
  double kappa_std_error = 0.0;
};

/// Infinite-correlation-length conditional kurtosis
///   kappa_t = 3 (exp((4 lambda2 / t^2) Q) - 1)
/// with Q the 4d integral of K_L K_L against the log cross-ratio,
/// estimated by Monte Carlo with the inverse-sqrt kernel factors absorbed
/// into arcsine sampling densities. Independent of the observed history.
KurtosisResult kurtosis_limit(double t, double L, double lambda2, const McBudget& mc,
                              double rel_se_tolerance = 0.03);

/// Finite-correlation-length conditional kurtosis via the covariance
/// expansion E[A^2] - 2 E[AB] + E[B^2] with kernel K_{L,T}; each term is
/// reduced to (at most) a 2d integral and evaluated by adaptive
/// quadrature, so no sampling budget is needed.
KurtosisResult kurtosis_finite_T(double t, double L, double T, double lambda2,
                                 double quad_tol = 1e-6);

/// The three expansion terms, exposed for the cross-checks
/// (E[AB] = E[B^2] must hold: B is the conditional mean of A).
struct KurtosisTerms {
  double ea2 = 0.0;
  double eab = 0.0;
  double eb2 = 0.0;
};
KurtosisTerms kurtosis_finite_T_terms(double t, double L, double T, double quad_tol = 1e-6);

/// Implied-volatility smile of Eq.-style parabolic form:
///   Sigma(K,t) = (sigma_t / sqrt(t)) (1 + kappa_t ((K-S0)^2/(S0^2 sigma_t^2) - 1)).
SmileCurve smile_curve(const PricingInputs& inputs, const std::vector<double>& strikes,
                       const ForecastConstants& constants, const McBudget& mc = {});

/// Black-Scholes call with zero rate and total standard deviation
/// smile_vol * sqrt(t).
double call_price(const PricingInputs& inputs, double strike, double smile_vol);

/// One sample of the small-lambda2 approximation of Y_t: a lognormal
/// factor driven by the discretised time average of the log volatility
/// over [0, t]. Enforces lambda2 <= 0.05.
double approx_mrw_small_lambda(const MrwParams& params, double t, std::uint64_t seed,
                               std::size_t grid_steps = 64);

}  // namespace mrw
