#pragma once

#include <cstdint>
#include <vector>

#include "mrw/kernels.hpp"
#include "mrw/params.hpp"

namespace mrw {

/// One row of discretised prediction weights for horizon n, covering the
/// observed history k = 0..N (most recent first).
struct ForecastWeights {
  std::int64_t horizon_n = 1;
  std::vector<double> weights;  // weights[k] = alpha*_{n,k+1}
  std::int64_t history_len_N = 0;

  double sum() const;
};

/// Observed per-step volatilities sigma_{-k}, k = 0 most recent.
struct VolHistory {
  std::vector<double> sigmas;
  double tau = 1.0 / 16.0;
};

struct VolForecast {
  std::int64_t horizon_n = 1;
  double value = 0.0;
  double lambda2 = 0.0;
};

/// alpha*_{n,k} = (2/pi)(arctan sqrt(k/n) - arctan sqrt((k-1)/n)).
/// Independent of tau.
double alpha_star(std::int64_t n, std::int64_t k);

ForecastWeights weight_row(std::int64_t n, std::int64_t N);

/// Brute-force ground truth: the weights of the discrete conditional
/// expectation E[X_n | X_0..X_{-N}] obtained from the Toeplitz covariance
/// system (Levinson solve). Depends only on (n, N, T/tau).
std::vector<double> exact_weights_oracle(std::int64_t n, std::int64_t N, const MrwParams& params);

/// Parameter-free volatility forecast:
///   E[sigma_n | history] ~ exp(lambda2 C / 2) n^{lambda2/2} prod sigma_{-k}^{alpha*}.
/// No sigma, tau or T inputs anywhere.
VolForecast forecast_vol(const VolHistory& history, std::int64_t n, double lambda2,
                         const ForecastConstants& constants);

/// d(forecast)/d(lambda2) = (C/2 + ln(n)/2) * forecast.
double forecast_sensitivity(const VolForecast& forecast, const ForecastConstants& constants);

/// Forecasted integrated variance to horizon t:
///   sigma_t^2 = sum_{n=1}^{floor(t/tau)} exp(2 lambda2 (ln n + C)) prod sigma_{-k}^{2 alpha*}.
/// The closed form is derived from the conditional-lognormal reduction; it
/// is validated once per process against a conditional-simulation Monte
/// Carlo oracle before being trusted (mirrors k_conv_phi).
double forecast_variance(const VolHistory& history, double t, double tau, double lambda2,
                         const ForecastConstants& constants);

/// Whether the closed form passed the once-per-process MC validation.
bool forecast_variance_validated();

struct ConditionalMcResult {
  double mc_value = 0.0;       // E[(Y_t - Y_0)^2 | window] from conditioned simulation
  double mc_std_error = 0.0;
  double closed_form = 0.0;        // the parameter-free alpha* formula
  double exact_weights_form = 0.0;  // same reduction with exact lattice weights
};

/// The validation oracle itself (exposed for tests and the selftest):
/// simulate conditioned log-volatility futures for a small configuration
/// and compare E[(Y_t - Y_0)^2] against the closed forms. The
/// exact-weights reduction must match the simulation within MC noise; the
/// alpha* substitution on top of it carries the head-of-window
/// discretisation gap and is only bounded loosely.
ConditionalMcResult forecast_variance_mc_check(double lambda2, std::int64_t horizon_steps,
                                               std::int64_t window_len, double T_over_tau,
                                               std::int64_t n_samples, std::uint64_t seed);

}  // namespace mrw
