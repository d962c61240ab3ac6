#pragma once

#include <cstdint>
#include <vector>

#include "mrw/params.hpp"

namespace mrw {

/// Stationary log-volatility sample X_0..X_{n-1}.
struct GaussianSequence {
  std::vector<double> values;
  MrwParams params;
  std::uint64_t seed = 0;
};

struct MrwPath {
  std::vector<double> returns;     // r_n, log return per step
  std::vector<double> cumulative;  // Y_n = sum of returns up to n
  MrwParams params;
};

struct RescaledPath {
  MrwPath path;
  double omega = 0.0;  // sampled value of the global lognormal factor's Gaussian
  double T_new = 0.0;
};

/// Covariance of the log-volatility sequence at integer lag:
/// max(0, ln(T / ((lag+1) tau))).
double kernel_covariance(std::int64_t lag, const MrwParams& params);

/// Draw the zero-mean stationary Gaussian sequence with the covariance
/// above. Circulant embedding (FFT) with doubling; falls back to dense
/// Cholesky with jitter, and throws std::runtime_error if neither
/// representation works.
GaussianSequence sample_logvol(const MrwParams& params, std::size_t length, std::uint64_t seed);

/// r_n = sigma sqrt(tau) exp(lambda X_n - lambda^2 ln+(T/tau)) eps_n with
/// eps i.i.d. standard Gaussian drawn from its own stream.
MrwPath synthesize_path(const GaussianSequence& logvol, std::uint64_t noise_seed);

/// Multiply the path by exp(lambda Omega - lambda^2 ln(T_new/T)) with
/// Omega ~ N(0, ln(T_new/T)) independent of the path. Requires T_new >= T.
RescaledPath rescale_to_T(const MrwPath& path, double T_new, std::uint64_t seed);

struct PsdCheckRow {
  double xi = 0.0;
  double value = 0.0;
};

struct PsdCheckResult {
  bool all_nonnegative = true;
  std::vector<PsdCheckRow> table;
};

/// Evaluate the Fourier transform of ln+(T/(|.|+c)),
///   (1/(pi |xi|)) * int_0^{2 pi (T-c) |xi|} sin(x)/(x + 2 pi |xi| c) dx,
/// on a frequency grid and report whether all values are >= -tolerance.
PsdCheckResult validate_kernel_psd(const MrwParams& params, double c,
                                   const std::vector<double>& xi_grid, double tolerance = 1e-10);

/// Log-spaced default grid for the check above.
std::vector<double> log_frequency_grid(double xi_min = 1e-3, double xi_max = 1e3,
                                       std::size_t count = 200);

namespace detail {

/// In-place radix-2 complex FFT; size must be a power of two.
void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse);

/// Circulant eigenvalues embedding covariances c_0..c_{m/2}; m power of 2.
std::vector<double> circulant_eigenvalues(const std::vector<double>& cov_half, std::size_t m);

}  // namespace detail

}  // namespace mrw
