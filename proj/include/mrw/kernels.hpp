#pragma once

#include <optional>

#include "mrw/quadrature.hpp"

namespace mrw {

/// Observation window ]-2L, 0[ plus (optionally) the correlation length
/// of the finite-range field; the finite-T kernel needs 2L < T.
struct WindowGeometry {
  double L = 1.0;
  std::optional<double> T;

  void validate() const;
};

struct ForecastConstants {
  double c_pred = 0.0;
  double computed_tol = 0.0;
};

/// Conformal map factor of the half-window geometry. Defined for t > 0
/// and t < -2L; values fall in (-1,1)\{0} with limits 1 and -1 at the
/// window edges.
double g_map(double t, double L);

/// Infinite-horizon prediction kernel K(t,s) = sqrt(t) / (pi (t-s) sqrt(-s)),
/// t > 0, s < 0.
double kernel_K(double t, double s);

/// Finite-window kernel. Integrable 1/sqrt singularities at s = 0 and
/// s = -2L; evaluation within 1e-12 * L of either endpoint throws, since
/// integration against it must go through the quadrature substitutions.
double kernel_K_L(double t, double s, double L);

/// Equilibrium density phi(s) = 1/(2 pi ln 2 sqrt(-s - s^2)) on (-1,0).
double phi(double s);

/// (k * phi)(x) = int_{-1}^0 ln(1/|x-s|) phi(s) ds for x >= 0.
/// A derived closed form is used once it has been verified against the
/// quadrature path; see k_conv_phi_quadrature / k_conv_phi_uses_closed_form.
double k_conv_phi(double x);

/// The quadrature ground-truth path for (k * phi)(x).
double k_conv_phi_quadrature(double x, double tol = 1e-9);

/// Whether the closed-form fast path passed its verification and is active.
bool k_conv_phi_uses_closed_form();

/// Window-scaled equilibrium density for correlation length T >= 2L.
double phi_LT(double s, double L, double T);

/// Finite-correlation-length prediction kernel (absolute, not modulo
/// constants): K_L plus a rank-one correction that decays like 1/ln T.
double kernel_K_LT(double t, double s, double L, double T);

/// Coefficient of the separable correction term in kernel_K_LT.
double k_LT_correction_coefficient(double t, double L, double T);

/// The prediction-residual constant: the double integral
/// (1/pi^2) int_0^inf int_0^inf ln|s-s'| / ((1+s)(1+s') sqrt(s s')) ds ds',
/// computed once per process by 2d adaptive quadrature and cached.
ForecastConstants compute_pred_constant(double tol = 1e-5);

/// Monte Carlo cross-check of the same constant (independent route).
QuadratureResult pred_constant_mc(std::int64_t n_samples, std::uint64_t seed);

/// Residual variance of the n-step-ahead log-volatility prediction:
/// ln(n) + c_pred.
double residual_variance(std::int64_t n, const ForecastConstants& constants);

}  // namespace mrw
