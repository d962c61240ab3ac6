#include "mrw/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mrw {

std::vector<double> levinson_solve(std::span<const double> c, std::span<const double> b) {
  const std::size_t n = c.size();
  if (n == 0 || b.size() != n) throw std::invalid_argument("levinson_solve: size mismatch");
  if (c[0] == 0.0) throw std::runtime_error("levinson_solve: singular system");

  std::vector<double> x(n, 0.0), f(n, 0.0), f_prev(n, 0.0);
  x[0] = b[0] / c[0];
  f[0] = 1.0 / c[0];

  for (std::size_t k = 1; k < n; ++k) {
    // forward vector: f solves T_k f = e_1 (first unit vector)
    double ef = 0.0;
    for (std::size_t j = 0; j < k; ++j) ef += c[k - j] * f[j];
    const double denom = 1.0 - ef * ef;
    if (denom == 0.0 || !std::isfinite(denom))
      throw std::runtime_error("levinson_solve: singular leading minor");
    std::swap(f_prev, f);
    for (std::size_t j = 0; j <= k; ++j) {
      const double fwd = (j < k) ? f_prev[j] : 0.0;
      const double bwd = (j > 0) ? f_prev[k - j] : 0.0;
      f[j] = (fwd - ef * bwd) / denom;
    }
    double ex = 0.0;
    for (std::size_t j = 0; j < k; ++j) ex += c[k - j] * x[j];
    const double mu = b[k] - ex;
    for (std::size_t j = 0; j <= k; ++j) x[j] += mu * f[k - j];
  }
  return x;
}

bool cholesky_in_place(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  // zero the strict upper triangle so the factor can be used directly
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  return true;
}

std::vector<double> spd_solve(const std::vector<double>& a, std::size_t n,
                              std::span<const double> rhs) {
  if (a.size() != n * n || rhs.size() != n) throw std::invalid_argument("spd_solve: size mismatch");
  std::vector<double> l = a;
  if (!cholesky_in_place(l, n)) throw std::runtime_error("spd_solve: matrix not positive definite");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
    y[i] = s / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * y[k];
    y[ii] = s / l[ii * n + ii];
  }
  return y;
}

}  // namespace mrw
