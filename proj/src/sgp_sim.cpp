#include "mrw/sgp_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mrw/linalg.hpp"
#include "mrw/rng.hpp"

namespace mrw {

double kernel_covariance(std::int64_t lag, const MrwParams& params) {
  params.validate();
  if (lag < 0) throw std::invalid_argument("kernel_covariance: lag must be >= 0");
  const double arg = params.T / ((static_cast<double>(lag) + 1.0) * params.tau);
  return std::max(0.0, std::log(arg));
}

namespace detail {

void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  const std::size_t n = re.size();
  if (n == 0 || (n & (n - 1)) != 0 || im.size() != n)
    throw std::invalid_argument("fft_pow2: size must be a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::size_t a = i + k, b = i + k + len / 2;
        const double tr = re[b] * cr - im[b] * ci;
        const double ti = re[b] * ci + im[b] * cr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] *= s;
      im[i] *= s;
    }
  }
}

std::vector<double> circulant_eigenvalues(const std::vector<double>& cov_half, std::size_t m) {
  if (cov_half.size() != m / 2 + 1)
    throw std::invalid_argument("circulant_eigenvalues: need m/2+1 covariances");
  std::vector<double> re(m, 0.0), im(m, 0.0);
  for (std::size_t i = 0; i <= m / 2; ++i) re[i] = cov_half[i];
  for (std::size_t i = m / 2 + 1; i < m; ++i) re[i] = cov_half[m - i];
  fft_pow2(re, im, false);
  return re;  // symmetric first row: spectrum is real
}

}  // namespace detail

namespace {

// Embedding eigenvalues for a length-n sample, doubling m until the
// negative part is within the clipping floor. Returns empty on failure.
std::vector<double> embedding_eigenvalues(const MrwParams& params, std::size_t n,
                                          std::size_t* m_out) {
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  for (int attempt = 0; attempt < 7; ++attempt, m <<= 1) {
    std::vector<double> cov(m / 2 + 1);
    for (std::size_t i = 0; i <= m / 2; ++i)
      cov[i] = kernel_covariance(static_cast<std::int64_t>(i), params);
    std::vector<double> eig = detail::circulant_eigenvalues(cov, m);
    const double max_eig = *std::max_element(eig.begin(), eig.end());
    const double min_eig = *std::min_element(eig.begin(), eig.end());
    if (max_eig <= 0.0) break;
    if (min_eig >= -1e-10 * max_eig) {
      for (double& e : eig) e = std::max(e, 0.0);
      *m_out = m;
      return eig;
    }
  }
  return {};
}

std::vector<double> cholesky_sample(const MrwParams& params, std::size_t n, Rng& rng) {
  std::vector<double> a(n * n);
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += kernel_covariance(0, params);
  const double jitter = 1e-12 * trace / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto lag = static_cast<std::int64_t>(i > j ? i - j : j - i);
      a[i * n + j] = kernel_covariance(lag, params) + (i == j ? jitter : 0.0);
    }
  if (!cholesky_in_place(a, n))
    throw std::runtime_error(
        "sample_logvol: covariance not representable (embedding and Cholesky both failed)");
  std::vector<double> z(n), x(n, 0.0);
  for (auto& v : z) v = rng.gauss();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += a[i * n + j] * z[j];
    x[i] = s;
  }
  return x;
}

}  // namespace

GaussianSequence sample_logvol(const MrwParams& params, std::size_t length, std::uint64_t seed) {
  params.validate();
  if (length < 1) throw std::invalid_argument("sample_logvol: length must be >= 1");

  Rng rng = Rng::substream(seed, stream::logvol);

  if (length == 1) {
    const double sd = std::sqrt(kernel_covariance(0, params));
    return {{sd * rng.gauss()}, params, seed};
  }

  std::size_t m = 0;
  std::vector<double> eig = embedding_eigenvalues(params, length, &m);
  std::vector<double> values;
  if (!eig.empty()) {
    std::vector<double> re(m), im(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double s = std::sqrt(eig[i]);
      re[i] = s * rng.gauss();
      im[i] = s * rng.gauss();
    }
    detail::fft_pow2(re, im, false);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    values.assign(re.begin(), re.begin() + static_cast<std::ptrdiff_t>(length));
    for (double& v : values) v *= norm;
  } else {
    if (length > 4096)
      throw std::runtime_error("sample_logvol: embedding failed and sequence too long for Cholesky");
    values = cholesky_sample(params, length, rng);
  }
  return {std::move(values), params, seed};
}

MrwPath synthesize_path(const GaussianSequence& logvol, std::uint64_t noise_seed) {
  logvol.params.validate();
  const MrwParams& p = logvol.params;
  const std::size_t n = logvol.values.size();
  if (n == 0) throw std::invalid_argument("synthesize_path: empty log-volatility sequence");

  Rng rng = Rng::substream(noise_seed, stream::noise);
  const double lam = p.lambda();
  const double drift = p.lambda2 * std::max(0.0, std::log(p.T / p.tau));
  const double scale = p.sigma * std::sqrt(p.tau);

  MrwPath path;
  path.params = p;
  path.returns.resize(n);
  path.cumulative.resize(n);
  double cum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = rng.gauss();
    const double r = scale * std::exp(lam * logvol.values[i] - drift) * eps;
    path.returns[i] = r;
    cum += r;
    path.cumulative[i] = cum;
  }
  return path;
}

RescaledPath rescale_to_T(const MrwPath& path, double T_new, std::uint64_t seed) {
  path.params.validate();
  if (T_new < path.params.T)
    throw std::invalid_argument("rescale_to_T: T_new must be >= current T");
  const double span = static_cast<double>(path.returns.size()) * path.params.tau;
  if (span > path.params.T)
    throw std::invalid_argument("rescale_to_T: path must be restricted to the window [0, T]");

  const double log_ratio = std::log(T_new / path.params.T);
  double omega = 0.0;
  if (log_ratio > 0.0) {
    Rng rng = Rng::substream(seed, stream::omega);
    omega = std::sqrt(log_ratio) * rng.gauss();
  }
  const double lam = path.params.lambda();
  const double factor = std::exp(lam * omega - path.params.lambda2 * log_ratio);

  RescaledPath out;
  out.omega = omega;
  out.T_new = T_new;
  out.path.params = path.params;
  out.path.params.T = T_new;
  out.path.returns = path.returns;
  out.path.cumulative = path.cumulative;
  if (factor != 1.0) {
    for (double& r : out.path.returns) r *= factor;
    for (double& y : out.path.cumulative) y *= factor;
  }
  return out;
}

PsdCheckResult validate_kernel_psd(const MrwParams& params, double c,
                                   const std::vector<double>& xi_grid, double tolerance) {
  params.validate();
  if (c < 0.0 || c >= params.T)
    throw std::invalid_argument("validate_kernel_psd: need 0 <= c < T");

  PsdCheckResult result;
  result.table.reserve(xi_grid.size());
  for (double xi : xi_grid) {
    const double axi = std::abs(xi);
    double value;
    if (axi == 0.0) {
      value = 0.0;  // transform at 0 equals the kernel integral; skip
    } else {
      const double upper = 2.0 * M_PI * (params.T - c) * axi;
      const double shift = 2.0 * M_PI * axi * c;
      // composite GK15 over half-periods of sin: exact partition, no
      // cancellation tricks needed
      double acc = 0.0;
      double x0 = 0.0;
      while (x0 < upper) {
        const double x1 = std::min(x0 + M_PI, upper);
        // 15-point Kronrod on [x0,x1]
        const double h = 0.5 * (x1 - x0), mid = 0.5 * (x0 + x1);
        static const double nodes[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                                        0.207784955007898, 0.0};
        static const double w[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                    0.140653259715526, 0.169004726639267, 0.190350578064785,
                                    0.204432940075298, 0.209482141084728};
        auto g = [&](double x) { return (x + shift) == 0.0 ? 1.0 : std::sin(x) / (x + shift); };
        double s = w[7] * g(mid);
        for (int i = 0; i < 7; ++i)
          s += w[i] * (g(mid - h * nodes[i]) + g(mid + h * nodes[i]));
        acc += s * h;
        x0 = x1;
      }
      value = acc / (M_PI * axi);
    }
    result.table.push_back({xi, value});
    if (value < -tolerance) result.all_nonnegative = false;
  }
  return result;
}

std::vector<double> log_frequency_grid(double xi_min, double xi_max, std::size_t count) {
  if (!(xi_min > 0.0 && xi_max > xi_min && count >= 2))
    throw std::invalid_argument("log_frequency_grid: bad arguments");
  std::vector<double> grid(count);
  const double step = std::log(xi_max / xi_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = xi_min * std::exp(step * static_cast<double>(i));
  return grid;
}

}  // namespace mrw
