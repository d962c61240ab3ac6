#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <vector>

#include "mrw/kernels.hpp"
#include "mrw/linalg.hpp"
#include "mrw/quadrature.hpp"
#include "mrw/rng.hpp"

using namespace mrw;

namespace {
constexpr double kLn2 = 0.6931471805599453;

double integrate_KL_against(double t, double L, const std::function<double(double)>& f,
                            double T = 0.0) {
  auto g = [&](double s) {
    const double k = T > 0.0 ? kernel_K_LT(t, s, L, T) : kernel_K_L(t, s, L);
    return k * f(s);
  };
  return integrate_1d(g, -2.0 * L, 0.0, SingularitySpec::inv_sqrt_both(), 1e-10).value;
}

}  // namespace

TEST_CASE("g_map branch values and limits") {
  CHECK(g_map(1.0, 1.0) == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g_map(-3.0, 1.0) == doctest::Approx(-2.0 + std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g_map(1e-14, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(g_map(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(g_map(0.0, 1.0), std::domain_error);
}

TEST_CASE("kernel K point values and homogeneity") {
  CHECK(kernel_K(1.0, -1.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
  // K(a t, a s) = K(t, s) / a
  CHECK(kernel_K(4.0, -4.0) == doctest::Approx(1.0 / (8.0 * M_PI)).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_K(-1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(kernel_K(1.0, 1.0), std::domain_error);
}

TEST_CASE("kernel normalisations") {
  for (double t : {0.01, 0.1, 1.0}) {
    QuadratureResult k = integrate_1d([t](double u) { return kernel_K(t, -u); }, 0.0,
                                      std::numeric_limits<double>::infinity(), {}, 1e-10);
    CHECK(std::abs(k.value - 1.0) < 1e-8);
    const double kl = integrate_KL_against(t, 1.0, [](double) { return 1.0; });
    CHECK(std::abs(kl - 1.0) < 1e-8);
  }
}

TEST_CASE("K_L approaches K for large windows") {
  const double L = 1e6;
  CHECK(std::abs(kernel_K_L(1.0, -1.0, L) - kernel_K(1.0, -1.0)) < 1e-4);
  // gap shrinks monotonically along growing L, within the 10 t/L rate
  double prev = std::numeric_limits<double>::infinity();
  for (double Lg : {10.0, 100.0, 1000.0, 10000.0}) {
    const double k = kernel_K(1.0, -1.0);
    const double gap = std::abs(kernel_K_L(1.0, -1.0, Lg) - k);
    CHECK(gap < prev);
    CHECK(gap / k <= 10.0 * 1.0 / Lg);
    prev = gap;
  }
}

TEST_CASE("K_L window symmetry") {
  const double L = 1.5;
  for (double t : {0.3, 1.1, 2.7}) {
    for (double s : {-0.4, -1.5, -2.3}) {
      const double direct = kernel_K_L(t, s, L);
      const double mirrored = kernel_K_L(-2.0 * L - t, -2.0 * L - s, L);
      CHECK(direct == doctest::Approx(mirrored).epsilon(1e-12));
    }
  }
}

TEST_CASE("K_L endpoint guard") {
  CHECK_THROWS_AS(kernel_K_L(1.0, -1e-14, 1.0), std::domain_error);
  CHECK_THROWS_AS(kernel_K_L(1.0, -2.0 + 1e-14, 1.0), std::domain_error);
}

TEST_CASE("phi values and mass") {
  CHECK(phi(-0.5) == doctest::Approx(1.0 / (M_PI * kLn2)).epsilon(1e-14));
  QuadratureResult mass =
      integrate_1d([](double s) { return phi(s); }, -1.0, 0.0, SingularitySpec::inv_sqrt_both(),
                   1e-10);
  CHECK(mass.value == doctest::Approx(1.0 / (2.0 * kLn2)).epsilon(1e-10));
  CHECK_THROWS_AS(phi(0.5), std::domain_error);
}

TEST_CASE("phi solves the unit log-potential equation") {
  for (double t : {-0.9, -0.5, -0.1}) {
    auto f = [t](double s) { return std::log(1.0 / std::abs(t - s)) * phi(s); };
    QuadratureResult r = integrate_1d(f, -1.0, 0.0, SingularitySpec::inv_sqrt_both(), 1e-9);
    CHECK(std::abs(r.value - 1.0) < 1e-6);
  }
}

TEST_CASE("k_conv_phi: closed form is verified and matches quadrature") {
  CHECK(k_conv_phi_uses_closed_form());
  CHECK(k_conv_phi(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k_conv_phi(1.0) == doctest::Approx(-0.2715533031636119).epsilon(1e-9));
  double prev = k_conv_phi(0.0);
  for (double x : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double v = k_conv_phi(x);
    CHECK(v < prev);
    prev = v;
    CHECK(std::abs(v - k_conv_phi_quadrature(x)) < 1e-6);
  }
}

TEST_CASE("phi_LT scaling") {
  const double L = 3.0;
  // T = 2L reduces to the rescaled phi
  for (double s : {-0.5, -3.0, -5.5}) {
    CHECK(phi_LT(s, L, 2.0 * L) == doctest::Approx(phi(s / (2.0 * L)) / (2.0 * L)).epsilon(1e-12));
  }
  CHECK(phi_LT(-L, L, 2.0 * L) == doctest::Approx(1.0 / (2.0 * M_PI * L * kLn2)).epsilon(1e-12));
  // mass: pi / (2 pi ln2 + pi ln(T/2L))
  const double T = 20.0 * L;
  auto f = [&](double s) { return phi_LT(s, L, T); };
  QuadratureResult mass = integrate_1d(f, -2.0 * L, 0.0, SingularitySpec::inv_sqrt_both(), 1e-10);
  CHECK(mass.value ==
        doctest::Approx(M_PI / (2.0 * M_PI * kLn2 + M_PI * std::log(T / (2.0 * L)))).epsilon(1e-9));
}

TEST_CASE("K_LT reduces to K_L as t -> 0 and its correction is negative") {
  const double L = 1.0, T = 50.0;
  const double s = -0.7;
  // the correction dies like sqrt(t) near the window edge
  CHECK(std::abs(kernel_K_LT(1e-10, s, L, T) - kernel_K_L(1e-10, s, L)) < 3e-6);
  CHECK(std::abs(kernel_K_LT(1e-14, s, L, T) - kernel_K_L(1e-14, s, L)) < 3e-8);
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(k_LT_correction_coefficient(t, L, T) <= 0.0);
    CHECK(kernel_K_LT(t, s, L, T) <= kernel_K_L(t, s, L));
  }
}

TEST_CASE("K_LT correction decays like 1/ln T") {
  const double L = 1.0, t = 1.0;
  const double c3 = k_LT_correction_coefficient(t, L, 1e3 * 2.0 * L);
  const double c6 = k_LT_correction_coefficient(t, L, 1e6 * 2.0 * L);
  const double ratio = c6 / c3;
  CHECK(ratio > 0.45);
  CHECK(ratio < 0.60);  // halves-ish when T goes from 10^3 to 10^6 times 2L
}

TEST_CASE("K_LT correction is separable in (t, s)") {
  const double L = 1.0, T = 100.0;
  for (double t : {0.2, 0.8}) {
    const double coeff = k_LT_correction_coefficient(t, L, T);
    for (double s : {-0.3, -1.0, -1.7}) {
      const double diff = kernel_K_LT(t, s, L, T) - kernel_K_L(t, s, L);
      const double weight = 1.0 / (M_PI * std::sqrt(-s * (2.0 * L + s)));
      CHECK(diff == doctest::Approx(coeff * weight).epsilon(1e-12));
    }
  }
}

TEST_CASE("predicting a constant reproduces it up to the finite-T pullback") {
  const double L = 1.0, T = 100.0, t = 0.4;
  // quotient-space kernel: adding a constant to the trace adds the same
  // constant to the prediction
  const double base = integrate_KL_against(t, L, [](double s) { return std::sin(s); });
  const double shifted = integrate_KL_against(t, L, [](double s) { return std::sin(s) + 2.5; });
  CHECK(shifted - base == doctest::Approx(2.5).epsilon(1e-8));
  // finite-T: the constant is pulled toward zero by exactly 1 + coeff
  const double one = integrate_KL_against(t, L, [](double) { return 1.0; }, T);
  CHECK(one == doctest::Approx(1.0 + k_LT_correction_coefficient(t, L, T)).epsilon(1e-8));
}

TEST_CASE("property: kernel masses across random window geometries") {
  Rng gen(777);
  for (int trial = 0; trial < 10; ++trial) {
    const double L = 0.2 + 5.0 * gen.uniform();
    const double T = 2.0 * L * (1.5 + 100.0 * gen.uniform());
    const double t = (T - 2.0 * L) * 0.5 * gen.uniform() + 1e-3;
    const double mass_L =
        integrate_1d([&](double s) { return kernel_K_L(t, s, L); }, -2.0 * L, 0.0,
                     SingularitySpec::inv_sqrt_both(), 1e-10)
            .value;
    CHECK(mass_L == doctest::Approx(1.0).epsilon(1e-8));
    const double mass_LT =
        integrate_1d([&](double s) { return kernel_K_LT(t, s, L, T); }, -2.0 * L, 0.0,
                     SingularitySpec::inv_sqrt_both(), 1e-10)
            .value;
    CHECK(mass_LT ==
          doctest::Approx(1.0 + k_LT_correction_coefficient(t, L, T)).epsilon(1e-8));
  }
}

TEST_CASE("window geometry validation") {
  WindowGeometry w;
  w.L = 1.0;
  w.T = 1.5;  // 2L < T fails
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.T = 3.0;
  CHECK_NOTHROW(w.validate());
}

TEST_CASE("prediction constant integrand is symmetric under (a,b) swap") {
  auto f = [](double a, double b) {
    const double ta = std::tan(a), tb = std::tan(b);
    return std::log(std::abs(ta * ta - tb * tb));
  };
  for (double a : {0.2, 0.7, 1.3}) {
    for (double b : {0.4, 1.0, 1.5}) {
      CHECK(f(a, b) == doctest::Approx(f(b, a)).epsilon(1e-15));
    }
  }
}

TEST_CASE("prediction constant: cached value, dual-route agreement") {
  const ForecastConstants c1 = compute_pred_constant(1e-5);
  const ForecastConstants c2 = compute_pred_constant(1e-3);  // cache: same value back
  CHECK(c1.c_pred == c2.c_pred);
  const QuadratureResult mc = pred_constant_mc(500000, 4242);
  CHECK(std::abs(c1.c_pred - mc.value) < 4.0 * mc.error_estimate);
  // the integral evaluates to 2 ln 2
  CHECK(c1.c_pred == doctest::Approx(2.0 * kLn2).epsilon(2e-5));
}

TEST_CASE("residual variance grows logarithmically") {
  const ForecastConstants c = compute_pred_constant();
  CHECK(residual_variance(1, c) == doctest::Approx(c.c_pred));
  CHECK(residual_variance(20, c) ==
        doctest::Approx(std::log(20.0) + c.c_pred).epsilon(1e-14));
  double prev = residual_variance(1, c);
  for (std::int64_t n : {2, 5, 17, 100}) {
    CHECK(residual_variance(n, c) > prev);
    prev = residual_variance(n, c);
  }
  CHECK_THROWS_AS(residual_variance(0, c), std::invalid_argument);
}

TEST_CASE("discrete conditional expectation reproduces the K_LT prediction") {
  // master oracle: cell-averaged covariances of ln(T/|.|) on a uniform
  // grid over the window vs the kernel integral, smooth test functions
  const double L = 1.0;
  const double T = 100.0 * 2.0 * L;
  const std::size_t M = 600;  // coarser than the acceptance run, still < 1%
  const double h = 2.0 * L / static_cast<double>(M);

  auto p1 = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)) - x; };
  auto p2 = [](double x) { return x == 0.0 ? 0.0 : 0.5 * x * x * std::log(std::abs(x)) - 0.25 * x * x; };
  // (1/h^2) int_0^h int_0^h ln|a + u - v| du dv
  auto avg_ln = [&](double a) {
    auto ints = [&](double lo, double hi, double sign) {
      const double i1 = p1(a + hi) - p1(a + lo);
      const double iw = (p2(a + hi) - a * p1(a + hi)) - (p2(a + lo) - a * p1(a + lo));
      return h * i1 - sign * iw;
    };
    return (ints(0.0, h, 1.0) + ints(-h, 0.0, -1.0)) / (h * h);
  };

  std::vector<double> col(M);
  for (std::size_t d = 0; d < M; ++d)
    col[d] = std::log(T) - avg_ln(static_cast<double>(d) * h);

  std::vector<double> s_mid(M);
  for (std::size_t i = 0; i < M; ++i)
    s_mid[i] = -2.0 * L + (static_cast<double>(i) + 0.5) * h;

  struct TestFn {
    const char* name;
    std::function<double(double)> f;
  };
  const TestFn fns[] = {
      {"one", [](double) { return 1.0; }},
      {"linear", [](double s) { return s; }},
      {"sine", [L](double s) { return std::sin(M_PI * s / (2.0 * L)); }},
  };

  for (double t : {0.1 * L, 0.5 * L}) {
    std::vector<double> cross(M);
    for (std::size_t i = 0; i < M; ++i) {
      const double a = t - (s_mid[i] + 0.5 * h);
      const double b = t - (s_mid[i] - 0.5 * h);
      cross[i] = std::log(T) - (p1(b) - p1(a)) / h;
    }
    const std::vector<double> w = levinson_solve(col, cross);
    for (const auto& fn : fns) {
      double discrete = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        // cell average of f (Simpson)
        const double fa = fn.f(s_mid[i] - 0.5 * h), fm = fn.f(s_mid[i]), fb = fn.f(s_mid[i] + 0.5 * h);
        discrete += w[i] * (fa + 4.0 * fm + fb) / 6.0;
      }
      const double kernel = integrate_KL_against(t, L, fn.f, T);
      INFO("t=", t, " f=", fn.name, " discrete=", discrete, " kernel=", kernel);
      CHECK(std::abs(discrete - kernel) <= 0.01 * std::max(std::abs(kernel), 0.1));
    }
  }
}
