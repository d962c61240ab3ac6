#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrw/estimation.hpp"
#include "mrw/forecast.hpp"
#include "mrw/kernels.hpp"
#include "mrw/pricing.hpp"
#include "mrw/sgp_sim.hpp"

namespace py = pybind11;
using namespace mrw;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_mrw, m) {
  m.doc() = "Multifractal random walk: simulation, prediction kernels, forecasting, pricing";

  py::class_<MrwParams>(m, "MrwParams")
      .def(py::init([](double sigma, double lambda2, double T, double tau) {
             MrwParams p{sigma, lambda2, T, tau};
             p.validate();
             return p;
           }),
           py::arg("sigma") = 1.0, py::arg("lambda2") = 0.02, py::arg("T") = 2048.0,
           py::arg("tau") = 1.0 / 16.0)
      .def_readonly("sigma", &MrwParams::sigma)
      .def_readonly("lambda2", &MrwParams::lambda2)
      .def_readonly("T", &MrwParams::T)
      .def_readonly("tau", &MrwParams::tau)
      .def("__repr__", [](const MrwParams& p) {
        return "MrwParams(sigma=" + std::to_string(p.sigma) +
               ", lambda2=" + std::to_string(p.lambda2) + ", T=" + std::to_string(p.T) +
               ", tau=" + std::to_string(p.tau) + ")";
      });

  m.def("kernel_covariance", &kernel_covariance, py::arg("lag"), py::arg("params"));

  m.def(
      "sample_logvol",
      [](const MrwParams& p, std::size_t length, std::uint64_t seed) {
        return to_array(sample_logvol(p, length, seed).values);
      },
      py::arg("params"), py::arg("length"), py::arg("seed"));

  m.def(
      "synthesize_path",
      [](const MrwParams& p, std::size_t length, std::uint64_t seed, std::uint64_t noise_seed) {
        GaussianSequence logvol = sample_logvol(p, length, seed);
        MrwPath path = synthesize_path(logvol, noise_seed);
        return py::make_tuple(to_array(path.returns), to_array(path.cumulative));
      },
      py::arg("params"), py::arg("length"), py::arg("seed"), py::arg("noise_seed"));

  m.def(
      "rescale_to_T",
      [](const py::array_t<double>& returns, const MrwParams& p, double T_new,
         std::uint64_t seed) {
        MrwPath path;
        path.params = p;
        path.returns = to_vector(returns);
        path.cumulative.resize(path.returns.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < path.returns.size(); ++i) {
          acc += path.returns[i];
          path.cumulative[i] = acc;
        }
        RescaledPath r = rescale_to_T(path, T_new, seed);
        return py::make_tuple(to_array(r.path.returns), r.omega);
      },
      py::arg("returns"), py::arg("params"), py::arg("T_new"), py::arg("seed"));

  m.def(
      "validate_kernel_psd",
      [](const MrwParams& p, double c, std::optional<std::vector<double>> grid) {
        const std::vector<double> xi = grid ? *grid : log_frequency_grid();
        const PsdCheckResult res = validate_kernel_psd(p, c, xi);
        std::vector<double> xs, vals;
        for (const auto& row : res.table) {
          xs.push_back(row.xi);
          vals.push_back(row.value);
        }
        return py::make_tuple(res.all_nonnegative, to_array(xs), to_array(vals));
      },
      py::arg("params"), py::arg("c") = 0.0, py::arg("grid") = py::none());

  m.def("g_map", &g_map, py::arg("t"), py::arg("L"));
  m.def("kernel_K", &kernel_K, py::arg("t"), py::arg("s"));
  m.def("kernel_K_L", &kernel_K_L, py::arg("t"), py::arg("s"), py::arg("L"));
  m.def("kernel_K_LT", &kernel_K_LT, py::arg("t"), py::arg("s"), py::arg("L"), py::arg("T"));
  m.def("phi", &phi, py::arg("s"));
  m.def("phi_LT", &phi_LT, py::arg("s"), py::arg("L"), py::arg("T"));
  m.def("k_conv_phi", &k_conv_phi, py::arg("x"));

  m.def(
      "pred_constant", [](double tol) { return compute_pred_constant(tol).c_pred; },
      py::arg("tol") = 1e-5);
  m.def(
      "residual_variance",
      [](std::int64_t n) { return residual_variance(n, compute_pred_constant()); }, py::arg("n"));

  m.def(
      "log_ranges",
      [](const py::array_t<double>& cumulative, std::size_t steps_per_interval, double tau) {
        MrwPath path;
        path.params = MrwParams{};
        path.params.tau = tau;
        path.cumulative = to_vector(cumulative);
        path.returns.assign(path.cumulative.size(), 0.0);
        return to_array(log_ranges(path, steps_per_interval).values);
      },
      py::arg("cumulative"), py::arg("steps_per_interval"), py::arg("tau") = 1.0 / 16.0);

  m.def(
      "empirical_variogram",
      [](const py::array_t<double>& ranges, std::int64_t max_lag) {
        RangeSeries rs;
        rs.values = to_vector(ranges);
        VariogramEstimate v = empirical_variogram(rs, max_lag);
        return py::make_tuple(v.lags, to_array(v.values), v.pair_counts);
      },
      py::arg("ranges"), py::arg("max_lag"));

  m.def(
      "fit_loglinear",
      [](const py::array_t<double>& values, std::int64_t j_min, std::int64_t j_max) {
        VariogramEstimate v;
        v.values = to_vector(values);
        v.lags.resize(v.values.size());
        v.pair_counts.assign(v.values.size(), 0);
        for (std::size_t i = 0; i < v.lags.size(); ++i)
          v.lags[i] = static_cast<std::int64_t>(i) + 1;
        LambdaFit fit = fit_loglinear(v, j_min, j_max);
        py::dict d;
        d["lambda2_hat"] = fit.lambda2_hat;
        d["intercept_hat"] = fit.intercept_hat;
        d["residual_rms"] = fit.residual_rms;
        return d;
      },
      py::arg("variogram_values"), py::arg("j_min"), py::arg("j_max"));

  m.def("alpha_star", &alpha_star, py::arg("n"), py::arg("k"));
  m.def(
      "weight_row",
      [](std::int64_t n, std::int64_t N) { return to_array(weight_row(n, N).weights); },
      py::arg("n"), py::arg("N"));
  m.def(
      "exact_weights_oracle",
      [](std::int64_t n, std::int64_t N, const MrwParams& p) {
        return to_array(exact_weights_oracle(n, N, p));
      },
      py::arg("n"), py::arg("N"), py::arg("params"));

  m.def(
      "forecast_vol",
      [](const py::array_t<double>& sigmas, std::int64_t n, double lambda2) {
        VolHistory h;
        h.sigmas = to_vector(sigmas);
        const VolForecast f = forecast_vol(h, n, lambda2, compute_pred_constant());
        return py::make_tuple(f.value, forecast_sensitivity(f, compute_pred_constant()));
      },
      py::arg("history"), py::arg("n"), py::arg("lambda2"));

  m.def(
      "forecast_variance",
      [](const py::array_t<double>& sigmas, double t, double tau, double lambda2) {
        VolHistory h;
        h.sigmas = to_vector(sigmas);
        h.tau = tau;
        return forecast_variance(h, t, tau, lambda2, compute_pred_constant());
      },
      py::arg("history"), py::arg("t"), py::arg("tau"), py::arg("lambda2"));

  m.def(
      "kurtosis_limit",
      [](double t, double L, double lambda2, std::int64_t n_samples, std::uint64_t seed,
         int threads) {
        const KurtosisResult k = kurtosis_limit(t, L, lambda2, {n_samples, seed, threads});
        return py::make_tuple(k.value, k.std_error);
      },
      py::arg("t"), py::arg("L"), py::arg("lambda2"), py::arg("n_samples") = 4000000,
      py::arg("seed") = 20259, py::arg("threads") = 1);

  m.def(
      "kurtosis_finite_T",
      [](double t, double L, double T, double lambda2) {
        return kurtosis_finite_T(t, L, T, lambda2).value;
      },
      py::arg("t"), py::arg("L"), py::arg("T"), py::arg("lambda2"));

  m.def(
      "smile_curve",
      [](double spot, double maturity, double L, std::optional<double> T, double lambda2,
         const py::array_t<double>& sigmas, double tau, const py::array_t<double>& strikes) {
        PricingInputs in;
        in.spot_S0 = spot;
        in.maturity_t = maturity;
        in.window_L = L;
        in.T = T;
        in.lambda2 = lambda2;
        in.history.sigmas = to_vector(sigmas);
        in.history.tau = tau;
        const SmileCurve sc = smile_curve(in, to_vector(strikes), compute_pred_constant());
        py::dict d;
        d["strikes"] = to_array(sc.strikes);
        d["implied_vols"] = to_array(sc.implied_vols);
        d["sigma_t2"] = sc.sigma_t2;
        d["kappa_t"] = sc.kappa_t;
        d["kappa_std_error"] = sc.kappa_std_error;
        return d;
      },
      py::arg("spot"), py::arg("maturity"), py::arg("L"), py::arg("T"), py::arg("lambda2"),
      py::arg("history"), py::arg("tau"), py::arg("strikes"));

  m.def(
      "call_price",
      [](double spot, double maturity, double strike, double smile_vol) {
        PricingInputs in;
        in.spot_S0 = spot;
        in.maturity_t = maturity;
        in.history.sigmas = {1.0};
        return call_price(in, strike, smile_vol);
      },
      py::arg("spot"), py::arg("maturity"), py::arg("strike"), py::arg("smile_vol"));
}
