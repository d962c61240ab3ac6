#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrw/csv_io.hpp"
#include "mrw/estimation.hpp"
#include "mrw/forecast.hpp"
#include "mrw/kernels.hpp"
#include "mrw/pricing.hpp"
#include "mrw/quadrature.hpp"
#include "mrw/sgp_sim.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;
constexpr std::uint64_t kDefaultSeed = 20259;

struct NumericGateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_json(const std::string& out_path, const json& j) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw mrw::CsvError("cannot write " + out_path);
  f << j.dump(2) << "\n";
  if (!f) throw mrw::CsvError("write failed: " + out_path);
}

std::vector<double> parse_strikes(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--strikes", "expected lo:hi:step");
  const double lo = std::stod(spec.substr(0, c1));
  const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (!(step > 0.0) || !(hi >= lo)) throw CLI::ValidationError("--strikes", "need lo<=hi, step>0");
  std::vector<double> strikes;
  for (double k = lo; k <= hi + 1e-12 * step; k += step) strikes.push_back(k);
  return strikes;
}

int run_simulate(const mrw::MrwParams& params, double days, std::uint64_t seed,
                 const std::string& out) {
  const auto steps = static_cast<std::size_t>(std::llround(days / params.tau));
  if (steps == 0) throw CLI::ValidationError("--days", "window too short for one step");
  mrw::GaussianSequence logvol = mrw::sample_logvol(params, steps, seed);
  mrw::MrwPath path = mrw::synthesize_path(logvol, seed);
  mrw::write_path_csv(out, path);
  return kExitOk;
}

int run_variogram(const std::string& input, std::size_t steps_per_interval, std::int64_t max_lag,
                  const std::string& out, const mrw::MrwParams& params) {
  std::vector<double> cumulative = mrw::read_cumulative_csv(input);
  mrw::MrwPath path;
  path.params = params;
  path.cumulative = cumulative;
  path.returns.resize(cumulative.size(), 0.0);
  mrw::RangeSeries ranges = mrw::log_ranges(path, steps_per_interval);
  mrw::VariogramEstimate vario = mrw::empirical_variogram(ranges, max_lag);
  mrw::write_variogram_csv(out, vario);
  return kExitOk;
}

int run_fit(const std::string& input, std::int64_t min_lag, std::int64_t max_lag,
            const std::string& out) {
  mrw::VariogramEstimate vario = mrw::read_variogram_csv(input);
  mrw::LambdaFit fit = mrw::fit_loglinear(vario, min_lag, max_lag);
  json j = {{"version", 1},
            {"lambda2_hat", fit.lambda2_hat},
            {"intercept_hat", fit.intercept_hat},
            {"residual_rms", fit.residual_rms},
            {"lag_window", {fit.j_min, fit.j_max}}};
  emit_json(out, j);
  return kExitOk;
}

int run_forecast(const std::string& history_path, double lambda2, std::int64_t n_min,
                 std::int64_t n_max, double tau, const std::string& out) {
  mrw::VolHistory history = mrw::read_history_csv(history_path, tau);
  mrw::ForecastConstants constants = mrw::compute_pred_constant();
  std::ofstream f(out);
  if (!f) throw mrw::CsvError("cannot write " + out);
  f << "n,forecast,sensitivity\n";
  f.precision(17);
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    mrw::VolForecast fc = mrw::forecast_vol(history, n, lambda2, constants);
    f << n << ',' << fc.value << ',' << mrw::forecast_sensitivity(fc, constants) << '\n';
  }
  if (!f) throw mrw::CsvError("write failed: " + out);
  return kExitOk;
}

int run_price(const std::string& history_path, double lambda2, double spot, double maturity,
              double window_L, std::optional<double> T, double tau, const std::string& strikes_spec,
              std::int64_t mc_samples, std::uint64_t seed, int threads, const std::string& out,
              const std::string& json_out) {
  mrw::PricingInputs inputs;
  inputs.spot_S0 = spot;
  inputs.maturity_t = maturity;
  inputs.window_L = window_L;
  inputs.T = T;
  inputs.lambda2 = lambda2;
  inputs.history = mrw::read_history_csv(history_path, tau);

  mrw::ForecastConstants constants = mrw::compute_pred_constant();
  mrw::McBudget mc{mc_samples, seed, threads};
  std::vector<double> strikes = parse_strikes(strikes_spec);
  mrw::SmileCurve curve = mrw::smile_curve(inputs, strikes, constants, mc);

  std::ofstream f(out);
  if (!f) throw mrw::CsvError("cannot write " + out);
  f << "strike,implied_vol,call_price\n";
  f.precision(17);
  for (std::size_t i = 0; i < curve.strikes.size(); ++i) {
    const double vol = curve.implied_vols[i];
    const double price = vol > 0.0 ? mrw::call_price(inputs, curve.strikes[i], vol) : 0.0;
    f << curve.strikes[i] << ',' << vol << ',' << price << '\n';
  }
  if (!f) throw mrw::CsvError("write failed: " + out);

  if (!json_out.empty()) {
    json j = {{"version", 1},
              {"sigma_t2", curve.sigma_t2},
              {"kappa_t", curve.kappa_t},
              {"kappa_std_error", curve.kappa_std_error}};
    emit_json(json_out, j);
  }
  return kExitOk;
}

int run_kernels(double L, std::optional<double> T, const std::vector<double>& t_values,
                std::size_t s_count, const std::string& out) {
  const double T_eff = T ? *T : 1e6 * L;  // large T: the correction is ~0
  std::ofstream f(out);
  if (!f) throw mrw::CsvError("cannot write " + out);
  f << "t,s,K_L,K_LT\n";
  f.precision(12);
  for (double t : t_values) {
    for (std::size_t i = 0; i < s_count; ++i) {
      // arcsine-spaced nodes keep clear of the 1/sqrt endpoints
      const double v = M_PI / 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(s_count);
      const double s = -2.0 * L * std::sin(v) * std::sin(v);
      f << t << ',' << s << ',' << mrw::kernel_K_L(t, s, L) << ','
        << mrw::kernel_K_LT(t, s, L, T_eff) << '\n';
    }
  }
  if (!f) throw mrw::CsvError("write failed: " + out);
  return kExitOk;
}

int run_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  " << detail << "\n";
    if (!ok) ++failures;
  };

  {  // constant log-potential identity of the arcsine weight on (0,2)
    const double target = -M_PI * std::log(2.0);
    double worst = 0.0;
    for (int i = 1; i <= 19; i += 2) {
      const double t = 0.1 * i;
      auto f = [t](double s) { return std::log(std::abs(t - s)) / std::sqrt(2.0 * s - s * s); };
      const double v =
          mrw::integrate_1d(f, 0.0, 2.0, mrw::SingularitySpec::inv_sqrt_both(), 1e-9).value;
      worst = std::max(worst, std::abs(v - target));
    }
    report("log-potential identity", worst < 1e-6, "max |err| = " + std::to_string(worst));
  }
  {  // defining property of phi
    double worst = 0.0;
    for (int i = 1; i <= 19; ++i) {
      const double t = -i / 20.0;
      auto f = [t](double s) { return std::log(1.0 / std::abs(t - s)) * mrw::phi(s); };
      const double v =
          mrw::integrate_1d(f, -1.0, 0.0, mrw::SingularitySpec::inv_sqrt_both(), 1e-9).value;
      worst = std::max(worst, std::abs(v - 1.0));
    }
    report("phi convolution", worst < 1e-4, "max |err| = " + std::to_string(worst));
  }
  {  // kernel normalisations
    double worst = 0.0;
    for (double t : {0.01, 0.1, 1.0}) {
      const double vK =
          mrw::integrate_1d([t](double s) { return mrw::kernel_K(t, -s); }, 0.0,
                            std::numeric_limits<double>::infinity(), {}, 1e-10)
              .value;
      auto fL = [t](double s) { return mrw::kernel_K_L(t, s, 1.0); };
      const double vKL =
          mrw::integrate_1d(fL, -2.0, 0.0, mrw::SingularitySpec::inv_sqrt_both(), 1e-10).value;
      worst = std::max({worst, std::abs(vK - 1.0), std::abs(vKL - 1.0)});
    }
    report("kernel normalisation", worst < 1e-8, "max |err| = " + std::to_string(worst));
  }
  {  // prediction constant: quadrature vs MC cross-check
    const mrw::ForecastConstants c = mrw::compute_pred_constant();
    const mrw::QuadratureResult mc = mrw::pred_constant_mc(400000, kDefaultSeed);
    const double gap = std::abs(c.c_pred - mc.value);
    const bool ok = gap <= 4.0 * mc.error_estimate && std::abs(c.c_pred - 1.33) <= 0.10;
    report("prediction constant", ok,
           "C = " + std::to_string(c.c_pred) + ", MC gap = " + std::to_string(gap));
  }
  return failures == 0 ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multifractal random walk toolkit: simulation, estimation, forecasting, pricing"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  app.add_option("--seed", seed, "Master seed (fixed default for reproducibility)");
  app.add_option("--threads", threads, "Worker threads for Monte Carlo operations")
      ->check(CLI::PositiveNumber);

  mrw::MrwParams params;

  auto* sim = app.add_subcommand("simulate", "Sample a discretised MRW path");
  double days = 1512.0;
  std::string sim_out;
  sim->add_option("--lambda2", params.lambda2, "Intermittency coefficient");
  sim->add_option("--sigma", params.sigma, "Volatility scale");
  sim->add_option("--T", params.T, "Correlation length (days)");
  sim->add_option("--tau", params.tau, "Sampling step (days)");
  sim->add_option("--days", days, "Length of the simulated window (days)");
  sim->add_option("--out", sim_out, "Output CSV (step,return,cumulative)")->required();

  auto* vario = app.add_subcommand("variogram", "Logvariogram of a cumulative log-price series");
  std::string vario_in, vario_out;
  std::size_t steps_per_interval = 16;
  std::int64_t vario_max_lag = 50;
  vario->add_option("--input", vario_in, "CSV: step_index,cumulative_log_price or date,price")
      ->required();
  vario->add_option("--steps-per-interval", steps_per_interval, "Sub-steps per unit interval");
  vario->add_option("--max-lag", vario_max_lag, "Largest lag");
  vario->add_option("--out", vario_out, "Output CSV (lag,variogram,pairs)")->required();
  vario->add_option("--tau", params.tau, "Sampling step of the input series");

  auto* fit = app.add_subcommand("fit", "Least-squares lambda2 from a variogram");
  std::string fit_in, fit_out;
  std::int64_t min_lag = 1, max_lag = 50;
  fit->add_option("--input", fit_in, "Variogram CSV")->required();
  fit->add_option("--min-lag", min_lag, "Smallest lag in the fit window");
  fit->add_option("--max-lag", max_lag, "Largest lag in the fit window");
  fit->add_option("--out", fit_out, "Output JSON (default stdout)");

  auto* fc = app.add_subcommand("forecast", "Parameter-free volatility forecast");
  std::string fc_hist, fc_out;
  double fc_lambda2 = 0.02, fc_tau = 1.0 / 16.0;
  std::int64_t n_min = 1, n_max = 20;
  fc->add_option("--history", fc_hist, "CSV k,sigma (k = 0 most recent)")->required();
  fc->add_option("--lambda2", fc_lambda2, "Intermittency coefficient")->required();
  fc->add_option("--n-min", n_min, "First horizon (steps)");
  fc->add_option("--n-max", n_max, "Last horizon (steps)");
  fc->add_option("--tau", fc_tau, "Step length of the history");
  fc->add_option("--out", fc_out, "Output CSV (n,forecast,sensitivity)")->required();

  auto* price = app.add_subcommand("price", "Smile and call prices from the forecast");
  std::string pr_hist, pr_out, pr_json, strikes_spec;
  double pr_lambda2 = 0.02, spot = 100.0, maturity = 0.25, window_L = 252.0, pr_tau = 1.0 / 16.0;
  double pr_T = 0.0;
  std::int64_t pr_mc = 4'000'000;
  price->add_option("--history", pr_hist, "CSV k,sigma")->required();
  price->add_option("--lambda2", pr_lambda2, "Intermittency coefficient")->required();
  price->add_option("--spot", spot, "Spot price S0");
  price->add_option("--maturity", maturity, "Maturity t (days)");
  price->add_option("--window-L", window_L, "Observation half-window L (days)");
  price->add_option("--T", pr_T, "Correlation length (0: infinite-T limit)");
  price->add_option("--tau", pr_tau, "Step length of the history");
  price->add_option("--strikes", strikes_spec, "lo:hi:step")->required();
  price->add_option("--mc-samples", pr_mc, "Monte Carlo budget for the kurtosis");
  price->add_option("--out", pr_out, "Output CSV (strike,implied_vol,call_price)")->required();
  price->add_option("--json", pr_json, "Optional JSON output for (sigma_t2, kappa_t)");

  auto* ker = app.add_subcommand("kernels", "Tabulate the prediction kernels as CSV");
  std::string ker_out;
  double ker_L = 1.0, ker_T = 0.0;
  std::vector<double> ker_t = {0.1, 0.5, 1.0};
  std::size_t s_count = 64;
  ker->add_option("--L", ker_L, "Half-window length");
  ker->add_option("--T", ker_T, "Correlation length (0: effectively infinite)");
  ker->add_option("--t", ker_t, "Future times to tabulate");
  ker->add_option("--s-count", s_count, "Number of s nodes");
  ker->add_option("--out", ker_out, "Output CSV (t,s,K_L,K_LT)")->required();

  app.add_subcommand("selftest", "Run the built-in numeric identities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err = {{"error", e.what()}, {"code", kExitConfig}};
    std::cerr << err.dump() << "\n";
    return kExitConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(params, days, seed, sim_out);
    if (vario->parsed())
      return run_variogram(vario_in, steps_per_interval, vario_max_lag, vario_out, params);
    if (fit->parsed()) return run_fit(fit_in, min_lag, max_lag, fit_out);
    if (fc->parsed()) return run_forecast(fc_hist, fc_lambda2, n_min, n_max, fc_tau, fc_out);
    if (price->parsed()) {
      std::optional<double> T_opt;
      if (pr_T > 0.0) T_opt = pr_T;
      return run_price(pr_hist, pr_lambda2, spot, maturity, window_L, T_opt, pr_tau, strikes_spec,
                       pr_mc, seed, threads, pr_out, pr_json);
    }
    if (ker->parsed()) {
      std::optional<double> T_opt;
      if (ker_T > 0.0) T_opt = ker_T;
      return run_kernels(ker_L, T_opt, ker_t, s_count, ker_out);
    }
    return run_selftest();
  } catch (const mrw::CsvError& e) {
    json err = {{"error", e.what()}, {"code", kExitIo}};
    std::cerr << err.dump() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    json err = {{"error", e.what()}, {"code", kExitConfig}};
    std::cerr << err.dump() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    json err = {{"error", e.what()}, {"code", kExitNumeric}};
    std::cerr << err.dump() << "\n";
    return kExitNumeric;
  }
}
