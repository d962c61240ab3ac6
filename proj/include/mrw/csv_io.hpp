#pragma once

#include <string>
#include <vector>

#include "mrw/estimation.hpp"
#include "mrw/forecast.hpp"
#include "mrw/sgp_sim.hpp"

namespace mrw {

/// Cumulative log-price series loaded from CSV. Accepts either
/// `step_index,cumulative_log_price` (used as-is) or `date,price`
/// (prices are converted to log and the first value is the origin).
std::vector<double> read_cumulative_csv(const std::string& path);

/// `k,sigma` history file, k = 0 most recent.
VolHistory read_history_csv(const std::string& path, double tau);

/// `lag,variogram,pairs` output.
void write_variogram_csv(const std::string& path, const VariogramEstimate& vario);
VariogramEstimate read_variogram_csv(const std::string& path);

void write_path_csv(const std::string& path, const MrwPath& p);

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mrw
