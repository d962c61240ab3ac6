#pragma once

#include <cmath>
#include <stdexcept>

namespace mrw {

/// Model parameters: volatility scale sigma (per sqrt time unit),
/// intermittency coefficient lambda2, correlation length T and sampling
/// step tau (both in time units; one "day" is the unit throughout).
struct MrwParams {
  double sigma = 1.0;
  double lambda2 = 0.02;
  double T = 2048.0;
  double tau = 1.0 / 16.0;

  void validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("MrwParams: sigma must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("MrwParams: tau must be > 0");
    if (!(T >= tau)) throw std::invalid_argument("MrwParams: T must be >= tau");
    if (lambda2 < 0.0) throw std::invalid_argument("MrwParams: lambda2 must be >= 0");
    if (!(4.0 * lambda2 < 1.0))
      throw std::invalid_argument("MrwParams: existence requires 4*lambda2 < 1");
  }

  double lambda() const { return std::sqrt(lambda2); }
};

}  // namespace mrw
