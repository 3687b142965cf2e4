#pragma once

#include <string>
#include <string_view>

#include "caprisk/model.hpp"

namespace caprisk {

/// AR(1) law x' = (1 - rho) * mean + rho * x + e, e ~ N(0, delta^2), and the
/// number of states used to discretize it.
struct AR1Params {
  double rho = 0.0;
  double delta = 0.0;
  double mean = 0.0;
  int states = 1;
};

/// Which return structure an economy uses.
enum class Economy {
  Full,      // persistent mean and stochastic volatility
  ModelI,    // mean fixed at mu_bar, stochastic volatility
  ModelII,   // persistent mean, volatility fixed at sigma_hat
  IID,       // both fixed: log R = mu_bar + sigma_hat * zeta
  Constant,  // R fixed at exp(mu_bar + sigma_hat^2 / 2)
};

std::string_view economy_name(Economy e);
Economy parse_economy(std::string_view name);

/// Parameter-level description of an economy. Defaults are the benchmark
/// calibration (Norwegian return data; income as in the heterogeneous-agent
/// literature).
struct EconomyParams {
  double beta = 0.95;
  double gamma = 2.0;
  AR1Params chi{0.9770, 0.1414213562373095, 0.0, 5};  // delta^2 = 0.02
  AR1Params mu{0.5722, 0.0067, 0.0281, 5};
  AR1Params log_sigma{0.2895, 0.1896, -3.2556, 5};
  double eta_std = 0.27386127875258306;  // variance 0.075
  double tauchen_width = 3.0;
  Economy economy = Economy::ModelI;
  ExpectationRule expectation{};

  /// Stationary level of volatility, exp(sigma_bar + delta^2 / (2 (1 - rho^2))).
  double sigma_hat() const;
};

/// Benchmark calibration for one of the four comparison economies.
EconomyParams calibrated(Economy e, double gamma = 2.0, double beta = 0.95);

/// Discretizes the AR(1) laws and assembles the model. A zero innovation std
/// yields a single state at the mean (the deterministic limit).
ModelSpec build_model(const EconomyParams& params);
ExogenousProcess build_process(const EconomyParams& params);

}  // namespace caprisk
