#pragma once

#include "caprisk/chain.hpp"

namespace caprisk {

/// Tauchen discretization of x' = (1 - rho) * mean + rho * x + e, e ~ N(0, delta^2).
///
/// States are equally spaced on mean +/- width * delta / sqrt(1 - rho^2).
/// Row i assigns each state the normal mass of its midpoint cell given the
/// conditional mean of state i; tail mass is absorbed by the end states and the
/// last cell takes the residual so rows sum to one exactly.
FiniteChain tauchen(double rho, double delta, double mean, int n, double width = 3.0);

/// Tauchen in log space for log s' = (1 - rho) * log_mean + rho * log s + e;
/// returned states are the levels exp(.), all strictly positive.
FiniteChain discretize_log_volatility(double rho, double delta, double log_mean, int n,
                                      double width = 3.0);

}  // namespace caprisk
