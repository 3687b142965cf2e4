#pragma once

#include <cmath>

#include "caprisk/economy.hpp"
#include "caprisk/model.hpp"

namespace testing_support {

// Deterministic economy: R and Y fixed. Volatility is set far below double
// resolution so exp(sigma^2 / 2) == 1 and the gross return is exactly R.
inline caprisk::ModelSpec constant_model(double R, double Y, double beta, caprisk::UtilitySpec u) {
  using caprisk::FiniteChain;
  caprisk::ExogenousProcess proc(FiniteChain::constant(std::log(Y)), FiniteChain::constant(std::log(R)),
                                 FiniteChain::constant(1e-12), 0.0, caprisk::ReturnMode::Constant);
  return caprisk::ModelSpec(beta, u, std::move(proc));
}

// Calibrated economy with a coarse quadrature for fast tests.
inline caprisk::ModelSpec small_model(caprisk::Economy e, int nodes = 5, double gamma = 2.0) {
  caprisk::EconomyParams p = caprisk::calibrated(e, gamma);
  p.expectation.nodes = nodes;
  return caprisk::build_model(p);
}

}  // namespace testing_support
