#include "caprisk/economy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "caprisk/discretize.hpp"

namespace caprisk {

std::string_view economy_name(Economy e) {
  switch (e) {
    case Economy::Full: return "full";
    case Economy::ModelI: return "model_i";
    case Economy::ModelII: return "model_ii";
    case Economy::IID: return "iid";
    case Economy::Constant: return "constant";
  }
  return "unknown";
}

Economy parse_economy(std::string_view name) {
  for (Economy e : {Economy::Full, Economy::ModelI, Economy::ModelII, Economy::IID, Economy::Constant}) {
    if (economy_name(e) == name) return e;
  }
  throw std::invalid_argument("unknown economy '" + std::string(name) +
                              "' (expected full, model_i, model_ii, iid or constant)");
}

double EconomyParams::sigma_hat() const {
  const double r = log_sigma.rho;
  return std::exp(log_sigma.mean + log_sigma.delta * log_sigma.delta / (2.0 * (1.0 - r * r)));
}

EconomyParams calibrated(Economy e, double gamma, double beta) {
  EconomyParams p;
  p.economy = e;
  p.gamma = gamma;
  p.beta = beta;
  return p;
}

namespace {

FiniteChain ar1_chain(const AR1Params& ar, double width) {
  if (ar.delta == 0.0) return FiniteChain::constant(ar.mean);
  return tauchen(ar.rho, ar.delta, ar.mean, ar.states, width);
}

FiniteChain log_chain(const AR1Params& ar, double width) {
  if (ar.delta == 0.0) return FiniteChain::constant(std::exp(ar.mean));
  return discretize_log_volatility(ar.rho, ar.delta, ar.mean, ar.states, width);
}

}  // namespace

ExogenousProcess build_process(const EconomyParams& p) {
  if (!(p.eta_std >= 0.0) || !std::isfinite(p.eta_std)) {
    throw std::invalid_argument("eta_std must be finite and non-negative");
  }
  FiniteChain chi = ar1_chain(p.chi, p.tauchen_width);
  const bool mu_fixed = p.economy == Economy::ModelI || p.economy == Economy::IID ||
                        p.economy == Economy::Constant;
  const bool sigma_fixed = p.economy == Economy::ModelII || p.economy == Economy::IID ||
                           p.economy == Economy::Constant;
  FiniteChain mu = mu_fixed ? FiniteChain::constant(p.mu.mean) : ar1_chain(p.mu, p.tauchen_width);
  FiniteChain sigma =
      sigma_fixed ? FiniteChain::constant(p.sigma_hat()) : log_chain(p.log_sigma, p.tauchen_width);
  ReturnMode mode = ReturnMode::Stochastic;
  if (p.economy == Economy::IID) mode = ReturnMode::IIDCollapsed;
  if (p.economy == Economy::Constant) mode = ReturnMode::Constant;
  return ExogenousProcess(std::move(chi), std::move(mu), std::move(sigma), p.eta_std, mode);
}

ModelSpec build_model(const EconomyParams& p) {
  return ModelSpec(p.beta, UtilitySpec::crra(p.gamma), build_process(p), p.expectation);
}

}  // namespace caprisk
