#include "caprisk/process.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

namespace caprisk {

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

FiniteChain collapse_to_mean(const FiniteChain& chain) {
  return FiniteChain::constant(chain.stationary_mean([](double x) { return x; }));
}

}  // namespace

ExogenousProcess::ExogenousProcess(FiniteChain chi, FiniteChain mu, FiniteChain sigma,
                                   double eta_std, ReturnMode mode)
    : chi_(std::move(chi)), mu_(std::move(mu)), sigma_(std::move(sigma)), eta_std_(eta_std),
      mode_(mode) {
  if (!(eta_std_ >= 0.0) || !std::isfinite(eta_std_)) {
    throw std::invalid_argument("income innovation std must be finite and non-negative");
  }
  for (double s : sigma_.states()) {
    if (!(s > 0.0)) throw std::invalid_argument("volatility states must be strictly positive");
  }
  switch (mode_) {
    case ReturnMode::Stochastic:
      break;
    case ReturnMode::IIDCollapsed:
      mu_ = collapse_to_mean(mu_);
      sigma_ = collapse_to_mean(sigma_);
      break;
    case ReturnMode::Constant: {
      // E R = E exp(mu) * E exp(sigma^2 / 2) under independent stationary laws.
      const double e_mu = mu_.stationary_mean([](double m) { return std::exp(m); });
      const double e_sig = sigma_.stationary_mean([](double s) { return std::exp(0.5 * s * s); });
      constant_return_ = e_mu * e_sig;
      mu_ = collapse_to_mean(mu_);
      sigma_ = collapse_to_mean(sigma_);
      break;
    }
  }
  build_states();
  transition_ = kronecker(kronecker(chi_.transition(), mu_.transition()), sigma_.transition());
}

void ExogenousProcess::build_states() {
  states_.clear();
  states_.reserve(chi_.size() * mu_.size() * sigma_.size());
  for (std::size_t a = 0; a < chi_.size(); ++a) {
    for (std::size_t b = 0; b < mu_.size(); ++b) {
      for (std::size_t c = 0; c < sigma_.size(); ++c) {
        states_.push_back({chi_.state(a), mu_.state(b), sigma_.state(c), a, b, c});
      }
    }
  }
}

ExogenousProcess ExogenousProcess::with_composite_transition(Eigen::MatrixXd transition) const {
  if (static_cast<std::size_t>(transition.rows()) != size()) {
    throw std::invalid_argument("composite transition matrix size does not match state count");
  }
  require_row_stochastic(transition);
  ExogenousProcess out = *this;
  out.transition_ = std::move(transition);
  out.separable_ = false;
  return out;
}

std::size_t ExogenousProcess::index(std::size_t i_chi, std::size_t i_mu, std::size_t i_sigma) const {
  if (i_chi >= chi_.size() || i_mu >= mu_.size() || i_sigma >= sigma_.size()) {
    throw std::out_of_range("component index out of range");
  }
  return (i_chi * mu_.size() + i_mu) * sigma_.size() + i_sigma;
}

Eigen::VectorXd ExogenousProcess::stationary() const {
  if (separable_) {
    return kronecker(kronecker(chi_.stationary(), mu_.stationary()), sigma_.stationary());
  }
  std::vector<double> dummy(size());
  for (std::size_t i = 0; i < size(); ++i) dummy[i] = static_cast<double>(i);
  return FiniteChain(std::move(dummy), transition_).stationary();
}

double ExogenousProcess::return_draw(std::size_t next, double zeta) const {
  if (constant_return_) return *constant_return_;
  const ExogenousState& z = states_[next];
  return std::exp(z.mu + z.sigma * zeta);
}

double ExogenousProcess::income_draw(std::size_t next, double eta) const {
  return std::exp(states_[next].chi + eta_std_ * eta);
}

std::vector<RYNode> ExogenousProcess::conditional_nodes(std::size_t next,
                                                       const ExpectationRule& rule) const {
  if (next >= size()) throw std::out_of_range("exogenous state index out of range");
  const bool fixed_return = constant_return_.has_value() || states_[next].sigma == 0.0;
  const bool fixed_income = eta_std_ == 0.0;
  std::vector<RYNode> out;

  if (rule.kind == ExpectationRule::Kind::MonteCarlo) {
    if (rule.draws < 1) throw std::invalid_argument("Monte Carlo rule needs at least one draw");
    std::mt19937_64 engine(rule.seed);
    boost::random::normal_distribution<double> normal;
    const double w = 1.0 / rule.draws;
    out.reserve(static_cast<std::size_t>(rule.draws));
    for (int k = 0; k < rule.draws; ++k) {
      const double zeta = normal(engine);
      const double eta = normal(engine);
      out.push_back({w, return_draw(next, fixed_return ? 0.0 : zeta),
                     income_draw(next, fixed_income ? 0.0 : eta)});
    }
    return out;
  }

  const NormalRule base = gauss_hermite(rule.nodes);
  const NormalRule point{{0.0}, {1.0}};
  const NormalRule& zr = fixed_return ? point : base;
  const NormalRule& er = fixed_income ? point : base;
  out.reserve(zr.size() * er.size());
  for (std::size_t i = 0; i < zr.size(); ++i) {
    const double R = return_draw(next, zr.nodes[i]);
    for (std::size_t j = 0; j < er.size(); ++j) {
      out.push_back({zr.weights[i] * er.weights[j], R, income_draw(next, er.nodes[j])});
    }
  }
  return out;
}

std::size_t ExogenousProcess::nearest_mean_state() const {
  auto nearest = [](const FiniteChain& c) {
    const double m = c.stationary_mean([](double x) { return x; });
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (std::abs(c.state(i) - m) < std::abs(c.state(best) - m)) best = i;
    }
    return best;
  };
  return index(nearest(chi_), nearest(mu_), nearest(sigma_));
}

}  // namespace caprisk
