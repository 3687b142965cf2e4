#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "caprisk/chain.hpp"
#include "caprisk/quadrature.hpp"

namespace caprisk {

/// How the gross return R is generated from the exogenous state.
enum class ReturnMode {
  Stochastic,    // log R = mu' + sigma' * zeta, zeta ~ N(0,1)
  IIDCollapsed,  // mu and sigma chains replaced by single states at their stationary means
  Constant,      // R fixed at the stationary mean of the configured return process
};

/// One composite exogenous state z = (chi, mu, sigma) with its component indices.
struct ExogenousState {
  double chi;
  double mu;
  double sigma;
  std::size_t i_chi;
  std::size_t i_mu;
  std::size_t i_sigma;
};

/// One node of the conditional law of (R, Y) given the next exogenous state.
struct RYNode {
  double weight;
  double R;
  double Y;
};

/// Product finite Markov chain z = (chi, mu, sigma) together with the return
/// and income laws
///   log R = mu + sigma * zeta,   log Y = chi + eta_std * eta.
/// The composite transition matrix is the Kronecker product of the component
/// matrices unless an explicit composite matrix is supplied.
class ExogenousProcess {
 public:
  ExogenousProcess(FiniteChain chi, FiniteChain mu, FiniteChain sigma, double eta_std,
                   ReturnMode mode = ReturnMode::Stochastic);

  /// Same states, but with a user-supplied composite transition matrix
  /// (allows dependence between components).
  ExogenousProcess with_composite_transition(Eigen::MatrixXd transition) const;

  const FiniteChain& chi() const { return chi_; }
  const FiniteChain& mu() const { return mu_; }
  const FiniteChain& sigma() const { return sigma_; }
  double eta_std() const { return eta_std_; }
  ReturnMode mode() const { return mode_; }
  /// True when the composite kernel is the Kronecker product of the components.
  bool separable() const { return separable_; }

  std::size_t size() const { return states_.size(); }
  const std::vector<ExogenousState>& states() const { return states_; }
  const ExogenousState& state(std::size_t i) const { return states_[i]; }
  /// Composite index; chi varies slowest and sigma fastest.
  std::size_t index(std::size_t i_chi, std::size_t i_mu, std::size_t i_sigma) const;
  const Eigen::MatrixXd& transition() const { return transition_; }
  Eigen::VectorXd stationary() const;

  /// Deterministic gross return in Constant mode.
  std::optional<double> constant_return() const { return constant_return_; }

  double return_draw(std::size_t next, double zeta) const;
  double income_draw(std::size_t next, double eta) const;

  /// Conditional (R, Y) nodes given the next composite state; weights sum to one.
  /// Degenerate innovations (sigma' = 0, eta_std = 0, Constant mode) use one node.
  std::vector<RYNode> conditional_nodes(std::size_t next, const ExpectationRule& rule) const;

  /// Composite state closest to the stationary means of the components.
  std::size_t nearest_mean_state() const;

 private:
  void build_states();

  FiniteChain chi_;
  FiniteChain mu_;
  FiniteChain sigma_;
  double eta_std_;
  ReturnMode mode_;
  bool separable_ = true;
  std::optional<double> constant_return_;
  std::vector<ExogenousState> states_;
  Eigen::MatrixXd transition_;
};

/// Kronecker product of square matrices.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace caprisk
