#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace caprisk {

/// A finite-state Markov chain on strictly increasing real states with a
/// row-stochastic transition matrix. Immutable after construction.
class FiniteChain {
 public:
  FiniteChain(std::vector<double> states, Eigen::MatrixXd transition);

  /// One-state chain that stays put.
  static FiniteChain constant(double value);

  std::size_t size() const { return states_.size(); }
  const std::vector<double>& states() const { return states_; }
  double state(std::size_t i) const { return states_[i]; }
  const Eigen::MatrixXd& transition() const { return transition_; }

  /// Invariant distribution (Cesaro limit of the lazy chain, so periodic
  /// chains are handled).
  Eigen::VectorXd stationary() const;

  /// Expectation of f(state) under the stationary distribution.
  template <class F>
  double stationary_mean(F&& f) const {
    const Eigen::VectorXd pi = stationary();
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) acc += pi[static_cast<Eigen::Index>(i)] * f(states_[i]);
    return acc;
  }

  /// First-order autocorrelation of the state value under stationarity.
  double autocorrelation() const;

 private:
  std::vector<double> states_;
  Eigen::MatrixXd transition_;
};

/// Throws std::invalid_argument unless m is square, non-negative and every
/// row sums to one within tol.
void require_row_stochastic(const Eigen::MatrixXd& m, double tol = 1e-12);

}  // namespace caprisk
