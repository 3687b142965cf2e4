#include "caprisk/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace caprisk {

void require_row_stochastic(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("transition matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double p = m(i, j);
      if (!std::isfinite(p) || p < 0.0) {
        throw std::invalid_argument("transition matrix has a negative or non-finite entry in row " +
                                    std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw std::invalid_argument("transition matrix row " + std::to_string(i) +
                                  " does not sum to one");
    }
  }
}

FiniteChain::FiniteChain(std::vector<double> states, Eigen::MatrixXd transition)
    : states_(std::move(states)), transition_(std::move(transition)) {
  if (states_.empty()) throw std::invalid_argument("chain needs at least one state");
  if (static_cast<std::size_t>(transition_.rows()) != states_.size()) {
    throw std::invalid_argument("transition matrix size does not match state count");
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!std::isfinite(states_[i])) throw std::invalid_argument("chain state is not finite");
    if (i > 0 && !(states_[i] > states_[i - 1])) {
      throw std::invalid_argument("chain states must be strictly increasing");
    }
  }
  require_row_stochastic(transition_);
}

FiniteChain FiniteChain::constant(double value) {
  return FiniteChain({value}, Eigen::MatrixXd::Ones(1, 1));
}

Eigen::VectorXd FiniteChain::stationary() const {
  const auto n = static_cast<Eigen::Index>(size());
  // Unique invariant law: solve pi (P - I) = 0 with sum(pi) = 1.
  Eigen::MatrixXd system = transition_.transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (lu.isInvertible()) {
    Eigen::VectorXd pi = lu.solve(rhs);
    if ((pi.array() >= -1e-12).all()) {
      pi = pi.cwiseMax(0.0);
      return pi / pi.sum();
    }
  }
  // Reducible chain: fall back to the Cesaro limit from the uniform start.
  const Eigen::MatrixXd lazy = 0.5 * (transition_ + Eigen::MatrixXd::Identity(n, n));
  Eigen::RowVectorXd p = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 100000; ++it) {
    Eigen::RowVectorXd next = p * lazy;
    next /= next.sum();
    const double diff = (next - p).cwiseAbs().maxCoeff();
    p = std::move(next);
    if (diff < 1e-16) break;
  }
  return p.transpose();
}

double FiniteChain::autocorrelation() const {
  const Eigen::VectorXd pi = stationary();
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = states_[static_cast<std::size_t>(i)];
  const double mean = pi.dot(x);
  const Eigen::VectorXd centered = x.array() - mean;
  const double var = pi.dot(centered.cwiseProduct(centered));
  if (var <= 0.0) return 0.0;
  const double cov = pi.dot(centered.cwiseProduct(transition_ * centered));
  return cov / var;
}

}  // namespace caprisk
