#pragma once

#include <cstddef>
#include <vector>

#include "caprisk/process.hpp"
#include "caprisk/quadrature.hpp"
#include "caprisk/utility.hpp"

namespace caprisk {

/// Full specification of the income fluctuation problem: discount factor,
/// utility, exogenous process and the rule used for innovation expectations.
/// The conditional (R, Y) nodes for every next state are built once here.
class ModelSpec {
 public:
  ModelSpec(double beta, UtilitySpec utility, ExogenousProcess process,
            ExpectationRule expectation = {});

  double beta() const { return beta_; }
  const UtilitySpec& utility() const { return utility_; }
  const ExogenousProcess& process() const { return process_; }
  const ExpectationRule& expectation() const { return expectation_; }
  std::size_t num_states() const { return process_.size(); }

  const std::vector<RYNode>& next_nodes(std::size_t next) const { return nodes_[next]; }

  /// E[g(R, Y) | z' = next] under the expectation rule.
  template <class G>
  double conditional_mean(std::size_t next, G&& g) const {
    double acc = 0.0;
    for (const RYNode& n : nodes_[next]) acc += n.weight * g(n.R, n.Y);
    return acc;
  }

  /// E_z g(R', Y') = sum_j P(z, j) E[g | z' = j], one entry per current state.
  template <class G>
  Eigen::VectorXd one_step_mean(G&& g) const {
    Eigen::VectorXd inner(static_cast<Eigen::Index>(num_states()));
    for (std::size_t j = 0; j < num_states(); ++j) inner[static_cast<Eigen::Index>(j)] = conditional_mean(j, g);
    return process_.transition() * inner;
  }

 private:
  double beta_;
  UtilitySpec utility_;
  ExogenousProcess process_;
  ExpectationRule expectation_;
  std::vector<std::vector<RYNode>> nodes_;
};

}  // namespace caprisk
