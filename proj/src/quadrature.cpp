#include "caprisk/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace caprisk {

NormalRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Hermite rule needs at least one node");
  NormalRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }
  // Jacobi matrix of the monic Hermite_e recurrence: off-diagonal sqrt(k).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const Eigen::VectorXd& x = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.weights[static_cast<std::size_t>(i)] = v(0, i) * v(0, i);
    total += v(0, i) * v(0, i);
  }
  // Symmetrize: the exact rule is symmetric about zero.
  for (int i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(i);
    rule.nodes[a] = 0.5 * (x[i] - x[n - 1 - i]);
    rule.weights[a] = 0.5 * (v(0, i) * v(0, i) + v(0, n - 1 - i) * v(0, n - 1 - i)) / total;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace caprisk
