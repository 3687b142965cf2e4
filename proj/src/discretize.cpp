#include "caprisk/discretize.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace caprisk {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

FiniteChain tauchen(double rho, double delta, double mean, int n, double width) {
  if (n < 1) throw std::invalid_argument("tauchen: need at least one state");
  if (!std::isfinite(rho) || !(std::abs(rho) < 1.0)) throw std::invalid_argument("tauchen: |rho| must be < 1");
  if (!std::isfinite(delta) || !(delta > 0.0)) throw std::invalid_argument("tauchen: innovation std must be positive");
  if (!std::isfinite(mean) || !std::isfinite(width) || !(width > 0.0)) {
    throw std::invalid_argument("tauchen: mean and width must be finite, width positive");
  }
  if (n == 1) return FiniteChain::constant(mean);

  const double sd = delta / std::sqrt(1.0 - rho * rho);
  const double lo = mean - width * sd;
  const double step = 2.0 * width * sd / (n - 1);
  std::vector<double> states(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) states[static_cast<std::size_t>(i)] = lo + step * i;
  // Pin the end point so the grid is symmetric about the mean.
  states.back() = mean + width * sd;

  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    const double cond = (1.0 - rho) * mean + rho * states[static_cast<std::size_t>(i)];
    double used = 0.0;
    for (int j = 0; j < n - 1; ++j) {
      const double upper = normal_cdf((states[static_cast<std::size_t>(j)] + 0.5 * step - cond) / delta);
      const double lower =
          j == 0 ? 0.0 : normal_cdf((states[static_cast<std::size_t>(j)] - 0.5 * step - cond) / delta);
      p(i, j) = upper - lower;
      used += p(i, j);
    }
    p(i, n - 1) = std::max(0.0, 1.0 - used);
  }
  return FiniteChain(std::move(states), std::move(p));
}

FiniteChain discretize_log_volatility(double rho, double delta, double log_mean, int n, double width) {
  const FiniteChain logs = tauchen(rho, delta, log_mean, n, width);
  std::vector<double> levels(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) levels[i] = std::exp(logs.state(i));
  return FiniteChain(std::move(levels), logs.transition());
}

}  // namespace caprisk
