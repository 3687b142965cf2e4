#include "caprisk/policy.hpp"

#include <stdexcept>

namespace caprisk {

AssetGrid::AssetGrid(Spacing spacing, std::vector<double> points)
    : spacing_(spacing), points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("asset grid needs at least two points");
  if (!(points_.front() > 0.0)) throw std::invalid_argument("asset grid must be strictly positive");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i])) {
      throw std::invalid_argument("asset grid must be strictly increasing and finite");
    }
  }
  const double cells = static_cast<double>(points_.size() - 1);
  if (spacing_ == Spacing::Linear) inv_step_ = cells / (points_.back() - points_.front());
  if (spacing_ == Spacing::Log) inv_step_ = cells / std::log(points_.back() / points_.front());
}

AssetGrid AssetGrid::linear(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("linear grid needs n >= 2 and hi > lo");
  std::vector<double> p(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = lo + step * i;
  p.back() = hi;
  return AssetGrid(Spacing::Linear, std::move(p));
}

AssetGrid AssetGrid::log_spaced(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo) || !(lo > 0.0)) throw std::invalid_argument("log grid needs n >= 2 and 0 < lo < hi");
  std::vector<double> p(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  p.front() = lo;
  p.back() = hi;
  return AssetGrid(Spacing::Log, std::move(p));
}

AssetGrid AssetGrid::custom(std::vector<double> points) { return AssetGrid(Spacing::Custom, std::move(points)); }

ConsumptionPolicy::ConsumptionPolicy(AssetGrid grid, Eigen::MatrixXd values, UtilitySpec utility,
                                     double share_floor, InterpolationSpace space)
    : grid_(std::move(grid)), values_(std::move(values)), utility_(utility),
      share_floor_(share_floor), space_(space) {
  if (static_cast<std::size_t>(values_.rows()) != grid_.size() || values_.cols() < 1) {
    throw std::invalid_argument("policy values must be grid size x number of states");
  }
  if (!(share_floor_ >= 0.0 && share_floor_ < 1.0)) throw std::invalid_argument("share floor must lie in [0, 1)");
  const std::size_t n = grid_.size();
  for (std::size_t z = 0; z < num_states(); ++z) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = value(i, z);
      if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("policy values must be positive and finite");
    }
  }
  if (space_ == InterpolationSpace::MarginalUtility) {
    mu_values_ = values_.unaryExpr([this](double c) { return utility_.marginal(c); });
  }
  slopes_.resize(num_states());
  tail_flags_.assign(num_states(), false);
  for (std::size_t z = 0; z < num_states(); ++z) {
    const double last = (value(n - 1, z) - value(n - 2, z)) / (grid_[n - 1] - grid_[n - 2]);
    slopes_[z] = last;
    if (n >= 3) {
      const double prev = (value(n - 2, z) - value(n - 3, z)) / (grid_[n - 2] - grid_[n - 3]);
      tail_flags_[z] = last > prev + 1e-6;
    }
  }
  thresholds_.assign(num_states(), std::numeric_limits<double>::infinity());
}

ConsumptionPolicy ConsumptionPolicy::identity(AssetGrid grid, std::size_t num_states,
                                              UtilitySpec utility, double share_floor,
                                              InterpolationSpace space) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(num_states));
  for (std::size_t i = 0; i < grid.size(); ++i) v.row(static_cast<Eigen::Index>(i)).setConstant(grid[i]);
  return ConsumptionPolicy(std::move(grid), std::move(v), utility, share_floor, space);
}

void ConsumptionPolicy::set_thresholds(std::vector<double> thresholds) {
  if (thresholds.size() != num_states()) throw std::invalid_argument("one threshold per state required");
  thresholds_ = std::move(thresholds);
}

double ConsumptionPolicy::evaluate(double a, std::size_t z) const {
  if (!(a >= 0.0)) throw std::domain_error("policy evaluation requires non-negative assets");
  if (z >= num_states()) throw std::out_of_range("policy state index out of range");
  return (*this)(a, z);
}

double rho_distance(const ConsumptionPolicy& c, const ConsumptionPolicy& d) {
  if (!(c.grid() == d.grid()) || c.num_states() != d.num_states()) {
    throw std::invalid_argument("rho_distance: policies live on different grids");
  }
  const UtilitySpec& u = c.utility();
  double out = 0.0;
  for (std::size_t z = 0; z < c.num_states(); ++z) {
    for (std::size_t i = 0; i < c.grid().size(); ++i) {
      out = std::max(out, std::abs(u.marginal(c.value(i, z)) - u.marginal(d.value(i, z))));
    }
  }
  return out;
}

}  // namespace caprisk
