#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "caprisk/utility.hpp"

namespace caprisk {

/// Strictly increasing, strictly positive asset grid.
class AssetGrid {
 public:
  enum class Spacing { Linear, Log, Custom };

  static AssetGrid linear(double lo, double hi, int n);
  static AssetGrid log_spaced(double lo, double hi, int n);
  static AssetGrid custom(std::vector<double> points);
  /// 100 points equally spaced on [1e-4, 50].
  static AssetGrid standard() { return linear(1e-4, 50.0, 100); }

  Spacing spacing() const { return spacing_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

  /// Cell index i with points[i] <= a <= points[i+1], for a in [front, back].
  std::size_t locate(double a) const {
    const std::size_t last = points_.size() - 2;
    std::size_t i;
    if (spacing_ == Spacing::Linear) {
      i = static_cast<std::size_t>(std::max(0.0, (a - points_[0]) * inv_step_));
    } else if (spacing_ == Spacing::Log) {
      i = static_cast<std::size_t>(std::max(0.0, std::log(a / points_[0]) * inv_step_));
    } else {
      i = static_cast<std::size_t>(std::upper_bound(points_.begin(), points_.end(), a) - points_.begin());
      i = i == 0 ? 0 : i - 1;
    }
    i = std::min(i, last);
    while (i > 0 && a < points_[i]) --i;
    while (i < last && a > points_[i + 1]) ++i;
    return i;
  }

  bool operator==(const AssetGrid& other) const { return points_ == other.points_; }

 private:
  AssetGrid(Spacing spacing, std::vector<double> points);

  Spacing spacing_;
  std::vector<double> points_;
  double inv_step_ = 0.0;
};

/// Space in which the policy is interpolated between grid points.
enum class InterpolationSpace { Consumption, MarginalUtility };

/// Consumption policy on grid x composite states, with piecewise linear
/// interpolation, linear extrapolation above the grid along a per-state tail
/// slope, and c(0, z) = 0.
class ConsumptionPolicy {
 public:
  /// values(i, z) is consumption at grid point i in state z. share_floor is the
  /// lower bound alpha used to clip extrapolated values to [alpha a, a].
  ConsumptionPolicy(AssetGrid grid, Eigen::MatrixXd values, UtilitySpec utility,
                    double share_floor = 0.0,
                    InterpolationSpace space = InterpolationSpace::Consumption);

  /// c(a, z) = a, which belongs to the candidate space.
  static ConsumptionPolicy identity(AssetGrid grid, std::size_t num_states, UtilitySpec utility,
                                    double share_floor = 0.0,
                                    InterpolationSpace space = InterpolationSpace::Consumption);

  const AssetGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double value(std::size_t i, std::size_t z) const { return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(z)); }
  std::size_t num_states() const { return static_cast<std::size_t>(values_.cols()); }
  const UtilitySpec& utility() const { return utility_; }
  double share_floor() const { return share_floor_; }
  InterpolationSpace space() const { return space_; }

  /// Tail slope from the last two grid points, per state.
  const std::vector<double>& slopes() const { return slopes_; }
  /// States whose tail slope exceeds the previous segment's (concavity warning).
  const std::vector<bool>& tail_flags() const { return tail_flags_; }

  /// Binding thresholds abar(z); infinity when unknown or never binding.
  const std::vector<double>& thresholds() const { return thresholds_; }
  void set_thresholds(std::vector<double> thresholds);

  /// Checked evaluation; throws std::domain_error for negative a.
  double evaluate(double a, std::size_t z) const;

  /// Unchecked evaluation for a >= 0 and valid z.
  double operator()(double a, std::size_t z) const {
    if (a <= 0.0) return 0.0;
    const double* c = values_.data() + static_cast<std::ptrdiff_t>(z) * values_.rows();
    const double* pts = grid_.points().data();
    const std::size_t n = grid_.size();
    if (a < pts[0]) return std::min(a, a * (c[0] / pts[0]));
    if (a > pts[n - 1]) {
      const double v = c[n - 1] + slopes_[z] * (a - pts[n - 1]);
      return std::clamp(v, share_floor_ * a, a);
    }
    const std::size_t i = grid_.locate(a);
    const double t = (a - pts[i]) / (pts[i + 1] - pts[i]);
    if (space_ == InterpolationSpace::MarginalUtility) {
      const double* m = mu_values_.data() + static_cast<std::ptrdiff_t>(z) * mu_values_.rows();
      return utility_.marginal_inv(m[i] + t * (m[i + 1] - m[i]));
    }
    return c[i] + t * (c[i + 1] - c[i]);
  }

  /// u'(c(a, z)) for a > 0.
  double marginal(double a, std::size_t z) const { return utility_.marginal((*this)(a, z)); }

 private:
  AssetGrid grid_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd mu_values_;
  UtilitySpec utility_;
  double share_floor_;
  InterpolationSpace space_;
  std::vector<double> slopes_;
  std::vector<bool> tail_flags_;
  std::vector<double> thresholds_;
};

/// rho(c, d) = max over grid points and states of |u'(c) - u'(d)|.
double rho_distance(const ConsumptionPolicy& c, const ConsumptionPolicy& d);

}  // namespace caprisk
