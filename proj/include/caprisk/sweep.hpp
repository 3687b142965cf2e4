#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "caprisk/economy.hpp"

namespace caprisk {

enum class SweepAxis { RhoSigma, DeltaSigma, RhoMu, DeltaMu, Beta, Gamma };

std::string_view axis_name(SweepAxis a);
SweepAxis parse_axis(std::string_view name);

/// Copy of params with one parameter replaced.
EconomyParams with_axis(EconomyParams params, SweepAxis axis, double value);

struct AxisSpec {
  SweepAxis axis = SweepAxis::RhoSigma;
  std::vector<double> values;

  /// n equally spaced values in [lo, hi].
  static AxisSpec linspace(SweepAxis axis, double lo, double hi, int n);
};

struct SweepPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  bool evaluated = false;  // false when the point raised an error
  std::string error;
  double r_K = 0.0;
  double beta_r_K = 0.0;
  int n = 0;
  double theta = 0.0;
  double patience_lhs = 0.0;
  double patience_rhs = 0.0;
  bool contraction_ok = false;
  bool stability_ok = false;

  /// min(1 - beta r_K, rhs - lhs): positive iff both conditions hold.
  double margin() const;
};

struct SweepGrid {
  AxisSpec axis1;
  AxisSpec axis2;
  std::vector<SweepPoint> points;  // axis1-major: points[i * n2 + j]

  const SweepPoint& at(std::size_t i, std::size_t j) const { return points[i * axis2.values.size() + j]; }
};

/// Re-discretizes the chains at every (axis1, axis2) point and evaluates the
/// contraction and patience checks. Errors are recorded per point.
SweepGrid stability_sweep(const EconomyParams& base, const AxisSpec& axis1, const AxisSpec& axis2,
                          int threads = 0);

/// Largest stable axis2 value per axis1 value, with the crossing located by
/// linear interpolation of the margin; nullopt when a column has no stable point.
std::vector<std::optional<double>> stability_frontier(const SweepGrid& grid);

/// Axis1 indices whose column is not "stable below a threshold": more than one
/// change of the stable flag, or an unstable point before a stable one.
std::vector<std::size_t> monotonicity_violations(const SweepGrid& grid);

/// (i, j) pairs where r_K jumps by more than ten times the column's median step.
std::vector<std::pair<std::size_t, std::size_t>> margin_jumps(const SweepGrid& grid);

}  // namespace caprisk
