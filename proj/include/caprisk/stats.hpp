#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace caprisk {

class UndefinedExponent : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct TailOptions {
  bool rank_shift = false;  // regress log(rank - 1/2) instead of log(rank)
};

/// Pareto exponent from the top ceil(top_fraction * n) observations: OLS of
/// log rank on log wealth, returned as minus the slope.
double tail_exponent(const std::vector<double>& sample, double top_fraction, const TailOptions& options = {});

/// Mean absolute difference over twice the mean, via the sorted formula
/// sum_i (2i - n - 1) x_(i) / (n sum x).
double gini(const std::vector<double>& sample);

/// Pairwise O(n^2) reference: sum_ij |x_i - x_j| / (2 n^2 mean).
double gini_pairwise(const std::vector<double>& sample);

struct LorenzPoint {
  double population;
  double wealth;
};

struct LorenzShares {
  std::vector<LorenzPoint> lorenz;    // includes (0,0) and (1,1)
  std::vector<double> wealth_shares;  // cumulative share held by the poorest step, 2*step, ..., 1
};

/// Cumulative wealth shares at multiples of step. A cutoff falling inside an
/// observation prorates that observation linearly.
LorenzShares lorenz_and_shares(const std::vector<double>& sample, double step = 0.05);

struct ZipfPoint {
  double log_wealth;
  double log_rank;
};

/// (log wealth, log rank) of the descending-sorted sample, decimated
/// uniformly in log rank when the sample exceeds max_points.
std::vector<ZipfPoint> zipf_points(const std::vector<double>& sample, std::size_t max_points = 10000);

/// Minus the OLS slope of log rank on log wealth over a set of points.
double zipf_slope(const std::vector<ZipfPoint>& points);

struct InequalityReport {
  double tail_exponent_top5 = 0.0;
  double tail_exponent_top10 = 0.0;
  double gini = 0.0;
  std::vector<LorenzPoint> lorenz;
  std::vector<double> wealth_shares;
  std::size_t sample_size = 0;
  double mean = 0.0;
};

InequalityReport inequality_report(const std::vector<double>& sample, const TailOptions& options = {});

}  // namespace caprisk
