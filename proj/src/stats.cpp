#include "caprisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace caprisk {
namespace {

void require_valid(const std::vector<double>& sample, const char* who) {
  if (sample.empty()) throw std::invalid_argument(std::string(who) + ": empty sample");
  for (double x : sample) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(who) + ": values must be finite and non-negative");
    }
  }
}

std::vector<double> sorted_copy(const std::vector<double>& sample, bool descending) {
  std::vector<double> out(sample);
  if (descending) {
    std::stable_sort(out.begin(), out.end(), std::greater<>());
  } else {
    std::stable_sort(out.begin(), out.end());
  }
  return out;
}

// Minus the OLS slope of y on x.
double neg_ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw UndefinedExponent("tail exponent undefined: wealth levels in the slice are all equal");
  return -sxy / sxx;
}

}  // namespace

double tail_exponent(const std::vector<double>& sample, double top_fraction, const TailOptions& options) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) throw std::invalid_argument("top fraction must lie in (0, 1)");
  if (sample.size() < 100) throw std::invalid_argument("tail exponent needs at least 100 observations");
  require_valid(sample, "tail_exponent");
  const std::vector<double> desc = sorted_copy(sample, true);
  const auto k = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(desc.size()) - 1e-9));
  std::vector<double> x, y;
  x.reserve(k);
  y.reserve(k);
  std::size_t distinct = 0;
  for (std::size_t r = 0; r < k; ++r) {
    if (!(desc[r] > 0.0)) break;
    if (r == 0 || desc[r] != desc[r - 1]) ++distinct;
    x.push_back(std::log(desc[r]));
    y.push_back(std::log(static_cast<double>(r + 1) - (options.rank_shift ? 0.5 : 0.0)));
  }
  if (distinct < 10) {
    std::ostringstream os;
    os << "tail exponent undefined: top slice has " << distinct << " distinct positive values (need 10)";
    throw UndefinedExponent(os.str());
  }
  return neg_ols_slope(x, y);
}

double gini(const std::vector<double>& sample) {
  require_valid(sample, "gini");
  const std::vector<double> x = sorted_copy(sample, false);
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    num += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  }
  if (!(total > 0.0)) throw std::domain_error("gini: sample mean is zero");
  return num / (n * total);
}

double gini_pairwise(const std::vector<double>& sample) {
  require_valid(sample, "gini_pairwise");
  const double n = static_cast<double>(sample.size());
  double total = 0.0;
  double pairs = 0.0;
  for (double xi : sample) {
    total += xi;
    for (double xj : sample) pairs += std::abs(xi - xj);
  }
  if (!(total > 0.0)) throw std::domain_error("gini: sample mean is zero");
  return pairs / (2.0 * n * total);
}

LorenzShares lorenz_and_shares(const std::vector<double>& sample, double step) {
  require_valid(sample, "lorenz_and_shares");
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("Lorenz step must lie in (0, 1]");
  const std::vector<double> x = sorted_copy(sample, false);
  std::vector<long double> cum(x.size() + 1, 0.0L);
  for (std::size_t i = 0; i < x.size(); ++i) cum[i + 1] = cum[i] + x[i];
  const long double total = cum.back();
  if (!(total > 0.0L)) throw std::domain_error("lorenz: sample mean is zero");

  const auto share_below = [&](double p) {
    const double pos = p * static_cast<double>(x.size());
    auto whole = static_cast<std::size_t>(std::floor(pos));
    if (whole >= x.size()) return 1.0;
    const double frac = pos - static_cast<double>(whole);
    return static_cast<double>((cum[whole] + frac * x[whole]) / total);
  };

  LorenzShares out;
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / step));
  out.lorenz.push_back({0.0, 0.0});
  for (std::size_t k = 1; k <= steps; ++k) {
    const double p = k == steps ? 1.0 : static_cast<double>(k) * step;
    const double w = k == steps ? 1.0 : share_below(p);
    out.lorenz.push_back({p, w});
    out.wealth_shares.push_back(w);
  }
  return out;
}

std::vector<ZipfPoint> zipf_points(const std::vector<double>& sample, std::size_t max_points) {
  require_valid(sample, "zipf_points");
  if (max_points < 2) throw std::invalid_argument("zipf_points: max_points must be at least 2");
  const std::vector<double> desc = sorted_copy(sample, true);
  const std::size_t n = desc.size();
  std::vector<std::size_t> ranks;
  if (n <= max_points) {
    ranks.resize(n);
    std::iota(ranks.begin(), ranks.end(), std::size_t{1});
  } else {
    const double log_n = std::log(static_cast<double>(n));
    for (std::size_t k = 0; k < max_points; ++k) {
      const double lr = log_n * static_cast<double>(k) / static_cast<double>(max_points - 1);
      const auto r = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(std::exp(lr))), 1, n);
      if (ranks.empty() || r != ranks.back()) ranks.push_back(r);
    }
  }
  std::vector<ZipfPoint> out;
  out.reserve(ranks.size());
  for (std::size_t r : ranks) {
    if (!(desc[r - 1] > 0.0)) break;
    out.push_back({std::log(desc[r - 1]), std::log(static_cast<double>(r))});
  }
  return out;
}

double zipf_slope(const std::vector<ZipfPoint>& points) {
  if (points.size() < 2) throw UndefinedExponent("zipf_slope: need at least two points");
  std::vector<double> x, y;
  for (const ZipfPoint& p : points) {
    x.push_back(p.log_wealth);
    y.push_back(p.log_rank);
  }
  return neg_ols_slope(x, y);
}

InequalityReport inequality_report(const std::vector<double>& sample, const TailOptions& options) {
  InequalityReport r;
  r.tail_exponent_top5 = tail_exponent(sample, 0.05, options);
  r.tail_exponent_top10 = tail_exponent(sample, 0.10, options);
  r.gini = gini(sample);
  LorenzShares ls = lorenz_and_shares(sample);
  r.lorenz = std::move(ls.lorenz);
  r.wealth_shares = std::move(ls.wealth_shares);
  r.sample_size = sample.size();
  long double acc = 0.0L;
  for (double x : sample) acc += x;
  r.mean = static_cast<double>(acc / static_cast<long double>(sample.size()));
  return r;
}

}  // namespace caprisk
