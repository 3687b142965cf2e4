#include "caprisk/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "caprisk/assumptions.hpp"
#include "caprisk/parallel.hpp"

namespace caprisk {

std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::RhoSigma: return "rho_sigma";
    case SweepAxis::DeltaSigma: return "delta_sigma";
    case SweepAxis::RhoMu: return "rho_mu";
    case SweepAxis::DeltaMu: return "delta_mu";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::Gamma: return "gamma";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::RhoSigma, SweepAxis::DeltaSigma, SweepAxis::RhoMu, SweepAxis::DeltaMu,
                      SweepAxis::Beta, SweepAxis::Gamma}) {
    if (axis_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                              "' (expected rho_sigma, delta_sigma, rho_mu, delta_mu, beta or gamma)");
}

EconomyParams with_axis(EconomyParams p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::RhoSigma: p.log_sigma.rho = value; break;
    case SweepAxis::DeltaSigma: p.log_sigma.delta = value; break;
    case SweepAxis::RhoMu: p.mu.rho = value; break;
    case SweepAxis::DeltaMu: p.mu.delta = value; break;
    case SweepAxis::Beta: p.beta = value; break;
    case SweepAxis::Gamma: p.gamma = value; break;
  }
  return p;
}

AxisSpec AxisSpec::linspace(SweepAxis axis, double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("axis needs at least one value");
  if (!(hi >= lo)) throw std::invalid_argument("axis range must satisfy lo <= hi");
  AxisSpec out{axis, {}};
  for (int k = 0; k < n; ++k) {
    out.values.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return out;
}

double SweepPoint::margin() const {
  return std::min(1.0 - beta_r_K, patience_rhs - patience_lhs);
}

SweepGrid stability_sweep(const EconomyParams& base, const AxisSpec& axis1, const AxisSpec& axis2, int threads) {
  if (axis1.values.empty() || axis2.values.empty()) throw std::invalid_argument("sweep axes must be non-empty");
  SweepGrid grid{axis1, axis2, {}};
  const std::size_t n1 = axis1.values.size();
  const std::size_t n2 = axis2.values.size();
  grid.points.resize(n1 * n2);
  parallel_for(n1 * n2, threads, [&](std::size_t k) {
    SweepPoint& pt = grid.points[k];
    pt.x1 = axis1.values[k / n2];
    pt.x2 = axis2.values[k % n2];
    try {
      const EconomyParams p = with_axis(with_axis(base, axis1.axis, pt.x1), axis2.axis, pt.x2);
      const ModelSpec model = build_model(p);
      const ContractionCheck c = check_contraction(model);
      const PatienceCheck pc = check_patience(model);
      pt.r_K = c.r_K;
      pt.beta_r_K = model.beta() * c.r_K;
      pt.n = c.n;
      pt.theta = c.theta;
      pt.patience_lhs = pc.lhs;
      pt.patience_rhs = pc.rhs;
      pt.contraction_ok = c.ok;
      pt.stability_ok = c.ok && pc.ok;
      pt.evaluated = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  return grid;
}

std::vector<std::optional<double>> stability_frontier(const SweepGrid& grid) {
  const std::size_t n1 = grid.axis1.values.size();
  const std::size_t n2 = grid.axis2.values.size();
  std::vector<std::optional<double>> out(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    std::optional<std::size_t> last;
    for (std::size_t j = 0; j < n2; ++j) {
      if (grid.at(i, j).stability_ok) last = j;
    }
    if (!last) continue;
    const std::size_t j = *last;
    if (j + 1 == n2 || !grid.at(i, j + 1).evaluated) {
      out[i] = grid.at(i, j).x2;
      continue;
    }
    const SweepPoint& a = grid.at(i, j);
    const SweepPoint& b = grid.at(i, j + 1);
    const double ma = a.margin();
    const double mb = b.margin();
    const double t = ma - mb > 0.0 ? std::clamp(ma / (ma - mb), 0.0, 1.0) : 0.0;
    out[i] = a.x2 + t * (b.x2 - a.x2);
  }
  return out;
}

std::vector<std::size_t> monotonicity_violations(const SweepGrid& grid) {
  const std::size_t n1 = grid.axis1.values.size();
  const std::size_t n2 = grid.axis2.values.size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n1; ++i) {
    bool seen_unstable = false;
    for (std::size_t j = 0; j < n2; ++j) {
      const bool ok = grid.at(i, j).stability_ok;
      if (!ok) {
        seen_unstable = true;
      } else if (seen_unstable) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> margin_jumps(const SweepGrid& grid) {
  const std::size_t n1 = grid.axis1.values.size();
  const std::size_t n2 = grid.axis2.values.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n2 < 3) return out;
  for (std::size_t i = 0; i < n1; ++i) {
    std::vector<double> steps;
    for (std::size_t j = 1; j < n2; ++j) {
      if (grid.at(i, j).evaluated && grid.at(i, j - 1).evaluated) {
        steps.push_back(std::abs(grid.at(i, j).r_K - grid.at(i, j - 1).r_K));
      }
    }
    if (steps.empty()) continue;
    std::vector<double> sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (!(median > 0.0)) continue;
    for (std::size_t j = 1; j < n2; ++j) {
      if (!grid.at(i, j).evaluated || !grid.at(i, j - 1).evaluated) continue;
      if (std::abs(grid.at(i, j).r_K - grid.at(i, j - 1).r_K) > 10.0 * median) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace caprisk
