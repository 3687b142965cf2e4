#include "caprisk/coleman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "caprisk/parallel.hpp"

namespace caprisk {

ColemanOperator::ColemanOperator(const ModelSpec& model, AssetGrid grid, double share_floor)
    : model_(model), grid_(std::move(grid)), share_floor_(share_floor) {
  const std::size_t n = model_.num_states();
  nodes_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const RYNode& node : model_.next_nodes(j)) {
      nodes_[j].wR.push_back(node.weight * node.R);
      nodes_[j].R.push_back(node.R);
      nodes_[j].Y.push_back(node.Y);
    }
  }
  successors_.resize(n);
  const Eigen::MatrixXd& p = model_.process().transition();
  for (std::size_t z = 0; z < n; ++z) {
    for (std::size_t j = 0; j < n; ++j) {
      const double prob = p(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(j));
      if (prob > 0.0) successors_[z].push_back({j, prob});
    }
  }
}

double ColemanOperator::inner_mean(const ConsumptionPolicy& c, std::size_t next, double savings) const {
  const NextNodes& nd = nodes_[next];
  const UtilitySpec& u = c.utility();
  const std::size_t m = nd.wR.size();
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    acc += nd.wR[k] * u.marginal(c(nd.R[k] * savings + nd.Y[k], next));
  }
  return acc;
}

double ColemanOperator::euler_rhs(const ConsumptionPolicy& c, std::size_t z, double savings) const {
  double acc = 0.0;
  for (const Successor& s : successors_[z]) acc += s.prob * inner_mean(c, s.state, savings);
  const double out = model_.beta() * acc;
  if (!std::isfinite(out)) {
    std::ostringstream os;
    os << "Euler expectation overflowed in state " << z << " at savings " << savings
       << "; the model likely violates its moment assumptions";
    throw std::overflow_error(os.str());
  }
  return out;
}

double ColemanOperator::binding_threshold(const ConsumptionPolicy& c, std::size_t z) const {
  if (model_.beta() == 0.0) return std::numeric_limits<double>::infinity();
  const double rhs = euler_rhs(c, z, 0.0);
  if (!(rhs > 0.0)) throw std::logic_error("binding threshold: non-positive expectation");
  return model_.utility().marginal_inv(rhs);
}

std::vector<double> ColemanOperator::binding_rhs(const ConsumptionPolicy& c) const {
  std::vector<double> out(model_.num_states());
  // The s = 0 inner means do not depend on the current state.
  std::vector<double> inner(model_.num_states());
  for (std::size_t j = 0; j < inner.size(); ++j) inner[j] = inner_mean(c, j, 0.0);
  for (std::size_t z = 0; z < out.size(); ++z) {
    double acc = 0.0;
    for (const Successor& s : successors_[z]) acc += s.prob * inner[s.state];
    const double rhs = model_.beta() * acc;
    if (!(rhs > 0.0) || !std::isfinite(rhs)) throw std::overflow_error("binding threshold: invalid expectation");
    out[z] = rhs;
  }
  return out;
}

std::vector<double> ColemanOperator::binding_thresholds(const ConsumptionPolicy& c) const {
  std::vector<double> out(model_.num_states(), std::numeric_limits<double>::infinity());
  if (model_.beta() == 0.0) return out;
  const std::vector<double> rhs = binding_rhs(c);
  for (std::size_t z = 0; z < out.size(); ++z) out[z] = model_.utility().marginal_inv(rhs[z]);
  return out;
}

double ColemanOperator::solve_cell(const ConsumptionPolicy& c, std::size_t z, double a, double guess,
                                   double root_tol) const {
  const UtilitySpec& u = model_.utility();
  struct Eval {
    double x;
    double f;  // u'(x) - rhs, marginal-utility units
  };
  std::array<Eval, 16> cache{};
  std::size_t count = 0;
  // g(xi) = xi - (u')^{-1}(rhs(a - xi)) shares its root with the Euler
  // residual but is close to linear, which keeps the bracketing solver fast.
  auto g = [&](double xi) {
    const double rhs = euler_rhs(c, z, a - xi);
    cache[count++ % cache.size()] = {xi, u.marginal(xi) - rhs};
    return xi - u.marginal_inv(rhs);
  };
  auto lookup = [&](double x) -> const Eval* {
    for (const Eval& e : cache) {
      if (e.x == x) return &e;
    }
    return nullptr;
  };
  auto tol = [&](double lo, double hi) {
    const Eval* el = lookup(lo);
    const Eval* eh = lookup(hi);
    if (el && eh && std::abs(el->f - eh->f) <= root_tol) return true;
    return hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi;
  };

  // g is increasing with slope >= 1 (for monotone c), so the root lies within
  // |g(x0)| of any guess x0; start from the input policy's own value.
  const double lo = 1e-14 * a;
  double left = lo;
  double right = a;
  double g_left = 0.0;
  double g_right = 0.0;
  bool bracketed = false;
  const double x0 = std::clamp(guess, lo, a);
  const double g0 = g(x0);
  if (g0 == 0.0) return x0;
  const double x1 = std::clamp(x0 - g0, lo, a);
  if (x1 != x0) {
    const double g1 = g(x1);
    if (g1 == 0.0) return x1;
    if ((g0 > 0.0) != (g1 > 0.0)) {
      left = std::min(x0, x1);
      right = std::max(x0, x1);
      g_left = left == x0 ? g0 : g1;
      g_right = left == x0 ? g1 : g0;
      bracketed = true;
    }
  }
  if (!bracketed) {
    g_left = g(lo);
    g_right = g(a);
  }
  if (!(g_left < 0.0 && g_right > 0.0)) {
    std::ostringstream os;
    os << "Coleman root bracket failed at a=" << a << ", state " << z
       << "; the input policy is not a valid candidate";
    throw std::runtime_error(os.str());
  }
  std::uintmax_t max_iter = 200;
  const auto [r0, r1] = boost::math::tools::toms748_solve(g, left, right, g_left, g_right, tol, max_iter);
  const Eval* e0 = lookup(r0);
  const Eval* e1 = lookup(r1);
  if (e0 && e1) return std::abs(e0->f) <= std::abs(e1->f) ? r0 : r1;
  return 0.5 * (r0 + r1);
}

ConsumptionPolicy ColemanOperator::apply(const ConsumptionPolicy& c, const SolveOptions& options) const {
  if (!(c.grid() == grid_) || c.num_states() != model_.num_states()) {
    throw std::invalid_argument("Coleman operator: policy does not match grid or state space");
  }
  const std::size_t n = grid_.size();
  const std::size_t nz = model_.num_states();
  if (model_.beta() == 0.0) {
    ConsumptionPolicy out = ConsumptionPolicy::identity(grid_, nz, model_.utility(), share_floor_, options.space);
    return out;
  }
  const std::vector<double> rhs0 = binding_rhs(c);
  const UtilitySpec& u = model_.utility();
  std::vector<double> abar(nz);
  for (std::size_t z = 0; z < nz; ++z) abar[z] = u.marginal_inv(rhs0[z]);
  Eigen::MatrixXd next(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nz));

  parallel_for(nz, options.threads, [&](std::size_t z) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = grid_[i];
      // Binding iff u'(a) >= beta E_z R' u'(c(Y', z')).
      const double xi = u.marginal(a) >= rhs0[z] ? a : solve_cell(c, z, a, c.value(i, z), options.root_tol);
      next(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(z)) = xi;
    }
  });

  if (options.damping != 1.0) {
    if (!(options.damping > 0.0 && options.damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
    next = (1.0 - options.damping) * c.values() + options.damping * next;
  }
  ConsumptionPolicy out(grid_, std::move(next), model_.utility(), share_floor_, options.space);
  out.set_thresholds(abar);
  return out;
}

double ColemanOperator::euler_residual(const ConsumptionPolicy& c, std::size_t i, std::size_t z) const {
  const double a = grid_[i];
  const double xi = c.value(i, z);
  return std::abs(model_.utility().marginal(xi) - euler_rhs(c, z, a - xi));
}

SolveResult solve_policy(const ModelSpec& model, const AssetGrid& grid, const SolveOptions& options,
                         const AssumptionReport& report) {
  if (!report.contraction_ok() && !options.force) {
    std::ostringstream os;
    os << "contraction condition fails (beta * r(K) = " << model.beta() * report.contraction.r_K
       << " >= 1); refusing to iterate without force";
    throw std::runtime_error(os.str());
  }
  if (!(options.tol_rho > 0.0)) throw std::invalid_argument("tol_rho must be positive");
  const ColemanOperator op(model, grid, report.alpha());
  ConsumptionPolicy current =
      ConsumptionPolicy::identity(grid, model.num_states(), model.utility(), report.alpha(), options.space);
  std::vector<double> trace;
  for (int k = 1; k <= options.max_iter; ++k) {
    ConsumptionPolicy next = op.apply(current, options);
    const double dist = rho_distance(current, next);
    trace.push_back(dist);
    current = std::move(next);
    if (dist < options.tol_rho) return SolveResult{std::move(current), std::move(trace), k};
  }
  std::ostringstream os;
  os << "Coleman iteration did not reach tol " << options.tol_rho << " within " << options.max_iter
     << " iterations (last distance " << (trace.empty() ? 0.0 : trace.back()) << ")";
  throw NonConvergence(os.str(), std::move(trace));
}

}  // namespace caprisk
