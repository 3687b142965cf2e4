#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "caprisk/assumptions.hpp"
#include "caprisk/model.hpp"
#include "caprisk/policy.hpp"

namespace caprisk {

struct SolveOptions {
  double tol_rho = 1e-6;    // stop when rho(c_k, c_{k+1}) < tol_rho
  int max_iter = 2000;
  double root_tol = 1e-10;  // Euler residual in marginal-utility units
  double damping = 1.0;     // c_{k+1} = (1 - d) c_k + d T c_k
  InterpolationSpace space = InterpolationSpace::Consumption;
  bool force = false;       // iterate even if the contraction check fails
  int threads = 0;          // 0: hardware concurrency
};

/// Thrown when the iteration does not reach tol_rho; carries the rho trace.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

/// The time-iteration (Coleman) operator of a model on a fixed asset grid.
///
/// For each (a, z), Tc(a, z) is the xi in (0, a] solving
///   u'(xi) = max{ beta E_z R' u'(c(R'(a - xi) + Y', z')), u'(a) }.
/// Expectations compose the composite transition row with the conditional
/// (R, Y) nodes of the model.
class ColemanOperator {
 public:
  ColemanOperator(const ModelSpec& model, AssetGrid grid, double share_floor = 0.0);

  const ModelSpec& model() const { return model_; }
  const AssetGrid& grid() const { return grid_; }
  double share_floor() const { return share_floor_; }

  /// beta E_z R' u'(c(R' s + Y', z')) for savings s >= 0.
  double euler_rhs(const ConsumptionPolicy& c, std::size_t z, double savings) const;

  /// abar_c(z) = (u')^{-1}[beta E_z R' u'(c(Y', z'))]; Tc(a, z) = a iff a <= abar_c(z).
  double binding_threshold(const ConsumptionPolicy& c, std::size_t z) const;
  std::vector<double> binding_thresholds(const ConsumptionPolicy& c) const;

  /// One application of T. The returned policy carries the thresholds of c.
  ConsumptionPolicy apply(const ConsumptionPolicy& c, const SolveOptions& options = {}) const;

  /// |u'(c(a,z)) - beta E_z R' u'(c(R'(a - c) + Y', z'))| at grid point i.
  double euler_residual(const ConsumptionPolicy& c, std::size_t i, std::size_t z) const;

 private:
  struct NextNodes {
    std::vector<double> wR;  // weight * R
    std::vector<double> R;
    std::vector<double> Y;
  };
  struct Successor {
    std::size_t state;
    double prob;
  };

  std::vector<double> binding_rhs(const ConsumptionPolicy& c) const;
  double inner_mean(const ConsumptionPolicy& c, std::size_t next, double savings) const;
  double solve_cell(const ConsumptionPolicy& c, std::size_t z, double a, double guess,
                    double root_tol) const;

  ModelSpec model_;
  AssetGrid grid_;
  double share_floor_;
  std::vector<NextNodes> nodes_;
  std::vector<std::vector<Successor>> successors_;
};

struct SolveResult {
  ConsumptionPolicy policy;
  std::vector<double> trace;  // rho distance between successive iterates
  int iterations = 0;
};

/// Iterates T from c0(a, z) = a until the rho distance between successive
/// iterates falls below options.tol_rho. Refuses to run when the contraction
/// check fails unless options.force is set.
SolveResult solve_policy(const ModelSpec& model, const AssetGrid& grid, const SolveOptions& options,
                         const AssumptionReport& report);

}  // namespace caprisk
