#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "caprisk/model.hpp"

namespace caprisk {

/// Raised when an iterative numerical method fails to converge; carries the
/// best estimate reached.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Dominant eigenvalue modulus of a square non-negative matrix by power
/// iteration from a seeded positive start, run separately on each irreducible
/// diagonal block. The iteration uses the shifted block M + tI (same Perron
/// vector, no periodic oscillation) and stops once the eigen-residual is below
/// tol relative to the estimate.
double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-10, int max_iter = 200000);

/// Result of the contraction check beta * r(K) < 1 with K = P diag(E[R | z']).
struct ContractionCheck {
  double r_K = 0.0;
  bool ok = false;
  int n = 0;         // smallest n with beta^n ||K^n|| < 1 (capped)
  double theta = 0;  // beta^n ||K^n||_inf = beta^n sup_z E_z R_1 ... R_n
};

struct PatienceCheck {
  double lhs_inner = 0.0;  // r(Pi_mu D_mu) r(Pi_sigma D_sigma), or r(Pi D)
  double lhs = 0.0;        // max(lhs_inner, 1)
  double rhs = 0.0;        // (beta ||Pi_mu V_mu|| ||Pi_sigma V_sigma||)^(-1/gamma)
  bool ok = false;
  bool separable_form = true;
  double r_mu = 0.0;       // separable form only
  double r_sigma = 0.0;
  double alpha_lo = 0.0;   // feasible share bounds: (alpha_lo, alpha_hi]
  double alpha_hi = 0.0;
  double alpha = 0.0;      // midpoint of the band when ok, otherwise 0
};

struct IncomeMoments {
  double sup_EY = 0.0;
  double sup_E_uprime_Y = 0.0;
  double sup_E_uprime_Y_sq = 0.0;
  double sup_E_R_uprime_Y = 0.0;
  double sup_E_R = 0.0;
  double sup_E_R_sq = 0.0;
  bool ok = false;
};

struct DriftCheck {
  double q = 0.0;
  double q_prime = 0.0;
};

/// Every checkable sufficient condition for optimality and stability.
struct AssumptionReport {
  ContractionCheck contraction;
  PatienceCheck patience;
  IncomeMoments income;
  DriftCheck drift;

  bool contraction_ok() const { return contraction.ok; }
  /// Existence and stability: the contraction and patience conditions jointly.
  bool stability_ok() const { return contraction.ok && patience.ok; }
  double alpha() const { return patience.alpha; }
};

ContractionCheck check_contraction(const ModelSpec& model, int max_n = 64);
PatienceCheck check_patience(const ModelSpec& model);
IncomeMoments check_income_moments(const ModelSpec& model);
DriftCheck check_drift(const ModelSpec& model);
AssumptionReport check_assumptions(const ModelSpec& model);

/// Expected-return operator K = P diag(E[R | z']).
Eigen::MatrixXd expected_return_operator(const ModelSpec& model);

}  // namespace caprisk
