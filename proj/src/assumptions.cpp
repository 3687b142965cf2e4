#include "caprisk/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

namespace caprisk {

namespace {

// Power iteration on an irreducible block; the shift makes it primitive.
double block_radius(const Eigen::MatrixXd& m, double tol, int max_iter) {
  const Eigen::Index n = m.rows();
  const double scale = m.rowwise().sum().maxCoeff();
  if (scale == 0.0) return 0.0;

  const double shift = 0.1 * scale;
  const Eigen::MatrixXd a = m + shift * Eigen::MatrixXd::Identity(n, n);

  std::mt19937_64 engine(0x5eed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = unif(engine);
  x /= x.lpNorm<Eigen::Infinity>();

  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = a * x;
    lambda = y.lpNorm<Eigen::Infinity>();
    if (lambda == 0.0) return 0.0;
    y /= lambda;
    // Residual of the eigen-equation for the normalized iterate.
    const double residual = (a * y - lambda * y).lpNorm<Eigen::Infinity>();
    x = std::move(y);
    if (residual <= tol * lambda * 1e-2) return std::max(0.0, lambda - shift);
  }
  throw NumericalError("spectral_radius: power iteration did not converge", std::max(0.0, lambda - shift));
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& m, double tol, int max_iter) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("spectral_radius: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("spectral_radius: matrix entries must be finite");
  if ((m.array() < 0.0).any()) throw std::invalid_argument("spectral_radius: matrix must be non-negative");
  const Eigen::Index n = m.rows();

  // r(M) is the largest radius over the irreducible diagonal blocks, which
  // are the strongly connected components of the graph i -> j when m(i, j) > 0.
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Graph g(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m(i, j) > 0.0) boost::add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j), g);
    }
  }
  std::vector<int> component(static_cast<std::size_t>(n));
  const int count = boost::strong_components(g, component.data());

  double radius = 0.0;
  for (int c = 0; c < count; ++c) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (component[static_cast<std::size_t>(i)] == c) idx.push_back(i);
    }
    if (idx.size() == 1) {
      radius = std::max(radius, m(idx[0], idx[0]));
      continue;
    }
    radius = std::max(radius, block_radius(m(idx, idx), tol, max_iter));
  }
  return radius;
}

Eigen::MatrixXd expected_return_operator(const ModelSpec& model) {
  const auto n = static_cast<Eigen::Index>(model.num_states());
  Eigen::VectorXd d(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d[j] = model.conditional_mean(static_cast<std::size_t>(j), [](double R, double) { return R; });
  }
  return model.process().transition() * d.asDiagonal();
}

ContractionCheck check_contraction(const ModelSpec& model, int max_n) {
  ContractionCheck out;
  const Eigen::MatrixXd k = expected_return_operator(model);
  out.r_K = spectral_radius(k);
  out.ok = model.beta() * out.r_K < 1.0;

  // sup_z E_z R_1...R_n = ||K^n 1||_inf = ||K^n||_inf for non-negative K.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(k.rows());
  double beta_pow = 1.0;
  for (int n = 1; n <= max_n; ++n) {
    v = k * v;
    beta_pow *= model.beta();
    out.n = n;
    out.theta = beta_pow * v.maxCoeff();
    if (out.theta < 1.0) break;
  }
  return out;
}

namespace {

double sup_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

void fill_alpha_band(PatienceCheck& p) {
  p.alpha_lo = std::max(0.0, 1.0 - 1.0 / p.lhs_inner);
  p.alpha_hi = std::min(1.0, 1.0 - 1.0 / p.rhs);
  p.alpha = p.ok && p.alpha_hi > p.alpha_lo ? 0.5 * (p.alpha_lo + p.alpha_hi) : 0.0;
}

}  // namespace

PatienceCheck check_patience(const ModelSpec& model) {
  const UtilitySpec& u = model.utility();
  const double gamma = u.gamma();
  if (!(gamma > 0.0)) throw std::invalid_argument("check_patience: gamma must be positive");
  const ExogenousProcess& proc = model.process();
  PatienceCheck out;

  if (proc.separable() && !proc.constant_return()) {
    // Separable form: D_mu = diag(e^mu), D_sigma = diag(e^{sigma^2/2}),
    // V_mu = e^{(1-gamma) mu}, V_sigma = e^{(1-gamma)^2 sigma^2 / 2}.
    const FiniteChain& mu = proc.mu();
    const FiniteChain& sg = proc.sigma();
    const auto m = static_cast<Eigen::Index>(mu.size());
    const auto s = static_cast<Eigen::Index>(sg.size());
    Eigen::VectorXd d_mu(m), v_mu(m), d_sg(s), v_sg(s);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double x = mu.state(static_cast<std::size_t>(i));
      d_mu[i] = std::exp(x);
      v_mu[i] = std::exp((1.0 - gamma) * x);
    }
    for (Eigen::Index i = 0; i < s; ++i) {
      const double x = sg.state(static_cast<std::size_t>(i));
      d_sg[i] = std::exp(0.5 * x * x);
      v_sg[i] = std::exp(0.5 * (1.0 - gamma) * (1.0 - gamma) * x * x);
    }
    out.r_mu = spectral_radius(mu.transition() * d_mu.asDiagonal());
    out.r_sigma = spectral_radius(sg.transition() * d_sg.asDiagonal());
    out.lhs_inner = out.r_mu * out.r_sigma;
    const double norm = sup_norm(mu.transition() * v_mu) * sup_norm(sg.transition() * v_sg);
    out.rhs = std::pow(model.beta() * norm, -1.0 / gamma);
  } else {
    // General finite-chain form: max{r(Pi D), 1} < (beta ||Pi V||)^(-1/gamma),
    // V_z = E[R^(1-gamma) | z].
    out.separable_form = false;
    const Eigen::MatrixXd k = expected_return_operator(model);
    out.lhs_inner = spectral_radius(k);
    const Eigen::VectorXd pv =
        model.one_step_mean([gamma](double R, double) { return std::pow(R, 1.0 - gamma); });
    out.rhs = std::pow(model.beta() * sup_norm(pv), -1.0 / gamma);
  }
  out.lhs = std::max(out.lhs_inner, 1.0);
  out.ok = out.lhs < out.rhs;
  fill_alpha_band(out);
  return out;
}

IncomeMoments check_income_moments(const ModelSpec& model) {
  const UtilitySpec& u = model.utility();
  IncomeMoments out;
  out.sup_EY = model.one_step_mean([](double, double Y) { return Y; }).maxCoeff();
  out.sup_E_uprime_Y = model.one_step_mean([&](double, double Y) { return u.marginal(Y); }).maxCoeff();
  out.sup_E_uprime_Y_sq = model.one_step_mean([&](double, double Y) {
    const double m = u.marginal(Y);
    return m * m;
  }).maxCoeff();
  out.sup_E_R_uprime_Y =
      model.one_step_mean([&](double R, double Y) { return R * u.marginal(Y); }).maxCoeff();
  out.sup_E_R = model.one_step_mean([](double R, double) { return R; }).maxCoeff();
  out.sup_E_R_sq = model.one_step_mean([](double R, double) { return R * R; }).maxCoeff();
  out.ok = std::isfinite(out.sup_EY) && std::isfinite(out.sup_E_uprime_Y) &&
           std::isfinite(out.sup_E_uprime_Y_sq) && std::isfinite(out.sup_E_R_uprime_Y) &&
           std::isfinite(out.sup_E_R) && std::isfinite(out.sup_E_R_sq);
  return out;
}

DriftCheck check_drift(const ModelSpec& model) {
  // Finite Z: q = 0 and q' = sup_z E_z Y_2 = ||P^2 E[Y | z']||_inf.
  const auto n = static_cast<Eigen::Index>(model.num_states());
  Eigen::VectorXd ey(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    ey[j] = model.conditional_mean(static_cast<std::size_t>(j), [](double, double Y) { return Y; });
  }
  const Eigen::MatrixXd& p = model.process().transition();
  DriftCheck out;
  out.q = 0.0;
  out.q_prime = (p * (p * ey)).maxCoeff();
  return out;
}

AssumptionReport check_assumptions(const ModelSpec& model) {
  AssumptionReport r;
  r.contraction = check_contraction(model);
  r.patience = check_patience(model);
  r.income = check_income_moments(model);
  r.drift = check_drift(model);
  return r;
}

}  // namespace caprisk
