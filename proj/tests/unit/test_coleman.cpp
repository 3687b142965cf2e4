#include <doctest.h>

#include <cmath>
#include <random>

#include "caprisk/coleman.hpp"
#include "caprisk/economy.hpp"
#include "support.hpp"

using namespace caprisk;
using testing_support::constant_model;
using testing_support::small_model;

namespace {

SolveResult solve(const ModelSpec& m, double tol, const AssetGrid& grid = AssetGrid::standard()) {
  SolveOptions o;
  o.tol_rho = tol;
  o.threads = 1;
  return solve_policy(m, grid, o, check_assumptions(m));
}

void check_invariants(const ConsumptionPolicy& c, double alpha) {
  const AssetGrid& g = c.grid();
  for (std::size_t z = 0; z < c.num_states(); ++z) {
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) scale = std::max(scale, c.value(i, z));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(c.value(i, z) > 0.0);
      CHECK(c.value(i, z) <= g[i]);
      CHECK(c.value(i, z) >= alpha * g[i]);
      if (i > 0) CHECK(c.value(i, z) >= c.value(i - 1, z));
      if (i > 0 && i + 1 < g.size()) {
        const double s1 = (c.value(i, z) - c.value(i - 1, z)) / (g[i] - g[i - 1]);
        const double s2 = (c.value(i + 1, z) - c.value(i, z)) / (g[i + 1] - g[i]);
        CHECK(s2 - s1 <= 1e-8 * std::max(1.0, scale));
      }
    }
  }
}

}  // namespace

TEST_SUITE("coleman") {

TEST_CASE("asset grid") {
  const AssetGrid g = AssetGrid::standard();
  CHECK(g.size() == 100);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 50.0);
  for (double a : {1e-4, 0.3, 0.5051, 17.2, 49.99, 50.0}) {
    const std::size_t i = g.locate(a);
    CHECK(g[i] <= a);
    CHECK(a <= g[i + 1]);
  }
  const AssetGrid lg = AssetGrid::log_spaced(1e-3, 100.0, 30);
  CHECK(lg[29] == doctest::Approx(100.0));
  CHECK(lg.locate(0.5) == AssetGrid::custom(lg.points()).locate(0.5));
  CHECK_THROWS(AssetGrid::linear(0.0, 1.0, 10));
  CHECK_THROWS(AssetGrid::custom({1.0, 0.5}));
}

TEST_CASE("policy evaluation") {
  const AssetGrid g = AssetGrid::standard();
  Eigen::MatrixXd v(100, 1);
  for (int i = 0; i < 100; ++i) v(i, 0) = 0.2 * g[i] + 0.5 * std::sqrt(g[i]) * 0.01 + 1e-6;
  for (int i = 0; i < 100; ++i) v(i, 0) = std::min(v(i, 0), g[i]);
  const ConsumptionPolicy c(g, v, UtilitySpec::crra(2.0), 0.05);
  for (int i = 0; i < 100; ++i) CHECK(c.evaluate(g[i], 0) == v(i, 0));
  CHECK(c.evaluate(0.0, 0) == 0.0);
  CHECK(c.evaluate(5e-5, 0) <= 5e-5);
  const double a = 2.0 * g.back();
  const double expect = std::clamp(v(99, 0) + c.slopes()[0] * (a - g.back()), 0.05 * a, a);
  CHECK(c.evaluate(a, 0) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(c.evaluate(a, 0) >= 0.05 * a);
  CHECK(c.evaluate(a, 0) <= a);
  CHECK_THROWS_AS(c.evaluate(-1.0, 0), std::domain_error);
  CHECK_THROWS(ConsumptionPolicy(g, Eigen::MatrixXd::Zero(100, 1), UtilitySpec::log()));
}

TEST_CASE("rho distance") {
  const AssetGrid g = AssetGrid::standard();
  const ConsumptionPolicy id = ConsumptionPolicy::identity(g, 1, UtilitySpec::log());
  const ConsumptionPolicy half(g, id.values() / 2.0, UtilitySpec::log());
  CHECK(rho_distance(id, id) == 0.0);
  CHECK(rho_distance(id, half) == doctest::Approx(1e4).epsilon(1e-12));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<ConsumptionPolicy> p;
    for (int k = 0; k < 3; ++k) p.emplace_back(g, id.values() * u(rng), UtilitySpec::crra(2.0));
    CHECK(rho_distance(p[0], p[1]) == rho_distance(p[1], p[0]));
    CHECK(rho_distance(p[0], p[2]) <= rho_distance(p[0], p[1]) + rho_distance(p[1], p[2]) + 1e-9);
  }
  CHECK_THROWS(rho_distance(id, ConsumptionPolicy::identity(AssetGrid::linear(1e-4, 40.0, 100), 1, UtilitySpec::log())));
}

TEST_CASE("binding threshold closed form") {
  const double beta = 0.95, R = 1.02;
  const ModelSpec m = constant_model(R, 1.0, beta, UtilitySpec::log());
  const ColemanOperator T(m, AssetGrid::standard());
  const ConsumptionPolicy id = ConsumptionPolicy::identity(AssetGrid::standard(), 1, UtilitySpec::log());
  CHECK(T.binding_threshold(id, 0) == doctest::Approx(1.0 / (beta * R)).epsilon(1e-12));
}

TEST_CASE("myopic agent consumes everything") {
  const ModelSpec m = constant_model(1.02, 1.0, 0.0, UtilitySpec::log());
  const ColemanOperator T(m, AssetGrid::standard());
  const ConsumptionPolicy id = ConsumptionPolicy::identity(AssetGrid::standard(), 1, UtilitySpec::log());
  const ConsumptionPolicy next = T.apply(id);
  CHECK(rho_distance(id, next) == 0.0);
  CHECK(std::isinf(T.binding_threshold(id, 0)));
}

TEST_CASE("deterministic log oracle") {
  const double beta = 0.95;
  const ModelSpec m = constant_model(1.02, 1e-6, beta, UtilitySpec::log());
  const SolveResult s = solve(m, 1e-6);
  const AssetGrid& g = s.policy.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < 0.1) continue;
    CHECK(std::abs(s.policy.value(i, 0) / ((1 - beta) * g[i]) - 1.0) < 0.01);
  }
}

TEST_CASE("iterates stay in the candidate space") {
  const ModelSpec m = small_model(Economy::IID, 5);
  const AssumptionReport r = check_assumptions(m);
  const ColemanOperator T(m, AssetGrid::standard(), r.alpha());
  SolveOptions o;
  o.threads = 1;
  ConsumptionPolicy c = ConsumptionPolicy::identity(AssetGrid::standard(), m.num_states(), m.utility(), r.alpha());
  for (int k = 0; k < 15; ++k) {
    c = T.apply(c, o);
    check_invariants(c, r.alpha());
  }
}

TEST_CASE("fixed point, binding region and Euler residuals") {
  const ModelSpec m = small_model(Economy::Constant, 5);
  const AssumptionReport r = check_assumptions(m);
  SolveOptions o;
  o.tol_rho = 1e-11;
  o.threads = 1;
  const SolveResult s = solve_policy(m, AssetGrid::standard(), o, r);
  const ConsumptionPolicy& c = s.policy;
  const ColemanOperator T(m, AssetGrid::standard(), r.alpha());
  check_invariants(c, r.alpha());

  CHECK(rho_distance(T.apply(c, o), c) <= 10 * o.root_tol);

  const std::vector<double> abar = T.binding_thresholds(c);
  for (std::size_t z = 0; z < c.num_states(); ++z) {
    CHECK(abar[z] > 0.0);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < c.grid().size(); ++i) {
      const double a = c.grid()[i];
      const bool binding = c.value(i, z) == a;
      if (binding != (a <= abar[z])) ++mismatches;
      if (!binding) CHECK(T.euler_residual(c, i, z) <= 10 * o.root_tol);
    }
    CHECK(mismatches <= 1);
  }
  for (std::size_t z = 0; z < c.num_states(); ++z) {
    CHECK(c.slopes()[z] >= r.alpha());
    CHECK(c.slopes()[z] < 1.0);
    CHECK_FALSE(c.tail_flags()[z]);
    const std::size_t n = c.grid().size();
    CHECK(c.slopes()[z] <= c.value(n - 1, z) / c.grid()[n - 1] + 1e-12);
  }
}

TEST_CASE("trace decays geometrically at the contraction rate") {
  const ModelSpec m = small_model(Economy::IID, 5);
  const AssumptionReport r = check_assumptions(m);
  const SolveResult s = solve(m, 1e-8);
  const int window = 10 * r.contraction.n;
  REQUIRE(static_cast<int>(s.trace.size()) > window);
  const double last = s.trace.back();
  const double first = s.trace[s.trace.size() - 1 - window];
  const double rate = std::pow(last / first, 1.0 / window);
  CHECK(rate <= std::pow(r.contraction.theta, 1.0 / r.contraction.n) + 0.05);
}

TEST_CASE("contraction between policy pairs") {
  const ModelSpec m = small_model(Economy::IID, 5);
  const AssumptionReport r = check_assumptions(m);
  const ColemanOperator T(m, AssetGrid::standard(), r.alpha());
  const AssetGrid& g = T.grid();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  SolveOptions o;
  o.threads = 1;
  for (int t = 0; t < 5; ++t) {
    std::vector<ConsumptionPolicy> p;
    for (int k = 0; k < 2; ++k) {
      Eigen::MatrixXd v(g.size(), m.num_states());
      for (std::size_t z = 0; z < m.num_states(); ++z) {
        const double share = u(rng);
        for (std::size_t i = 0; i < g.size(); ++i) v(i, z) = share * g[i];
      }
      p.emplace_back(g, v, m.utility(), r.alpha());
    }
    ConsumptionPolicy c = p[0], d = p[1];
    for (int k = 0; k < r.contraction.n; ++k) {
      c = T.apply(c, o);
      d = T.apply(d, o);
    }
    CHECK(rho_distance(c, d) <= r.contraction.theta * rho_distance(p[0], p[1]) * (1 + 1e-3));
  }
}

TEST_CASE("solver gates and failures") {
  const ModelSpec bad = constant_model(1.06, 1.0, 0.95, UtilitySpec::log());
  const AssumptionReport r = check_assumptions(bad);
  SolveOptions o;
  o.threads = 1;
  CHECK_THROWS_AS(solve_policy(bad, AssetGrid::standard(), o, r), std::runtime_error);

  const ModelSpec m = small_model(Economy::Constant, 5);
  o.max_iter = 3;
  try {
    solve_policy(m, AssetGrid::standard(), o, check_assumptions(m));
    FAIL("expected non-convergence");
  } catch (const NonConvergence& e) {
    CHECK(e.trace().size() == 3);
  }
  o.max_iter = 2000;
  o.tol_rho = 0.0;
  CHECK_THROWS_AS(solve_policy(m, AssetGrid::standard(), o, check_assumptions(m)), std::invalid_argument);
}

TEST_CASE("damping and marginal-utility interpolation converge to the same policy") {
  const ModelSpec m = small_model(Economy::Constant, 5);
  const AssumptionReport r = check_assumptions(m);
  SolveOptions o;
  o.tol_rho = 1e-9;
  o.threads = 1;
  const SolveResult plain = solve_policy(m, AssetGrid::standard(), o, r);
  o.damping = 0.7;
  const SolveResult damped = solve_policy(m, AssetGrid::standard(), o, r);
  CHECK(rho_distance(plain.policy, damped.policy) < 1e-6);
  CHECK(damped.iterations > plain.iterations);
  o.damping = 1.0;
  o.space = InterpolationSpace::MarginalUtility;
  const SolveResult mu = solve_policy(m, AssetGrid::standard(), o, r);
  CHECK(mu.policy.space() == InterpolationSpace::MarginalUtility);
  // The two interpolants differ most in the first cells, where u'(c) is steep.
  const Eigen::Index skip = 5;
  const Eigen::Index rows = mu.policy.values().rows() - skip;
  CHECK((mu.policy.values().bottomRows(rows) - plain.policy.values().bottomRows(rows)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("threads do not change the result") {
  const ModelSpec m = small_model(Economy::IID, 3);
  const ColemanOperator T(m, AssetGrid::standard());
  const ConsumptionPolicy id = ConsumptionPolicy::identity(AssetGrid::standard(), m.num_states(), m.utility());
  SolveOptions one, many;
  one.threads = 1;
  many.threads = 4;
  CHECK(T.apply(id, one).values() == T.apply(id, many).values());
}

}
