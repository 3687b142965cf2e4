#include <doctest.h>

#include <cmath>
#include <numeric>

#include "caprisk/discretize.hpp"
#include "caprisk/economy.hpp"
#include "caprisk/quadrature.hpp"
#include "support.hpp"

using namespace caprisk;

namespace {

FiniteChain two_state(double a, double b, double p, double q) {
  Eigen::MatrixXd m(2, 2);
  m << p, 1 - p, 1 - q, q;
  return FiniteChain({a, b}, m);
}

}  // namespace

TEST_SUITE("model_core") {

TEST_CASE("chain validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain({0.0, 1.0}, bad), std::invalid_argument);
  Eigen::MatrixXd ok(2, 2);
  ok << 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain({1.0, 0.0}, ok), std::invalid_argument);
  CHECK_THROWS_AS(FiniteChain({1.0, 1.0}, ok), std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.5, -0.5, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain({0.0, 1.0}, neg), std::invalid_argument);
}

TEST_CASE("stationary distribution of a two-state chain") {
  const FiniteChain c = two_state(0.0, 1.0, 0.9, 0.7);
  const Eigen::VectorXd pi = c.stationary();
  // pi_1 = (1 - p) / (2 - p - q)
  CHECK(pi[1] == doctest::Approx(0.1 / 0.4).epsilon(1e-12));
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-14));
  Eigen::MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  CHECK(FiniteChain({0.0, 1.0}, flip).stationary()[0] == doctest::Approx(0.5));
}

TEST_CASE("composite ordering: chi slowest, sigma fastest") {
  SUBCASE("single state") {
    ExogenousProcess p(FiniteChain::constant(0.0), FiniteChain::constant(0.01), FiniteChain::constant(0.1), 0.0);
    CHECK(p.size() == 1);
  }
  SUBCASE("K=2, M=1, N=2") {
    ExogenousProcess p(two_state(-1.0, 1.0, 0.8, 0.8), FiniteChain::constant(0.02), two_state(0.1, 0.2, 0.6, 0.7),
                       0.1);
    REQUIRE(p.size() == 4);
    CHECK(p.state(0).chi == -1.0);
    CHECK(p.state(0).sigma == 0.1);
    CHECK(p.state(1).chi == -1.0);
    CHECK(p.state(1).sigma == 0.2);
    CHECK(p.state(2).chi == 1.0);
    CHECK(p.state(2).sigma == 0.1);
    CHECK(p.state(3).chi == 1.0);
    CHECK(p.state(3).sigma == 0.2);
    CHECK(p.index(1, 0, 1) == 3);
  }
  SUBCASE("calibrated sizes") {
    CHECK(build_model(calibrated(Economy::ModelI)).num_states() == 25);
    CHECK(build_model(calibrated(Economy::ModelII)).num_states() == 25);
    CHECK(build_model(calibrated(Economy::IID)).num_states() == 5);
    CHECK(build_model(calibrated(Economy::Full)).num_states() == 125);
  }
}

TEST_CASE("Kronecker kernel") {
  const FiniteChain chi = two_state(-1.0, 1.0, 0.8, 0.6);
  const FiniteChain mu = two_state(0.01, 0.03, 0.7, 0.9);
  const FiniteChain sig = two_state(0.02, 0.05, 0.5, 0.4);
  ExogenousProcess p(chi, mu, sig, 0.2);
  const Eigen::MatrixXd& P = p.transition();
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(P.row(static_cast<Eigen::Index>(i)).sum() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto& a = p.state(i);
      const auto& b = p.state(j);
      const double expect = chi.transition()(a.i_chi, b.i_chi) * mu.transition()(a.i_mu, b.i_mu) *
                            sig.transition()(a.i_sigma, b.i_sigma);
      CHECK(P(i, j) == doctest::Approx(expect).epsilon(1e-15));
    }
  }
}

TEST_CASE("composite matrix escape hatch") {
  ExogenousProcess p(two_state(-1.0, 1.0, 0.8, 0.6), FiniteChain::constant(0.02), FiniteChain::constant(0.05), 0.1);
  Eigen::MatrixXd m(2, 2);
  m << 0.3, 0.7, 0.2, 0.8;
  const ExogenousProcess q = p.with_composite_transition(m);
  CHECK_FALSE(q.separable());
  CHECK(q.transition()(0, 1) == 0.7);
  CHECK_THROWS(p.with_composite_transition(Eigen::MatrixXd::Identity(3, 3)));
}

TEST_CASE("Gauss-Hermite rule") {
  const NormalRule r = gauss_hermite(21);
  CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  double m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    m4 += r.weights[i] * std::pow(r.nodes[i], 4);
  }
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(gauss_hermite(1).nodes[0] == 0.0);
  CHECK_THROWS(gauss_hermite(0));
}

TEST_CASE("lognormal mean identity from the nodes") {
  for (double s : {-2.0, -1.0, -0.3, 0.2, 1.0, 2.0}) {
    const NormalRule r = gauss_hermite(21);
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) m += r.weights[i] * std::exp(s * r.nodes[i]);
    CHECK(std::abs(m / std::exp(0.5 * s * s) - 1.0) < 1e-6);
  }
}

TEST_CASE("conditional (R, Y) nodes") {
  ExogenousProcess p(FiniteChain::constant(0.3), FiniteChain::constant(0.02), FiniteChain::constant(0.2), 0.25);
  SUBCASE("weights sum to one and lognormal mean") {
    const auto nodes = p.conditional_nodes(0, ExpectationRule::quadrature(21));
    CHECK(nodes.size() == 21 * 21);
    double w = 0, er = 0, ey = 0;
    for (const RYNode& n : nodes) {
      w += n.weight;
      er += n.weight * n.R;
      ey += n.weight * n.Y;
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(er / std::exp(0.02 + 0.02) - 1.0) < 1e-6);
    CHECK(std::abs(ey / std::exp(0.3 + 0.25 * 0.25 / 2) - 1.0) < 1e-6);
  }
  SUBCASE("one node is the midpoint") {
    const auto nodes = p.conditional_nodes(0, ExpectationRule::quadrature(1));
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].R == doctest::Approx(std::exp(0.02)));
    CHECK(nodes[0].Y == doctest::Approx(std::exp(0.3)));
  }
  SUBCASE("degenerate innovations") {
    ExogenousProcess d(FiniteChain::constant(0.3), FiniteChain::constant(0.02), FiniteChain::constant(0.2), 0.0,
                       ReturnMode::Constant);
    const auto nodes = d.conditional_nodes(0, ExpectationRule::quadrature(21));
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].weight == 1.0);
    CHECK(nodes[0].Y == doctest::Approx(std::exp(0.3)));
  }
  SUBCASE("invalid state") { CHECK_THROWS(p.conditional_nodes(3, ExpectationRule::quadrature(5))); }
  SUBCASE("Monte Carlo draws are seeded") {
    const auto a = p.conditional_nodes(0, ExpectationRule::monte_carlo(1000, 7));
    const auto b = p.conditional_nodes(0, ExpectationRule::monte_carlo(1000, 7));
    REQUIRE(a.size() == 1000);
    CHECK(a[17].R == b[17].R);
    CHECK(a[17].weight == doctest::Approx(1e-3));
  }
}

TEST_CASE("collapsed return modes") {
  const EconomyParams p = calibrated(Economy::Constant);
  const ExogenousProcess c = build_process(p);
  REQUIRE(c.constant_return().has_value());
  CHECK(*c.constant_return() == doctest::Approx(std::exp(0.0281 + 0.5 * p.sigma_hat() * p.sigma_hat())).epsilon(1e-14));
  CHECK(p.sigma_hat() == doctest::Approx(0.0393).epsilon(5e-3));
  const ExogenousProcess iid = build_process(calibrated(Economy::IID));
  CHECK(iid.mu().size() == 1);
  CHECK(iid.sigma().size() == 1);
  CHECK(iid.sigma().state(0) == doctest::Approx(p.sigma_hat()));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(testing_support::constant_model(1.02, 1.0, 1.0, UtilitySpec::log()), std::invalid_argument);
  CHECK_THROWS_AS(testing_support::constant_model(1.02, 1.0, -0.1, UtilitySpec::log()), std::invalid_argument);
  CHECK_NOTHROW(testing_support::constant_model(1.02, 1.0, 0.0, UtilitySpec::log()));
  CHECK_THROWS(ExogenousProcess(FiniteChain::constant(0.0), FiniteChain::constant(0.0), FiniteChain::constant(0.0), 0.1));
}

TEST_CASE("economy names") {
  for (Economy e : {Economy::Full, Economy::ModelI, Economy::ModelII, Economy::IID, Economy::Constant}) {
    CHECK(parse_economy(economy_name(e)) == e);
  }
  CHECK_THROWS(parse_economy("model_iii"));
}

}
