#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "caprisk/coleman.hpp"
#include "caprisk/simulate.hpp"
#include "support.hpp"

using namespace caprisk;

namespace {

struct Solved {
  ModelSpec model;
  ConsumptionPolicy policy;
};

const Solved& iid_solution() {
  static const Solved s = [] {
    ModelSpec m = testing_support::small_model(Economy::IID, 5);
    SolveOptions o;
    o.threads = 1;
    SolveResult r = solve_policy(m, AssetGrid::standard(), o, check_assumptions(m));
    return Solved{m, r.policy};
  }();
  return s;
}

SimConfig small_config(std::size_t n, int horizon) {
  SimConfig c;
  c.n_agents = n;
  c.horizon = horizon;
  c.burn_in = std::min(500, horizon - 1);
  c.threads = 1;
  return c;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("law of motion") {
  const Solved& s = iid_solution();
  const Simulator sim(s.model, s.policy);
  const StepDraws d{0.3, 0.4, -0.7};

  SUBCASE("binding point saves nothing") {
    const double a = s.policy.grid()[0];
    REQUIRE(s.policy.value(0, 2) == a);
    const StepResult r = sim.step(a, 2, d);
    CHECK(r.assets == s.model.process().income_draw(r.state, d.eta));
  }
  SUBCASE("positive savings") {
    const double a = 20.0;
    const StepResult r = sim.step(a, 2, d);
    const double savings = a - s.policy(a, 2);
    const ExogenousProcess& p = s.model.process();
    CHECK(r.assets == doctest::Approx(p.return_draw(r.state, d.zeta) * savings + p.income_draw(r.state, d.eta)));
  }
  SUBCASE("next state follows the transition row") {
    const Eigen::MatrixXd& P = s.model.process().transition();
    std::vector<int> counts(5, 0);
    for (int k = 0; k < 10000; ++k) ++counts[sim.draw_state(1, (k + 0.5) / 10000.0)];
    for (int j = 0; j < 5; ++j) CHECK(counts[j] / 10000.0 == doctest::Approx(P(1, j)).epsilon(1e-3));
  }
}

TEST_CASE("constant economy, unit income, consume everything") {
  const ModelSpec m = testing_support::constant_model(1.02, 1.0, 0.95, UtilitySpec::log());
  const ConsumptionPolicy id = ConsumptionPolicy::identity(AssetGrid::standard(), 1, UtilitySpec::log());
  const Simulator sim(m, id);
  CHECK(sim.step(3.0, 0, {0.5, 1.0, 1.0}).assets == doctest::Approx(1.0).epsilon(1e-14));
  const Eigen::MatrixXd half = id.values() / 2.0;
  const ConsumptionPolicy c(AssetGrid::standard(), half, UtilitySpec::log());
  CHECK(Simulator(m, c).step(4.0, 0, {0.5, 0.0, 0.0}).assets == doctest::Approx(1.02 * 2.0 + 1.0).epsilon(1e-14));
}

TEST_CASE("runs are reproducible and order-insensitive") {
  const Solved& s = iid_solution();
  const Simulator sim(s.model, s.policy);
  SimConfig c = small_config(2000, 200);
  const WealthSample a = sim.run(c, "fp");
  const WealthSample b = sim.run(c, "fp");
  CHECK(a.assets == b.assets);
  CHECK(a.states == b.states);
  CHECK(a.policy_fingerprint == "fp");
  c.threads = 3;
  CHECK(sim.run(c).assets == a.assets);
  c.threads = 1;
  c.n_agents = 2500;
  const WealthSample longer = sim.run(c);
  CHECK(std::equal(a.assets.begin(), a.assets.end(), longer.assets.begin()));
  c.seed = 43;
  c.n_agents = 2000;
  CHECK(sim.run(c).assets != a.assets);
}

TEST_CASE("positivity and sample sizes") {
  const Solved& s = iid_solution();
  const Simulator sim(s.model, s.policy);
  SimConfig c = small_config(1000, 100);
  const WealthSample panel = sim.run(c);
  CHECK(panel.assets.size() == 1000);
  CHECK(*std::min_element(panel.assets.begin(), panel.assets.end()) > 0.0);
  c.mode = SimConfig::Mode::SinglePath;
  c.burn_in = 50;
  const WealthSample path = sim.run(c);
  CHECK(path.assets.size() == 1000);
  CHECK(*std::min_element(path.assets.begin(), path.assets.end()) > 0.0);
  c.initial = SimConfig::Initial::StationaryZ;
  CHECK(sim.run(c).assets.size() == 1000);
}

TEST_CASE("config validation") {
  SimConfig c;
  c.n_agents = 0;
  CHECK_THROWS(c.validate());
  c = SimConfig{};
  c.burn_in = c.horizon;
  CHECK_THROWS(c.validate());
  c.mode = SimConfig::Mode::SinglePath;
  CHECK_NOTHROW(c.validate());
  const Solved& s = iid_solution();
  SimConfig bad = small_config(10, 10);
  bad.z0 = 99;
  CHECK_THROWS(Simulator(s.model, s.policy).run(bad));
}

TEST_CASE("time averages") {
  CHECK(time_average(std::vector<double>(10, 2.5), HFunction::identity()) == 2.5);
  CHECK(time_average({1.0, 2.0, 3.0}, HFunction::indicator_above(0.0)) == 1.0);
  CHECK(time_average({1.0, 2.0, 3.0}, HFunction::indicator_above(1.5)) == doctest::Approx(2.0 / 3.0));
  CHECK(time_average({0.0, std::exp(1.0) - 1.0}, HFunction::log1p()) == doctest::Approx(0.5));
  CHECK_THROWS(time_average({}, HFunction::identity()));
}

TEST_CASE("standard errors") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 2.0);
  std::vector<double> x(40000);
  for (double& v : x) v = n(rng);
  CHECK(standard_error(x) == doctest::Approx(2.0 / 200.0).epsilon(0.05));
  CHECK(batch_means_se(x, 40) == doctest::Approx(2.0 / 200.0).epsilon(0.35));
  CHECK_THROWS(standard_error({1.0}));
}

TEST_CASE("split-half KS diagnostic") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(20000);
  for (double& v : x) v = n(rng);
  CHECK(split_half_ks(x).passed);
  for (std::size_t i = x.size() / 2; i < x.size(); ++i) x[i] += 0.5;
  const StationarityDiagnostic d = split_half_ks(x);
  CHECK_FALSE(d.passed);
  CHECK(d.statistic > d.critical_1pct);
}

TEST_CASE("panel and single path agree on mean wealth") {
  const Solved& s = iid_solution();
  const Simulator sim(s.model, s.policy);
  SimConfig c = small_config(20000, 300);
  const WealthSample panel = sim.run(c);
  c.mode = SimConfig::Mode::SinglePath;
  c.n_agents = 200000;
  const WealthSample path = sim.run(c);
  const double diff = time_average(panel.assets, HFunction::identity()) - time_average(path.assets, HFunction::identity());
  const double se = std::hypot(standard_error(panel.assets), batch_means_se(path.assets));
  CHECK(std::abs(diff) < 3 * se);
}

}
