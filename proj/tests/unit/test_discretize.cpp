#include <doctest.h>

#include <cmath>

#include "caprisk/discretize.hpp"

using namespace caprisk;

TEST_SUITE("discretize") {

TEST_CASE("Tauchen grid and rows") {
  const FiniteChain c = tauchen(0.9, 0.1, 0.5, 7);
  REQUIRE(c.size() == 7);
  const double sd = 0.1 / std::sqrt(1 - 0.81);
  CHECK(c.state(0) == doctest::Approx(0.5 - 3 * sd));
  CHECK(c.state(6) == doctest::Approx(0.5 + 3 * sd));
  CHECK(c.state(3) == doctest::Approx(0.5));
  for (int i = 0; i < 7; ++i) {
    CHECK(c.transition().row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.transition().row(i).minCoeff() >= 0.0);
    CHECK(c.state(6 - i) - 0.5 == doctest::Approx(0.5 - c.state(i)));
  }
}

TEST_CASE("Tauchen matches AR(1) moments on a fine grid") {
  const FiniteChain c = tauchen(0.8, 0.2, 1.0, 41);
  CHECK(c.stationary_mean([](double x) { return x; }) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.autocorrelation() == doctest::Approx(0.8).epsilon(0.02));
  const double var = c.stationary_mean([](double x) { return (x - 1.0) * (x - 1.0); });
  CHECK(var == doctest::Approx(0.04 / 0.36).epsilon(0.05));
}

TEST_CASE("Tauchen edge cases") {
  CHECK(tauchen(0.5, 0.1, 2.0, 1).size() == 1);
  CHECK(tauchen(0.5, 0.1, 2.0, 1).state(0) == 2.0);
  CHECK_THROWS_AS(tauchen(1.0, 0.1, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(tauchen(0.5, 0.0, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(tauchen(0.5, 0.1, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(tauchen(0.5, NAN, 0.0, 3), std::invalid_argument);
  const FiniteChain neg = tauchen(-0.5, 0.1, 0.0, 5);
  CHECK(neg.autocorrelation() < 0.0);
}

TEST_CASE("log volatility chain is positive") {
  const FiniteChain s = discretize_log_volatility(0.2895, 0.1896, -3.2556, 5);
  for (double x : s.states()) CHECK(x > 0.0);
  CHECK(std::log(s.state(2)) == doctest::Approx(-3.2556));
  CHECK(s.stationary_mean([](double x) { return std::log(x); }) == doctest::Approx(-3.2556).epsilon(1e-9));
}

}
