#include <doctest.h>

#include <cmath>
#include <random>

#include "caprisk/stats.hpp"

using namespace caprisk;

namespace {

std::vector<double> pareto(double alpha, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = std::pow(1.0 - u(rng), -1.0 / alpha);
  return x;
}

std::vector<double> lognormal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> d(0.0, 0.8);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("Gini small cases") {
  CHECK(gini({1.0, 2.0, 3.0}) == 2.0 / 9.0);
  CHECK(gini({4.0, 4.0, 4.0, 4.0}) == 0.0);
  CHECK(gini({0.0, 0.0, 1.0}) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(gini({0.0, 0.0}), std::domain_error);
  CHECK_THROWS(gini({}));
  CHECK_THROWS(gini({1.0, -1.0}));
}

TEST_CASE("sorted Gini equals the pairwise formula exactly") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 1000;
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(rng() % 100000);
    x[0] += 1.0;
    CHECK(gini(x) == gini_pairwise(x));
  }
}

TEST_CASE("Pareto tail recovery") {
  const std::vector<double> x = pareto(3.0, 100000, 2024);
  const double t5 = tail_exponent(x, 0.05);
  const double t10 = tail_exponent(x, 0.10);
  CHECK(std::abs(t5 / 3.0 - 1.0) < 0.05);
  CHECK(std::abs(t10 / 3.0 - 1.0) < 0.05);
  CHECK(std::abs(t5 / t10 - 1.0) < 0.03);
  TailOptions shifted;
  shifted.rank_shift = true;
  CHECK(tail_exponent(x, 0.05, shifted) != t5);
}

TEST_CASE("tail exponent preconditions") {
  CHECK_THROWS_AS(tail_exponent(std::vector<double>(50, 1.0), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(tail_exponent(std::vector<double>(1000, 1.0), 0.1), UndefinedExponent);
  CHECK_THROWS_AS(tail_exponent(pareto(2.0, 1000, 1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tail_exponent(pareto(2.0, 1000, 1), 1.0), std::invalid_argument);
}

TEST_CASE("scale invariance") {
  const std::vector<double> x = lognormal(5000, 9);
  std::vector<double> y(x);
  for (double& v : y) v *= 37.5;
  CHECK(gini(y) == doctest::Approx(gini(x)).epsilon(1e-12));
  CHECK(tail_exponent(y, 0.05) == doctest::Approx(tail_exponent(x, 0.05)).epsilon(1e-12));
  const LorenzShares a = lorenz_and_shares(x), b = lorenz_and_shares(y);
  for (std::size_t k = 0; k < a.wealth_shares.size(); ++k) {
    CHECK(b.wealth_shares[k] == doctest::Approx(a.wealth_shares[k]).epsilon(1e-12));
  }
}

TEST_CASE("Lorenz curve and shares") {
  const LorenzShares two = lorenz_and_shares({1.0, 1.0}, 0.5);
  CHECK(two.wealth_shares[0] == 0.5);

  const std::vector<double> x = lognormal(20001, 4);
  const LorenzShares ls = lorenz_and_shares(x);
  REQUIRE(ls.lorenz.size() == 21);
  CHECK(ls.lorenz.front().population == 0.0);
  CHECK(ls.lorenz.front().wealth == 0.0);
  CHECK(ls.lorenz.back().population == 1.0);
  CHECK(ls.lorenz.back().wealth == 1.0);
  CHECK(ls.wealth_shares.back() == 1.0);
  double area = 0.0;
  for (std::size_t k = 1; k < ls.lorenz.size(); ++k) {
    CHECK(ls.lorenz[k].wealth >= ls.lorenz[k - 1].wealth);
    area += 0.5 * (ls.lorenz[k].wealth + ls.lorenz[k - 1].wealth) * 0.05;
    if (k + 1 < ls.lorenz.size()) {
      CHECK(ls.lorenz[k + 1].wealth - 2 * ls.lorenz[k].wealth + ls.lorenz[k - 1].wealth >= -1e-12);
    }
  }
  CHECK(std::abs(gini(x) - (1.0 - 2.0 * area)) <= 0.01);
}

TEST_CASE("fractional cutoffs prorate the boundary observation") {
  // Poorest 50% of {1, 2, 3}: all of 1 and half of 2, out of 6.
  const LorenzShares ls = lorenz_and_shares({3.0, 1.0, 2.0}, 0.5);
  CHECK(ls.wealth_shares[0] == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("Zipf points") {
  const double e = std::exp(1.0);
  const std::vector<ZipfPoint> p = zipf_points({1.0, e, e * e});
  REQUIRE(p.size() == 3);
  CHECK(p[0].log_wealth == doctest::Approx(2.0));
  CHECK(p[0].log_rank == 0.0);
  CHECK(p[1].log_wealth == doctest::Approx(1.0));
  CHECK(p[1].log_rank == doctest::Approx(std::log(2.0)));
  CHECK(p[2].log_wealth == doctest::Approx(0.0));
  CHECK(p[2].log_rank == doctest::Approx(std::log(3.0)));

  const std::vector<double> x = pareto(2.5, 100000, 6);
  const std::vector<ZipfPoint> dec = zipf_points(x, 500);
  CHECK(dec.size() <= 500);
  CHECK(dec.front().log_rank == 0.0);
  CHECK(dec.back().log_rank == doctest::Approx(std::log(100000.0)));
  for (std::size_t k = 1; k < dec.size(); ++k) {
    CHECK(dec[k].log_rank > dec[k - 1].log_rank);
    CHECK(dec[k].log_wealth <= dec[k - 1].log_wealth);
  }
}

TEST_CASE("Zipf slope matches the tail regression on the same slice") {
  std::vector<double> x = pareto(3.0, 100000, 8);
  std::sort(x.begin(), x.end(), std::greater<>());
  const std::vector<double> slice(x.begin(), x.begin() + 5000);
  const double direct = tail_exponent(x, 0.05);
  const double via_zipf = zipf_slope(zipf_points(slice, 5000));
  CHECK(std::abs(direct - via_zipf) < 1e-6);
}

TEST_CASE("inequality report") {
  const std::vector<double> x = lognormal(10000, 3);
  const InequalityReport r = inequality_report(x);
  CHECK(r.gini == gini(x));
  CHECK(r.wealth_shares.size() == 20);
  CHECK(r.sample_size == 10000);
  CHECK(r.tail_exponent_top5 > 0.0);
}

}
