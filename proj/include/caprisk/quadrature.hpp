#pragma once

#include <cstdint>
#include <vector>

namespace caprisk {

/// Nodes and weights approximating expectations over a standard normal draw.
struct NormalRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Hermite rule for N(0,1) (probabilists' weight), via Golub-Welsch.
NormalRule gauss_hermite(int n);

/// How expectations over the i.i.d. innovations (zeta, eta) are evaluated.
struct ExpectationRule {
  enum class Kind { GaussHermite, MonteCarlo };

  Kind kind = Kind::GaussHermite;
  int nodes = 21;            // per innovation, Gauss-Hermite
  int draws = 1000;          // joint (zeta, eta) draws, Monte Carlo
  std::uint64_t seed = 20190601;

  static ExpectationRule quadrature(int n) { return {Kind::GaussHermite, n, 1000, 20190601}; }
  static ExpectationRule monte_carlo(int draws, std::uint64_t seed) {
    return {Kind::MonteCarlo, 21, draws, seed};
  }
};

}  // namespace caprisk
