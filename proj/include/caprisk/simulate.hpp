#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "caprisk/model.hpp"
#include "caprisk/policy.hpp"

namespace caprisk {

/// Independent engine for one stream, key-split from the master seed: the
/// (seed, stream) pair is hashed through std::seed_seq, so streams do not
/// depend on the order in which they are created.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream);

struct SimConfig {
  enum class Mode { Panel, SinglePath };
  enum class Initial { PointMass, StationaryZ };

  std::size_t n_agents = 1'000'000;
  int horizon = 1000;  // periods per agent (Panel)
  int burn_in = 500;   // discarded periods (SinglePath); must be < horizon
  std::uint64_t seed = 42;
  Mode mode = Mode::Panel;
  Initial initial = Initial::PointMass;
  double a0 = 1.0;
  std::optional<std::size_t> z0;  // default: state nearest the stationary means
  int threads = 0;

  void validate() const;
};

/// Simulated cross-section used to estimate statistics of the stationary law.
struct WealthSample {
  std::vector<double> assets;
  std::vector<std::uint32_t> states;
  SimConfig config;
  std::string policy_fingerprint;
};

/// Innovation draws for one period: u picks z' by inverse CDF of the
/// transition row; zeta and eta are standard normal.
struct StepDraws {
  double u;
  double zeta;
  double eta;
};

struct StepResult {
  double assets;
  std::size_t state;
};

/// Law of motion a' = R(z', zeta') (a - c(a, z)) + Y(z', eta'), z' ~ P(z, .).
class Simulator {
 public:
  Simulator(const ModelSpec& model, const ConsumptionPolicy& policy);

  StepResult step(double a, std::size_t z, const StepDraws& draws) const;

  /// Deterministic given config.seed. Panel keeps each agent's terminal state;
  /// SinglePath keeps the post-burn-in trajectory of one agent.
  WealthSample run(const SimConfig& config, std::string policy_fingerprint = {}) const;

  std::size_t draw_state(std::size_t z, double u) const;

 private:
  template <class Engine>
  StepResult advance(double a, std::size_t z, Engine& engine) const;
  std::size_t initial_state(const SimConfig& config, std::mt19937_64& engine) const;

  const ModelSpec& model_;
  const ConsumptionPolicy& policy_;
  std::vector<std::vector<double>> cdf_;
  std::vector<double> stationary_cdf_;
};

/// Registry of functions h for time averages.
struct HFunction {
  enum class Kind { Identity, Log1p, IndicatorAbove };
  Kind kind = Kind::Identity;
  double threshold = 0.0;

  static HFunction identity() { return {Kind::Identity, 0.0}; }
  static HFunction log1p() { return {Kind::Log1p, 0.0}; }
  static HFunction indicator_above(double x) { return {Kind::IndicatorAbove, x}; }
  double operator()(double a) const;
};

/// (1/T) sum_t h(a_t); throws on an empty sample.
double time_average(const std::vector<double>& path, const HFunction& h);

/// Sample standard error of the mean, treating values as independent.
double standard_error(const std::vector<double>& values);

/// Standard error of the mean of a correlated path from the spread of
/// non-overlapping batch means.
double batch_means_se(const std::vector<double>& path, std::size_t batches = 50);

/// Two-sample Kolmogorov-Smirnov check between the halves of a path.
struct StationarityDiagnostic {
  double statistic = 0.0;
  double critical_1pct = 0.0;
  bool passed = false;
};
StationarityDiagnostic split_half_ks(const std::vector<double>& path);

}  // namespace caprisk
