#include "caprisk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "caprisk/parallel.hpp"

namespace caprisk {

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void SimConfig::validate() const {
  if (n_agents == 0) throw std::invalid_argument("simulation needs at least one agent");
  if (horizon < 1) throw std::invalid_argument("simulation horizon must be positive");
  if (burn_in < 0) throw std::invalid_argument("burn-in must be non-negative");
  if (mode == Mode::Panel && burn_in >= horizon) throw std::invalid_argument("burn-in must be shorter than the horizon");
  if (!(a0 >= 0.0)) throw std::invalid_argument("initial assets must be non-negative");
}

Simulator::Simulator(const ModelSpec& model, const ConsumptionPolicy& policy)
    : model_(model), policy_(policy) {
  if (policy.num_states() != model.num_states()) {
    throw std::invalid_argument("policy and model have different exogenous state spaces");
  }
  const Eigen::MatrixXd& p = model.process().transition();
  const auto n = static_cast<std::size_t>(p.rows());
  cdf_.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      cdf_[i][j] = acc;
    }
  }
  const Eigen::VectorXd pi = model.process().stationary();
  stationary_cdf_.resize(n);
  std::partial_sum(pi.data(), pi.data() + pi.size(), stationary_cdf_.begin());
}

std::size_t Simulator::draw_state(std::size_t z, double u) const {
  const std::vector<double>& row = cdf_[z];
  const auto it = std::upper_bound(row.begin(), row.end() - 1, u * row.back());
  return static_cast<std::size_t>(it - row.begin());
}

StepResult Simulator::step(double a, std::size_t z, const StepDraws& draws) const {
  const double savings = a - policy_(a, z);
  const std::size_t next = draw_state(z, draws.u);
  const ExogenousProcess& proc = model_.process();
  const double R = proc.return_draw(next, draws.zeta);
  const double Y = proc.income_draw(next, draws.eta);
  return {R * std::max(0.0, savings) + Y, next};
}

template <class Engine>
StepResult Simulator::advance(double a, std::size_t z, Engine& engine) const {
  boost::random::uniform_01<double> unif;
  boost::random::normal_distribution<double> normal;
  StepDraws d;
  d.u = unif(engine);
  d.zeta = normal(engine);
  d.eta = normal(engine);
  return step(a, z, d);
}

std::size_t Simulator::initial_state(const SimConfig& config, std::mt19937_64& engine) const {
  if (config.initial == SimConfig::Initial::StationaryZ) {
    boost::random::uniform_01<double> unif;
    const double u = unif(engine) * stationary_cdf_.back();
    const auto it = std::upper_bound(stationary_cdf_.begin(), stationary_cdf_.end() - 1, u);
    return static_cast<std::size_t>(it - stationary_cdf_.begin());
  }
  const std::size_t z0 = config.z0.value_or(model_.process().nearest_mean_state());
  if (z0 >= model_.num_states()) throw std::out_of_range("initial exogenous state out of range");
  return z0;
}

WealthSample Simulator::run(const SimConfig& config, std::string policy_fingerprint) const {
  config.validate();
  WealthSample out;
  out.config = config;
  out.policy_fingerprint = std::move(policy_fingerprint);

  if (config.mode == SimConfig::Mode::Panel) {
    out.assets.resize(config.n_agents);
    out.states.resize(config.n_agents);
    parallel_for(config.n_agents, config.threads, [&](std::size_t agent) {
      std::mt19937_64 engine = stream_engine(config.seed, agent);
      double a = config.a0;
      std::size_t z = initial_state(config, engine);
      for (int t = 0; t < config.horizon; ++t) {
        const StepResult r = advance(a, z, engine);
        a = r.assets;
        z = r.state;
      }
      out.assets[agent] = a;
      out.states[agent] = static_cast<std::uint32_t>(z);
    });
    return out;
  }

  out.assets.reserve(config.n_agents);
  out.states.reserve(config.n_agents);
  std::mt19937_64 engine = stream_engine(config.seed, 0);
  double a = config.a0;
  std::size_t z = initial_state(config, engine);
  const std::size_t total = config.n_agents + static_cast<std::size_t>(config.burn_in);
  for (std::size_t t = 0; t < total; ++t) {
    const StepResult r = advance(a, z, engine);
    a = r.assets;
    z = r.state;
    if (t >= static_cast<std::size_t>(config.burn_in)) {
      out.assets.push_back(a);
      out.states.push_back(static_cast<std::uint32_t>(z));
    }
  }
  return out;
}

double HFunction::operator()(double a) const {
  switch (kind) {
    case Kind::Identity: return a;
    case Kind::Log1p: return std::log1p(a);
    case Kind::IndicatorAbove: return a > threshold ? 1.0 : 0.0;
  }
  return a;
}

double time_average(const std::vector<double>& path, const HFunction& h) {
  if (path.empty()) throw std::invalid_argument("time_average: empty sample");
  long double acc = 0.0L;
  for (double a : path) acc += h(a);
  return static_cast<double>(acc / static_cast<long double>(path.size()));
}

double standard_error(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("standard_error: need at least two values");
  const double mean = time_average(values, HFunction::identity());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = static_cast<double>(ss / static_cast<long double>(values.size() - 1));
  return std::sqrt(var / static_cast<double>(values.size()));
}

double batch_means_se(const std::vector<double>& path, std::size_t batches) {
  if (batches < 2 || path.size() < 2 * batches) throw std::invalid_argument("batch_means_se: path too short");
  const std::size_t len = path.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    long double acc = 0.0L;
    for (std::size_t t = b * len; t < (b + 1) * len; ++t) acc += path[t];
    means[b] = static_cast<double>(acc / static_cast<long double>(len));
  }
  return standard_error(means);
}

StationarityDiagnostic split_half_ks(const std::vector<double>& path) {
  if (path.size() < 4) throw std::invalid_argument("split_half_ks: path too short");
  const std::size_t half = path.size() / 2;
  std::vector<double> a(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<double> b(path.begin() + static_cast<std::ptrdiff_t>(half), path.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  StationarityDiagnostic out;
  out.statistic = d;
  out.critical_1pct = 1.628 * std::sqrt((na + nb) / (na * nb));
  out.passed = d <= out.critical_1pct;
  return out;
}

}  // namespace caprisk
