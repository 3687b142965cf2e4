#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "caprisk/coleman.hpp"
#include "caprisk/economy.hpp"
#include "caprisk/simulate.hpp"
#include "caprisk/stats.hpp"
#include "caprisk/sweep.hpp"

namespace caprisk {

/// Config parse or validation failure; line is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct GridConfig {
  AssetGrid::Spacing spacing = AssetGrid::Spacing::Linear;
  double min = 1e-4;
  double max = 50.0;
  int points = 100;
  std::vector<double> custom;  // used when spacing is Custom

  AssetGrid build() const;
};

struct StatsConfig {
  TailOptions tail;
  double lorenz_step = 0.05;
  std::size_t zipf_points = 10000;
};

struct SweepAxisConfig {
  SweepAxis axis = SweepAxis::RhoSigma;
  double min = 0.0;
  double max = 0.0;
  int points = 41;

  AxisSpec spec() const { return AxisSpec::linspace(axis, min, max, points); }
};

struct SweepConfig {
  SweepAxisConfig axis1{SweepAxis::RhoSigma, 0.0, 0.95, 41};
  SweepAxisConfig axis2{SweepAxis::DeltaSigma, 0.0, 1.0, 41};
};

/// Everything a run needs; every field has a default.
struct Config {
  EconomyParams model;
  GridConfig grid;
  SolveOptions solver;
  SimConfig simulation;
  StatsConfig stats;
  SweepConfig sweep;
  std::vector<Economy> reproduce{Economy::ModelI, Economy::ModelII, Economy::IID, Economy::Constant};
  std::string output_dir = "out";
};

/// Parses YAML text. Unknown keys, wrong types and invalid values raise
/// ConfigError with the offending line.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Canonical YAML rendering with every field, numbers at 17 significant digits.
std::string dump_config(const Config& config);

/// FNV-1a 64 of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Hash of the canonical rendering; comments, key order and the output
/// directory do not matter.
std::string config_hash(const Config& config);

/// Hash of the sections that determine the solved policy (model, grid, solver).
std::string model_fingerprint(const Config& config);

}  // namespace caprisk
