#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "caprisk/config.hpp"
#include "caprisk/io.hpp"

namespace caprisk {

using ProgressFn = std::function<void(const std::string&)>;

struct EconomyRun {
  Economy economy = Economy::ModelI;
  AssumptionReport report;
  SolveResult solve;
  WealthSample sample;
  InequalityReport stats;
  std::vector<ZipfPoint> zipf;
};

struct ReproduceOutput {
  std::vector<EconomyRun> runs;
  std::map<std::string, std::string> files;  // file name -> exact contents
};

FileHeader header_for(const Config& config);

/// Solve, simulate and summarize every economy listed in config.reproduce,
/// holding the rest of config.model fixed. Files are built in memory.
ReproduceOutput reproduce(const Config& config, int threads = 0, const ProgressFn& progress = {});

/// Stats on one sample, with report files under the given column label.
std::map<std::string, std::string> stats_files(const WealthSample& sample, const Config& config,
                                               const std::string& label, InequalityReport* report = nullptr);

}  // namespace caprisk
