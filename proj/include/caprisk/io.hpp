#pragma once

#include <map>
#include <string>
#include <vector>

#include "caprisk/assumptions.hpp"
#include "caprisk/coleman.hpp"
#include "caprisk/simulate.hpp"
#include "caprisk/stats.hpp"
#include "caprisk/sweep.hpp"

namespace caprisk {

/// Provenance written as "# key value" lines at the top of every output file.
struct FileHeader {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string text() const;
};

/// "%.17g": shortest format that round-trips every double.
std::string format_number(double x);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// Policy files ---------------------------------------------------------------

struct PolicyFile {
  ConsumptionPolicy policy;
  double beta = 0.0;
  std::vector<ExogenousState> states;
  std::string model_fingerprint;
  std::string config_hash;
};

std::string policy_to_text(const ConsumptionPolicy& policy, const ModelSpec& model,
                           const std::string& model_fingerprint, const FileHeader& header);
PolicyFile policy_from_text(const std::string& text);

/// Fingerprint of a policy file's exact bytes.
std::string policy_fingerprint(const std::string& policy_text);

// Samples --------------------------------------------------------------------

std::string sample_to_csv(const WealthSample& sample, const FileHeader& header);
std::string sample_sidecar_json(const WealthSample& sample, const FileHeader& header);
/// Reads the CSV written above; metadata comes from the optional sidecar text.
WealthSample sample_from_csv(const std::string& csv, const std::string& sidecar_json = {});

// Reports --------------------------------------------------------------------

/// Tail exponents and Gini, one column per labelled report.
std::string table1_csv(const std::vector<std::string>& labels, const std::vector<InequalityReport>& reports,
                       const FileHeader& header);
/// Cumulative wealth shares in percent at each Lorenz step, one column per report.
std::string table2_csv(const std::vector<std::string>& labels, const std::vector<InequalityReport>& reports,
                       const FileHeader& header);
std::string zipf_csv(const std::vector<ZipfPoint>& points, const FileHeader& header);
std::string lorenz_csv(const std::vector<LorenzPoint>& points, const FileHeader& header);

std::string assumption_report_json(const AssumptionReport& report, const ModelSpec& model,
                                   const FileHeader& header);
std::string sweep_csv(const SweepGrid& grid, const FileHeader& header);
std::string frontier_csv(const SweepGrid& grid, const FileHeader& header);

}  // namespace caprisk
