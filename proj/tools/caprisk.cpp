// Command-line front end: check | solve | simulate | stats | sweep | reproduce | print-config.
//
// Exit codes: 0 success, 1 assumption check failed, 2 malformed config,
// 3 any other error (including a policy/model fingerprint mismatch).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "caprisk/pipeline.hpp"

namespace fs = std::filesystem;
using namespace caprisk;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  std::string economy;
  int threads = 0;
};

Config load(const Common& c) {
  Config cfg = c.config_path.empty() ? Config{} : load_config(c.config_path);
  if (!c.economy.empty()) {
    try {
      cfg.model.economy = parse_economy(c.economy);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), 0);
    }
  }
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  return cfg;
}

std::string out_path(const Config& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return (fs::path(cfg.output_dir) / name).string();
}

void write_files(const Config& cfg, const std::map<std::string, std::string>& files) {
  for (const auto& [name, text] : files) {
    const std::string path = out_path(cfg, name);
    write_text(path, text);
    std::cout << "wrote " << path << "\n";
  }
}

int cmd_check(const Common& c) {
  const Config cfg = load(c);
  const ModelSpec model = build_model(cfg.model);
  const AssumptionReport r = check_assumptions(model);
  const std::string path = out_path(cfg, "report.json");
  write_text(path, assumption_report_json(r, model, header_for(cfg)));
  std::cout << "economy " << economy_name(cfg.model.economy) << ", " << model.num_states() << " states\n"
            << "  beta r(K) = " << model.beta() * r.contraction.r_K << (r.contraction.ok ? " < 1" : " >= 1")
            << "  (n = " << r.contraction.n << ", theta = " << r.contraction.theta << ")\n"
            << "  patience: " << r.patience.lhs << (r.patience.ok ? " < " : " >= ") << r.patience.rhs
            << "  (alpha = " << r.alpha() << ")\n"
            << "  contraction " << (r.contraction_ok() ? "ok" : "FAILS") << ", stability "
            << (r.stability_ok() ? "ok" : "FAILS") << "\n"
            << "wrote " << path << "\n";
  return r.contraction_ok() && r.stability_ok() ? 0 : 1;
}

int cmd_solve(const Common& c, std::string output) {
  const Config cfg = load(c);
  const ModelSpec model = build_model(cfg.model);
  const AssumptionReport r = check_assumptions(model);
  SolveOptions opts = cfg.solver;
  opts.threads = c.threads;
  const SolveResult s = solve_policy(model, cfg.grid.build(), opts, r);
  if (output.empty()) output = out_path(cfg, "policy.txt");
  write_text(output, policy_to_text(s.policy, model, model_fingerprint(cfg), header_for(cfg)));
  std::cout << "converged in " << s.iterations << " iterations (rho = " << s.trace.back() << ")\nwrote " << output
            << "\n";
  return 0;
}

int cmd_simulate(const Common& c, const std::string& policy_path, std::string output) {
  const Config cfg = load(c);
  const std::string text = read_text(policy_path);
  const PolicyFile pf = policy_from_text(text);
  const std::string expected = model_fingerprint(cfg);
  if (pf.model_fingerprint != expected) {
    std::cerr << "error: policy was solved for model " << pf.model_fingerprint << " but the config describes "
              << expected << "; re-run solve\n";
    return 3;
  }
  const ModelSpec model = build_model(cfg.model);
  SimConfig sim = cfg.simulation;
  sim.threads = c.threads;
  const WealthSample sample = Simulator(model, pf.policy).run(sim, policy_fingerprint(text));
  if (sim.mode == SimConfig::Mode::SinglePath) {
    const StationarityDiagnostic d = split_half_ks(sample.assets);
    if (!d.passed) {
      std::cerr << "warning: split-half KS statistic " << d.statistic << " exceeds the 1% critical value "
                << d.critical_1pct << "\n";
    }
  }
  if (output.empty()) output = out_path(cfg, "sample.csv");
  const FileHeader header = header_for(cfg);
  write_text(output, sample_to_csv(sample, header));
  write_text(output + ".json", sample_sidecar_json(sample, header));
  std::cout << "wrote " << output << " and " << output << ".json\n";
  return 0;
}

int cmd_stats(const Common& c, const std::string& sample_path, std::string label) {
  const Config cfg = load(c);
  std::string sidecar;
  if (fs::exists(sample_path + ".json")) sidecar = read_text(sample_path + ".json");
  const WealthSample sample = sample_from_csv(read_text(sample_path), sidecar);
  if (label.empty()) label = std::string(economy_name(cfg.model.economy));
  InequalityReport r;
  write_files(cfg, stats_files(sample, cfg, label, &r));
  std::cout << "gini " << r.gini << ", tail exponent " << r.tail_exponent_top5 << " (top 5%) "
            << r.tail_exponent_top10 << " (top 10%)\n";
  return 0;
}

int cmd_sweep(const Common& c) {
  const Config cfg = load(c);
  const SweepGrid grid = stability_sweep(cfg.model, cfg.sweep.axis1.spec(), cfg.sweep.axis2.spec(), c.threads);
  const FileHeader header = header_for(cfg);
  write_files(cfg, {{"sweep.csv", sweep_csv(grid, header)}, {"frontier.csv", frontier_csv(grid, header)}});
  for (std::size_t i : monotonicity_violations(grid)) {
    std::cerr << "warning: stability is not monotone along " << axis_name(grid.axis2.axis) << " at "
              << axis_name(grid.axis1.axis) << " = " << grid.axis1.values[i] << "\n";
  }
  for (const auto& [i, j] : margin_jumps(grid)) {
    std::cerr << "warning: r(K) jumps at (" << grid.axis1.values[i] << ", " << grid.axis2.values[j] << ")\n";
  }
  return 0;
}

int cmd_reproduce(const Common& c) {
  const Config cfg = load(c);
  const ReproduceOutput out = reproduce(cfg, c.threads, [](const std::string& s) { std::cout << s << std::endl; });
  write_files(cfg, out.files);
  std::cout << out.files.at("table1.csv") << out.files.at("table2.csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Income fluctuation problem with capital income risk: checks, solver, simulator, statistics"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  const auto add_common = [&](CLI::App* sub, bool economy) {
    sub->add_option("-c,--config", common.config_path, "YAML config file (defaults when omitted)");
    sub->add_option("-o,--out", common.out_dir, "Output directory (overrides output.dir)");
    if (economy) sub->add_option("--economy", common.economy, "Override model.economy");
  };

  CLI::App* check = app.add_subcommand("check", "Verify the contraction and stability conditions");
  add_common(check, true);
  std::string output;
  CLI::App* solve = app.add_subcommand("solve", "Iterate the Coleman operator to the optimal policy");
  add_common(solve, true);
  solve->add_option("--output", output, "Policy file path");
  std::string policy_path;
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate the wealth distribution under a solved policy");
  add_common(simulate, true);
  simulate->add_option("-p,--policy", policy_path, "Policy file from solve")->required();
  simulate->add_option("--output", output, "Sample CSV path");
  std::string sample_path, label;
  CLI::App* stats = app.add_subcommand("stats", "Inequality statistics of a simulated sample");
  add_common(stats, true);
  stats->add_option("-s,--sample", sample_path, "Sample CSV from simulate")->required();
  stats->add_option("--label", label, "Column label in the report tables");
  CLI::App* sweep = app.add_subcommand("sweep", "Map the stability region over two parameters");
  add_common(sweep, false);
  CLI::App* repro = app.add_subcommand("reproduce", "Solve, simulate and tabulate every configured economy");
  add_common(repro, false);
  CLI::App* print = app.add_subcommand("print-config", "Print the full config with defaults filled in");
  print->add_option("-c,--config", common.config_path, "YAML config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(common);
    if (*solve) return cmd_solve(common, output);
    if (*simulate) return cmd_simulate(common, policy_path, output);
    if (*stats) return cmd_stats(common, sample_path, label);
    if (*sweep) return cmd_sweep(common);
    if (*repro) return cmd_reproduce(common);
    if (*print) {
      std::cout << dump_config(load(common));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
