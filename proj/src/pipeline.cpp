#include "caprisk/pipeline.hpp"

#include <chrono>
#include <sstream>

namespace caprisk {
namespace {

InequalityReport summarize(const std::vector<double>& assets, const StatsConfig& s) {
  InequalityReport r = inequality_report(assets, s.tail);
  if (s.lorenz_step != 0.05) {
    LorenzShares ls = lorenz_and_shares(assets, s.lorenz_step);
    r.lorenz = std::move(ls.lorenz);
    r.wealth_shares = std::move(ls.wealth_shares);
  }
  return r;
}

}  // namespace

FileHeader header_for(const Config& config) { return FileHeader{config_hash(config), config.simulation.seed}; }

ReproduceOutput reproduce(const Config& config, int threads, const ProgressFn& progress) {
  const auto say = [&](const std::string& s) {
    if (progress) progress(s);
  };
  ReproduceOutput out;
  const FileHeader header = header_for(config);
  const AssetGrid grid = config.grid.build();
  std::vector<std::string> labels;
  std::vector<InequalityReport> reports;
  for (Economy e : config.reproduce) {
    const std::string name(economy_name(e));
    EconomyParams params = config.model;
    params.economy = e;
    const ModelSpec model = build_model(params);
    const AssumptionReport report = check_assumptions(model);
    SolveOptions opts = config.solver;
    opts.threads = threads;
    const auto t0 = std::chrono::steady_clock::now();
    EconomyRun run{e, report, solve_policy(model, grid, opts, report), {}, {}, {}};
    const auto t1 = std::chrono::steady_clock::now();
    std::ostringstream msg;
    msg << name << ": solved in " << run.solve.iterations << " iterations ("
        << std::chrono::duration<double>(t1 - t0).count() << " s)";
    say(msg.str());

    const std::string policy_text =
        policy_to_text(run.solve.policy, model, model_fingerprint(config), header);
    SimConfig sim = config.simulation;
    sim.threads = threads;
    run.sample = Simulator(model, run.solve.policy).run(sim, policy_fingerprint(policy_text));
    const auto t2 = std::chrono::steady_clock::now();
    msg.str("");
    msg << name << ": simulated " << run.sample.assets.size() << " observations ("
        << std::chrono::duration<double>(t2 - t1).count() << " s)";
    say(msg.str());

    run.stats = summarize(run.sample.assets, config.stats);
    run.zipf = zipf_points(run.sample.assets, config.stats.zipf_points);
    out.files["zipf_" + name + ".csv"] = zipf_csv(run.zipf, header);
    out.files["lorenz_" + name + ".csv"] = lorenz_csv(run.stats.lorenz, header);
    labels.push_back(name);
    reports.push_back(run.stats);
    out.runs.push_back(std::move(run));
  }
  out.files["table1.csv"] = table1_csv(labels, reports, header);
  out.files["table2.csv"] = table2_csv(labels, reports, header);
  return out;
}

std::map<std::string, std::string> stats_files(const WealthSample& sample, const Config& config,
                                               const std::string& label, InequalityReport* report) {
  FileHeader header = header_for(config);
  header.seed = sample.config.seed;
  const InequalityReport r = summarize(sample.assets, config.stats);
  std::map<std::string, std::string> files;
  files["table1.csv"] = table1_csv({label}, {r}, header);
  files["table2.csv"] = table2_csv({label}, {r}, header);
  files["zipf_" + label + ".csv"] = zipf_csv(zipf_points(sample.assets, config.stats.zipf_points), header);
  files["lorenz_" + label + ".csv"] = lorenz_csv(r.lorenz, header);
  if (report) *report = r;
  return files;
}

}  // namespace caprisk
