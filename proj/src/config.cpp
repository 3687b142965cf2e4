#include "caprisk/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace caprisk {
namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  const int line = line_of(n);
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << what;
  throw ConfigError(os.str(), line);
}

/// A mapping node whose keys are consumed one by one; finish() rejects leftovers.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsMap() && !node_.IsNull()) fail(node_, "'" + path_ + "' must be a mapping");
  }

  bool has(const char* key) const { return node_ && node_.IsMap() && node_[key]; }

  YAML::Node raw(const char* key) {
    seen_.insert(key);
    return node_[key];
  }

  Section child(const char* key) {
    if (!has(key)) return Section(YAML::Node(), name(key));
    return Section(raw(key), name(key));
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    const YAML::Node n = raw(key);
    if (!n.IsScalar()) fail(n, "'" + name(key) + "' must be a scalar");
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "'" + name(key) + "' has invalid value '" + n.Scalar() + "'");
    }
  }

  template <class T>
  void get_list(const char* key, std::vector<T>& out) {
    if (!has(key)) return;
    const YAML::Node n = raw(key);
    if (!n.IsSequence()) fail(n, "'" + name(key) + "' must be a list");
    out.clear();
    for (const YAML::Node& item : n) {
      try {
        out.push_back(item.as<T>());
      } catch (const YAML::Exception&) {
        fail(item, "'" + name(key) + "' has invalid entry");
      }
    }
  }

  template <class E>
  void get_enum(const char* key, E& out, const std::map<std::string, E>& names) {
    if (!has(key)) return;
    std::string s;
    get(key, s);
    const auto it = names.find(s);
    if (it == names.end()) {
      std::string options;
      for (const auto& [k, v] : names) options += (options.empty() ? "" : ", ") + k;
      fail(node_[key], "'" + name(key) + "' must be one of: " + options);
    }
    out = it->second;
  }

  void check(const char* key, bool ok, const std::string& requirement) const {
    if (!ok) fail(has(key) ? node_[key] : node_, "'" + name(key) + "' " + requirement);
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, "unknown key '" + name(key.c_str()) + "'");
    }
  }

 private:
  std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

const std::map<std::string, Economy> kEconomies = {{"full", Economy::Full},
                                                   {"model_i", Economy::ModelI},
                                                   {"model_ii", Economy::ModelII},
                                                   {"iid", Economy::IID},
                                                   {"constant", Economy::Constant}};
const std::map<std::string, AssetGrid::Spacing> kSpacings = {
    {"linear", AssetGrid::Spacing::Linear}, {"log", AssetGrid::Spacing::Log}, {"custom", AssetGrid::Spacing::Custom}};
const std::map<std::string, InterpolationSpace> kSpaces = {{"consumption", InterpolationSpace::Consumption},
                                                           {"marginal_utility", InterpolationSpace::MarginalUtility}};
const std::map<std::string, SimConfig::Mode> kModes = {{"panel", SimConfig::Mode::Panel},
                                                       {"single_path", SimConfig::Mode::SinglePath}};
const std::map<std::string, SimConfig::Initial> kInitials = {{"point_mass", SimConfig::Initial::PointMass},
                                                             {"stationary_z", SimConfig::Initial::StationaryZ}};
const std::map<std::string, ExpectationRule::Kind> kRules = {{"quadrature", ExpectationRule::Kind::GaussHermite},
                                                             {"monte_carlo", ExpectationRule::Kind::MonteCarlo}};
std::map<std::string, SweepAxis> axis_names() {
  std::map<std::string, SweepAxis> out;
  for (SweepAxis a : {SweepAxis::RhoSigma, SweepAxis::DeltaSigma, SweepAxis::RhoMu, SweepAxis::DeltaMu,
                      SweepAxis::Beta, SweepAxis::Gamma}) {
    out.emplace(std::string(axis_name(a)), a);
  }
  return out;
}

template <class E>
std::string enum_name(E value, const std::map<std::string, E>& names) {
  for (const auto& [k, v] : names) {
    if (v == value) return k;
  }
  return "?";
}

void read_ar1(Section s, AR1Params& ar) {
  s.get("rho", ar.rho);
  s.get("delta", ar.delta);
  s.get("mean", ar.mean);
  s.get("states", ar.states);
  s.check("rho", std::abs(ar.rho) < 1.0, "must satisfy |rho| < 1");
  s.check("delta", ar.delta >= 0.0 && std::isfinite(ar.delta), "must be finite and non-negative");
  s.check("mean", std::isfinite(ar.mean), "must be finite");
  s.check("states", ar.states >= 1, "must be at least 1");
  s.finish();
}

void read_model(Section s, EconomyParams& m) {
  s.get_enum("economy", m.economy, kEconomies);
  s.get("beta", m.beta);
  s.get("gamma", m.gamma);
  s.check("beta", m.beta >= 0.0 && m.beta < 1.0, "must lie in [0, 1)");
  s.check("gamma", m.gamma > 0.0 && std::isfinite(m.gamma), "must be positive");
  read_ar1(s.child("chi"), m.chi);
  read_ar1(s.child("mu"), m.mu);
  read_ar1(s.child("log_sigma"), m.log_sigma);
  s.get("eta_std", m.eta_std);
  s.check("eta_std", m.eta_std >= 0.0 && std::isfinite(m.eta_std), "must be finite and non-negative");
  s.get("tauchen_width", m.tauchen_width);
  s.check("tauchen_width", m.tauchen_width > 0.0, "must be positive");
  Section e = s.child("expectation");
  e.get_enum("method", m.expectation.kind, kRules);
  e.get("nodes", m.expectation.nodes);
  e.get("draws", m.expectation.draws);
  e.get("seed", m.expectation.seed);
  e.check("nodes", m.expectation.nodes >= 1, "must be at least 1");
  e.check("draws", m.expectation.draws >= 1, "must be at least 1");
  e.finish();
  s.finish();
}

void read_grid(Section s, GridConfig& g) {
  s.get_enum("spacing", g.spacing, kSpacings);
  s.get("min", g.min);
  s.get("max", g.max);
  s.get("points", g.points);
  s.get_list("custom", g.custom);
  if (g.spacing == AssetGrid::Spacing::Custom) {
    s.check("custom", g.custom.size() >= 2, "must list at least two points for custom spacing");
    for (std::size_t i = 0; i < g.custom.size(); ++i) {
      s.check("custom", g.custom[i] > 0.0 && (i == 0 || g.custom[i] > g.custom[i - 1]),
              "must be strictly increasing and positive");
    }
  } else {
    s.check("min", g.min > 0.0, "must be positive");
    s.check("max", g.max > g.min, "must exceed grid.min");
    s.check("points", g.points >= 2, "must be at least 2");
  }
  s.finish();
}

void read_solver(Section s, SolveOptions& o) {
  s.get("tol_rho", o.tol_rho);
  s.get("max_iter", o.max_iter);
  s.get("root_tol", o.root_tol);
  s.get("damping", o.damping);
  s.get_enum("interpolation", o.space, kSpaces);
  s.get("force", o.force);
  s.check("tol_rho", o.tol_rho > 0.0, "must be positive");
  s.check("max_iter", o.max_iter >= 1, "must be at least 1");
  s.check("root_tol", o.root_tol > 0.0, "must be positive");
  s.check("damping", o.damping > 0.0 && o.damping <= 1.0, "must lie in (0, 1]");
  s.finish();
}

void read_simulation(Section s, SimConfig& c) {
  double n_agents = static_cast<double>(c.n_agents);  // accepts 1e6
  s.get("n_agents", n_agents);
  s.check("n_agents", n_agents >= 1.0 && n_agents == std::floor(n_agents), "must be a positive integer");
  c.n_agents = static_cast<std::size_t>(n_agents);
  s.get("horizon", c.horizon);
  s.get("burn_in", c.burn_in);
  s.get("seed", c.seed);
  s.get_enum("mode", c.mode, kModes);
  s.get_enum("initial", c.initial, kInitials);
  s.get("a0", c.a0);
  if (s.has("z0")) {
    std::size_t z0 = 0;
    s.get("z0", z0);
    c.z0 = z0;
  }
  s.check("horizon", c.horizon >= 1, "must be at least 1");
  s.check("burn_in", c.burn_in >= 0, "must be non-negative");
  s.check("burn_in", c.mode != SimConfig::Mode::Panel || c.burn_in < c.horizon,
          "must be smaller than the horizon in panel mode");
  s.check("a0", c.a0 >= 0.0, "must be non-negative");
  s.finish();
}

void read_stats(Section s, StatsConfig& c) {
  s.get("rank_shift", c.tail.rank_shift);
  s.get("lorenz_step", c.lorenz_step);
  s.get("zipf_points", c.zipf_points);
  s.check("lorenz_step", c.lorenz_step > 0.0 && c.lorenz_step <= 1.0, "must lie in (0, 1]");
  s.check("zipf_points", c.zipf_points >= 2, "must be at least 2");
  s.finish();
}

void read_axis(Section s, SweepAxisConfig& a) {
  s.get_enum("name", a.axis, axis_names());
  s.get("min", a.min);
  s.get("max", a.max);
  s.get("points", a.points);
  s.check("max", a.max >= a.min, "must be at least min");
  s.check("points", a.points >= 1, "must be at least 1");
  s.finish();
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump_ar1(std::ostringstream& os, const char* name, const AR1Params& ar) {
  os << "  " << name << ":\n"
     << "    rho: " << num(ar.rho) << "\n"
     << "    delta: " << num(ar.delta) << "\n"
     << "    mean: " << num(ar.mean) << "\n"
     << "    states: " << ar.states << "\n";
}

void dump_axis(std::ostringstream& os, const char* name, const SweepAxisConfig& a) {
  os << "  " << name << ":\n"
     << "    name: " << axis_name(a.axis) << "\n"
     << "    min: " << num(a.min) << "\n"
     << "    max: " << num(a.max) << "\n"
     << "    points: " << a.points << "\n";
}

}  // namespace

AssetGrid GridConfig::build() const {
  switch (spacing) {
    case AssetGrid::Spacing::Linear: return AssetGrid::linear(min, max, points);
    case AssetGrid::Spacing::Log: return AssetGrid::log_spaced(min, max, points);
    case AssetGrid::Spacing::Custom: return AssetGrid::custom(custom);
  }
  return AssetGrid::standard();
}

Config parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg, e.mark.line + 1);
  }
  Config c;
  Section top(root, "");
  read_model(top.child("model"), c.model);
  read_grid(top.child("grid"), c.grid);
  read_solver(top.child("solver"), c.solver);
  read_simulation(top.child("simulation"), c.simulation);
  read_stats(top.child("stats"), c.stats);
  Section sw = top.child("sweep");
  read_axis(sw.child("axis1"), c.sweep.axis1);
  read_axis(sw.child("axis2"), c.sweep.axis2);
  sw.finish();
  Section rep = top.child("reproduce");
  if (rep.has("economies")) {
    std::vector<std::string> names;
    rep.get_list("economies", names);
    c.reproduce.clear();
    for (const std::string& n : names) {
      const auto it = kEconomies.find(n);
      rep.check("economies", it != kEconomies.end(), "contains unknown economy '" + n + "'");
      c.reproduce.push_back(it->second);
    }
    rep.check("economies", !c.reproduce.empty(), "must not be empty");
  }
  rep.finish();
  Section out = top.child("output");
  out.get("dir", c.output_dir);
  out.finish();
  top.finish();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const Config& c) {
  std::ostringstream os;
  const EconomyParams& m = c.model;
  os << "model:\n"
     << "  economy: " << economy_name(m.economy) << "\n"
     << "  beta: " << num(m.beta) << "\n"
     << "  gamma: " << num(m.gamma) << "\n";
  dump_ar1(os, "chi", m.chi);
  dump_ar1(os, "mu", m.mu);
  dump_ar1(os, "log_sigma", m.log_sigma);
  os << "  eta_std: " << num(m.eta_std) << "\n"
     << "  tauchen_width: " << num(m.tauchen_width) << "\n"
     << "  expectation:\n"
     << "    method: " << enum_name(m.expectation.kind, kRules) << "\n"
     << "    nodes: " << m.expectation.nodes << "\n"
     << "    draws: " << m.expectation.draws << "\n"
     << "    seed: " << m.expectation.seed << "\n";
  os << "grid:\n"
     << "  spacing: " << enum_name(c.grid.spacing, kSpacings) << "\n"
     << "  min: " << num(c.grid.min) << "\n"
     << "  max: " << num(c.grid.max) << "\n"
     << "  points: " << c.grid.points << "\n";
  if (!c.grid.custom.empty()) {
    os << "  custom: [";
    for (std::size_t i = 0; i < c.grid.custom.size(); ++i) os << (i ? ", " : "") << num(c.grid.custom[i]);
    os << "]\n";
  }
  os << "solver:\n"
     << "  tol_rho: " << num(c.solver.tol_rho) << "\n"
     << "  max_iter: " << c.solver.max_iter << "\n"
     << "  root_tol: " << num(c.solver.root_tol) << "\n"
     << "  damping: " << num(c.solver.damping) << "\n"
     << "  interpolation: " << enum_name(c.solver.space, kSpaces) << "\n"
     << "  force: " << (c.solver.force ? "true" : "false") << "\n";
  os << "simulation:\n"
     << "  n_agents: " << c.simulation.n_agents << "\n"
     << "  horizon: " << c.simulation.horizon << "\n"
     << "  burn_in: " << c.simulation.burn_in << "\n"
     << "  seed: " << c.simulation.seed << "\n"
     << "  mode: " << enum_name(c.simulation.mode, kModes) << "\n"
     << "  initial: " << enum_name(c.simulation.initial, kInitials) << "\n"
     << "  a0: " << num(c.simulation.a0) << "\n";
  if (c.simulation.z0) os << "  z0: " << *c.simulation.z0 << "\n";
  os << "stats:\n"
     << "  rank_shift: " << (c.stats.tail.rank_shift ? "true" : "false") << "\n"
     << "  lorenz_step: " << num(c.stats.lorenz_step) << "\n"
     << "  zipf_points: " << c.stats.zipf_points << "\n";
  os << "sweep:\n";
  dump_axis(os, "axis1", c.sweep.axis1);
  dump_axis(os, "axis2", c.sweep.axis2);
  os << "reproduce:\n  economies: [";
  for (std::size_t i = 0; i < c.reproduce.size(); ++i) os << (i ? ", " : "") << economy_name(c.reproduce[i]);
  os << "]\n";
  os << "output:\n  dir: " << c.output_dir << "\n";
  return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const Config& c) {
  Config keep = c;
  keep.output_dir = Config{}.output_dir;
  return fnv1a_hex(dump_config(keep));
}

std::string model_fingerprint(const Config& c) {
  Config keep;
  keep.model = c.model;
  keep.grid = c.grid;
  keep.solver.tol_rho = c.solver.tol_rho;
  keep.solver.root_tol = c.solver.root_tol;
  keep.solver.damping = c.solver.damping;
  keep.solver.space = c.solver.space;
  std::string text = dump_config(keep);
  return fnv1a_hex(text.substr(0, text.find("simulation:\n")));
}

}  // namespace caprisk
