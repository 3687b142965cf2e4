#include "caprisk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "caprisk/config.hpp"
#include "caprisk/version.hpp"

namespace caprisk {
namespace {

using nlohmann::json;

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

std::vector<double> parse_row(const std::string& line) {
  std::istringstream is(line);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_number(tok));
  return out;
}

std::string join(const std::vector<double>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += format_number(xs[i]);
  }
  return out;
}

// Reads "key rest-of-line" records, skipping '#' comments, until "values".
class PolicyReader {
 public:
  explicit PolicyReader(const std::string& text) : in_(text) {}

  std::string next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line[0] == '#') {
        std::istringstream is(line.substr(1));
        std::string k, v;
        is >> k >> v;
        comments_[k] = v;
        continue;
      }
      if (!line.empty()) return line;
    }
    fail("unexpected end of file");
  }

  std::string expect(const std::string& key) {
    const std::string line = next_line();
    const auto sp = line.find(' ');
    const std::string k = line.substr(0, sp);
    if (k != key) fail("expected '" + key + "', found '" + k + "'");
    return sp == std::string::npos ? std::string() : line.substr(sp + 1);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("policy file line " + std::to_string(line_no_) + ": " + what);
  }

  const std::map<std::string, std::string>& comments() const { return comments_; }

 private:
  std::istringstream in_;
  int line_no_ = 0;
  std::map<std::string, std::string> comments_;
};

std::string space_name(InterpolationSpace s) {
  return s == InterpolationSpace::MarginalUtility ? "marginal_utility" : "consumption";
}

}  // namespace

std::string FileHeader::text() const {
  std::ostringstream os;
  os << "# tool caprisk " << kToolVersion << "\n"
     << "# config_hash " << config_hash << "\n"
     << "# seed " << seed << "\n";
  return os.str();
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string policy_to_text(const ConsumptionPolicy& c, const ModelSpec& model, const std::string& model_fingerprint,
                           const FileHeader& header) {
  std::ostringstream os;
  os << "# caprisk policy\n" << header.text() << "# model_fingerprint " << model_fingerprint << "\n";
  const UtilitySpec& u = c.utility();
  os << "utility " << (u.kind() == UtilitySpec::Kind::Log ? "log" : "crra") << " " << format_number(u.gamma()) << "\n"
     << "beta " << format_number(model.beta()) << "\n"
     << "share_floor " << format_number(c.share_floor()) << "\n"
     << "interpolation " << space_name(c.space()) << "\n";
  const char* spacing = c.grid().spacing() == AssetGrid::Spacing::Linear ? "linear"
                        : c.grid().spacing() == AssetGrid::Spacing::Log  ? "log"
                                                                         : "custom";
  os << "grid " << spacing << " " << c.grid().size() << "\n" << join(c.grid().points(), " ") << "\n";
  const ExogenousProcess& proc = model.process();
  os << "states " << proc.size() << "\n";
  for (std::size_t z = 0; z < proc.size(); ++z) {
    const ExogenousState& s = proc.state(z);
    os << z << " " << format_number(s.chi) << " " << format_number(s.mu) << " " << format_number(s.sigma) << "\n";
  }
  os << "slopes " << join(c.slopes(), " ") << "\n";
  std::vector<double> thresholds = c.thresholds();
  if (thresholds.size() != c.num_states()) thresholds.assign(c.num_states(), INFINITY);
  os << "thresholds " << join(thresholds, " ") << "\n";
  os << "values\n";
  for (std::size_t i = 0; i < c.grid().size(); ++i) {
    for (std::size_t z = 0; z < c.num_states(); ++z) os << (z ? " " : "") << format_number(c.value(i, z));
    os << "\n";
  }
  return os.str();
}

PolicyFile policy_from_text(const std::string& text) {
  PolicyReader r(text);
  std::istringstream us(r.expect("utility"));
  std::string kind;
  double gamma = 0.0;
  us >> kind >> gamma;
  const UtilitySpec u = kind == "log" ? UtilitySpec::log() : UtilitySpec::crra(gamma);
  const double beta = parse_number(r.expect("beta"));
  const double floor = parse_number(r.expect("share_floor"));
  const std::string space = r.expect("interpolation");
  if (space != "consumption" && space != "marginal_utility") r.fail("unknown interpolation '" + space + "'");

  std::istringstream gs(r.expect("grid"));
  std::string spacing;
  std::size_t n = 0;
  gs >> spacing >> n;
  std::vector<double> points = parse_row(r.next_line());
  if (points.size() != n || n < 2) r.fail("grid has " + std::to_string(points.size()) + " points, header says " + std::to_string(n));
  AssetGrid grid = AssetGrid::custom(points);
  if (spacing == "linear" || spacing == "log") {
    AssetGrid rebuilt = spacing == "linear" ? AssetGrid::linear(points.front(), points.back(), static_cast<int>(n))
                                            : AssetGrid::log_spaced(points.front(), points.back(), static_cast<int>(n));
    if (rebuilt == grid) grid = rebuilt;
  }

  const std::size_t nz = static_cast<std::size_t>(parse_number(r.expect("states")));
  std::vector<ExogenousState> states;
  for (std::size_t z = 0; z < nz; ++z) {
    const std::vector<double> row = parse_row(r.next_line());
    if (row.size() != 4) r.fail("state line needs index, chi, mu, sigma");
    ExogenousState s{};
    s.chi = row[1];
    s.mu = row[2];
    s.sigma = row[3];
    states.push_back(s);
  }
  const std::vector<double> slopes = parse_row(r.expect("slopes"));
  const std::vector<double> thresholds = parse_row(r.expect("thresholds"));
  if (slopes.size() != nz || thresholds.size() != nz) r.fail("slopes and thresholds need one entry per state");
  r.expect("values");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nz));
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> row = parse_row(r.next_line());
    if (row.size() != nz) r.fail("value row " + std::to_string(i) + " has " + std::to_string(row.size()) + " entries");
    for (std::size_t z = 0; z < nz; ++z) values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(z)) = row[z];
  }
  ConsumptionPolicy policy(grid, std::move(values), u, floor,
                           space == "marginal_utility" ? InterpolationSpace::MarginalUtility
                                                       : InterpolationSpace::Consumption);
  for (std::size_t z = 0; z < nz; ++z) {
    if (policy.slopes()[z] != slopes[z]) r.fail("stored tail slope disagrees with the values");
  }
  policy.set_thresholds(thresholds);
  PolicyFile out{std::move(policy), beta, std::move(states), {}, {}};
  const auto& comments = r.comments();
  if (auto it = comments.find("model_fingerprint"); it != comments.end()) out.model_fingerprint = it->second;
  if (auto it = comments.find("config_hash"); it != comments.end()) out.config_hash = it->second;
  return out;
}

std::string policy_fingerprint(const std::string& policy_text) { return fnv1a_hex(policy_text); }

std::string sample_to_csv(const WealthSample& sample, const FileHeader& header) {
  std::string out = header.text();
  out += "# policy_fingerprint " + sample.policy_fingerprint + "\n";
  out += "asset,state\n";
  out.reserve(out.size() + sample.assets.size() * 28);
  for (std::size_t i = 0; i < sample.assets.size(); ++i) {
    out += format_number(sample.assets[i]);
    out += ',';
    out += std::to_string(sample.states[i]);
    out += '\n';
  }
  return out;
}

std::string sample_sidecar_json(const WealthSample& sample, const FileHeader& header) {
  const SimConfig& c = sample.config;
  json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = header.config_hash;
  j["seed"] = c.seed;
  j["n_agents"] = c.n_agents;
  j["horizon"] = c.horizon;
  j["burn_in"] = c.burn_in;
  j["mode"] = c.mode == SimConfig::Mode::Panel ? "panel" : "single_path";
  j["initial"] = c.initial == SimConfig::Initial::PointMass ? "point_mass" : "stationary_z";
  j["a0"] = c.a0;
  j["z0"] = c.z0 ? json(*c.z0) : json(nullptr);
  j["policy_fingerprint"] = sample.policy_fingerprint;
  j["rows"] = sample.assets.size();
  return j.dump(2) + "\n";
}

WealthSample sample_from_csv(const std::string& csv, const std::string& sidecar_json) {
  WealthSample s;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string k, v;
      is >> k >> v;
      if (k == "policy_fingerprint") s.policy_fingerprint = v;
      if (k == "seed") s.config.seed = std::stoull(v);
      continue;
    }
    if (!header_seen) {
      if (line != "asset,state") throw std::runtime_error("sample file: expected 'asset,state' header");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("sample file line " + std::to_string(line_no) + ": missing comma");
    const double a = parse_number(line.substr(0, comma));
    if (!(a >= 0.0)) throw std::runtime_error("sample file line " + std::to_string(line_no) + ": negative asset");
    s.assets.push_back(a);
    s.states.push_back(static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1))));
  }
  if (!header_seen) throw std::runtime_error("sample file: missing column header");
  s.config.n_agents = s.assets.size();
  if (!sidecar_json.empty()) {
    const json j = json::parse(sidecar_json);
    s.config.seed = j.at("seed").get<std::uint64_t>();
    s.config.horizon = j.at("horizon").get<int>();
    s.config.burn_in = j.at("burn_in").get<int>();
    s.config.mode = j.at("mode") == "panel" ? SimConfig::Mode::Panel : SimConfig::Mode::SinglePath;
    s.config.initial = j.at("initial") == "point_mass" ? SimConfig::Initial::PointMass : SimConfig::Initial::StationaryZ;
    s.config.a0 = j.at("a0").get<double>();
    if (!j.at("z0").is_null()) s.config.z0 = j.at("z0").get<std::size_t>();
    s.policy_fingerprint = j.at("policy_fingerprint").get<std::string>();
    if (j.at("rows").get<std::size_t>() != s.assets.size()) throw std::runtime_error("sample sidecar row count mismatch");
  }
  return s;
}

std::string table1_csv(const std::vector<std::string>& labels, const std::vector<InequalityReport>& reports,
                       const FileHeader& header) {
  std::ostringstream os;
  os << header.text() << "statistic";
  for (const std::string& l : labels) os << "," << l;
  os << "\n";
  const auto row = [&](const char* name, double InequalityReport::*field) {
    os << name;
    for (const InequalityReport& r : reports) os << "," << format_number(r.*field);
    os << "\n";
  };
  row("tail_exponent_top5", &InequalityReport::tail_exponent_top5);
  row("tail_exponent_top10", &InequalityReport::tail_exponent_top10);
  row("gini", &InequalityReport::gini);
  row("mean_assets", &InequalityReport::mean);
  return os.str();
}

std::string table2_csv(const std::vector<std::string>& labels, const std::vector<InequalityReport>& reports,
                       const FileHeader& header) {
  std::ostringstream os;
  os << header.text() << "poorest_pct";
  for (const std::string& l : labels) os << "," << l;
  os << "\n";
  const std::size_t n = reports.empty() ? 0 : reports.front().wealth_shares.size();
  for (const InequalityReport& r : reports) {
    if (r.wealth_shares.size() != n) throw std::invalid_argument("reports use different Lorenz steps");
  }
  for (std::size_t k = 0; k < n; ++k) {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.10g", 100.0 * reports.front().lorenz[k + 1].population);
    os << pct;
    for (const InequalityReport& r : reports) os << "," << format_number(100.0 * r.wealth_shares[k]);
    os << "\n";
  }
  return os.str();
}

std::string zipf_csv(const std::vector<ZipfPoint>& points, const FileHeader& header) {
  std::ostringstream os;
  os << header.text() << "log_wealth,log_rank\n";
  for (const ZipfPoint& p : points) os << format_number(p.log_wealth) << "," << format_number(p.log_rank) << "\n";
  return os.str();
}

std::string lorenz_csv(const std::vector<LorenzPoint>& points, const FileHeader& header) {
  std::ostringstream os;
  os << header.text() << "population_share,wealth_share\n";
  for (const LorenzPoint& p : points) os << format_number(p.population) << "," << format_number(p.wealth) << "\n";
  return os.str();
}

std::string assumption_report_json(const AssumptionReport& r, const ModelSpec& model, const FileHeader& header) {
  const auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = header.config_hash;
  j["states"] = model.num_states();
  j["beta"] = model.beta();
  j["utility"] = model.utility().describe();
  j["contraction"] = {{"r_K", r.contraction.r_K},
                      {"beta_r_K", model.beta() * r.contraction.r_K},
                      {"ok", r.contraction.ok},
                      {"n", r.contraction.n},
                      {"theta", finite_or_null(r.contraction.theta)}};
  j["patience"] = {{"lhs_inner", r.patience.lhs_inner}, {"lhs", r.patience.lhs},
                   {"rhs", finite_or_null(r.patience.rhs)}, {"ok", r.patience.ok},
                   {"separable_form", r.patience.separable_form}, {"r_mu", r.patience.r_mu},
                   {"r_sigma", r.patience.r_sigma}, {"alpha_lo", r.patience.alpha_lo},
                   {"alpha_hi", r.patience.alpha_hi}, {"alpha", r.patience.alpha}};
  j["income"] = {{"sup_EY", r.income.sup_EY},
                 {"sup_E_uprime_Y", finite_or_null(r.income.sup_E_uprime_Y)},
                 {"sup_E_uprime_Y_sq", finite_or_null(r.income.sup_E_uprime_Y_sq)},
                 {"sup_E_R_uprime_Y", finite_or_null(r.income.sup_E_R_uprime_Y)},
                 {"sup_E_R", r.income.sup_E_R},
                 {"sup_E_R_sq", r.income.sup_E_R_sq},
                 {"ok", r.income.ok}};
  j["drift"] = {{"q", r.drift.q}, {"q_prime", r.drift.q_prime}};
  j["contraction_ok"] = r.contraction_ok();
  j["stability_ok"] = r.stability_ok();
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepGrid& grid, const FileHeader& header) {
  std::ostringstream os;
  os << header.text() << axis_name(grid.axis1.axis) << "," << axis_name(grid.axis2.axis)
     << ",r_K,beta_r_K,patience_lhs,patience_rhs,contraction_ok,stable,error\n";
  for (const SweepPoint& p : grid.points) {
    os << format_number(p.x1) << "," << format_number(p.x2) << ",";
    if (p.evaluated) {
      os << format_number(p.r_K) << "," << format_number(p.beta_r_K) << "," << format_number(p.patience_lhs) << ","
         << format_number(p.patience_rhs) << "," << (p.contraction_ok ? 1 : 0) << "," << (p.stability_ok ? 1 : 0)
         << ",\n";
    } else {
      std::string msg = p.error;
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
      }
      os << "nan,nan,nan,nan,0,0," << msg << "\n";
    }
  }
  return os.str();
}

std::string frontier_csv(const SweepGrid& grid, const FileHeader& header) {
  const std::vector<std::optional<double>> f = stability_frontier(grid);
  std::ostringstream os;
  os << header.text() << axis_name(grid.axis1.axis) << ",frontier_" << axis_name(grid.axis2.axis) << "\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_number(grid.axis1.values[i]) << "," << (f[i] ? format_number(*f[i]) : std::string("nan")) << "\n";
  }
  return os.str();
}

}  // namespace caprisk
