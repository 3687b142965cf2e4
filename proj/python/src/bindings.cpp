#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "caprisk/pipeline.hpp"
#include "caprisk/version.hpp"

namespace py = pybind11;
using namespace caprisk;

namespace {

struct PySolved {
  Config config;
  SolveResult result;
  std::string text;
};

py::dict report_dict(const AssumptionReport& r, double beta) {
  py::dict d;
  d["r_K"] = r.contraction.r_K;
  d["beta_r_K"] = beta * r.contraction.r_K;
  d["n"] = r.contraction.n;
  d["theta"] = r.contraction.theta;
  d["patience_lhs"] = r.patience.lhs;
  d["patience_rhs"] = r.patience.rhs;
  d["alpha"] = r.alpha();
  d["contraction_ok"] = r.contraction_ok();
  d["stability_ok"] = r.stability_ok();
  d["income_ok"] = r.income.ok;
  return d;
}

py::dict inequality_dict(const InequalityReport& r) {
  py::dict d;
  d["tail_exponent_top5"] = r.tail_exponent_top5;
  d["tail_exponent_top10"] = r.tail_exponent_top10;
  d["gini"] = r.gini;
  d["wealth_shares"] = r.wealth_shares;
  d["mean"] = r.mean;
  d["sample_size"] = r.sample_size;
  return d;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Income fluctuation problem with capital income risk";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_static("from_yaml", &parse_config, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("dump", &dump_config)
      .def("hash", &config_hash)
      .def("model_fingerprint", &model_fingerprint)
      .def_property(
          "economy", [](const Config& c) { return std::string(economy_name(c.model.economy)); },
          [](Config& c, const std::string& s) { c.model.economy = parse_economy(s); })
      .def_property(
          "beta", [](const Config& c) { return c.model.beta; }, [](Config& c, double v) { c.model.beta = v; })
      .def_property(
          "gamma", [](const Config& c) { return c.model.gamma; }, [](Config& c, double v) { c.model.gamma = v; })
      .def_property(
          "quadrature_nodes", [](const Config& c) { return c.model.expectation.nodes; },
          [](Config& c, int v) { c.model.expectation.nodes = v; })
      .def_property(
          "grid_points", [](const Config& c) { return c.grid.points; }, [](Config& c, int v) { c.grid.points = v; })
      .def_property(
          "tol_rho", [](const Config& c) { return c.solver.tol_rho; },
          [](Config& c, double v) { c.solver.tol_rho = v; })
      .def_property(
          "n_agents", [](const Config& c) { return c.simulation.n_agents; },
          [](Config& c, std::size_t v) { c.simulation.n_agents = v; })
      .def_property(
          "horizon", [](const Config& c) { return c.simulation.horizon; },
          [](Config& c, int v) { c.simulation.horizon = v; })
      .def_property(
          "burn_in", [](const Config& c) { return c.simulation.burn_in; },
          [](Config& c, int v) { c.simulation.burn_in = v; })
      .def_property(
          "seed", [](const Config& c) { return c.simulation.seed; },
          [](Config& c, std::uint64_t v) { c.simulation.seed = v; })
      .def_property(
          "single_path", [](const Config& c) { return c.simulation.mode == SimConfig::Mode::SinglePath; },
          [](Config& c, bool v) { c.simulation.mode = v ? SimConfig::Mode::SinglePath : SimConfig::Mode::Panel; })
      .def_property(
          "reproduce_economies",
          [](const Config& c) {
            std::vector<std::string> out;
            for (Economy e : c.reproduce) out.emplace_back(economy_name(e));
            return out;
          },
          [](Config& c, const std::vector<std::string>& names) {
            c.reproduce.clear();
            for (const std::string& s : names) c.reproduce.push_back(parse_economy(s));
          });

  m.def(
      "check",
      [](const Config& c) {
        const ModelSpec model = build_model(c.model);
        return report_dict(check_assumptions(model), model.beta());
      },
      py::arg("config"), "Contraction and stability conditions as a dict.");

  py::class_<PySolved>(m, "Policy")
      .def_property_readonly("grid", [](const PySolved& p) { return p.result.policy.grid().points(); })
      .def_property_readonly("values", [](const PySolved& p) { return p.result.policy.values(); })
      .def_property_readonly("thresholds", [](const PySolved& p) { return p.result.policy.thresholds(); })
      .def_property_readonly("iterations", [](const PySolved& p) { return p.result.iterations; })
      .def_property_readonly("trace", [](const PySolved& p) { return p.result.trace; })
      .def_property_readonly("text", [](const PySolved& p) { return p.text; })
      .def("__call__", [](const PySolved& p, double a, std::size_t z) { return p.result.policy.evaluate(a, z); },
           py::arg("a"), py::arg("z"));

  m.def(
      "solve",
      [](const Config& c, int threads) {
        const ModelSpec model = build_model(c.model);
        SolveOptions opts = c.solver;
        opts.threads = threads;
        py::gil_scoped_release release;
        SolveResult result = solve_policy(model, c.grid.build(), opts, check_assumptions(model));
        std::string text = policy_to_text(result.policy, model, model_fingerprint(c), header_for(c));
        return PySolved{c, std::move(result), std::move(text)};
      },
      py::arg("config"), py::arg("threads") = 0, "Solve for the optimal consumption policy.");

  m.def(
      "simulate",
      [](const Config& c, const PySolved& policy, int threads) {
        if (model_fingerprint(c) != model_fingerprint(policy.config)) {
          throw std::invalid_argument("policy was solved for a different model");
        }
        const ModelSpec model = build_model(c.model);
        SimConfig sim = c.simulation;
        sim.threads = threads;
        WealthSample s;
        {
          py::gil_scoped_release release;
          s = Simulator(model, policy.result.policy).run(sim, policy_fingerprint(policy.text));
        }
        py::array_t<double> assets(static_cast<py::ssize_t>(s.assets.size()), s.assets.data());
        py::array_t<std::uint32_t> states(static_cast<py::ssize_t>(s.states.size()), s.states.data());
        return py::make_tuple(assets, states);
      },
      py::arg("config"), py::arg("policy"), py::arg("threads") = 0,
      "Simulate under a solved policy; returns (assets, states).");

  m.def(
      "gini", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x) { return gini(to_vector(x)); },
      py::arg("sample"));
  m.def(
      "tail_exponent",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, double frac, bool rank_shift) {
        TailOptions o;
        o.rank_shift = rank_shift;
        return tail_exponent(to_vector(x), frac, o);
      },
      py::arg("sample"), py::arg("top_fraction"), py::arg("rank_shift") = false);
  m.def(
      "lorenz",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, double step) {
        const LorenzShares ls = lorenz_and_shares(to_vector(x), step);
        std::vector<double> pop, wealth;
        for (const LorenzPoint& p : ls.lorenz) {
          pop.push_back(p.population);
          wealth.push_back(p.wealth);
        }
        return py::make_tuple(pop, wealth);
      },
      py::arg("sample"), py::arg("step") = 0.05, "Lorenz curve as (population shares, wealth shares).");
  m.def(
      "inequality_report",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, bool rank_shift) {
        TailOptions o;
        o.rank_shift = rank_shift;
        return inequality_dict(inequality_report(to_vector(x), o));
      },
      py::arg("sample"), py::arg("rank_shift") = false);

  m.def(
      "reproduce",
      [](const Config& c, int threads) {
        ReproduceOutput out;
        {
          py::gil_scoped_release release;
          out = reproduce(c, threads);
        }
        py::dict stats;
        for (const EconomyRun& r : out.runs) stats[py::str(std::string(economy_name(r.economy)))] = inequality_dict(r.stats);
        return py::make_tuple(stats, out.files);
      },
      py::arg("config"), py::arg("threads") = 0,
      "Solve, simulate and summarize each configured economy; returns (stats, files).");
}
