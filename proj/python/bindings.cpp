#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "pocsel/bounds.hpp"
#include "pocsel/csv.hpp"
#include "pocsel/error.hpp"
#include "pocsel/estimation.hpp"
#include "pocsel/inference.hpp"
#include "pocsel/latent.hpp"
#include "pocsel/oracle.hpp"
#include "pocsel/report.hpp"

namespace py = pybind11;
using namespace pocsel;

namespace {

Endpoint endpoint_from(const std::string& which) {
  if (which == "lower") return Endpoint::Lower;
  if (which == "upper") return Endpoint::Upper;
  throw py::value_error("which must be 'lower' or 'upper'");
}

Dataset make_dataset(const std::vector<int>& d, const std::vector<int>& s, const std::vector<std::optional<int>>& y,
                     const std::optional<std::vector<std::string>>& stratum) {
  if (d.size() != s.size() || d.size() != y.size() || (stratum && stratum->size() != d.size())) {
    throw py::value_error("columns must have equal length");
  }
  std::vector<MicroRecord> rs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    rs[i].d = d[i];
    rs[i].s = s[i];
    rs[i].y = y[i];
    if (stratum) rs[i].stratum = (*stratum)[i];
  }
  return Dataset(std::move(rs));
}

py::dict interval_dict(const Interval& i) { return py::dict(py::arg("lower") = i.lower, py::arg("upper") = i.upper); }

py::dict test_dict(const ProportionTest& t) {
  return py::dict(py::arg("diff") = t.diff, py::arg("stat") = t.stat, py::arg("p_value") = t.p_value,
                  py::arg("degenerate") = t.degenerate);
}

}  // namespace

PYBIND11_MODULE(_pocsel, m) {
  m.doc() = "Bounds on the probability of causation under sample selection";

  auto base = py::register_exception<Error>(m, "PocselError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::enum_<AssumptionSet>(m, "AssumptionSet")
      .value("A1_3", AssumptionSet::A1_3)
      .value("A1_4", AssumptionSet::A1_4)
      .value("A1_5", AssumptionSet::A1_5);

  py::class_<ObservedMoments>(m, "ObservedMoments")
      .def(py::init([](double p_y1_s1d1, double p_y0_s1d0, double p_s1_d1, double p_s1_d0, double p_d1) {
             return ObservedMoments{p_y1_s1d1, p_y0_s1d0, p_s1_d1, p_s1_d0, p_d1};
           }),
           py::arg("p_y1_s1d1"), py::arg("p_y0_s1d0"), py::arg("p_s1_d1"), py::arg("p_s1_d0"), py::arg("p_d1") = 0.5)
      .def_readwrite("p_y1_s1d1", &ObservedMoments::p_y1_s1d1)
      .def_readwrite("p_y0_s1d0", &ObservedMoments::p_y0_s1d0)
      .def_readwrite("p_s1_d1", &ObservedMoments::p_s1_d1)
      .def_readwrite("p_s1_d0", &ObservedMoments::p_s1_d0)
      .def_readwrite("p_d1", &ObservedMoments::p_d1)
      .def(py::self == py::self)
      .def("__repr__", [](const ObservedMoments& o) {
        return "ObservedMoments(p_y1_s1d1=" + std::to_string(o.p_y1_s1d1) + ", p_y0_s1d0=" +
               std::to_string(o.p_y0_s1d0) + ", p_s1_d1=" + std::to_string(o.p_s1_d1) +
               ", p_s1_d0=" + std::to_string(o.p_s1_d0) + ", p_d1=" + std::to_string(o.p_d1) + ")";
      });

  py::class_<BoundsInterval>(m, "BoundsInterval")
      .def_readonly("lb", &BoundsInterval::lb)
      .def_readonly("ub", &BoundsInterval::ub)
      .def_readonly("assumption_set", &BoundsInterval::assumption_set)
      .def_readonly("lb_clipped", &BoundsInterval::lb_clipped)
      .def_readonly("ub_clipped", &BoundsInterval::ub_clipped)
      .def_readonly("lb_raw", &BoundsInterval::lb_raw)
      .def_readonly("ub_raw", &BoundsInterval::ub_raw)
      .def_readonly("restriction_violated", &BoundsInterval::restriction_violated)
      .def_readonly("crossed", &BoundsInterval::crossed)
      .def(py::self == py::self)
      .def("__repr__", [](const BoundsInterval& b) {
        return "BoundsInterval(" + std::string(to_string(b.assumption_set)) + ", lb=" + std::to_string(b.lb) +
               ", ub=" + std::to_string(b.ub) + ")";
      });

  m.def("trim_ratio", &trim_ratio, py::arg("m"));
  m.def("bounds_a13", &bounds_a13, py::arg("m"));
  m.def("bounds_a14", &bounds_a14, py::arg("m"));
  m.def("bounds_a15", &bounds_a15, py::arg("m"));
  m.def("compute_bounds", &compute_bounds, py::arg("m"), py::arg("a"));

  py::class_<LatentJoint>(m, "LatentJoint")
      .def(py::init([](const std::vector<double>& pi, double p_d1) {
             if (pi.size() != 16) throw py::value_error("pi needs 16 cell masses");
             LatentJoint j;
             std::copy(pi.begin(), pi.end(), j.pi.begin());
             j.p_d1 = p_d1;
             j.validate();
             return j;
           }),
           py::arg("pi"), py::arg("p_d1") = 0.5)
      .def_property_readonly("pi", [](const LatentJoint& j) { return std::vector<double>(j.pi.begin(), j.pi.end()); })
      .def_readonly("p_d1", &LatentJoint::p_d1);

  m.def("theta_oo", &theta_oo, py::arg("joint"));
  m.def("observed_from_latent", &observed_from_latent, py::arg("joint"));
  m.def(
      "check_assumptions",
      [](const LatentJoint& j) {
        const auto r = check_assumptions(j);
        return py::dict(py::arg("a1") = r.holds_a1, py::arg("a2") = r.holds_a2, py::arg("a3") = r.holds_a3,
                        py::arg("a4") = r.holds_a4, py::arg("a5") = r.holds_a5, py::arg("details") = r.details);
      },
      py::arg("joint"));
  m.def(
      "construct_bound_distribution",
      [](const ObservedMoments& mo, AssumptionSet a, const std::string& which) {
        return construct_bound_distribution(mo, a, endpoint_from(which));
      },
      py::arg("m"), py::arg("a"), py::arg("which"));
  m.def("construct_interior_distribution", &construct_interior_distribution, py::arg("m"), py::arg("a"),
        py::arg("omega"));
  m.def(
      "sharp_envelope_oracle",
      [](const ObservedMoments& mo, AssumptionSet a, const std::string& mode, std::size_t samples, std::uint64_t seed) {
        OracleResolution res;
        if (mode == "grid") {
          res.mode = OracleMode::Grid;
        } else if (mode != "lp") {
          throw py::value_error("mode must be 'lp' or 'grid'");
        }
        res.samples = samples;
        res.seed = seed;
        py::gil_scoped_release release;
        const auto e = sharp_envelope_oracle(mo, a, res);
        return std::pair{e.theta_min, e.theta_max};
      },
      py::arg("m"), py::arg("a"), py::arg("mode") = "lp", py::arg("samples") = 20000, py::arg("seed") = 1);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("d"), py::arg("s"), py::arg("y"), py::arg("stratum") = py::none())
      .def("__len__", &Dataset::size)
      .def_property_readonly("strata", [](const Dataset& ds) {
        std::vector<std::string> ids;
        for (const auto& [id, pos] : ds.stratum_index()) ids.push_back(id);
        return ids;
      });

  m.def(
      "load_csv",
      [](const std::string& path, const std::string& y, const std::string& s, const std::string& d,
         const std::optional<std::string>& stratum) { return load_csv(path, ColumnMapping{y, s, d, stratum}); },
      py::arg("path"), py::arg("y") = "y", py::arg("s") = "s", py::arg("d") = "d", py::arg("stratum") = py::none());

  m.def("estimate_moments", &estimate_moments, py::arg("data"));
  m.def(
      "estimate_stratified",
      [](const Dataset& ds, AssumptionSet a) {
        const auto sb = estimate_stratified(ds, a);
        py::dict per;
        for (const auto& [id, e] : sb.per_stratum) {
          per[py::str(id)] = py::dict(py::arg("moments") = e.moments, py::arg("bounds") = e.bounds,
                                      py::arg("weight") = e.weight, py::arg("n") = e.n);
        }
        return py::dict(py::arg("per_stratum") = per, py::arg("dropped") = sb.dropped,
                        py::arg("aggregate") = sb.aggregate);
      },
      py::arg("data"), py::arg("a"));

  m.def(
      "test_restrictions",
      [](const Dataset& ds, AssumptionSet a) {
        const auto r = test_restrictions(ds, a);
        return py::dict(py::arg("selection") = test_dict(r.selection_test),
                        py::arg("outcome") = r.outcome_test ? py::object(test_dict(*r.outcome_test)) : py::none(),
                        py::arg("assumption_set") = r.assumption_set);
      },
      py::arg("data"), py::arg("a"));

  m.def(
      "bootstrap_bounds",
      [](const Dataset& ds, AssumptionSet a, std::size_t reps, double level, std::uint64_t seed, bool stratified,
         unsigned threads) {
        BootstrapOptions opt{reps, level, seed, stratified, false, threads};
        BootstrapResult r;
        {
          py::gil_scoped_release release;
          r = bootstrap_bounds(ds, a, opt);
        }
        return py::dict(py::arg("ci_lb") = interval_dict(r.ci_lb), py::arg("ci_ub") = interval_dict(r.ci_ub),
                        py::arg("point") = r.point, py::arg("replications") = r.replications,
                        py::arg("level") = r.level, py::arg("seed") = r.seed,
                        py::arg("failed_replicates") = r.failed_replicates);
      },
      py::arg("data"), py::arg("a"), py::arg("reps") = 1000, py::arg("level") = 0.9, py::arg("seed") = 1,
      py::arg("stratified") = false, py::arg("threads") = 0);

  m.def(
      "run_analysis_json",
      [](const std::string& input, const std::string& y, const std::string& s, const std::string& d,
         const std::optional<std::string>& stratum, const std::vector<AssumptionSet>& sets, std::size_t reps,
         double level, std::uint64_t seed, std::optional<bool> stratified, const std::optional<std::string>& plot_out) {
        RunConfig cfg;
        cfg.input_path = input;
        cfg.columns = ColumnMapping{y, s, d, stratum};
        cfg.assumption_sets = sets;
        cfg.reps = reps;
        cfg.level = level;
        cfg.seed = seed;
        cfg.stratified = stratified;
        cfg.plot_out = plot_out;
        py::gil_scoped_release release;
        const Report r = run_analysis(cfg);
        if (plot_out) emit_plot_data(r, *plot_out);
        return to_json(r);
      },
      py::arg("input"), py::arg("y") = "y", py::arg("s") = "s", py::arg("d") = "d", py::arg("stratum") = py::none(),
      py::arg("assumption_sets") = std::vector<AssumptionSet>(kAllAssumptionSets.begin(), kAllAssumptionSets.end()),
      py::arg("reps") = 1000, py::arg("level") = 0.9, py::arg("seed") = 1, py::arg("stratified") = py::none(),
      py::arg("plot_out") = py::none());

  m.attr("__version__") = std::string(tool_version());
}
