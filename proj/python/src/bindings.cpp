#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sarve/community_detect.hpp"
#include "sarve/dataset_gen.hpp"
#include "sarve/dataset_io.hpp"
#include "sarve/evaluation.hpp"
#include "sarve/similarity.hpp"
#include "sarve/social_graph.hpp"
#include "sarve/version.hpp"

namespace py = pybind11;
using namespace sarve;

namespace {

Thresholds make_thresholds(double gamma, double beta, const std::string& deg,
                           std::optional<int> k_neighbors, int top_n, int min_overlap) {
  Thresholds th;
  th.gamma = gamma;
  th.beta = beta;
  th.deg_cent_threshold = DegreeThreshold::parse(deg);
  th.k_neighbors = k_neighbors;
  th.top_n = top_n;
  th.min_overlap = min_overlap;
  th.check();
  return th;
}

py::dict point_dict(const MetricPoint& p) {
  py::dict d;
  d["threshold"] = p.threshold;
  d["precision"] = p.precision;
  d["recall"] = p.recall;
  d["f_measure"] = p.f_measure;
  d["e"] = p.counts.e;
  d["f"] = p.counts.f;
  d["g"] = p.counts.g;
  d["h"] = p.counts.h;
  return d;
}

#define SARVE_THRESHOLD_ARGS                                                      \
  py::arg("gamma") = 0.6, py::arg("beta") = 0.5,                                  \
  py::arg("deg_cent_threshold") = "median", py::arg("k_neighbors") = py::none(),  \
  py::arg("top_n") = 10, py::arg("min_overlap") = kDefaultMinOverlap

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<LookupError>(m, "LookupError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<UndefinedMeanError>(m, "UndefinedMeanError", base.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def_static("load", &load_dataset, py::arg("path"))
      .def_static("parse", py::overload_cast<const std::string&>(&parse_dataset),
                  py::arg("text"))
      .def("to_text", &serialize_dataset)
      .def("save", [](const Dataset& d, const std::string& path) { save_dataset(d, path); },
           py::arg("path"))
      .def("validate",
           [](const Dataset& d) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& v : validate_dataset(d).violations)
               out.emplace_back(v.invariant, v.record);
             return out;
           })
      .def_property_readonly("t_total", &Dataset::t_total)
      .def_property_readonly("participants",
                             [](const Dataset& d) {
                               std::vector<std::string> out;
                               for (const auto& id : d.ids_with_role(Role::participant))
                                 out.push_back(id.str());
                               return out;
                             })
      .def_property_readonly("presenters",
                             [](const Dataset& d) {
                               std::vector<std::string> out;
                               for (const auto& id : d.ids_with_role(Role::presenter))
                                 out.push_back(id.str());
                               return out;
                             })
      .def_property_readonly("session_count", [](const Dataset& d) { return d.sessions.size(); })
      .def_property_readonly("contact_count",
                             [](const Dataset& d) { return d.contacts.entries().size(); })
      .def_property_readonly("rating_count", [](const Dataset& d) { return d.ratings.cell_count(); });

  m.def(
      "generate",
      [](std::uint64_t seed, int presenters, int participants, int contacts, int clusters,
         int items, int t_total) {
        GeneratorSpec spec;
        spec.seed = seed;
        spec.n_presenters = presenters;
        spec.n_participants = participants;
        spec.contacts_per_presenter = contacts;
        spec.n_interest_clusters = clusters;
        spec.n_items = items;
        spec.t_total = t_total;
        return generate(spec);
      },
      py::arg("seed") = 0, py::arg("presenters") = 60, py::arg("participants") = 78,
      py::arg("contacts_per_presenter") = 5, py::arg("clusters") = 4, py::arg("items") = 40,
      py::arg("t_total") = 720);

  m.def(
      "pearson",
      [](const Dataset& d, const std::string& c, const std::string& x, int min_overlap) {
        return pearson(d.ratings, PersonId(c), PersonId(x), min_overlap).value;
      },
      py::arg("dataset"), py::arg("presenter"), py::arg("participant"),
      py::arg("min_overlap") = kDefaultMinOverlap);

  m.def(
      "tie_strength",
      [](const Dataset& d, const std::string& p, const std::string& x) {
        return tie_strength(d.contacts, PersonId(p), PersonId(x)).value;
      },
      py::arg("dataset"), py::arg("presenter"), py::arg("participant"));

  m.def(
      "degree",
      [](const Dataset& d, const std::string& p) {
        return degree_centrality(d.contacts, PersonId(p)).degree;
      },
      py::arg("dataset"), py::arg("presenter"));

  m.def("f_measure", &f_measure, py::arg("precision"), py::arg("recall"));

  m.def(
      "recommend",
      [](const Dataset& d, double gamma, double beta, const std::string& deg,
         std::optional<int> k, int top_n, int min_overlap, unsigned workers) {
        const auto th = make_thresholds(gamma, beta, deg, k, top_n, min_overlap);
        RecommendationSet recs;
        {
          py::gil_scoped_release release;
          recs = run_sarve(d, th, {.workers = workers});
        }
        py::list out;
        for (const auto& r : recs.items) {
          py::dict row;
          row["participant"] = r.participant.str();
          row["session"] = r.session.str();
          row["presenter"] = r.presenter.str();
          row["stream"] = to_string(r.stream);
          row["score"] = r.score;
          row["rank"] = r.rank;
          row["gate"] = to_string(r.gate);
          out.append(row);
        }
        return out;
      },
      py::arg("dataset"), SARVE_THRESHOLD_ARGS, py::arg("workers") = 1);

  m.def(
      "evaluate",
      [](const Dataset& d, double gamma, double beta, const std::string& deg,
         std::optional<int> k, int top_n, int min_overlap, double train_fraction,
         std::uint64_t seed, const std::string& truth, unsigned workers) {
        const auto th = make_thresholds(gamma, beta, deg, k, top_n, min_overlap);
        EvalReport rep;
        {
          py::gil_scoped_release release;
          rep = evaluate(d, th, {train_fraction, seed}, parse_truth_mode(truth), workers);
        }
        py::dict out;
        out["universe"] = rep.universe;
        out["truth"] = to_string(rep.truth);
        out["train_records"] = rep.train_records;
        out["test_records"] = rep.test_records;
        py::list rows;
        for (const auto& row : rep.rows) {
          py::dict r = point_dict(row.point);
          r["method"] = row.method;
          r["stream"] = to_string(row.stream);
          rows.append(r);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("dataset"), SARVE_THRESHOLD_ARGS, py::arg("train_fraction") = 0.8,
      py::arg("seed") = 0, py::arg("truth") = "labels", py::arg("workers") = 1);

  m.def(
      "sweep",
      [](const Dataset& d, const std::string& axis, const std::string& grid, double gamma,
         double beta, const std::string& deg, std::optional<int> k, int top_n, int min_overlap,
         unsigned workers) {
        const auto th = make_thresholds(gamma, beta, deg, k, top_n, min_overlap);
        const auto values = parse_grid(grid);
        SweepResult res;
        {
          py::gil_scoped_release release;
          res = sweep(d, parse_sweep_axis(axis), values, th, {std::nullopt, workers});
        }
        py::dict out;
        out["axis"] = to_string(res.axis);
        out["universe"] = res.universe;
        out["shrinkage_holds"] = res.shrinkage_holds;
        py::list points, baseline;
        for (const auto& p : res.points) points.append(point_dict(p));
        for (const auto& p : res.baseline) baseline.append(point_dict(p));
        out["points"] = points;
        out["baseline"] = baseline;
        return out;
      },
      py::arg("dataset"), py::arg("axis"), py::arg("grid"), SARVE_THRESHOLD_ARGS,
      py::arg("workers") = 1);
}
