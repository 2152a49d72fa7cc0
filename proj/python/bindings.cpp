#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "hope/clustering.hpp"
#include "hope/datagen.hpp"
#include "hope/error.hpp"
#include "hope/graph.hpp"
#include "hope/hop.hpp"
#include "hope/hopeplus.hpp"
#include "hope/metrics.hpp"
#include "hope/pipeline.hpp"

namespace py = pybind11;
using namespace hope;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const DenseMatrix& m) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(m.rows()),
                                      static_cast<py::ssize_t>(m.cols())};
  return py::array_t<double>(shape, m.data().data());
}

template <typename T>
py::array_t<T> to_numpy(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

DenseMatrix from_numpy(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

// (data, indices, indptr, shape), the scipy.sparse.csr_matrix constructor arguments.
py::tuple to_csr(const SparseMatrix& m) {
  std::vector<double> data;
  std::vector<std::int64_t> indices, indptr{0};
  data.reserve(m.nnz());
  indices.reserve(m.nnz());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (auto c : m.row_cols(r)) indices.push_back(c);
    for (double x : m.row_values(r)) data.push_back(x);
    indptr.push_back(static_cast<std::int64_t>(data.size()));
  }
  return py::make_tuple(to_numpy(data), to_numpy(indices), to_numpy(indptr),
                        py::make_tuple(m.rows(), m.cols()));
}

BipartiteGraph graph_from_edges(const std::vector<std::string>& us,
                                const std::vector<std::string>& vs,
                                const std::optional<std::vector<double>>& weights) {
  if (us.size() != vs.size() || (weights && weights->size() != us.size())) {
    throw py::value_error("u, v and weights must have the same length");
  }
  IdMap u_ids, v_ids;
  std::vector<Edge> edges;
  edges.reserve(us.size());
  for (std::size_t e = 0; e < us.size(); ++e) {
    edges.push_back({u_ids.intern(us[e]), v_ids.intern(vs[e]), weights ? (*weights)[e] : 1.0});
  }
  return BipartiteGraph(std::move(u_ids), std::move(v_ids), std::move(edges));
}

Clustering clustering_from(const IntArray& pred) {
  Clustering c;
  c.assignments.reserve(static_cast<std::size_t>(pred.size()));
  for (py::ssize_t i = 0; i < pred.size(); ++i) {
    if (pred.data()[i] < 0) throw py::value_error("cluster ids must be nonnegative");
    c.assignments.push_back(static_cast<std::uint32_t>(pred.data()[i]));
  }
  const auto top = std::max_element(c.assignments.begin(), c.assignments.end());
  c.k = top == c.assignments.end() ? 1 : *top + 1;
  return c;
}

// Truth labels are class indices; -1 marks an unlabeled vertex.
LabelSet labels_from(const IntArray& truth) {
  std::vector<std::int32_t> labels;
  std::int32_t top = -1;
  for (py::ssize_t i = 0; i < truth.size(); ++i) {
    const auto x = truth.data()[i];
    if (x < LabelSet::kUnlabeled) throw py::value_error("labels must be >= -1");
    labels.push_back(static_cast<std::int32_t>(x));
    top = std::max(top, labels.back());
  }
  return make_label_set(std::move(labels), static_cast<std::size_t>(top + 1));
}

template <typename Metric>
auto metric(Metric f) {
  return [f](const IntArray& pred, const IntArray& truth) {
    return f(clustering_from(pred), labels_from(truth));
  };
}

PipelineParams params_of(std::size_t k, double alpha, std::size_t beta, std::size_t iters,
                         std::uint64_t seed) {
  PipelineParams p;
  p.k = k;
  p.alpha = alpha;
  p.beta = beta;
  p.iters = iters;
  p.seed = seed;
  return p;
}

}  // namespace

PYBIND11_MODULE(_hope, m) {
  m.doc() = "HOPE and HOPE+ clustering of the target side of a weighted bipartite graph.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<BipartiteGraph>(m, "Graph")
      .def(py::init(&graph_from_edges), py::arg("u"), py::arg("v"), py::arg("weights") = py::none(),
           "Graph from parallel lists of target ids, attribute ids and optional weights.")
      .def_property_readonly("u_count", &BipartiteGraph::u_count)
      .def_property_readonly("v_count", &BipartiteGraph::v_count)
      .def_property_readonly("edge_count", &BipartiteGraph::edge_count)
      .def_property_readonly("u_names", [](const BipartiteGraph& g) { return g.u_ids().names(); })
      .def_property_readonly("v_names", [](const BipartiteGraph& g) { return g.v_ids().names(); })
      .def("edges",
           [](const BipartiteGraph& g) {
             std::vector<std::int64_t> u, v;
             std::vector<double> w;
             for (const Edge& e : g.edges()) {
               u.push_back(e.u);
               v.push_back(e.v);
               w.push_back(e.weight);
             }
             return py::make_tuple(to_numpy(u), to_numpy(v), to_numpy(w));
           },
           "(u index, v index, weight) arrays, sorted by (u, v).")
      .def("transposed", &BipartiteGraph::transposed)
      .def("write", [](const BipartiteGraph& g, const std::filesystem::path& path) {
        write_edge_list(g, path);
      })
      .def("__repr__", [](const BipartiteGraph& g) {
        return "Graph(u_count=" + std::to_string(g.u_count()) + ", v_count=" +
               std::to_string(g.v_count()) + ", edge_count=" + std::to_string(g.edge_count()) + ")";
      });

  m.def("load_graph", [](const std::filesystem::path& path) { return load_graph(path); },
        py::arg("path"));
  m.def("parse_graph", [](const std::string& text) { return parse_graph(text); }, py::arg("text"));
  m.def("transition_matrix", [](const BipartiteGraph& g) { return to_csr(transition_matrix_p(g)); },
        py::arg("graph"), "P as (data, indices, indptr, shape) CSR arrays.");
  m.def("q_matrix", [](const BipartiteGraph& g) { return to_csr(q_matrix(g)); }, py::arg("graph"),
        "Q as (data, indices, indptr, shape) CSR arrays.");

  m.def("hop_lowrank",
        [](const BipartiteGraph& g, std::size_t beta, double alpha, std::uint64_t seed) {
          HopEmbedding e;
          {
            py::gil_scoped_release release;
            e = hop_lowrank(g, alpha, beta, seed);
          }
          py::dict out;
          out["x"] = to_numpy(e.x);
          out["x_raw"] = to_numpy(e.x_raw);
          out["sigma"] = to_numpy(e.sigma);
          return out;
        },
        py::arg("graph"), py::arg("beta"), py::arg("alpha") = 0.3, py::arg("seed") = 0);
  m.def("hop_exact",
        [](const BipartiteGraph& g, double alpha) {
          const ExactHop ex = hop_exact(transition_matrix_p(g), q_matrix(g), alpha);
          return py::make_tuple(to_numpy(ex.f), to_numpy(ex.h));
        },
        py::arg("graph"), py::arg("alpha") = 0.3, "Dense (F, H) for small graphs.");
  m.def("approx_errors",
        [](const DoubleArray& x, const DoubleArray& h) {
          const ApproxErrors err = approx_errors(from_numpy(x), from_numpy(h));
          py::dict out;
          out["relative"] = err.relative;
          out["absolute"] = err.absolute;
          out["pairs"] = err.pairs;
          out["skipped_pairs"] = err.skipped_pairs;
          out["within_nominal_range"] = err.within_nominal_range;
          return out;
        },
        py::arg("x"), py::arg("h"));

  py::class_<Clustering>(m, "Clustering")
      .def_property_readonly("assignments",
                             [](const Clustering& c) { return to_numpy(c.assignments); })
      .def_readonly("k", &Clustering::k)
      .def_readonly("objective", &Clustering::objective_value)
      .def_readonly("iterations", &Clustering::iterations)
      .def_readonly("converged", &Clustering::converged)
      .def("cluster_sizes", &Clustering::cluster_sizes);

  m.def("cluster",
        [](const BipartiteGraph& g, std::size_t k, const std::string& algorithm, double alpha,
           std::size_t beta, std::size_t iters, std::uint64_t seed) {
          const Algorithm algo = parse_algorithm(algorithm);
          py::gil_scoped_release release;
          return run_pipeline(g, algo, params_of(k, alpha, beta, iters, seed));
        },
        py::arg("graph"), py::arg("k"), py::arg("algorithm") = "hope-snem", py::arg("alpha") = 0.3,
        py::arg("beta") = 0, py::arg("iters") = 100, py::arg("seed") = 0,
        "Clusters the target side. algorithm is hope, hope-fnem or hope-snem; beta 0 means 5k.");
  m.def("hope",
        [](const BipartiteGraph& g, std::size_t k, double alpha, std::size_t beta,
           std::uint64_t seed) {
          py::gil_scoped_release release;
          return run_pipeline(g, Algorithm::kHope, params_of(k, alpha, beta, 100, seed));
        },
        py::arg("graph"), py::arg("k"), py::arg("alpha") = 0.3, py::arg("beta") = 0,
        py::arg("seed") = 0);
  m.def("hopeplus",
        [](const BipartiteGraph& g, std::size_t k, const std::string& mode, double alpha,
           std::size_t beta, std::size_t iters, std::uint64_t seed) {
          const Algorithm algo = parse_rounding_mode(mode) == RoundingMode::kFnem
                                     ? Algorithm::kHopePlusFnem
                                     : Algorithm::kHopePlusSnem;
          py::gil_scoped_release release;
          return run_pipeline(g, algo, params_of(k, alpha, beta, iters, seed));
        },
        py::arg("graph"), py::arg("k"), py::arg("mode") = "snem", py::arg("alpha") = 0.3,
        py::arg("beta") = 0, py::arg("iters") = 100, py::arg("seed") = 0);

  m.def("accuracy", metric([](const Clustering& c, const LabelSet& t) { return accuracy(c, t); }),
        py::arg("pred"), py::arg("truth"));
  m.def("f1_macro", metric([](const Clustering& c, const LabelSet& t) { return f1_macro(c, t); }),
        py::arg("pred"), py::arg("truth"));
  m.def("nmi", metric([](const Clustering& c, const LabelSet& t) { return nmi(c, t); }),
        py::arg("pred"), py::arg("truth"));
  m.def("ari", metric([](const Clustering& c, const LabelSet& t) { return ari(c, t); }),
        py::arg("pred"), py::arg("truth"));

  m.def("er_bipartite", &er_bipartite, py::arg("u_count"), py::arg("v_count"),
        py::arg("edge_count"), py::arg("seed") = 0);
  m.def("planted_bipartite",
        [](std::size_t blocks, std::size_t u_per_block, std::size_t v_per_block, double p_in,
           double p_out, std::uint64_t seed) {
          PlantedGraph pg = planted_bipartite(blocks, u_per_block, v_per_block, p_in, p_out, seed);
          std::vector<std::int64_t> labels(pg.labels.labels.begin(), pg.labels.labels.end());
          return py::make_tuple(std::move(pg.graph), to_numpy(labels));
        },
        py::arg("blocks"), py::arg("u_per_block"), py::arg("v_per_block"), py::arg("p_in"),
        py::arg("p_out"), py::arg("seed") = 0, "(graph, block label of every target vertex).");
}
