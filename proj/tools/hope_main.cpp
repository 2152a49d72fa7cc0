// hope: cluster, generate and benchmark weighted bipartite graphs.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 numeric failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hope/datagen.hpp"
#include "hope/error.hpp"
#include "hope/graph.hpp"
#include "hope/linalg.hpp"
#include "hope/metrics.hpp"
#include "hope/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClusterArgs {
  std::string input;
  std::string algorithm = "hope-snem";
  std::size_t k = 0;
  double alpha = 0.3;
  std::size_t beta = 0;
  std::size_t iters = 100;
  std::uint64_t seed = 0;
  std::string target = "u";
  std::string output;
  std::string metrics_out;
  std::string labels;
};

struct GenerateArgs {
  bool er = false;
  bool planted = false;
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t edges = 0;
  std::size_t blocks = 3;
  std::size_t u_per_block = 40;
  std::size_t v_per_block = 40;
  double p_in = 0.3;
  double p_out = 0.02;
  std::uint64_t seed = 0;
  std::string output;
  std::string labels_out;
};

struct BenchArgs {
  std::string sweep = "edges";
  std::vector<double> values;
  std::string algorithm = "hope-snem";
  std::size_t vertices = 100000;  // |U| + |V|, split evenly
  std::size_t edges = 2000000;
  std::size_t k = 50;
  double alpha = 0.3;
  std::size_t iters = 100;
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
  std::string output;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_cluster(const ClusterArgs& a) {
  const hope::Algorithm algorithm = hope::parse_algorithm(a.algorithm);
  hope::PipelineParams params;
  params.k = a.k;
  params.alpha = a.alpha;
  params.beta = a.beta;
  params.iters = a.iters;
  params.seed = a.seed;
  if (params.requested_beta() < params.k) {
    throw UsageError("--beta must be at least --k");
  }

  hope::BipartiteGraph g = hope::load_graph(a.input);
  if (a.target == "v") g = g.transposed();
  const std::size_t rank_cap = std::min(g.u_count(), g.v_count());
  if (params.requested_beta() > rank_cap) {
    std::cerr << "warning: beta " << params.requested_beta() << " clamped to " << rank_cap
              << '\n';
  }

  const auto start = std::chrono::steady_clock::now();
  const hope::Clustering result = hope::run_pipeline(g, algorithm, params);
  const double elapsed = seconds_since(start);

  std::ofstream out(a.output, std::ios::binary);
  if (!out) throw hope::ValidationError("cannot write " + a.output);
  for (std::size_t i = 0; i < result.assignments.size(); ++i) {
    out << g.u_ids().name(i) << '\t' << result.assignments[i] << '\n';
  }

  if (!a.labels.empty()) {
    const hope::LabelSet truth = hope::load_labels(a.labels, g.u_ids());
    hope::MetricsReport report = hope::evaluate(result, truth);
    report.runtime_seconds = elapsed;
    report.parameters = {{"algorithm", a.algorithm},
                         {"k", params.k},
                         {"alpha", params.alpha},
                         {"beta", std::min(params.requested_beta(), rank_cap)},
                         {"iters", params.iters},
                         {"seed", params.seed},
                         {"target", a.target}};
    const std::string text = report.to_json().dump(2) + "\n";
    if (a.metrics_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream m(a.metrics_out, std::ios::binary);
      if (!m) throw hope::ValidationError("cannot write " + a.metrics_out);
      m << text;
    }
  }
  std::cerr << "clustered " << g.u_count() << " vertices in " << elapsed << " s\n";
  return kExitOk;
}

int run_generate(const GenerateArgs& a) {
  if (a.er == a.planted) throw UsageError("choose exactly one of --er or --planted");
  if (a.er) {
    const hope::BipartiteGraph g = hope::er_bipartite(a.u, a.v, a.edges, a.seed);
    hope::write_edge_list(g, a.output);
    return kExitOk;
  }
  const hope::PlantedGraph pg = hope::planted_bipartite(a.blocks, a.u_per_block, a.v_per_block,
                                                        a.p_in, a.p_out, a.seed);
  hope::write_edge_list(pg.graph, a.output);
  if (!a.labels_out.empty()) hope::write_labels(pg.labels, pg.graph.u_ids(), a.labels_out);
  return kExitOk;
}

int run_bench(const BenchArgs& a) {
  const hope::Algorithm algorithm = hope::parse_algorithm(a.algorithm);
  if (a.sweep != "edges" && a.sweep != "vertices" && a.sweep != "k") {
    throw UsageError("--sweep must be one of edges, vertices, k");
  }
  if (a.values.empty()) throw UsageError("--values must list at least one point");

  std::ostringstream table;
  table << "sweep\tvalue\tu\tv\tedges\tk\tseconds\n";
  for (double value : a.values) {
    std::size_t vertices = a.vertices;
    std::size_t edges = a.edges;
    std::size_t k = a.k;
    const auto point = static_cast<std::size_t>(value);
    if (a.sweep == "edges") edges = point;
    if (a.sweep == "vertices") vertices = point;
    if (a.sweep == "k") k = point;
    const std::size_t u = vertices / 2;
    const std::size_t v = vertices - u;
    const hope::BipartiteGraph g = hope::er_bipartite(u, v, edges, a.seed);

    hope::PipelineParams params;
    params.k = k;
    params.alpha = a.alpha;
    params.iters = a.iters;
    params.seed = a.seed;
    double best = 0.0;
    for (std::size_t r = 0; r < a.repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      hope::run_pipeline(g, algorithm, params);
      const double s = seconds_since(start);
      best = r == 0 ? s : std::min(best, s);
    }
    table << a.sweep << '\t' << point << '\t' << u << '\t' << v << '\t' << edges << '\t' << k
          << '\t' << best << '\n';
    std::cerr << a.sweep << "=" << point << ": " << best << " s\n";
  }
  if (a.output.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw hope::ValidationError("cannot write " + a.output);
    out << table.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite graph clustering with HOPE and HOPE+"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Threads for the matrix kernels")
      ->check(CLI::Range(1u, 1024u));

  ClusterArgs cluster;
  auto* c = app.add_subcommand("cluster", "Cluster the target side of an edge list");
  c->add_option("--input", cluster.input, "Edge list (u_id <TAB> v_id [<TAB> weight])")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--algorithm", cluster.algorithm)
      ->check(CLI::IsMember({"hope", "hope-fnem", "hope-snem"}));
  c->add_option("--k", cluster.k, "Number of clusters")->required()->check(CLI::Range(2, 1 << 30));
  c->add_option("--alpha", cluster.alpha, "Random-walk decay factor in (0, 1)")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  c->add_option("--beta", cluster.beta, "Embedding dimension (default 5k)");
  c->add_option("--iters", cluster.iters, "Rounding iterations")->check(CLI::Range(1, 1 << 30));
  c->add_option("--seed", cluster.seed);
  c->add_option("--target", cluster.target, "Side to cluster")->check(CLI::IsMember({"u", "v"}));
  c->add_option("--output", cluster.output, "Assignment TSV")->required();
  c->add_option("--metrics-out", cluster.metrics_out, "Metrics JSON (default stdout)");
  c->add_option("--labels", cluster.labels, "Ground truth (vertex_id <TAB> label)")
      ->check(CLI::ExistingFile);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic bipartite graph");
  g->add_flag("--er", gen.er, "Erdos-Renyi graph with an exact edge count");
  g->add_flag("--planted", gen.planted, "Planted-partition graph with labels");
  g->add_option("--u", gen.u);
  g->add_option("--v", gen.v);
  g->add_option("--edges", gen.edges);
  g->add_option("--blocks", gen.blocks);
  g->add_option("--u-per-block", gen.u_per_block);
  g->add_option("--v-per-block", gen.v_per_block);
  g->add_option("--p-in", gen.p_in);
  g->add_option("--p-out", gen.p_out);
  g->add_option("--seed", gen.seed);
  g->add_option("--output", gen.output)->required();
  g->add_option("--labels-out", gen.labels_out);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time clustering over a sweep of ER graphs");
  b->add_option("--sweep", bench.sweep, "edges, vertices or k");
  b->add_option("--values", bench.values, "Sweep points")->required()->delimiter(',');
  b->add_option("--algorithm", bench.algorithm)
      ->check(CLI::IsMember({"hope", "hope-fnem", "hope-snem"}));
  b->add_option("--vertices", bench.vertices, "|U| + |V| when not swept");
  b->add_option("--edges", bench.edges, "|E| when not swept");
  b->add_option("--k", bench.k, "Cluster count when not swept");
  b->add_option("--alpha", bench.alpha);
  b->add_option("--iters", bench.iters);
  b->add_option("--seed", bench.seed);
  b->add_option("--repeats", bench.repeats)->check(CLI::Range(1, 100));
  b->add_option("--output", bench.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  hope::set_num_threads(threads);

  try {
    if (*c) return run_cluster(cluster);
    if (*g) return run_generate(gen);
    if (*b) return run_bench(bench);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hope::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const hope::ValidationError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const hope::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
