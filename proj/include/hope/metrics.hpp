#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hope/clustering.hpp"
#include "hope/graph.hpp"
#include "json.hpp"

namespace hope {

/// Ground-truth classes for the target vertices. `labels[i] == kUnlabeled` marks a vertex
/// absent from the label file; such vertices are skipped by every metric.
struct LabelSet {
  static constexpr std::int32_t kUnlabeled = -1;

  std::vector<std::int32_t> labels;
  std::vector<std::string> class_names;
  std::size_t unknown_vertices = 0;  // label lines naming a vertex not in the graph

  std::size_t class_count() const noexcept { return class_names.size(); }
  std::size_t unlabeled_count() const noexcept;
};

/// Builds a LabelSet from dense class indices in [0, class_count).
LabelSet make_label_set(std::vector<std::int32_t> labels, std::size_t class_count);

/// Reads "vertex_id <TAB> label" lines against the graph's target-side ids. Class indices
/// follow first appearance. Throws ParseError on malformed lines.
LabelSet load_labels(const std::filesystem::path& path, const IdMap& target_ids);
LabelSet parse_labels(std::string_view text, const IdMap& target_ids);

void write_labels(const LabelSet& labels, const IdMap& ids, const std::filesystem::path& path);

/// Counts n[p][t] over labelled vertices: predicted cluster p, true class t.
std::vector<std::vector<std::size_t>> contingency_table(std::span<const std::uint32_t> pred,
                                                        std::size_t k,
                                                        std::span<const std::int32_t> truth,
                                                        std::size_t classes);

/// Maximum-weight perfect matching on a square matrix (Hungarian algorithm).
/// Returns, for each row, the matched column.
std::vector<std::size_t> max_weight_matching(const std::vector<std::vector<double>>& weights);

double accuracy(const Clustering& pred, const LabelSet& truth);
double f1_macro(const Clustering& pred, const LabelSet& truth);
double nmi(const Clustering& pred, const LabelSet& truth);
double ari(const Clustering& pred, const LabelSet& truth);

// The same metrics evaluated directly on a contingency table (rows = clusters).
double accuracy(const std::vector<std::vector<std::size_t>>& table);
double f1_macro(const std::vector<std::vector<std::size_t>>& table);
double nmi(const std::vector<std::vector<std::size_t>>& table);
double ari(const std::vector<std::vector<std::size_t>>& table);

struct MetricsReport {
  double acc = 0.0;
  double f1 = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double runtime_seconds = 0.0;
  std::size_t evaluated_vertices = 0;
  std::size_t unlabeled_vertices = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t empty_clusters = 0;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

MetricsReport evaluate(const Clustering& pred, const LabelSet& truth);

}  // namespace hope
