#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hope/sparse.hpp"

namespace hope {

/// Bidirectional map between external string ids and dense indices, in insertion order.
class IdMap {
 public:
  // Returns the existing index for `id` or appends it.
  std::uint32_t intern(std::string_view id);
  std::optional<std::uint32_t> find(std::string_view id) const;
  const std::string& name(std::size_t index) const { return names_.at(index); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Edge {
  std::uint32_t u;
  std::uint32_t v;
  double weight;
};

/// Immutable weighted bipartite graph between a target side U and an attribute side V.
/// Edges are unique, sorted by (u, v), with positive weights. Vertices without edges
/// are kept.
class BipartiteGraph {
 public:
  // Validates weights and indices; duplicate (u, v) pairs are summed in input order.
  BipartiteGraph(IdMap u_ids, IdMap v_ids, std::vector<Edge> edges);

  std::size_t u_count() const noexcept { return u_ids_.size(); }
  std::size_t v_count() const noexcept { return v_ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const IdMap& u_ids() const noexcept { return u_ids_; }
  const IdMap& v_ids() const noexcept { return v_ids_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& u_weight_sums() const noexcept { return u_weight_sums_; }
  const std::vector<double>& v_weight_sums() const noexcept { return v_weight_sums_; }

  // Same graph with the roles of U and V exchanged.
  BipartiteGraph transposed() const;

 private:
  IdMap u_ids_;
  IdMap v_ids_;
  std::vector<Edge> edges_;
  std::vector<double> u_weight_sums_;
  std::vector<double> v_weight_sums_;
};

struct LoadOptions {
  char delimiter = '\t';
  // When false, a line without a weight column is a parse error.
  bool allow_missing_weight = true;
};

/// Reads "u_id <TAB> v_id [<TAB> weight]" lines. Blank lines and lines starting with '#'
/// are skipped. Throws ParseError (with line number) on malformed lines and
/// ValidationError on non-positive weights or an edge-free file.
BipartiteGraph load_graph(const std::filesystem::path& edge_file, const LoadOptions& options = {});
BipartiteGraph parse_graph(std::string_view text, const LoadOptions& options = {});

void write_edge_list(const BipartiteGraph& g, const std::filesystem::path& path);

/// |U| x |V| one-hop transition matrix U -> V. Rows of isolated u are all zero.
SparseMatrix transition_matrix_p(const BipartiteGraph& g);

/// |V| x |U| matrix with Q[j, i] = sqrt(p(v_j, u_i) * p(u_i, v_j)) on edges.
SparseMatrix q_matrix(const BipartiteGraph& g);

/// Weight of (v_j, v_l) in the projected graph, summed directly over shared neighbours.
/// Reference helper; equals the dot product of rows j and l of q_matrix(g).
double wpg_weight(const BipartiteGraph& g, std::size_t j, std::size_t l);

}  // namespace hope
