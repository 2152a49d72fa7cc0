#include "hope/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hope/error.hpp"

namespace hope {

std::uint32_t IdMap::intern(std::string_view id) {
  std::string key(id);
  auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.push_back(std::move(key));
  return it->second;
}

std::optional<std::uint32_t> IdMap::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BipartiteGraph::BipartiteGraph(IdMap u_ids, IdMap v_ids, std::vector<Edge> edges)
    : u_ids_(std::move(u_ids)), v_ids_(std::move(v_ids)) {
  for (const auto& e : edges) {
    if (e.u >= u_ids_.size() || e.v >= v_ids_.size()) {
      throw ValidationError("edge endpoint out of range");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge weights must be positive and finite");
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().weight += e.weight;
    } else {
      edges_.push_back(e);
    }
  }
  u_weight_sums_.assign(u_ids_.size(), 0.0);
  v_weight_sums_.assign(v_ids_.size(), 0.0);
  for (const auto& e : edges_) {
    u_weight_sums_[e.u] += e.weight;
    v_weight_sums_[e.v] += e.weight;
  }
}

BipartiteGraph BipartiteGraph::transposed() const {
  std::vector<Edge> flipped;
  flipped.reserve(edges_.size());
  for (const auto& e : edges_) flipped.push_back({e.v, e.u, e.weight});
  return BipartiteGraph(v_ids_, u_ids_, std::move(flipped));
}

namespace {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

BipartiteGraph parse_graph(std::string_view text, const LoadOptions& options) {
  IdMap u_ids;
  IdMap v_ids;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split(line, options.delimiter);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected 2 or 3 fields, found " + std::to_string(fields.size()), line_no);
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError("empty vertex id", line_no);
    double weight = 1.0;
    if (fields.size() == 3) {
      const auto w = fields[2];
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
      if (ec != std::errc() || ptr != w.data() + w.size()) {
        throw ParseError("invalid weight '" + std::string(w) + "'", line_no);
      }
      if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": weight must be positive, got " + std::string(w));
      }
    } else if (!options.allow_missing_weight) {
      throw ParseError("missing weight column", line_no);
    }
    const auto u = u_ids.intern(fields[0]);
    const auto v = v_ids.intern(fields[1]);
    edges.push_back({u, v, weight});
  }
  if (edges.empty()) throw ValidationError("edge list contains no edges");
  return BipartiteGraph(std::move(u_ids), std::move(v_ids), std::move(edges));
}

BipartiteGraph load_graph(const std::filesystem::path& edge_file, const LoadOptions& options) {
  std::ifstream in(edge_file, std::ios::binary);
  if (!in) throw ValidationError("cannot open edge file " + edge_file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str(), options);
}

void write_edge_list(const BipartiteGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.precision(17);
  for (const auto& e : g.edges()) {
    out << g.u_ids().name(e.u) << '\t' << g.v_ids().name(e.v);
    if (e.weight != 1.0) out << '\t' << e.weight;
    out << '\n';
  }
}

SparseMatrix transition_matrix_p(const BipartiteGraph& g) {
  std::vector<std::size_t> offsets(g.u_count() + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  cols.reserve(g.edge_count());
  vals.reserve(g.edge_count());
  const auto& sums = g.u_weight_sums();
  // Edges are sorted by (u, v), which is already CSR order.
  for (const auto& e : g.edges()) {
    cols.push_back(e.v);
    vals.push_back(e.weight / sums[e.u]);
    ++offsets[e.u + 1];
  }
  for (std::size_t r = 0; r < g.u_count(); ++r) offsets[r + 1] += offsets[r];
  return SparseMatrix(g.u_count(), g.v_count(), std::move(offsets), std::move(cols),
                      std::move(vals));
}

SparseMatrix q_matrix(const BipartiteGraph& g) {
  std::vector<Triplet> triplets;
  triplets.reserve(g.edge_count());
  const auto& us = g.u_weight_sums();
  const auto& vs = g.v_weight_sums();
  for (const auto& e : g.edges()) {
    const double p_uv = e.weight / us[e.u];
    const double p_vu = e.weight / vs[e.v];
    triplets.push_back({e.v, e.u, std::sqrt(p_vu * p_uv)});
  }
  return SparseMatrix::from_triplets(g.v_count(), g.u_count(), std::move(triplets));
}

double wpg_weight(const BipartiteGraph& g, std::size_t j, std::size_t l) {
  if (j >= g.v_count() || l >= g.v_count()) throw std::out_of_range("wpg_weight: bad v index");
  const auto& us = g.u_weight_sums();
  const auto& vs = g.v_weight_sums();
  // weight(u, v_j) and weight(u, v_l) for every u touching either vertex.
  std::vector<double> wj(g.u_count(), 0.0);
  std::vector<double> wl(g.u_count(), 0.0);
  for (const auto& e : g.edges()) {
    if (e.v == j) wj[e.u] = e.weight;
    if (e.v == l) wl[e.u] = e.weight;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < g.u_count(); ++i) {
    if (wj[i] == 0.0 || wl[i] == 0.0) continue;
    const double p_vj_u = wj[i] / vs[j];
    const double p_u_vl = wl[i] / us[i];
    const double p_vl_u = wl[i] / vs[l];
    const double p_u_vj = wj[i] / us[i];
    total += std::sqrt(p_vj_u * p_u_vl) * std::sqrt(p_vl_u * p_u_vj);
  }
  return total;
}

}  // namespace hope
