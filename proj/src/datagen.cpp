#include "hope/datagen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace hope {
namespace {

IdMap sequential_ids(char prefix, std::size_t n) {
  IdMap ids;
  std::string name;
  for (std::size_t i = 0; i < n; ++i) {
    name.assign(1, prefix);
    name += std::to_string(i);
    ids.intern(name);
  }
  return ids;
}

// Rejection sampling; efficient while at most half of the pairs are taken.
std::vector<std::uint64_t> sample_sparse(std::uint64_t universe, std::size_t count,
                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::uint64_t x = pick(rng);
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

// Floyd's algorithm: exactly `count` draws regardless of density.
std::vector<std::uint64_t> sample_floyd(std::uint64_t universe, std::size_t count,
                                        std::mt19937_64& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = universe - count; j < universe; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    const std::uint64_t x = chosen.insert(t).second ? t : j;
    if (x == j) chosen.insert(j);
    out.push_back(x);
  }
  return out;
}

}  // namespace

BipartiteGraph er_bipartite(std::size_t u_count, std::size_t v_count, std::size_t edge_count,
                            std::uint64_t seed) {
  const std::uint64_t universe = static_cast<std::uint64_t>(u_count) * v_count;
  if (edge_count > universe) {
    throw std::invalid_argument("er_bipartite: edge_count exceeds |U| * |V|");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> cells;
  if (edge_count > 0) {
    cells = 2 * static_cast<std::uint64_t>(edge_count) <= universe
                ? sample_sparse(universe, edge_count, rng)
                : sample_floyd(universe, edge_count, rng);
  }
  std::vector<Edge> edges;
  edges.reserve(cells.size());
  for (auto c : cells) {
    edges.push_back({static_cast<std::uint32_t>(c / v_count),
                     static_cast<std::uint32_t>(c % v_count), 1.0});
  }
  return BipartiteGraph(sequential_ids('u', u_count), sequential_ids('v', v_count),
                        std::move(edges));
}

PlantedGraph planted_bipartite(std::size_t blocks, std::size_t u_per_block,
                               std::size_t v_per_block, double p_in, double p_out,
                               std::uint64_t seed) {
  if (blocks < 1 || u_per_block < 1 || v_per_block < 1) {
    throw std::invalid_argument("planted_bipartite: sizes must be positive");
  }
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw std::invalid_argument("planted_bipartite: requires 0 <= p_out < p_in <= 1");
  }
  const std::size_t nu = blocks * u_per_block;
  const std::size_t nv = blocks * v_per_block;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nu; ++i) {
    const std::size_t bi = i / u_per_block;
    for (std::size_t j = 0; j < nv; ++j) {
      const double p = (j / v_per_block == bi) ? p_in : p_out;
      if (unit(rng) < p) {
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 1.0});
      }
    }
  }
  std::vector<std::int32_t> labels(nu);
  for (std::size_t i = 0; i < nu; ++i) labels[i] = static_cast<std::int32_t>(i / u_per_block);
  return PlantedGraph{
      BipartiteGraph(sequential_ids('u', nu), sequential_ids('v', nv), std::move(edges)),
      make_label_set(std::move(labels), blocks)};
}

}  // namespace hope
