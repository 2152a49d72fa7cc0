#pragma once

#include <cstddef>
#include <cstdint>

#include "hope/graph.hpp"
#include "hope/metrics.hpp"

namespace hope {

/// Erdos-Renyi bipartite graph with exactly `edge_count` distinct unit-weight edges drawn
/// uniformly from U x V. Vertices are named "u<i>" and "v<j>"; all are kept, including
/// isolated ones. Throws std::invalid_argument if edge_count > u_count * v_count.
BipartiteGraph er_bipartite(std::size_t u_count, std::size_t v_count, std::size_t edge_count,
                            std::uint64_t seed);

struct PlantedGraph {
  BipartiteGraph graph;
  LabelSet labels;  // block of every target vertex
};

/// Planted partition: `blocks` groups of u- and v-vertices; each within-block pair is an
/// edge with probability p_in, each cross-block pair with probability p_out.
/// Requires 0 <= p_out < p_in <= 1.
PlantedGraph planted_bipartite(std::size_t blocks, std::size_t u_per_block,
                               std::size_t v_per_block, double p_in, double p_out,
                               std::uint64_t seed);

}  // namespace hope
