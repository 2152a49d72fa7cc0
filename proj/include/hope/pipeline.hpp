#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "hope/clustering.hpp"
#include "hope/graph.hpp"

namespace hope {

enum class Algorithm { kHope, kHopePlusFnem, kHopePlusSnem };

// Accepts "hope", "hope-fnem", "hope-snem".
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

struct PipelineParams {
  std::size_t k = 2;
  double alpha = 0.3;
  std::size_t beta = 0;  // 0 selects 5 * k
  std::size_t iters = 100;
  std::uint64_t seed = 0;

  std::size_t requested_beta() const noexcept { return beta == 0 ? 5 * k : beta; }
};

/// Runs the selected algorithm with beta resolved against the graph size.
Clustering run_pipeline(const BipartiteGraph& g, Algorithm algorithm, const PipelineParams& p);

}  // namespace hope
