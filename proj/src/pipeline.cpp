#include "hope/pipeline.hpp"

#include <stdexcept>
#include <string>

#include "hope/hopeplus.hpp"

namespace hope {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "hope") return Algorithm::kHope;
  if (name == "hope-fnem") return Algorithm::kHopePlusFnem;
  if (name == "hope-snem") return Algorithm::kHopePlusSnem;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kHope:
      return "hope";
    case Algorithm::kHopePlusFnem:
      return "hope-fnem";
    case Algorithm::kHopePlusSnem:
      return "hope-snem";
  }
  return "unknown";
}

Clustering run_pipeline(const BipartiteGraph& g, Algorithm algorithm, const PipelineParams& p) {
  switch (algorithm) {
    case Algorithm::kHope:
      return hope(g, p.k, p.alpha, p.requested_beta(), p.seed);
    case Algorithm::kHopePlusFnem:
      return hopeplus(g, p.k, p.alpha, p.requested_beta(), RoundingMode::kFnem, p.iters, p.seed);
    case Algorithm::kHopePlusSnem:
      return hopeplus(g, p.k, p.alpha, p.requested_beta(), RoundingMode::kSnem, p.iters, p.seed);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace hope
