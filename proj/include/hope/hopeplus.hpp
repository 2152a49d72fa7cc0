#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "hope/clustering.hpp"
#include "hope/dense.hpp"
#include "hope/graph.hpp"
#include "hope/hop.hpp"

namespace hope {

/// Vertex-cluster membership indicator: row i has the single entry 1/sqrt(|C_j|) in
/// column j = assignments[i]. Stored compactly; empty clusters have all-zero columns.
class Vcmi {
 public:
  Vcmi() = default;
  Vcmi(std::vector<std::uint32_t> assignments, std::size_t k);

  std::size_t rows() const noexcept { return assignments_.size(); }
  std::size_t k() const noexcept { return sizes_.size(); }
  const std::vector<std::uint32_t>& assignments() const noexcept { return assignments_; }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

  double entry(std::size_t i, std::size_t j) const noexcept;
  DenseMatrix to_dense() const;

  friend bool operator==(const Vcmi& a, const Vcmi& b) {
    return a.assignments_ == b.assignments_ && a.sizes_ == b.sizes_;
  }

 private:
  std::vector<std::uint32_t> assignments_;
  std::vector<std::size_t> sizes_;
};

/// Approximate top-k eigenvectors of H H^T: |U| x k with orthonormal columns.
struct EigenBasis {
  DenseMatrix l;
};

enum class RoundingMode { kFnem, kSnem };

RoundingMode parse_rounding_mode(std::string_view name);
std::string_view to_string(RoundingMode mode);

/// Top-k left singular vectors of X, computed exactly from a thin QR of X followed by a
/// Jacobi SVD of the small triangular factor. Throws std::invalid_argument if k exceeds
/// the column count of X.
EigenBasis top_k_eigenvectors(const DenseMatrix& x, std::size_t k);
EigenBasis top_k_eigenvectors(const HopEmbedding& x, std::size_t k);

/// Assigns each row to its largest entry in L (lowest column on ties).
Vcmi greedy_seed(const EigenBasis& l);

/// L^T C as a k x k matrix, in O(|U| k).
DenseMatrix lt_times_c(const EigenBasis& l, const Vcmi& c);

/// Orthogonal T = Phi Psi^T from the full SVD Phi Sigma Psi^T of L^T C. Minimizes
/// ||L T - C||_F over orthogonal T.
DenseMatrix procrustes_t(const EigenBasis& l, const Vcmi& c);

/// T = L^T C, which minimizes ||L T - C||_2. Not orthogonal in general.
DenseMatrix spectral_t(const EigenBasis& l, const Vcmi& c);

struct RoundingStep {
  std::size_t iteration;  // from 1
  const DenseMatrix& t;
  const Vcmi& c;          // membership after this iteration's update
};

struct RoundingOptions {
  std::size_t max_iters = 100;
  std::function<void(const RoundingStep&)> on_iteration;
};

struct RoundingResult {
  Vcmi c;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Alternates T given C (FNEM: procrustes_t, SNEM: spectral_t) and C given T (row-wise
/// argmax of L T, lowest column on ties) until the memberships repeat or max_iters.
RoundingResult round_vcmi(const EigenBasis& l, const Vcmi& c0, RoundingMode mode,
                          const RoundingOptions& options = {});

/// HOPE+: low-rank HOP embedding, top-k eigenvectors, greedy seeding, FNEM/SNEM rounding.
Clustering hopeplus(const BipartiteGraph& g, std::size_t k, double alpha, std::size_t beta,
                    RoundingMode mode, std::size_t max_iters, std::uint64_t seed);

}  // namespace hope
