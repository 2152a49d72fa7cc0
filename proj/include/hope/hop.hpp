#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hope/dense.hpp"
#include "hope/graph.hpp"
#include "hope/sparse.hpp"

namespace hope {

/// Low-rank approximation of the HOP matrix.
///
/// `x_raw` = P U diag((1 - alpha) / (1 - alpha * sigma_i^2)) where U, sigma are the
/// top-`beta` left singular vectors and values of Q (values clamped to [0, 1]).
/// `x` is `x_raw` with unit-L2 rows; rows of isolated target vertices stay zero.
struct HopEmbedding {
  DenseMatrix x;
  DenseMatrix x_raw;
  std::vector<double> f_row_norms;  // ||x_raw row i||, the estimate of ||F_i||
  std::vector<double> sigma;        // clamped singular values of Q
  double alpha = 0.0;
  std::size_t beta = 0;
};

/// Dense HOP matrices from the truncated power series. Reference path for small graphs.
struct ExactHop {
  DenseMatrix f;
  DenseMatrix h;  // row-normalized f
  std::size_t lambda_max = 0;  // last power included in the series
};

/// Throws std::invalid_argument unless 0 < alpha < 1 and 1 <= beta <= min(|U|, |V|).
HopEmbedding hop_lowrank(const SparseMatrix& p, const SparseMatrix& q, double alpha,
                         std::size_t beta, std::uint64_t seed);
HopEmbedding hop_lowrank(const BipartiteGraph& g, double alpha, std::size_t beta,
                         std::uint64_t seed);

struct ExactHopOptions {
  double tail_tol = 1e-12;
  // Refuse inputs with |U| * |V| above this many entries.
  std::size_t dense_limit = std::size_t{1} << 24;
};

/// F = sum_lambda (1 - alpha) alpha^lambda P (Q Q^T)^lambda, accumulated until the
/// geometric tail alpha^(lambda + 1) drops below `tail_tol`. Entries of P (Q Q^T)^lambda
/// are at most 1 (unit-sum P rows, ||Q Q^T||_2 <= 1), so the truncation error is at most
/// tail_tol entrywise.
ExactHop hop_exact(const SparseMatrix& p, const SparseMatrix& q, double alpha,
                   const ExactHopOptions& options = {});

/// Mean pairwise distortion between ||H_i - H_j||^2 and ||X_i - X_j||^2 over ordered pairs
/// i != j: `absolute` averages dh - dx and `relative` averages (dh - dx) / dh, skipping
/// pairs with dh == 0 (counted in `skipped_pairs`). Since dx >= 0 and H >= 0 entrywise,
/// relative <= 1 and absolute <= 2; both are usually nonnegative but not guaranteed to be.
struct ApproxErrors {
  double relative = 0.0;
  double absolute = 0.0;
  std::size_t pairs = 0;
  std::size_t skipped_pairs = 0;
  // Whether relative lies in [0, 1] and absolute in [0, 2], with 1e-9 slack.
  bool within_nominal_range = true;
};

ApproxErrors approx_errors(const DenseMatrix& x, const DenseMatrix& h);
ApproxErrors approx_errors(const HopEmbedding& x, const ExactHop& exact);

}  // namespace hope
