#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hope/dense.hpp"
#include "hope/sparse.hpp"

namespace hope {

/// Singular triplets with orthonormal columns in `u` and `v` and `sigma` non-increasing.
/// Each column of `u` has its largest-magnitude entry nonnegative (first one on ties);
/// the matching column of `v` is flipped with it.
struct TruncatedSvd {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
};

/// Tunables for the randomized range finder.
struct SvdOptions {
  std::size_t oversample = 8;
  std::size_t power_iterations = 7;
};

/// Thread count for the row-parallel kernels (spmm, dense products). Each output row is
/// computed by exactly one thread in a fixed order, so results do not depend on the count.
void set_num_threads(unsigned threads);
unsigned num_threads() noexcept;

/// Sparse times dense. Each output row sums its terms in column order.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

/// Rank-`rank` SVD of a sparse matrix by randomized subspace iteration with a seeded
/// Gaussian test matrix, re-orthonormalizing after every multiply. Deterministic for a
/// given seed. Throws std::invalid_argument unless 1 <= rank <= min(rows, cols).
TruncatedSvd truncated_svd(const SparseMatrix& a, std::size_t rank, std::uint64_t seed,
                           const SvdOptions& options = {});

/// Exact SVD of a small dense matrix (one-sided Jacobi). Returns min(rows, cols) triplets;
/// singular vectors for zero singular values are completed to an orthonormal set.
/// Throws NumericError on non-finite input.
TruncatedSvd full_svd_small(const DenseMatrix& a);

/// Exact thin SVD of a tall dense matrix: Householder QR followed by Jacobi on R.
/// Same contract as full_svd_small but O(rows * cols^2).
TruncatedSvd dense_svd(const DenseMatrix& a);

/// Householder QR of a matrix with rows >= cols. `q` has orthonormal columns even when
/// `a` is rank deficient.
struct QrResult {
  DenseMatrix q;  // rows x cols
  DenseMatrix r;  // cols x cols, upper triangular
};
QrResult householder_qr(const DenseMatrix& a);

/// Rows with L2 norm above 1e-30 are scaled to unit norm; other rows become zero.
DenseMatrix row_normalize_l2(const DenseMatrix& a);

std::vector<double> row_norms(const DenseMatrix& a);

}  // namespace hope
