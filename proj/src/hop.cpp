#include "hope/hop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hope/linalg.hpp"

namespace hope {

HopEmbedding hop_lowrank(const SparseMatrix& p, const SparseMatrix& q, double alpha,
                         std::size_t beta, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (p.cols() != q.rows() || p.rows() != q.cols()) {
    throw std::invalid_argument("hop_lowrank: P must be |U|x|V| and Q |V|x|U|");
  }
  if (beta < 1 || beta > std::min(p.rows(), p.cols())) {
    throw std::invalid_argument("beta must lie in [1, min(|U|, |V|)]");
  }

  TruncatedSvd svd = truncated_svd(q, beta, seed);

  HopEmbedding out;
  out.alpha = alpha;
  out.beta = beta;
  out.sigma = svd.sigma;
  std::vector<double> scale(beta);
  for (std::size_t i = 0; i < beta; ++i) {
    // The top singular value of Q is at most 1; clamp away rounding excursions.
    out.sigma[i] = std::clamp(out.sigma[i], 0.0, 1.0);
    scale[i] = (1.0 - alpha) / (1.0 - alpha * out.sigma[i] * out.sigma[i]);
  }

  out.x_raw = spmm(p, svd.u);
  for (std::size_t r = 0; r < out.x_raw.rows(); ++r) {
    auto row = out.x_raw.row(r);
    for (std::size_t c = 0; c < beta; ++c) row[c] *= scale[c];
  }
  out.f_row_norms = row_norms(out.x_raw);
  out.x = row_normalize_l2(out.x_raw);
  return out;
}

HopEmbedding hop_lowrank(const BipartiteGraph& g, double alpha, std::size_t beta,
                         std::uint64_t seed) {
  return hop_lowrank(transition_matrix_p(g), q_matrix(g), alpha, beta, seed);
}

ExactHop hop_exact(const SparseMatrix& p, const SparseMatrix& q, double alpha,
                   const ExactHopOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(options.tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be positive");
  if (p.rows() * p.cols() > options.dense_limit || q.rows() * q.rows() > options.dense_limit) {
    throw std::invalid_argument("hop_exact: graph exceeds the dense size limit");
  }
  const DenseMatrix qd = q.to_dense();
  const DenseMatrix projected = matmul_nt(qd, qd);  // Q Q^T, |V| x |V|

  DenseMatrix term = p.to_dense();
  ExactHop out;
  out.f = DenseMatrix(term.rows(), term.cols());
  double weight = 1.0 - alpha;  // (1 - alpha) alpha^lambda
  double tail = alpha;          // alpha^(lambda + 1)
  for (std::size_t lambda = 0;; ++lambda) {
    auto dst = out.f.data();
    auto src = term.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += weight * src[i];
    out.lambda_max = lambda;
    if (tail < options.tail_tol) break;
    term = matmul(term, projected);
    weight *= alpha;
    tail *= alpha;
  }
  out.h = row_normalize_l2(out.f);
  return out;
}

ApproxErrors approx_errors(const DenseMatrix& x, const DenseMatrix& h) {
  if (x.rows() != h.rows()) throw std::invalid_argument("approx_errors: row count mismatch");
  const std::size_t n = x.rows();
  ApproxErrors out;
  double rel_sum = 0.0;
  double abs_sum = 0.0;
  std::size_t rel_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double dx = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double d = x(i, c) - x(j, c);
        dx += d * d;
      }
      double dh = 0.0;
      for (std::size_t c = 0; c < h.cols(); ++c) {
        const double d = h(i, c) - h(j, c);
        dh += d * d;
      }
      // Dropping spectral tail shrinks distances, so dh - dx is the nonnegative side.
      abs_sum += dh - dx;
      ++out.pairs;
      if (dh == 0.0) {
        ++out.skipped_pairs;
      } else {
        rel_sum += (dh - dx) / dh;
        ++rel_count;
      }
    }
  }
  out.absolute = out.pairs > 0 ? abs_sum / static_cast<double>(out.pairs) : 0.0;
  out.relative = rel_count > 0 ? rel_sum / static_cast<double>(rel_count) : 0.0;
  constexpr double kSlack = 1e-9;
  out.within_nominal_range = out.relative >= -kSlack && out.relative <= 1.0 + kSlack &&
                             out.absolute >= -kSlack && out.absolute <= 2.0 + kSlack;
  return out;
}

ApproxErrors approx_errors(const HopEmbedding& x, const ExactHop& exact) {
  return approx_errors(x.x, exact.h);
}

}  // namespace hope
