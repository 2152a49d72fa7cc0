#include "hope/hopeplus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "hope/linalg.hpp"

namespace hope {

Vcmi::Vcmi(std::vector<std::uint32_t> assignments, std::size_t k)
    : assignments_(std::move(assignments)), sizes_(k, 0) {
  for (auto a : assignments_) {
    if (a >= k) throw std::invalid_argument("Vcmi: assignment out of range");
    ++sizes_[a];
  }
}

double Vcmi::entry(std::size_t i, std::size_t j) const noexcept {
  if (assignments_[i] != j) return 0.0;
  return 1.0 / std::sqrt(static_cast<double>(sizes_[j]));
}

DenseMatrix Vcmi::to_dense() const {
  DenseMatrix out(rows(), k());
  for (std::size_t i = 0; i < rows(); ++i) out(i, assignments_[i]) = entry(i, assignments_[i]);
  return out;
}

RoundingMode parse_rounding_mode(std::string_view name) {
  if (name == "fnem" || name == "FNEM") return RoundingMode::kFnem;
  if (name == "snem" || name == "SNEM") return RoundingMode::kSnem;
  throw std::invalid_argument("unknown rounding mode '" + std::string(name) + "'");
}

std::string_view to_string(RoundingMode mode) {
  return mode == RoundingMode::kFnem ? "fnem" : "snem";
}

EigenBasis top_k_eigenvectors(const DenseMatrix& x, std::size_t k) {
  if (k < 1 || k > x.cols() || k > x.rows()) {
    throw std::invalid_argument("top_k_eigenvectors: k must lie in [1, beta]");
  }
  return EigenBasis{leading_columns(dense_svd(x).u, k)};
}

EigenBasis top_k_eigenvectors(const HopEmbedding& x, std::size_t k) {
  return top_k_eigenvectors(x.x, k);
}

namespace {

std::vector<std::uint32_t> row_argmax(const DenseMatrix& m) {
  std::vector<std::uint32_t> out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[best]) best = j;
    }
    out[i] = static_cast<std::uint32_t>(best);
  }
  return out;
}

}  // namespace

Vcmi greedy_seed(const EigenBasis& l) { return Vcmi(row_argmax(l.l), l.l.cols()); }

DenseMatrix lt_times_c(const EigenBasis& l, const Vcmi& c) {
  if (l.l.rows() != c.rows() || l.l.cols() != c.k()) {
    throw std::invalid_argument("L and C shapes do not match");
  }
  const std::size_t k = c.k();
  DenseMatrix out(k, k);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    const std::size_t j = c.assignments()[i];
    auto row = l.l.row(i);
    for (std::size_t a = 0; a < k; ++a) out(a, j) += row[a];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (c.sizes()[j] == 0) continue;
    const double s = 1.0 / std::sqrt(static_cast<double>(c.sizes()[j]));
    for (std::size_t a = 0; a < k; ++a) out(a, j) *= s;
  }
  return out;
}

DenseMatrix procrustes_t(const EigenBasis& l, const Vcmi& c) {
  const TruncatedSvd svd = full_svd_small(lt_times_c(l, c));
  return matmul_nt(svd.u, svd.v);
}

DenseMatrix spectral_t(const EigenBasis& l, const Vcmi& c) { return lt_times_c(l, c); }

RoundingResult round_vcmi(const EigenBasis& l, const Vcmi& c0, RoundingMode mode,
                          const RoundingOptions& options) {
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  RoundingResult out{c0, 0, false};
  for (std::size_t t = 1; t <= options.max_iters; ++t) {
    const DenseMatrix rotation =
        mode == RoundingMode::kFnem ? procrustes_t(l, out.c) : spectral_t(l, out.c);
    Vcmi next(row_argmax(matmul(l.l, rotation)), out.c.k());
    out.iterations = t;
    if (options.on_iteration) options.on_iteration(RoundingStep{t, rotation, next});
    if (next.assignments() == out.c.assignments()) {
      out.converged = true;
      break;
    }
    out.c = std::move(next);
  }
  return out;
}

Clustering hopeplus(const BipartiteGraph& g, std::size_t k, double alpha, std::size_t beta,
                    RoundingMode mode, std::size_t max_iters, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (k > g.u_count()) throw std::invalid_argument("k exceeds the number of target vertices");
  beta = resolve_beta(beta, k, g.u_count(), g.v_count());
  if (k > beta) throw std::invalid_argument("k exceeds min(|U|, |V|)");

  const HopEmbedding emb = hop_lowrank(g, alpha, beta, seed);
  const EigenBasis basis = top_k_eigenvectors(emb, k);
  RoundingOptions options;
  options.max_iters = max_iters;
  RoundingResult rounded = round_vcmi(basis, greedy_seed(basis), mode, options);

  Clustering out;
  out.k = k;
  out.assignments = rounded.c.assignments();
  out.iterations = rounded.iterations;
  out.converged = rounded.converged;
  out.objective_value = cluster_objective(emb.x, out);
  return out;
}

}  // namespace hope
