#include "hope/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

#include "hope/error.hpp"
#include "parallel.hpp"

namespace hope {
namespace {

std::atomic<unsigned> g_threads{1};

constexpr std::size_t kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-15;

// Column-major scratch layout for one-sided Jacobi: rotations touch whole columns.
using Columns = std::vector<std::vector<double>>;

double column_dot(const std::vector<double>& a, const std::vector<double>& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void rotate(std::vector<double>& p, std::vector<double>& q, double c, double s) noexcept {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i];
    const double b = q[i];
    p[i] = c * a - s * b;
    q[i] = s * a + c * b;
  }
}

// Extends `basis` (orthonormal columns of length `dim`) until it holds `target` vectors,
// each time taking the coordinate axis with the largest residual after projection.
void complete_basis(Columns& basis, std::size_t dim, std::size_t target) {
  while (basis.size() < target) {
    std::vector<double> best;
    double best_norm = -1.0;
    for (std::size_t t = 0; t < dim; ++t) {
      std::vector<double> r(dim, 0.0);
      r[t] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          const double proj = column_dot(b, r);
          for (std::size_t i = 0; i < dim; ++i) r[i] -= proj * b[i];
        }
      }
      const double n = std::sqrt(column_dot(r, r));
      if (n > best_norm + 1e-12) {
        best_norm = n;
        best = std::move(r);
      }
    }
    for (double& x : best) x /= best_norm;
    basis.push_back(std::move(best));
  }
}

void canonicalize_signs(TruncatedSvd& svd) {
  for (std::size_t c = 0; c < svd.u.cols(); ++c) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < svd.u.rows(); ++r) {
      const double m = std::abs(svd.u(r, c));
      if (m > best) {
        best = m;
        arg = r;
      }
    }
    if (svd.u.rows() > 0 && svd.u(arg, c) < 0.0) {
      for (std::size_t r = 0; r < svd.u.rows(); ++r) svd.u(r, c) = -svd.u(r, c);
      for (std::size_t r = 0; r < svd.v.rows(); ++r) svd.v(r, c) = -svd.v(r, c);
    }
  }
}

// One-sided (Hestenes) Jacobi on a matrix with rows >= cols.
TruncatedSvd jacobi_tall(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns w(n, std::vector<double>(m));
  Columns v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }

  bool converged = false;
  for (std::size_t sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_dot(w[p], w[p]);
        const double beta = column_dot(w[q], w[q]);
        const double gamma = column_dot(w[p], w[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kJacobiTolerance * std::sqrt(alpha * beta)) {
          continue;
        }
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(w[p], w[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
  }
  if (!converged) throw NumericError("Jacobi SVD did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_dot(w[j], w[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double smax = n > 0 ? sigma[order.front()] : 0.0;
  const double cutoff = std::max(smax * static_cast<double>(std::max(m, n)) * 1e-15, 1e-300);

  Columns ucols;
  ucols.reserve(n);
  TruncatedSvd out;
  out.sigma.resize(n);
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    if (sigma[j] > cutoff) {
      std::vector<double> u = w[j];
      for (double& x : u) x /= sigma[j];
      ucols.push_back(std::move(u));
      ++rank;
    }
  }
  complete_basis(ucols, m, n);

  out.u = DenseMatrix(m, n);
  out.v = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = ucols[k][i];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v[order[k]][i];
  }
  canonicalize_signs(out);
  return out;
}

TruncatedSvd swap_sides(TruncatedSvd s) {
  std::swap(s.u, s.v);
  canonicalize_signs(s);
  return s;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix g(rows, cols);
  for (double& x : g.data()) x = normal(rng);
  return g;
}

}  // namespace

void set_num_threads(unsigned threads) { g_threads.store(std::max(1u, threads)); }

unsigned num_threads() noexcept { return g_threads.load(); }

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("spmm: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  detail::parallel_rows(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto out = c.row(i);
      auto cols = a.row_cols(i);
      auto vals = a.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const double s = vals[k];
        auto brow = b.row(cols[k]);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * brow[j];
      }
    }
  });
  return c;
}

QrResult householder_qr(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw std::invalid_argument("householder_qr: requires rows >= cols");

  DenseMatrix work = a;
  std::vector<std::vector<double>> reflectors(n);
  std::vector<double> scale(n, 0.0);  // 2 / (v^T v), or 0 for an identity reflector
  std::vector<double> w(n);

  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < m; ++i) norm += work(i, j) * work(i, j);
    norm = std::sqrt(norm);
    auto& v = reflectors[j];
    v.assign(m - j, 0.0);
    if (norm == 0.0) continue;
    const double x0 = work(j, j);
    const double alpha = x0 >= 0.0 ? -norm : norm;
    for (std::size_t i = j; i < m; ++i) v[i - j] = work(i, j);
    v[0] -= alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    scale[j] = 2.0 / vv;

    // work[j:, j:] -= scale * v (v^T work[j:, j:])
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(j), w.end(), 0.0);
    for (std::size_t i = j; i < m; ++i) {
      const double vi = v[i - j];
      if (vi == 0.0) continue;
      auto row = work.row(i);
      for (std::size_t c = j; c < n; ++c) w[c] += vi * row[c];
    }
    for (std::size_t i = j; i < m; ++i) {
      const double f = scale[j] * v[i - j];
      if (f == 0.0) continue;
      auto row = work.row(i);
      for (std::size_t c = j; c < n; ++c) row[c] -= f * w[c];
    }
  }

  QrResult out{DenseMatrix(m, n), DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = i; c < n; ++c) out.r(i, c) = work(i, c);
  }
  // Q = H_0 H_1 ... H_{n-1} I[:, :n], applied right to left.
  for (std::size_t i = 0; i < n; ++i) out.q(i, i) = 1.0;
  for (std::size_t jj = n; jj-- > 0;) {
    if (scale[jj] == 0.0) continue;
    const auto& v = reflectors[jj];
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(jj), w.end(), 0.0);
    for (std::size_t i = jj; i < m; ++i) {
      const double vi = v[i - jj];
      if (vi == 0.0) continue;
      auto row = out.q.row(i);
      for (std::size_t c = jj; c < n; ++c) w[c] += vi * row[c];
    }
    for (std::size_t i = jj; i < m; ++i) {
      const double f = scale[jj] * v[i - jj];
      if (f == 0.0) continue;
      auto row = out.q.row(i);
      for (std::size_t c = jj; c < n; ++c) row[c] -= f * w[c];
    }
  }
  return out;
}

namespace {

// Upper half of A^T A, four rows of A per sweep over G.
DenseMatrix gram_upper(const DenseMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  DenseMatrix g(n, n);
  std::size_t r = 0;
  for (; r + 4 <= m; r += 4) {
    const double* r0 = a.row(r).data();
    const double* r1 = a.row(r + 1).data();
    const double* r2 = a.row(r + 2).data();
    const double* r3 = a.row(r + 3).data();
    for (std::size_t i = 0; i < n; ++i) {
      const double x0 = r0[i], x1 = r1[i], x2 = r2[i], x3 = r3[i];
      double* out = g.row(i).data();
      for (std::size_t j = i; j < n; ++j) out[j] += x0 * r0[j] + x1 * r1[j] + x2 * r2[j] + x3 * r3[j];
    }
  }
  for (; r < m; ++r) {
    const double* row = a.row(r).data();
    for (std::size_t i = 0; i < n; ++i) {
      double* out = g.row(i).data();
      for (std::size_t j = i; j < n; ++j) out[j] += row[i] * row[j];
    }
  }
  return g;
}

// R upper triangular with R^T R = G, or nothing when a pivot is not safely positive.
std::optional<DenseMatrix> cholesky_upper(const DenseMatrix& g) {
  const std::size_t n = g.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
  DenseMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= r(k, j) * r(k, j);
    if (!(d > 1e-14 * max_diag)) return std::nullopt;
    const double rjj = std::sqrt(d);
    r(j, j) = rjj;
    for (std::size_t c = j + 1; c < n; ++c) {
      double s = g(j, c);
      for (std::size_t k = 0; k < j; ++k) s -= r(k, j) * r(k, c);
      r(j, c) = s / rjj;
    }
  }
  return r;
}

// A R^{-1} for upper-triangular R, four rows at a time to reuse each row of R.
DenseMatrix solve_upper_right(const DenseMatrix& a, const DenseMatrix& r) {
  const std::size_t n = a.cols();
  DenseMatrix out = a;
  std::vector<double> inv(n);
  for (std::size_t j = 0; j < n; ++j) inv[j] = 1.0 / r(j, j);
  detail::parallel_rows(a.rows(), [&](std::size_t begin, std::size_t end) {
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
      double* w0 = out.row(i).data();
      double* w1 = out.row(i + 1).data();
      double* w2 = out.row(i + 2).data();
      double* w3 = out.row(i + 3).data();
      for (std::size_t j = 0; j < n; ++j) {
        const double x0 = w0[j] *= inv[j], x1 = w1[j] *= inv[j];
        const double x2 = w2[j] *= inv[j], x3 = w3[j] *= inv[j];
        const double* rr = r.row(j).data();
        for (std::size_t c = j + 1; c < n; ++c) {
          w0[c] -= x0 * rr[c];
          w1[c] -= x1 * rr[c];
          w2[c] -= x2 * rr[c];
          w3[c] -= x3 * rr[c];
        }
      }
    }
    for (; i < end; ++i) {
      double* w = out.row(i).data();
      for (std::size_t j = 0; j < n; ++j) {
        const double x = w[j] *= inv[j];
        const double* rr = r.row(j).data();
        for (std::size_t c = j + 1; c < n; ++c) w[c] -= x * rr[c];
      }
    }
  });
  return out;
}

// CholeskyQR2 for well-conditioned tall blocks; Householder otherwise.
QrResult thin_qr(const DenseMatrix& a) {
  auto r1 = cholesky_upper(gram_upper(a));
  if (!r1) return householder_qr(a);
  DenseMatrix q1 = solve_upper_right(a, *r1);
  auto r2 = cholesky_upper(gram_upper(q1));
  if (!r2) return householder_qr(a);
  return {solve_upper_right(q1, *r2), matmul(*r2, *r1)};
}

}  // namespace

TruncatedSvd full_svd_small(const DenseMatrix& a) {
  if (!a.all_finite()) throw NumericError("full_svd_small: non-finite input");
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  return swap_sides(jacobi_tall(transpose(a)));
}

TruncatedSvd dense_svd(const DenseMatrix& a) {
  if (!a.all_finite()) throw NumericError("dense_svd: non-finite input");
  if (a.rows() < a.cols()) return swap_sides(dense_svd(transpose(a)));
  QrResult qr = householder_qr(a);
  TruncatedSvd small = jacobi_tall(qr.r);
  TruncatedSvd out{matmul(qr.q, small.u), std::move(small.sigma), std::move(small.v)};
  canonicalize_signs(out);
  return out;
}

TruncatedSvd truncated_svd(const SparseMatrix& a, std::size_t rank, std::uint64_t seed,
                           const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (rank < 1 || rank > std::min(m, n)) {
    throw std::invalid_argument("truncated_svd: rank must lie in [1, min(rows, cols)]");
  }
  const std::size_t width = std::min(rank + options.oversample, std::min(m, n));
  const SparseMatrix at = a.transpose();

  DenseMatrix basis = thin_qr(spmm(a, gaussian_matrix(n, width, seed))).q;
  for (std::size_t it = 0; it < options.power_iterations; ++it) {
    DenseMatrix right = thin_qr(spmm(at, basis)).q;
    basis = thin_qr(spmm(a, right)).q;
  }

  // A ~= B B^T A, and A^T B = Z R gives B^T A = R^T Z^T, so only R^T needs an SVD.
  QrResult zr = thin_qr(spmm(at, basis));
  TruncatedSvd small = jacobi_tall(transpose(zr.r));

  TruncatedSvd out;
  out.u = leading_columns(matmul(basis, small.u), rank);
  out.v = leading_columns(matmul(zr.q, small.v), rank);
  out.sigma.assign(small.sigma.begin(), small.sigma.begin() + static_cast<std::ptrdiff_t>(rank));
  canonicalize_signs(out);
  return out;
}

DenseMatrix row_normalize_l2(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    const double n = norm2(row);
    if (n > 1e-30) {
      for (double& x : row) x /= n;
    } else {
      std::fill(row.begin(), row.end(), 0.0);
    }
  }
  return out;
}

std::vector<double> row_norms(const DenseMatrix& a) {
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = norm2(a.row(i));
  return out;
}

}  // namespace hope
