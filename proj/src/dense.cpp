#include "hope/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hope/linalg.hpp"
#include "parallel.hpp"

namespace hope {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("DenseMatrix: value count does not match shape");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  detail::parallel_rows(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto out = c.row(i);
      for (std::size_t l = 0; l < a.cols(); ++l) {
        const double s = a(i, l);
        if (s == 0.0) continue;
        auto brow = b.row(l);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * brow[j];
      }
    }
  });
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: shape mismatch");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    auto arow = a.row(l);
    auto brow = b.row(l);
    for (std::size_t i = 0; i < arow.size(); ++i) {
      const double s = arow[i];
      if (s == 0.0) continue;
      auto out = c.row(i);
      for (std::size_t j = 0; j < brow.size(); ++j) out[j] += s * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: shape mismatch");
  DenseMatrix c(a.rows(), b.rows());
  detail::parallel_rows(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = dot(a.row(i), b.row(j));
    }
  });
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("subtract: shape mismatch");
  }
  DenseMatrix c = a;
  auto out = c.data();
  auto rhs = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= rhs[i];
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

double frobenius_norm(const DenseMatrix& a) noexcept { return norm2(a.data()); }

double max_abs(const DenseMatrix& a) noexcept {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double spectral_norm(const DenseMatrix& a) {
  if (a.empty()) return 0.0;
  return full_svd_small(a).sigma.front();
}

DenseMatrix leading_columns(const DenseMatrix& a, std::size_t n) {
  n = std::min(n, a.cols());
  DenseMatrix out(a.rows(), n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy_n(a.row(i).begin(), n, out.row(i).begin());
  }
  return out;
}

}  // namespace hope
