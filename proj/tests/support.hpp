// Shared fixtures and independent reference computations for the test suites.
// Everything here avoids the library's own SVD and metric code paths.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hope/dense.hpp"
#include "hope/graph.hpp"
#include "hope/sparse.hpp"

namespace hope::testing {

inline Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

inline Eigen::MatrixXd to_eigen(const SparseMatrix& m) { return to_eigen(m.to_dense()); }

inline IdMap make_ids(char prefix, std::size_t n) {
  IdMap ids;
  for (std::size_t i = 0; i < n; ++i) ids.intern(std::string(1, prefix) + std::to_string(i));
  return ids;
}

/// Random bipartite graph in which every vertex on both sides has at least one edge.
/// Weights are 1 when `weighted` is false, otherwise uniform in (0, 5].
inline BipartiteGraph random_graph(std::size_t nu, std::size_t nv, double density,
                                   std::mt19937_64& rng, bool weighted = true) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weight = [&] { return weighted ? 5.0 * (1.0 - unit(rng)) : 1.0; };
  std::vector<Edge> edges;
  std::vector<bool> u_hit(nu, false), v_hit(nv, false);
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (unit(rng) < density) {
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), weight()});
        u_hit[i] = v_hit[j] = true;
      }
    }
  }
  std::uniform_int_distribution<std::size_t> pick_v(0, nv - 1), pick_u(0, nu - 1);
  for (std::size_t i = 0; i < nu; ++i) {
    if (u_hit[i]) continue;
    const std::size_t j = pick_v(rng);
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), weight()});
    v_hit[j] = true;
  }
  for (std::size_t j = 0; j < nv; ++j) {
    if (v_hit[j]) continue;
    edges.push_back({static_cast<std::uint32_t>(pick_u(rng)), static_cast<std::uint32_t>(j),
                     weight()});
  }
  return BipartiteGraph(make_ids('u', nu), make_ids('v', nv), std::move(edges));
}

/// Five-by-four unit-weight toy graph used by the worked examples:
/// u1:{v1,v3} u2:{v1,v3} u3:{v2} u4:{v2,v4} u5:{v2,v3,v4} (1-based names, 0-based indices).
inline BipartiteGraph example_graph() {
  IdMap u, v;
  for (int i = 1; i <= 5; ++i) u.intern("u" + std::to_string(i));
  for (int j = 1; j <= 4; ++j) v.intern("v" + std::to_string(j));
  std::vector<Edge> e = {{0, 0, 1}, {0, 2, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1},
                         {3, 1, 1}, {3, 3, 1}, {4, 1, 1}, {4, 2, 1}, {4, 3, 1}};
  return BipartiteGraph(std::move(u), std::move(v), std::move(e));
}

/// F from the closed form P U diag((1 - a) / (1 - a s^2)) U^T with a complete
/// eigenbasis of Q Q^T (including its null space).
inline Eigen::MatrixXd closed_form_f(const SparseMatrix& p, const SparseMatrix& q,
                                     double alpha) {
  const Eigen::MatrixXd qd = to_eigen(q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(qd * qd.transpose());
  Eigen::VectorXd scale = eig.eigenvalues();
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    scale(i) = (1.0 - alpha) / (1.0 - alpha * std::max(0.0, scale(i)));
  }
  const Eigen::MatrixXd& u = eig.eigenvectors();
  return to_eigen(p) * u * scale.asDiagonal() * u.transpose();
}

/// Singular values in non-increasing order.
inline std::vector<double> reference_singular_values(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

inline Eigen::MatrixXd gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
  return m;
}

/// Haar-distributed orthogonal n x n matrix: QR of a Gaussian with R's diagonal made positive.
inline Eigen::MatrixXd haar_orthogonal(std::size_t n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, n, rng));
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

/// n x k with orthonormal columns.
inline Eigen::MatrixXd random_orthonormal(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, k, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
}

/// Spectral norm of (I - A A^T) B for orthonormal A, B: the sine of the largest principal
/// angle between their column spaces.
inline double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd resid = b - a * (a.transpose() * b);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
  return svd.singularValues()(0);
}

inline double spectral(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// Clustering metrics from their definitions, on raw label vectors.

/// Best agreement over every injective map from predicted ids to class ids.
inline double brute_accuracy(const std::vector<int>& pred, int k, const std::vector<int>& truth,
                             int classes) {
  const int n = std::max(k, classes);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hit += perm[pred[i]] == truth[i];
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

/// Macro F1 of `pred` read through `cluster_to_class` (values >= classes match nothing),
/// averaged over classes that have at least one vertex.
inline double mapped_f1(const std::vector<int>& pred, const std::vector<int>& truth, int classes,
                        const std::vector<int>& cluster_to_class) {
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool predicted = cluster_to_class[pred[i]] == c;
      const bool actual = truth[i] == c;
      tp += predicted && actual;
      fp += predicted && !actual;
      fn += !predicted && actual;
    }
    if (tp + fn == 0) continue;
    ++present;
    if (tp == 0) continue;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    sum += 2 * precision * recall / (precision + recall);
  }
  return present ? sum / present : 0.0;
}

/// Macro F1 under every accuracy-maximizing map. Ties between maps can give different F1
/// values, so callers accept any of them.
inline std::vector<double> brute_f1_candidates(const std::vector<int>& pred, int k,
                                               const std::vector<int>& truth, int classes) {
  const int n = std::max(k, classes);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  std::vector<double> out;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hit += perm[pred[i]] == truth[i];
    if (hit > best) {
      best = hit;
      out.clear();
    }
    if (hit == best) out.push_back(mapped_f1(pred, truth, classes, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline double entropy_of(const std::vector<int>& labels) {
  std::map<int, double> counts;
  for (int l : labels) counts[l] += 1.0;
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (const auto& [l, c] : counts) h -= (c / n) * std::log(c / n);
  return h;
}

/// I(pred; truth) / sqrt(H(pred) H(truth)) with I = H(pred) + H(truth) - H(pred, truth).
inline double entropy_nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::vector<int> joint(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) joint[i] = pred[i] * 100003 + truth[i];
  const double hp = entropy_of(pred);
  const double ht = entropy_of(truth);
  if (hp == 0.0 || ht == 0.0) return hp == ht ? 1.0 : 0.0;
  return (hp + ht - entropy_of(joint)) / std::sqrt(hp * ht);
}

/// Hubert-Arabie ARI from explicit enumeration of all vertex pairs.
inline double pair_count_ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  double both = 0, same_pred = 0, same_truth = 0, pairs = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool sp = pred[i] == pred[j];
      const bool st = truth[i] == truth[j];
      both += sp && st;
      same_pred += sp;
      same_truth += st;
      pairs += 1;
    }
  }
  if (pairs == 0) return 1.0;
  const double expected = same_pred * same_truth / pairs;
  const double max_index = 0.5 * (same_pred + same_truth);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

}  // namespace hope::testing
