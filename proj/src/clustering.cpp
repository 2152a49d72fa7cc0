#include "hope/clustering.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "hope/hop.hpp"
#include "parallel.hpp"

namespace hope {

std::vector<std::size_t> Clustering::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : assignments) ++sizes[a];
  return sizes;
}

std::size_t Clustering::empty_clusters() const {
  const auto sizes = cluster_sizes();
  return static_cast<std::size_t>(std::count(sizes.begin(), sizes.end(), std::size_t{0}));
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

DenseMatrix plus_plus_init(const DenseMatrix& points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.rows();
  DenseMatrix centers(k, points.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t first = pick(rng);
  std::copy_n(points.row(first).begin(), points.cols(), centers.row(0).begin());

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points.row(i), centers.row(0));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] == 0.0) continue;
        acc += nearest[i];
        chosen = i;
        if (acc > target) break;
      }
    } else {
      chosen = pick(rng);
    }
    std::copy_n(points.row(chosen).begin(), points.cols(), centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centers.row(c)));
    }
  }
  return centers;
}

// Returns the within-cluster sum of squares for the updated centroids.
double update_centroids(const DenseMatrix& points, const std::vector<std::uint32_t>& assign,
                        DenseMatrix& centers) {
  const std::size_t k = centers.rows();
  std::vector<std::size_t> sizes(k, 0);
  std::fill(centers.data().begin(), centers.data().end(), 0.0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto c = centers.row(assign[i]);
    auto p = points.row(i);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += p[d];
    ++sizes[assign[i]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] == 0) continue;
    for (double& x : centers.row(j)) x /= static_cast<double>(sizes[j]);
  }
  double objective = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    objective += squared_distance(points.row(i), centers.row(assign[i]));
  }
  return objective;
}

}  // namespace

Clustering kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                  const KMeansOptions& options) {
  const std::size_t n = points.rows();
  if (k == 0 || k > n) throw std::invalid_argument("kmeans: k must lie in [1, rows]");

  std::mt19937_64 rng(seed);
  DenseMatrix centers = plus_plus_init(points, k, rng);

  Clustering out;
  out.k = k;
  out.assignments.assign(n, 0);
  std::vector<std::uint32_t> next(n);
  double objective = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 1; iter <= options.max_iters; ++iter) {
    detail::parallel_rows(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        std::uint32_t best = 0;
        double best_d = squared_distance(points.row(i), centers.row(0));
        for (std::size_t j = 1; j < k; ++j) {
          const double d = squared_distance(points.row(i), centers.row(j));
          if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(j);
          }
        }
        next[i] = best;
      }
    });
    if (iter > 1 && next == out.assignments) {
      out.converged = true;
      break;
    }
    out.assignments = next;
    out.iterations = iter;

    // Reseed empty clusters with the point farthest from its own centroid.
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : out.assignments) ++sizes[a];
    if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
      update_centroids(points, out.assignments, centers);
      std::vector<bool> moved(n, false);
      for (std::size_t j = 0; j < k; ++j) {
        if (sizes[j] != 0) continue;
        std::size_t far = n;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (moved[i] || sizes[out.assignments[i]] <= 1) continue;
          const double d = squared_distance(points.row(i), centers.row(out.assignments[i]));
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        if (far == n) continue;
        --sizes[out.assignments[far]];
        out.assignments[far] = static_cast<std::uint32_t>(j);
        ++sizes[j];
        moved[far] = true;
      }
    }

    objective = update_centroids(points, out.assignments, centers);
    if (options.on_iteration) options.on_iteration(iter, objective);
  }
  out.objective_value = objective;
  return out;
}

double cluster_objective(const DenseMatrix& rows, const Clustering& c) {
  if (c.assignments.size() != rows.rows()) {
    throw std::invalid_argument("cluster_objective: assignment length mismatch");
  }
  DenseMatrix centers(c.k, rows.cols());
  for (auto a : c.assignments) {
    if (a >= c.k) throw std::invalid_argument("cluster_objective: assignment out of range");
  }
  return update_centroids(rows, c.assignments, centers);
}

std::size_t resolve_beta(std::size_t requested, std::size_t k, std::size_t u_count,
                         std::size_t v_count) {
  if (requested < k) throw std::invalid_argument("beta must be at least k");
  return std::min(requested, std::min(u_count, v_count));
}

Clustering hope(const BipartiteGraph& g, std::size_t k, double alpha, std::size_t beta,
                std::uint64_t seed, const KMeansOptions& options) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (k > g.u_count()) throw std::invalid_argument("k exceeds the number of target vertices");
  beta = resolve_beta(beta, k, g.u_count(), g.v_count());
  const HopEmbedding emb = hop_lowrank(g, alpha, beta, seed);

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < emb.x.rows(); ++i) {
    if (emb.f_row_norms[i] > 1e-30) active.push_back(i);
  }
  if (active.size() < k) {
    throw std::invalid_argument("fewer non-isolated target vertices than clusters");
  }
  DenseMatrix points(active.size(), emb.x.cols());
  for (std::size_t r = 0; r < active.size(); ++r) {
    std::copy_n(emb.x.row(active[r]).begin(), emb.x.cols(), points.row(r).begin());
  }
  Clustering sub = kmeans(points, k, seed, options);

  Clustering out;
  out.k = k;
  out.assignments.assign(g.u_count(), 0);
  for (std::size_t r = 0; r < active.size(); ++r) out.assignments[active[r]] = sub.assignments[r];
  out.iterations = sub.iterations;
  out.converged = sub.converged;
  out.objective_value = cluster_objective(emb.x, out);
  return out;
}

}  // namespace hope
