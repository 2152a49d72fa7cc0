#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hope/dense.hpp"
#include "hope/graph.hpp"

namespace hope {

/// Assignment of each target vertex to one of `k` clusters. Clusters may be empty.
struct Clustering {
  std::vector<std::uint32_t> assignments;
  std::size_t k = 0;
  std::optional<double> objective_value;
  std::size_t iterations = 0;
  bool converged = false;

  std::vector<std::size_t> cluster_sizes() const;
  std::size_t empty_clusters() const;
};

struct KMeansOptions {
  std::size_t max_iters = 300;
  // Called after every centroid update with the iteration index (from 1) and the
  // within-cluster sum of squares at that point.
  std::function<void(std::size_t, double)> on_iteration;
};

/// Lloyd's algorithm with seeded k-means++ initialization and squared Euclidean distance.
/// Ties go to the lowest cluster index. An emptied cluster is reseeded with the point
/// farthest from its current centroid. Stops when assignments repeat or after max_iters.
/// Throws std::invalid_argument if k == 0 or k > rows.
Clustering kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                  const KMeansOptions& options = {});

/// Sum over clusters of squared distances from each row to its cluster mean.
double cluster_objective(const DenseMatrix& rows, const Clustering& c);

/// Clamps `requested` to min(|U|, |V|). Throws std::invalid_argument if requested < k.
std::size_t resolve_beta(std::size_t requested, std::size_t k, std::size_t u_count,
                         std::size_t v_count);

/// HOPE: low-rank HOP embedding followed by k-means over its rows. Target vertices with
/// no edges have a zero embedding row; they are left out of k-means and assigned
/// cluster 0.
Clustering hope(const BipartiteGraph& g, std::size_t k, double alpha, std::size_t beta,
                std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace hope
