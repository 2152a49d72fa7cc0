#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hope/clustering.hpp"
#include "hope/datagen.hpp"
#include "hope/linalg.hpp"
#include "support.hpp"

using namespace hope;

namespace {

std::vector<int> as_int(const std::vector<std::uint32_t>& a) { return {a.begin(), a.end()}; }
std::vector<int> as_int(const std::vector<std::int32_t>& a) { return {a.begin(), a.end()}; }

DenseMatrix random_unit_rows(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  return row_normalize_l2(hope::testing::from_eigen(hope::testing::gaussian(n, d, rng)));
}

}  // namespace

TEST_CASE("kmeans on repeated coordinates") {
  const std::vector<std::array<double, 2>> centers = {{0, 0}, {5, 1}, {-3, 4}};
  DenseMatrix pts(12, 2);
  std::vector<int> truth;
  for (std::size_t i = 0; i < 12; ++i) {
    pts(i, 0) = centers[i % 3][0];
    pts(i, 1) = centers[i % 3][1];
    truth.push_back(static_cast<int>(i % 3));
  }
  const Clustering c = kmeans(pts, 3, 7);
  CHECK(c.converged);
  CHECK(*c.objective_value == doctest::Approx(0.0));
  CHECK(hope::testing::pair_count_ari(as_int(c.assignments), truth) == doctest::Approx(1.0));
}

TEST_CASE("kmeans with k = 1 returns the total variance") {
  std::mt19937_64 rng(3);
  const DenseMatrix pts = hope::testing::from_eigen(hope::testing::gaussian(25, 3, rng));
  const Clustering c = kmeans(pts, 1, 0);
  const Eigen::MatrixXd e = hope::testing::to_eigen(pts);
  const double variance = (e.rowwise() - e.colwise().mean()).squaredNorm();
  CHECK(*c.objective_value == doctest::Approx(variance).epsilon(1e-12));
  CHECK(c.cluster_sizes() == std::vector<std::size_t>{25});
}

TEST_CASE("kmeans recovers well separated Gaussians") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.1);
  DenseMatrix pts(60, 2);
  std::vector<int> truth(60);
  for (std::size_t i = 0; i < 60; ++i) {
    truth[i] = static_cast<int>(i / 20);
    pts(i, 0) = 10.0 * truth[i] + noise(rng);
    pts(i, 1) = (truth[i] == 1 ? 10.0 : 0.0) + noise(rng);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Clustering c = kmeans(pts, 3, seed);
    CHECK(hope::testing::pair_count_ari(as_int(c.assignments), truth) == doctest::Approx(1.0));
  }
}

TEST_CASE("kmeans objective never increases") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix pts = hope::testing::from_eigen(hope::testing::gaussian(80, 4, rng));
    KMeansOptions opts;
    double prev = INFINITY;
    std::size_t calls = 0;
    opts.on_iteration = [&](std::size_t, double obj) {
      CHECK(obj <= prev + 1e-12);
      prev = obj;
      ++calls;
    };
    const Clustering c = kmeans(pts, 5, trial, opts);
    CHECK(calls == c.iterations);
    CHECK(*c.objective_value == doctest::Approx(cluster_objective(pts, c)).epsilon(1e-12));
  }
}

TEST_CASE("kmeans argument checks and determinism") {
  const DenseMatrix pts(3, 2, {0, 0, 1, 1, 2, 2});
  CHECK_THROWS_AS(kmeans(pts, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(pts, 4, 0), std::invalid_argument);
  std::mt19937_64 rng(8);
  const DenseMatrix big = hope::testing::from_eigen(hope::testing::gaussian(200, 5, rng));
  CHECK(kmeans(big, 6, 3).assignments == kmeans(big, 6, 3).assignments);
}

TEST_CASE("cluster_objective") {
  std::mt19937_64 rng(9);
  SUBCASE("singletons give zero") {
    const DenseMatrix x = random_unit_rows(4, 3, rng);
    Clustering c;
    c.assignments = {0, 1, 2, 3};
    c.k = 4;
    CHECK(cluster_objective(x, c) == 0.0);
  }
  SUBCASE("identical rows give zero") {
    const DenseMatrix x(3, 2, {0.6, 0.8, 0.6, 0.8, 0.6, 0.8});
    Clustering c;
    c.assignments = {0, 0, 0};
    c.k = 2;
    CHECK(cluster_objective(x, c) == doctest::Approx(0.0));
  }
  SUBCASE("trace expansion") {
    std::uniform_int_distribution<std::uint32_t> pick(0, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const DenseMatrix x = random_unit_rows(10, 4, rng);
      Clustering c;
      c.k = 3;
      for (int i = 0; i < 10; ++i) c.assignments.push_back(pick(rng));
      double expansion = 0.0;
      for (std::size_t i = 0; i < 10; ++i) expansion += dot(x.row(i), x.row(i));
      const auto sizes = c.cluster_sizes();
      for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t l = 0; l < 10; ++l) {
          if (c.assignments[i] == c.assignments[l]) {
            expansion -= dot(x.row(i), x.row(l)) / static_cast<double>(sizes[c.assignments[i]]);
          }
        }
      }
      CHECK(std::abs(cluster_objective(x, c) - expansion) <= 1e-10);
    }
  }
  SUBCASE("length mismatch") {
    Clustering c;
    c.assignments = {0};
    c.k = 1;
    CHECK_THROWS_AS(cluster_objective(DenseMatrix(2, 2), c), std::invalid_argument);
  }
}

TEST_CASE("resolve_beta") {
  CHECK(resolve_beta(10, 2, 100, 50) == 10);
  CHECK(resolve_beta(100, 2, 100, 50) == 50);
  CHECK_THROWS_AS(resolve_beta(2, 5, 100, 100), std::invalid_argument);
}

TEST_CASE("hope separates disjoint stars") {
  // Two stars: u0..u2 share v0, u3..u5 share v1, each u also has a private leaf.
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < 6; ++i) {
    edges.push_back({i, i < 3 ? 0u : 1u, 1.0});
    edges.push_back({i, 2 + i, 1.0});
  }
  const BipartiteGraph g(hope::testing::make_ids('u', 6), hope::testing::make_ids('v', 8),
                         std::move(edges));
  const Clustering c = hope::hope(g, 2, 0.3, 4, 0);
  CHECK(c.assignments[0] == c.assignments[1]);
  CHECK(c.assignments[1] == c.assignments[2]);
  CHECK(c.assignments[3] == c.assignments[4]);
  CHECK(c.assignments[4] == c.assignments[5]);
  CHECK(c.assignments[0] != c.assignments[3]);
}

TEST_CASE("hope on a planted two-block graph") {
  const PlantedGraph pg = planted_bipartite(2, 40, 40, 0.3, 0.02, 1);
  const Clustering c = hope::hope(pg.graph, 2, 0.3, 10, 0);
  CHECK(hope::testing::pair_count_ari(as_int(c.assignments), as_int(pg.labels.labels)) >= 0.9);
  CHECK(c.objective_value.has_value());
}

TEST_CASE("hope assigns isolated vertices to cluster 0") {
  const PlantedGraph pg = planted_bipartite(2, 10, 10, 1.0, 0.0, 1);
  std::vector<Edge> edges = pg.graph.edges();
  IdMap u = pg.graph.u_ids();
  u.intern("lonely");
  const BipartiteGraph g(std::move(u), pg.graph.v_ids(), std::move(edges));
  const Clustering c = hope::hope(g, 2, 0.3, 4, 0);
  CHECK(c.assignments.back() == 0);
}

TEST_CASE("hope is invariant to vertex renaming") {
  const PlantedGraph pg = planted_bipartite(3, 15, 12, 0.4, 0.05, 2);
  IdMap u, v;
  for (const auto& name : pg.graph.u_ids().names()) u.intern("user-" + name + "-x");
  for (const auto& name : pg.graph.v_ids().names()) v.intern("item/" + name);
  const BipartiteGraph renamed(std::move(u), std::move(v), pg.graph.edges());
  CHECK(hope::hope(pg.graph, 3, 0.3, 15, 4).assignments ==
        hope::hope(renamed, 3, 0.3, 15, 4).assignments);
}

TEST_CASE("hope argument checks") {
  const BipartiteGraph g = hope::testing::example_graph();
  CHECK_THROWS_AS(hope::hope(g, 1, 0.3, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(hope::hope(g, 6, 0.3, 6, 0), std::invalid_argument);
  CHECK_THROWS_AS(hope::hope(g, 3, 0.3, 2, 0), std::invalid_argument);
}
