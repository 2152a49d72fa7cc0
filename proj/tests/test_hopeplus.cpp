#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "hope/datagen.hpp"
#include "hope/hopeplus.hpp"
#include "hope/linalg.hpp"
#include "support.hpp"

using namespace hope;
using hope::testing::from_eigen;
using hope::testing::to_eigen;

namespace {

void check_vcmi(const Vcmi& c) {
  const Eigen::MatrixXd m = to_eigen(c.to_dense());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    CHECK((m.row(i).array() != 0.0).count() == 1);
  }
  const Eigen::MatrixXd gram = m.transpose() * m;
  for (std::size_t j = 0; j < c.k(); ++j) {
    for (std::size_t l = 0; l < c.k(); ++l) {
      const double expected = (j == l && c.sizes()[j] > 0) ? 1.0 : 0.0;
      CHECK(std::abs(gram(j, l) - expected) <= 1e-12);
    }
  }
}

Vcmi random_vcmi(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k - 1));
  std::vector<std::uint32_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = i < k ? static_cast<std::uint32_t>(i) : pick(rng);
  return Vcmi(std::move(a), k);
}

std::vector<int> as_int(const std::vector<std::uint32_t>& a) { return {a.begin(), a.end()}; }
std::vector<int> as_int(const std::vector<std::int32_t>& a) { return {a.begin(), a.end()}; }

}  // namespace

TEST_CASE("Vcmi") {
  const Vcmi c({0, 1, 1, 0, 1}, 3);
  CHECK(c.sizes() == std::vector<std::size_t>{2, 3, 0});
  CHECK(c.entry(0, 0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(c.entry(2, 1) == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(c.entry(2, 0) == 0.0);
  check_vcmi(c);
  CHECK_THROWS_AS(Vcmi({0, 3}, 3), std::invalid_argument);
}

TEST_CASE("rounding mode names") {
  CHECK(parse_rounding_mode("fnem") == RoundingMode::kFnem);
  CHECK(parse_rounding_mode("SNEM") == RoundingMode::kSnem);
  CHECK(to_string(RoundingMode::kFnem) == "fnem");
  CHECK_THROWS_AS(parse_rounding_mode("other"), std::invalid_argument);
}

TEST_CASE("top_k_eigenvectors") {
  SUBCASE("block structure") {
    // Rows of block b all point along e_b.
    DenseMatrix x(9, 5);
    for (std::size_t i = 0; i < 9; ++i) x(i, i / 3) = 1.0;
    const EigenBasis l = top_k_eigenvectors(x, 3);
    Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(9, 3);
    for (std::size_t i = 0; i < 9; ++i) ind(i, i / 3) = 1.0 / std::sqrt(3.0);
    CHECK(hope::testing::subspace_distance(to_eigen(l.l), ind) <= 1e-8);
  }
  SUBCASE("matches the Gram eigenvectors") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd x = hope::testing::gaussian(40, 10, rng);
      const EigenBasis l = top_k_eigenvectors(from_eigen(x), 3);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x * x.transpose());
      const Eigen::MatrixXd top = eig.eigenvectors().rightCols(3);
      CHECK(hope::testing::subspace_distance(top, to_eigen(l.l)) <= 1e-6);
      const Eigen::MatrixXd le = to_eigen(l.l);
      CHECK((le.transpose() * le - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("k above beta") {
    CHECK_THROWS_AS(top_k_eigenvectors(DenseMatrix(10, 3), 4), std::invalid_argument);
  }
}

TEST_CASE("greedy_seed") {
  SUBCASE("one-hot rows") {
    const EigenBasis l{DenseMatrix(4, 2, {1, 0, 0, 1, 0, 1, 1, 0})};
    CHECK(greedy_seed(l).assignments() == std::vector<std::uint32_t>{0, 1, 1, 0});
  }
  SUBCASE("ties go to the lowest column") {
    const EigenBasis l{DenseMatrix(1, 4, {0.1, 0.5, 0.2, 0.5})};
    CHECK(greedy_seed(l).assignments() == std::vector<std::uint32_t>{1});
  }
  SUBCASE("random input satisfies the VCMI invariants") {
    std::mt19937_64 rng(3);
    const EigenBasis l{from_eigen(hope::testing::random_orthonormal(20, 4, rng))};
    check_vcmi(greedy_seed(l));
  }
}

TEST_CASE("procrustes_t") {
  SUBCASE("identity L^T C") {
    // L equals C exactly, so L^T C = I.
    const Vcmi c({0, 0, 1, 2, 2}, 3);
    const EigenBasis l{c.to_dense()};
    CHECK(max_abs(subtract(procrustes_t(l, c), DenseMatrix::identity(3))) <= 1e-12);
  }
  SUBCASE("positive diagonal L^T C") {
    const Vcmi c({0, 1, 1, 2}, 3);
    DenseMatrix ld = c.to_dense();
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 3; ++j) ld(i, j) *= 0.5 + j;
    }
    CHECK(max_abs(subtract(procrustes_t(EigenBasis{ld}, c), DenseMatrix::identity(3))) <= 1e-12);
  }
  SUBCASE("beats random orthogonal matrices") {
    std::mt19937_64 rng(4);
    const EigenBasis l{from_eigen(hope::testing::random_orthonormal(30, 4, rng))};
    const Vcmi c = random_vcmi(30, 4, rng);
    const Eigen::MatrixXd le = to_eigen(l.l), ce = to_eigen(c.to_dense());
    const Eigen::MatrixXd t = to_eigen(procrustes_t(l, c));
    CHECK((t * t.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
    const double best = (le * t - ce).norm();
    for (int s = 0; s < 1000; ++s) {
      const Eigen::MatrixXd other = hope::testing::haar_orthogonal(4, rng);
      CHECK(best <= (le * other - ce).norm() + 1e-9);
    }
  }
}

TEST_CASE("spectral_t") {
  SUBCASE("reproduces L L^T C") {
    std::mt19937_64 rng(5);
    const EigenBasis l{from_eigen(hope::testing::random_orthonormal(12, 3, rng))};
    const Vcmi c = greedy_seed(l);
    const Eigen::MatrixXd le = to_eigen(l.l), ce = to_eigen(c.to_dense());
    const Eigen::MatrixXd t = to_eigen(spectral_t(l, c));
    CHECK((le * t - le * le.transpose() * ce).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("empty cluster gives a zero column") {
    std::mt19937_64 rng(6);
    const EigenBasis l{from_eigen(hope::testing::random_orthonormal(6, 3, rng))};
    const Vcmi c({0, 0, 1, 1, 0, 1}, 3);
    const DenseMatrix t = spectral_t(l, c);
    for (std::size_t i = 0; i < 3; ++i) CHECK(t(i, 2) == 0.0);
    CHECK(max_abs(subtract(t, lt_times_c(l, c))) == 0.0);
  }
  SUBCASE("beats random matrices in spectral norm") {
    std::mt19937_64 rng(7);
    const EigenBasis l{from_eigen(hope::testing::random_orthonormal(25, 4, rng))};
    const Vcmi c = random_vcmi(25, 4, rng);
    const Eigen::MatrixXd le = to_eigen(l.l), ce = to_eigen(c.to_dense());
    const Eigen::MatrixXd t = to_eigen(spectral_t(l, c));
    const double best = hope::testing::spectral(le * t - ce);
    for (int s = 0; s < 1000; ++s) {
      const double scale = std::pow(10.0, -3.0 + 3.0 * (s % 4) / 3.0);
      const Eigen::MatrixXd other = t + scale * hope::testing::gaussian(4, 4, rng);
      CHECK(best <= hope::testing::spectral(le * other - ce) + 1e-9);
    }
  }
}

TEST_CASE("round_vcmi") {
  SUBCASE("fixed point") {
    const Vcmi c0({0, 0, 1, 1, 2, 2, 2}, 3);
    const EigenBasis l{c0.to_dense()};
    for (RoundingMode mode : {RoundingMode::kFnem, RoundingMode::kSnem}) {
      const RoundingResult r = round_vcmi(l, c0, mode);
      CHECK(r.converged);
      CHECK(r.iterations == 1);
      CHECK(r.c == c0);
    }
  }
  SUBCASE("invariants at every iteration") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd x = hope::testing::gaussian(30, 8, rng);
      const Eigen::MatrixXd m = x * x.transpose();
      const EigenBasis l = top_k_eigenvectors(from_eigen(x), 4);
      const Eigen::MatrixXd le = to_eigen(l.l);
      const double relaxed = (le.transpose() * m * le).trace();
      for (RoundingMode mode : {RoundingMode::kFnem, RoundingMode::kSnem}) {
        RoundingOptions opts;
        std::size_t steps = 0;
        opts.on_iteration = [&](const RoundingStep& step) {
          ++steps;
          CHECK(step.iteration == steps);
          check_vcmi(step.c);
          if (mode == RoundingMode::kFnem) {
            const Eigen::MatrixXd t = to_eigen(step.t);
            CHECK((t * t.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
                  1e-8);
          }
          const Eigen::MatrixXd ce = to_eigen(step.c.to_dense());
          CHECK((ce.transpose() * m * ce).trace() <= relaxed + 1e-8);
        };
        const RoundingResult r = round_vcmi(l, greedy_seed(l), mode, opts);
        CHECK(steps == r.iterations);
        CHECK(r.iterations <= opts.max_iters);
      }
    }
  }
  SUBCASE("iteration cap") {
    std::mt19937_64 rng(9);
    const EigenBasis l{from_eigen(hope::testing::random_orthonormal(50, 5, rng))};
    RoundingOptions opts;
    opts.max_iters = 1;
    const RoundingResult r = round_vcmi(l, random_vcmi(50, 5, rng), RoundingMode::kSnem, opts);
    CHECK(r.iterations == 1);
  }
}

TEST_CASE("Ky Fan: top eigenvectors maximize the trace") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd x = hope::testing::gaussian(20, 6, rng);
    const Eigen::MatrixXd m = x * x.transpose();
    const Eigen::MatrixXd l = to_eigen(top_k_eigenvectors(from_eigen(x), 3).l);
    const double best = (l.transpose() * m * l).trace();
    for (int s = 0; s < 500; ++s) {
      const Eigen::MatrixXd y = hope::testing::random_orthonormal(20, 3, rng);
      CHECK((y.transpose() * m * y).trace() <= best + 1e-8);
    }
  }
}

TEST_CASE("toy pipeline recovers the two groups") {
  const BipartiteGraph g = hope::testing::example_graph();
  for (RoundingMode mode : {RoundingMode::kFnem, RoundingMode::kSnem}) {
    const HopEmbedding e = hop_lowrank(g, 0.3, 3, 0);
    const EigenBasis l = top_k_eigenvectors(e, 2);
    const RoundingResult r = round_vcmi(l, greedy_seed(l), mode);
    const auto& a = r.c.assignments();
    CHECK(a[0] == a[1]);
    CHECK(a[2] == a[3]);
    CHECK(a[3] == a[4]);
    CHECK(a[0] != a[2]);
    CHECK(r.c.entry(0, a[0]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(r.c.entry(2, a[2]) == doctest::Approx(1 / std::sqrt(3.0)));
  }
}

TEST_CASE("hopeplus on planted partitions") {
  const PlantedGraph pg = planted_bipartite(5, 30, 30, 0.35, 0.02, 3);
  for (RoundingMode mode : {RoundingMode::kFnem, RoundingMode::kSnem}) {
    const Clustering c = hopeplus(pg.graph, 5, 0.3, 25, mode, 100, 0);
    CHECK(c.k == 5);
    CHECK(hope::testing::pair_count_ari(as_int(c.assignments), as_int(pg.labels.labels)) >= 0.9);
    CHECK(c.assignments == hopeplus(pg.graph, 5, 0.3, 25, mode, 100, 0).assignments);
  }
}
