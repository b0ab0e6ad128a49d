#include <doctest.h>

#include <cmath>

#include "dmd/network.hpp"

using namespace dmd;

namespace {

bool doubly_stochastic(const Mat& w) {
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (std::abs(w.row(i).sum() - 1.0) > 1e-12 || std::abs(w.col(i).sum() - 1.0) > 1e-12) return false;
    if (!(w(i, i) > 0.0)) return false;
  }
  return (w.array() >= 0.0).all();
}

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

}  // namespace

TEST_CASE("grid graphs have lattice edge counts") {
  CHECK(build_grid_graph(5, 5).size() == 25);
  CHECK(build_grid_graph(5, 5).edges().size() == 40);
  CHECK(build_grid_graph(1, 2).edges().size() == 1);
  CHECK(build_grid_graph(2, 2).edges().size() == 4);
  CHECK(build_grid_graph(5, 5).connected());
  CHECK_THROWS_AS(build_grid_graph(1, 1), std::invalid_argument);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), std::invalid_argument);
  CHECK_FALSE(Graph::from_edges(4, {{0, 1}, {2, 3}}).connected());
  const Graph g = Graph::from_edges(3, {{2, 1}, {1, 0}});
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("edge list round trip") {
  const Graph g = random_connected_graph(8, 0.4, 3);
  const Graph h = parse_edge_list(to_edge_list(g));
  CHECK(h.size() == g.size());
  CHECK(h.edges() == g.edges());
  CHECK_THROWS(parse_edge_list("n 3\n0 5\n"));
}

TEST_CASE("metropolis weights by hand") {
  const Mat w2 = metropolis_weights(Graph::from_edges(2, {{0, 1}})).matrix();
  CHECK(w2(0, 0) == doctest::Approx(0.5));
  CHECK(w2(0, 1) == doctest::Approx(0.5));

  const Mat w3 = metropolis_weights(path3()).matrix();
  Mat expected(3, 3);
  expected << 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 1.0 / 3, 2.0 / 3;
  CHECK((w3 - expected).cwiseAbs().maxCoeff() < 1e-15);

  // edge order does not matter
  const Mat w3r = metropolis_weights(Graph::from_edges(3, {{2, 1}, {1, 0}})).matrix();
  CHECK(w3r == w3);
}

TEST_CASE("uniform complete weights") {
  CHECK(uniform_complete_weights(1).matrix()(0, 0) == 1.0);
  const WeightMatrix w4 = uniform_complete_weights(4);
  CHECK((w4.matrix().array() == 0.25).all());
  CHECK(second_singular_value(w4).sigma2 == 0.0);
  CHECK(second_singular_value(uniform_complete_weights(25)).sigma2 == 0.0);
}

TEST_CASE("second singular value examples") {
  CHECK(second_singular_value(WeightMatrix(Mat::Identity(4, 4))).sigma2 == doctest::Approx(1.0));
  CHECK(second_singular_value(metropolis_weights(path3())).sigma2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("weight matrix validation") {
  Mat bad(2, 2);
  bad << 0.6, 0.5, 0.4, 0.5;
  CHECK_THROWS_AS(WeightMatrix{bad}, std::invalid_argument);
  Mat zero_diag(2, 2);
  zero_diag << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(WeightMatrix{zero_diag}, std::invalid_argument);
  Mat off_support = Mat::Constant(3, 3, 1.0 / 3);
  CHECK_THROWS_AS(WeightMatrix(off_support, path3()), std::invalid_argument);
}

TEST_CASE("mix examples") {
  const WeightMatrix w = metropolis_weights(path3());
  Mat x(3, 1);
  x << 1, 0, 0;
  const Mat y = mix(w, x);
  CHECK(y(0, 0) == doctest::Approx(2.0 / 3));
  CHECK(y(1, 0) == doctest::Approx(1.0 / 3));
  CHECK(y(2, 0) == doctest::Approx(0.0));

  Mat s = Mat::Random(5, 3);
  CHECK(mix(WeightMatrix(Mat::Identity(5, 5)), s) == s);
  const Mat avg = mix(uniform_complete_weights(5), s);
  for (int i = 0; i < 5; ++i) CHECK((avg.row(i) - s.colwise().mean()).norm() < 1e-15);
}

TEST_CASE("property: generated weights are doubly stochastic, symmetric, supported, mean preserving") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const Graph g = random_connected_graph(n, 0.3, rng());
    REQUIRE(g.connected());
    const WeightMatrix w = metropolis_weights(g);
    CHECK(doubly_stochastic(w.matrix()));
    CHECK(w.symmetric());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && w(i, j) > 0.0) CHECK(g.has_edge(i, j));
    CHECK(second_singular_value(w).sigma2 < 1.0 - 1e-8);

    const Mat x = Mat::Random(n, 4);
    CHECK((mix(w, x).colwise().mean() - x.colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("property: mixing contracts the spread at rate sigma2") {
  const Graph g = build_grid_graph(3, 4);
  const WeightMatrix w = metropolis_weights(g);
  const double s2 = second_singular_value(w).sigma2;
  Mat x = Mat::Random(12, 2);
  auto spread = [](const Mat& m) {
    const Eigen::RowVectorXd mean = m.colwise().mean();
    return (m.rowwise() - mean).rowwise().norm().maxCoeff();
  };
  const double initial = spread(x);
  for (int k = 1; k <= 30; ++k) {
    x = mix(w, x);
    CHECK(spread(x) <= std::pow(s2, k) * initial * std::sqrt(12.0) + 1e-12);
  }
}
