#include <doctest.h>

#include <cmath>
#include <set>

#include "netgame/graph.hpp"
#include "netgame/solvers.hpp"
#include "support.hpp"

using namespace netgame;
using testing::property_seed;

TEST_CASE("graph construction keeps the adjacency symmetric") {
  const Graph g = Graph::from_edges(4, {{0, 1}, {2, 1}, {3, 0}});
  CHECK(g.size() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
  CHECK(g.neighbors(0) == std::vector<Vertex>{1, 3});
  g.check_invariants();
}

TEST_CASE("graph rejects loops, bad matrices and out-of-range vertices") {
  CHECK_THROWS_AS(Graph::from_edges(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), std::out_of_range);
  CHECK_THROWS_AS(Graph::from_matrix({{0, 1}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_matrix({{1, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_matrix({{0, 2}, {2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_matrix({{0, 1}}), std::invalid_argument);
  const Graph g = Graph::from_matrix({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
  CHECK(g == Graph::from_edges(3, {{0, 1}, {1, 2}}));
}

TEST_CASE("derived copies leave the original untouched") {
  const Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const Graph tri = path.with_edge(0, 2);
  CHECK(path.edge_count() == 2);
  CHECK(tri.edge_count() == 3);
  CHECK(tri.without_edge(0, 2) == path);
  const Graph reduced = tri.without_vertex(1);
  CHECK(reduced == Graph::from_edges(2, {{0, 1}}));
  CHECK(Graph::complete(5).edge_count() == 10);
}

TEST_CASE("wide graphs cross the 64-bit word boundary") {
  GraphBuilder b(130);
  b.add_edge(0, 129).add_edge(63, 64).add_edge(64, 127);
  const Graph g = b.build();
  g.check_invariants();
  CHECK(g.degree(64) == 2);
  CHECK(g.without_vertex(0).size() == 129);
  CHECK(g.without_vertex(0).edge_count() == 2);
  CHECK(g.without_vertex(0).has_edge(62, 63));
}

TEST_CASE("degree_sequence") {
  CHECK(degree_sequence(Graph(3)) == DegreeSequence{0, 0, 0});
  CHECK(degree_sequence(Graph::complete(3)) == DegreeSequence{2, 2, 2});
}

TEST_CASE("DegreeSequence rejects negative entries") {
  CHECK_THROWS_AS(DegreeSequence({1, -1}), std::invalid_argument);
  CHECK(DegreeSequence{4, 0}.sum() == 4);
  CHECK(DegreeSequence{1, 2, 3}.without(1) == DegreeSequence{1, 3});
}

TEST_CASE("l1_distance") {
  CHECK(l1_distance({1, 1}, {1, 1}) == 0);
  CHECK(l1_distance({2, 2, 2}, {0, 0, 0}) == 6);
  CHECK_THROWS_AS(l1_distance({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("l1_distance is a metric on equal-length sequences") {
  std::mt19937_64 rng(property_seed(11));
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 12);
    const auto a = testing::random_targets(rng, n, 9);
    const auto b = testing::random_targets(rng, n, 9);
    const auto c = testing::random_targets(rng, n, 9);
    CHECK(l1_distance(a, a) == 0);
    CHECK((l1_distance(a, b) == 0) == (a == b));
    CHECK(l1_distance(a, b) == l1_distance(b, a));
    CHECK(l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c));
  }
}

TEST_CASE("is_graphical") {
  CHECK(is_graphical({1, 1}));
  CHECK_FALSE(is_graphical({3, 1, 1}));
  CHECK(is_graphical(testing::powerlaw_sequence()));
  CHECK(is_graphical({}));
  CHECK(is_graphical({0}));
  CHECK_FALSE(is_graphical({1}));
  CHECK_FALSE(is_graphical({3, 3, 3}));  // degree above n - 1
  CHECK_FALSE(is_graphical({3, 3, 1, 1}));  // even sum, fails the k = 2 inequality
  CHECK(is_graphical({3, 3, 2, 2, 2}));
}

TEST_CASE("is_graphical matches exhaustive search on small sequences") {
  // every sequence over n <= 5 with entries <= n
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto pairs = testing::all_pairs(n);
    std::set<std::vector<int>> realizable;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask)
      realizable.insert(degree_sequence(testing::graph_from_mask(n, pairs, mask)).values());
    std::vector<int> d(n, 0);
    for (;;) {
      CHECK(is_graphical(DegreeSequence(d)) == (realizable.count(d) == 1));
      std::size_t k = 0;
      while (k < n && d[k] == static_cast<int>(n)) d[k++] = 0;
      if (k == n) break;
      ++d[k];
    }
  }
}

TEST_CASE("realize_graphical") {
  CHECK(realize_graphical({2, 2, 2}) == Graph::complete(3));
  CHECK(realize_graphical({1, 1, 0}) == Graph::from_edges(3, {{0, 1}}));
  const Graph five = realize_graphical(testing::ten_by_five());
  CHECK(degree_sequence(five) == testing::ten_by_five());
  CHECK(realize_graphical({}).size() == 0);
  CHECK_THROWS_AS(realize_graphical({3, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(realize_graphical({5, 1}), std::invalid_argument);
}

TEST_CASE("realizations reproduce random graphical sequences and every graph is graphical") {
  std::mt19937_64 rng(property_seed(12));
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 40);
    const Graph g = testing::random_graph(rng, n, std::uniform_real_distribution<double>(0, 1)(rng));
    const DegreeSequence d = degree_sequence(g);
    CHECK(d.sum() % 2 == 0);
    REQUIRE(is_graphical(d));
    const Graph h = realize_graphical(d);
    h.check_invariants();
    CHECK(degree_sequence(h) == d);
    CHECK(realize_graphical(d) == h);
  }
}

TEST_CASE("eigenvector centrality on small graphs") {
  const auto path = eigenvector_centrality(Graph::from_edges(3, {{0, 1}, {1, 2}}));
  const double s2 = std::sqrt(2.0);
  CHECK(path.converged);
  CHECK(path.scores[0] == doctest::Approx(1 / (2 + s2)).epsilon(1e-10));
  CHECK(path.scores[1] == doctest::Approx(s2 / (2 + s2)).epsilon(1e-10));
  CHECK(path.scores[2] == doctest::Approx(1 / (2 + s2)).epsilon(1e-10));

  const auto edge = eigenvector_centrality(Graph::from_edges(2, {{0, 1}}));
  CHECK(edge.scores == std::vector<double>{0.5, 0.5});

  const auto empty = eigenvector_centrality(Graph(3));
  CHECK(empty.degenerate);
  CHECK(empty.scores == std::vector<double>{0, 0, 0});

  const auto with_isolated = eigenvector_centrality(Graph::from_edges(3, {{0, 1}}));
  CHECK(with_isolated.scores[2] == 0.0);

  CHECK_THROWS(eigenvector_centrality(Graph(0)));
  CHECK_THROWS(eigenvector_centrality(Graph(2), 0.0));
}

TEST_CASE("eigenvector centrality converges on bipartite graphs") {
  // the star is bipartite: plain power iteration on A alternates forever
  const auto star = eigenvector_centrality(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(star.converged);
  const double s3 = std::sqrt(3.0);
  CHECK(star.scores[0] == doctest::Approx(s3 / (s3 + 3)).epsilon(1e-9));
  CHECK(star.scores[1] == doctest::Approx(1 / (s3 + 3)).epsilon(1e-9));
}

TEST_CASE("eigenvector centrality is a non-negative unit-sum vector") {
  std::mt19937_64 rng(property_seed(13));
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 30);
    const Graph g = testing::random_graph(rng, n, 0.2);
    const auto c = eigenvector_centrality(g);
    if (g.edge_count() == 0) {
      CHECK(c.degenerate);
      continue;
    }
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(c.scores[i] >= 0.0);
      if (g.degree(i) == 0) CHECK(c.scores[i] == 0.0);
      sum += c.scores[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}
