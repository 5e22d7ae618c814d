#include <doctest.h>

#include "netgame/games.hpp"
#include "netgame/solvers.hpp"
#include "support.hpp"

using namespace netgame;
using testing::property_seed;

namespace {

StrategyMatrix strategies(std::size_t n, std::initializer_list<Edge> wants) {
  StrategyMatrix s(n);
  for (auto [i, j] : wants) s.set(i, j, true);
  return s;
}

}  // namespace

TEST_CASE("LinkBiasGame validates its matrix") {
  CHECK_THROWS_AS(LinkBiasGame({{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(LinkBiasGame({{1, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(LinkBiasGame({{0, std::nan("")}, {0, 0}}), std::invalid_argument);
  const LinkBiasGame g({{0, 1, 2}, {3, 0, 4}, {5, 6, 0}});
  CHECK(g.cost(2, 1) == 6);
  CHECK(g.without_player(1).matrix() == std::vector<std::vector<double>>{{0, 2}, {5, 0}});
}

TEST_CASE("strategies_from_costs maps signs with zero as no desire") {
  CHECK(strategies_from_costs(LinkBiasGame({{0, -1}, {-1, 0}})) == strategies(2, {{0, 1}, {1, 0}}));
  CHECK(strategies_from_costs(LinkBiasGame({{0, -1}, {1, 0}})) == strategies(2, {{0, 1}}));
  CHECK(strategies_from_costs(LinkBiasGame({{0, 0}, {0, 0}})) == StrategyMatrix(2));
}

TEST_CASE("graph_from_strategies applies link veto") {
  StrategyMatrix all(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) all.set(i, j, true);
  CHECK(graph_from_strategies(all) == Graph::complete(4));
  CHECK(graph_from_strategies(strategies(2, {{0, 1}})) == Graph(2));
  CHECK_THROWS_AS(all.set(1, 1, true), std::invalid_argument);

  const Graph g = graph_from_strategies(strategies_from_costs(testing::complete_example()));
  CHECK(g.edge_count() == 13);
  CHECK(communal_value(payoffs_link_bias(testing::complete_example(), g)) == 1077);
  CHECK(StrategyMatrix::from_graph(g) == StrategyMatrix::from_graph(g));
  CHECK(graph_from_strategies(StrategyMatrix::from_graph(g)) == g);
}

TEST_CASE("payoff_degree") {
  const DegreeSequenceGame game({5, 5, 0});
  const Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(payoff_degree(game, g, 0) == -3);
  CHECK(payoff_degree(game, g, 2) == -2);
  CHECK(payoff_degree(DegreeSequenceGame({0, 0, 0, 0, 0}), Graph::complete(5), 0) == -4);
  CHECK(payoff_degree(DegreeSequenceGame({2, 2, 2}), Graph::complete(3), 1) == 0);
  CHECK_THROWS_AS(payoff_degree(game, g, 3), std::out_of_range);
  CHECK_THROWS_AS(payoff_degree(game, Graph(2), 0), std::invalid_argument);
}

TEST_CASE("ten players wanting five: two players three links short is stable") {
  // vertices 0 and 1 have degree 2, the rest degree 5
  GraphBuilder b(10);
  b.add_edge(0, 1).add_edge(0, 2).add_edge(1, 3);
  // vertices 2 and 3 need four more links, 4..9 need five
  std::vector<int> rest = {4, 4, 5, 5, 5, 5, 5, 5};
  const Graph tail = realize_graphical(DegreeSequence(rest));
  for (auto [i, j] : tail.edges()) b.add_edge(i + 2, j + 2);
  const Graph g = b.build();
  const DegreeSequenceGame game(testing::ten_by_five());
  CHECK(payoff_degree(game, g, 0) == -3);
  CHECK(payoff_degree(game, g, 1) == -3);
  CHECK(l1_distance(degree_sequence(g), testing::ten_by_five()) == 6);
  CHECK(is_pairwise_stable_degree(game, g));
}

TEST_CASE("payoff_link_bias") {
  const LinkBiasGame pair({{0, -1}, {-1, 0}});
  CHECK(payoff_link_bias(pair, Graph(2), 0) == 0);
  CHECK(payoff_link_bias(pair, Graph::complete(2), 0) == 1);
  CHECK(payoff_link_bias(pair, Graph::complete(2), 1) == 1);
  CHECK_THROWS_AS(payoff_link_bias(pair, Graph(2), 2), std::out_of_range);
  CHECK_THROWS_AS(payoff_link_bias(pair, Graph(3), 0), std::invalid_argument);
}

TEST_CASE("communal_value of the worked example") {
  CHECK(communal_value(std::vector<double>{0, 0, 0}) == 0);
  const LinkBiasGame game = testing::complete_example();
  CHECK(communal_value(payoffs_link_bias(game, best_graph_link_bias(game).graph)) == 1487);
  const LinkBiasGame reduced = game.without_player(9);
  CHECK(communal_value(payoffs_link_bias(reduced, stable_graph_link_bias(reduced).graph)) == 501);
}

TEST_CASE("is_pairwise_stable_degree") {
  const DegreeSequenceGame five(testing::ten_by_five());
  CHECK(is_pairwise_stable_degree(five, realize_graphical(testing::ten_by_five())));
  CHECK_FALSE(is_pairwise_stable_degree(DegreeSequenceGame({1, 1}), Graph(2)));
  CHECK_FALSE(is_pairwise_stable_degree(DegreeSequenceGame({0, 1}), Graph::complete(2)));
  CHECK(is_pairwise_stable_degree(DegreeSequenceGame({1, 1, 1}), Graph::from_edges(3, {{0, 2}})));
  CHECK_THROWS_AS(is_pairwise_stable_degree(DegreeSequenceGame({1, 1}), Graph(3)), std::invalid_argument);
}

TEST_CASE("is_pairwise_stable_link_bias") {
  const LinkBiasGame pair({{0, -1}, {-1, 0}});
  CHECK_FALSE(is_pairwise_stable_link_bias(pair, Graph(2)));
  CHECK(is_pairwise_stable_link_bias(pair, Graph::complete(2)));
  CHECK_FALSE(is_pairwise_stable_link_bias(LinkBiasGame({{0, -1}, {1, 0}}), Graph::complete(2)));
  const LinkBiasGame game = testing::complete_example();
  CHECK(is_pairwise_stable_link_bias(game, stable_graph_link_bias(game).graph));
  CHECK_FALSE(is_pairwise_stable_link_bias(game, best_graph_link_bias(game).graph));
  CHECK_THROWS_AS(is_pairwise_stable_link_bias(pair, Graph(3)), std::invalid_argument);
}

TEST_CASE("degree stability predicate agrees with the literal definition") {
  std::mt19937_64 rng(property_seed(21));
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 7);
    const auto d = testing::random_targets(rng, n, static_cast<int>(n));
    const Graph g = testing::random_graph(rng, n, 0.4);
    const bool literal =
        testing::stable_by_definition(g, [&](const Graph& h, std::size_t i) { return testing::degree_payoff(d, h, i); });
    CHECK(is_pairwise_stable_degree(DegreeSequenceGame(d), g) == literal);
  }
}

TEST_CASE("link-bias stability predicate agrees with the literal definition on strict costs") {
  std::mt19937_64 rng(property_seed(22));
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 7);
    const LinkBiasGame game = testing::random_costs(rng, n, 9, true);
    const Graph g = t % 3 == 0 ? graph_from_strategies(strategies_from_costs(game)) : testing::random_graph(rng, n, 0.4);
    const bool literal =
        testing::stable_by_definition(g, [&](const Graph& h, std::size_t i) { return testing::link_payoff(game, h, i); });
    CHECK(is_pairwise_stable_link_bias(game, g) == literal);
  }
}

TEST_CASE("the strategy graph is stable for every cost matrix") {
  std::mt19937_64 rng(property_seed(23));
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 25);
    const LinkBiasGame game = testing::random_costs(rng, n, 50, t % 2 == 0);
    const Graph g = graph_from_strategies(strategies_from_costs(game));
    CHECK(is_pairwise_stable_link_bias(game, g));
    double expected = 0;
    for (auto [i, j] : g.edges()) {
      CHECK(game.cost(i, j) + game.cost(j, i) < 0);
      expected -= game.cost(i, j) + game.cost(j, i);
    }
    CHECK(communal_value(payoffs_link_bias(game, g)) == expected);
  }
}

TEST_CASE("realizations of graphical targets are stable") {
  std::mt19937_64 rng(property_seed(24));
  for (int t = 0; t < 500; ++t) {
    const auto d = testing::random_graphical(rng, testing::uniform(rng, 1, 30));
    const Graph g = realize_graphical(d);
    CHECK(is_pairwise_stable_degree(DegreeSequenceGame(d), g));
  }
}

TEST_CASE("summed degree payoffs are minus the l1 distance") {
  std::mt19937_64 rng(property_seed(25));
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = testing::uniform(rng, 1, 20);
    const auto d = testing::random_targets(rng, n, static_cast<int>(n) + 2);
    const Graph g = testing::random_graph(rng, n, 0.3);
    const DegreeSequenceGame game(d);
    CHECK(communal_value(payoffs_degree(game, g)) == -static_cast<double>(l1_distance(degree_sequence(g), d)));
  }
}
