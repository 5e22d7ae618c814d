#include "netgame/games.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netgame {

namespace {

void require_player(std::size_t n, std::size_t i) {
  if (i >= n) {
    throw std::out_of_range("player index " + std::to_string(i) + " out of range for n=" +
                            std::to_string(n));
  }
}

void require_same_size(std::size_t game_n, const Graph& g) {
  if (game_n != g.size()) {
    throw std::invalid_argument("game has " + std::to_string(game_n) + " players but graph has " +
                                std::to_string(g.size()) + " nodes");
  }
}

}  // namespace

LinkBiasGame::LinkBiasGame(const std::vector<std::vector<double>>& costs)
    : n_(costs.size()), c_(costs.size() * costs.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (costs[i].size() != n_) {
      throw std::invalid_argument("cost matrix row " + std::to_string(i) + " has length " +
                                  std::to_string(costs[i].size()) + ", expected " +
                                  std::to_string(n_));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = costs[i][j];
      if (!std::isfinite(v)) {
        throw std::invalid_argument("cost matrix entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not finite");
      }
      if (i == j && v != 0.0) {
        throw std::invalid_argument("cost matrix diagonal entry " + std::to_string(i) +
                                    " is nonzero");
      }
      c_[i * n_ + j] = v;
    }
  }
}

std::vector<std::vector<double>> LinkBiasGame::matrix() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = cost(i, j);
  return out;
}

LinkBiasGame LinkBiasGame::without_player(std::size_t v) const {
  require_player(n_, v);
  std::vector<std::vector<double>> m;
  m.reserve(n_ - 1);
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == v) continue;
    std::vector<double> row;
    row.reserve(n_ - 1);
    for (std::size_t j = 0; j < n_; ++j)
      if (j != v) row.push_back(cost(i, j));
    m.push_back(std::move(row));
  }
  return LinkBiasGame(m);
}

StrategyMatrix StrategyMatrix::from_graph(const Graph& g) {
  StrategyMatrix s(g.size());
  for (const auto& [i, j] : g.edges()) {
    s.set(i, j, true);
    s.set(j, i, true);
  }
  return s;
}

void StrategyMatrix::set(std::size_t i, std::size_t j, bool value) {
  require_player(n_, i);
  require_player(n_, j);
  if (i == j) throw std::invalid_argument("strategy matrix diagonal must stay zero");
  s_[i * n_ + j] = value ? 1 : 0;
}

StrategyMatrix strategies_from_costs(const LinkBiasGame& game) {
  StrategyMatrix s(game.size());
  for (std::size_t i = 0; i < game.size(); ++i)
    for (std::size_t j = 0; j < game.size(); ++j)
      if (i != j && game.cost(i, j) < 0.0) s.set(i, j, true);
  return s;
}

Graph graph_from_strategies(const StrategyMatrix& s) {
  GraphBuilder b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s.desires(i, j) && s.desires(j, i)) b.add_edge(i, j);
  return b.build();
}

double payoff_degree(const DegreeSequenceGame& game, const Graph& g, std::size_t i) {
  require_same_size(game.size(), g);
  require_player(game.size(), i);
  return -std::abs(static_cast<double>(g.degree(i)) - game.target(i));
}

double payoff_link_bias(const LinkBiasGame& game, const Graph& g, std::size_t i) {
  require_same_size(game.size(), g);
  require_player(game.size(), i);
  double cost = 0.0;
  for (Vertex j : g.neighbors(i)) cost += game.cost(i, j);
  return -cost;
}

std::vector<double> payoffs_degree(const DegreeSequenceGame& game, const Graph& g) {
  std::vector<double> out(game.size());
  for (std::size_t i = 0; i < game.size(); ++i) out[i] = payoff_degree(game, g, i);
  return out;
}

std::vector<double> payoffs_link_bias(const LinkBiasGame& game, const Graph& g) {
  std::vector<double> out(game.size());
  for (std::size_t i = 0; i < game.size(); ++i) out[i] = payoff_link_bias(game, g, i);
  return out;
}

double communal_value(std::span<const double> payoffs) {
  return std::accumulate(payoffs.begin(), payoffs.end(), 0.0);
}

bool is_pairwise_stable_degree(const DegreeSequenceGame& game, const Graph& g) {
  require_same_size(game.size(), g);
  const std::size_t n = game.size();
  std::vector<bool> deficient(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto eta = static_cast<long long>(g.degree(i));
    if (eta > game.target(i)) return false;
    deficient[i] = eta < game.target(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!deficient[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      if (deficient[j] && !g.has_edge(i, j)) return false;
  }
  return true;
}

bool is_pairwise_stable_link_bias(const LinkBiasGame& game, const Graph& g) {
  require_same_size(game.size(), g);
  for (std::size_t i = 0; i < game.size(); ++i) {
    for (std::size_t j = i + 1; j < game.size(); ++j) {
      const bool mutual = game.cost(i, j) < 0.0 && game.cost(j, i) < 0.0;
      if (g.has_edge(i, j) != mutual) return false;
    }
  }
  return true;
}

}  // namespace netgame
