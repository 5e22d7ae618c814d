#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netgame/graph.hpp"

namespace netgame {

/// Players each want exactly d_i links; player i pays |eta_i - d_i|.
class DegreeSequenceGame {
 public:
  DegreeSequenceGame() = default;
  explicit DegreeSequenceGame(DegreeSequence targets) : targets_(std::move(targets)) {}

  std::size_t size() const { return targets_.size(); }
  const DegreeSequence& targets() const { return targets_; }
  int target(std::size_t i) const { return targets_.at(i); }

  DegreeSequenceGame without_player(std::size_t v) const {
    return DegreeSequenceGame(targets_.without(v));
  }

  friend bool operator==(const DegreeSequenceGame&, const DegreeSequenceGame&) = default;

 private:
  DegreeSequence targets_;
};

/// Linear link costs: player i pays c_ij for every incident link ij. A
/// negative cost is a benefit.
class LinkBiasGame {
 public:
  LinkBiasGame() = default;
  /// Throws std::invalid_argument unless `costs` is square with a zero
  /// diagonal and finite entries.
  explicit LinkBiasGame(const std::vector<std::vector<double>>& costs);

  std::size_t size() const { return n_; }
  double cost(std::size_t i, std::size_t j) const { return c_[i * n_ + j]; }
  std::vector<std::vector<double>> matrix() const;

  /// Game with row and column v deleted.
  LinkBiasGame without_player(std::size_t v) const;

  friend bool operator==(const LinkBiasGame&, const LinkBiasGame&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> c_;
};

/// s_ij = 1 when player i wants link ij. Not necessarily symmetric.
class StrategyMatrix {
 public:
  StrategyMatrix() = default;
  explicit StrategyMatrix(std::size_t n) : n_(n), s_(n * n, 0) {}
  static StrategyMatrix from_graph(const Graph& g);

  std::size_t size() const { return n_; }
  bool desires(std::size_t i, std::size_t j) const { return s_[i * n_ + j] != 0; }
  /// Throws std::invalid_argument for i == j.
  void set(std::size_t i, std::size_t j, bool value);

  friend bool operator==(const StrategyMatrix&, const StrategyMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<unsigned char> s_;
};

/// s_ij = 1 iff c_ij < 0. Zero costs map to 0 (link parsimony).
StrategyMatrix strategies_from_costs(const LinkBiasGame& game);

/// Link ij forms iff both players want it.
Graph graph_from_strategies(const StrategyMatrix& s);

double payoff_degree(const DegreeSequenceGame& game, const Graph& g, std::size_t i);
double payoff_link_bias(const LinkBiasGame& game, const Graph& g, std::size_t i);

std::vector<double> payoffs_degree(const DegreeSequenceGame& game, const Graph& g);
std::vector<double> payoffs_link_bias(const LinkBiasGame& game, const Graph& g);

/// Balanced value: the sum of all player payoffs.
double communal_value(std::span<const double> payoffs);

/// No player exceeds its target, and no two unlinked players both sit below
/// target.
bool is_pairwise_stable_degree(const DegreeSequenceGame& game, const Graph& g);

/// Every link is wanted by both ends, and every mutually beneficial link
/// exists.
bool is_pairwise_stable_link_bias(const LinkBiasGame& game, const Graph& g);

}  // namespace netgame
