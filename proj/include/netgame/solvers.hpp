#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netgame/games.hpp"
#include "netgame/graph.hpp"

namespace netgame {

struct SolverOptions {
  /// Branch-and-bound nodes before giving up on certification.
  std::uint64_t node_budget = 10'000'000;
};

struct SolveResult {
  Graph graph;
  /// Degree-game problems report a cost (sum of |eta_i - d_i| or total
  /// deficit). Link-bias problems report the communal reward.
  double objective = 0.0;
  /// False only when the node budget ran out; `graph` is then the best found.
  bool optimal = true;
  std::uint64_t nodes_explored = 0;
  /// Per-player slack d_i - eta_i, populated by the worst-stable solvers.
  std::optional<std::vector<int>> deficits;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

/// Closest graph to `d` in l1 over degree sequences. Graphical inputs take the
/// Havel–Hakimi fast path with objective 0.
SolveResult best_graph_degree(const DegreeSequence& d, const SolverOptions& options = {});

/// Pairwise-stable graph with the largest total deficit.
SolveResult worst_stable_degree(const DegreeSequence& d, const SolverOptions& options = {});

/// The unique stable graph of a link-bias game with its communal reward.
SolveResult stable_graph_link_bias(const LinkBiasGame& game);

/// Communal-reward maximizer over all graphs.
SolveResult best_graph_link_bias(const LinkBiasGame& game);

struct CostConstruction {
  Graph graph;
  StrategyMatrix strategies;
  LinkBiasGame game;
  long long distance = 0;  // l1 distance between eta(graph) and d
  bool optimal = true;
};

/// Link-bias game whose stable graph is a closest graph to `d`.
CostConstruction construct_cost_matrix(const DegreeSequence& d, const SolverOptions& options = {});

/// Largest n accepted by the enumeration oracles.
inline constexpr std::size_t kBruteForceMaxNodes = 8;

/// Exhaustive oracles. Both return the lexicographically smallest optimum,
/// where edge sets are compared as 0/1 vectors over pairs (0,1), (0,2), ...
/// Throws std::invalid_argument for n > kBruteForceMaxNodes.
SolveResult brute_force_worst_stable(const DegreeSequence& d);
SolveResult brute_force_best_graph(const DegreeSequence& d);

/// Admissible lower bound on min sum |eta_i - d_i| from parity and the
/// Erdős–Gallai inequalities.
long long closest_graph_lower_bound(const DegreeSequence& d);

}  // namespace netgame
