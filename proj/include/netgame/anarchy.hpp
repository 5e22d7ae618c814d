#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "netgame/games.hpp"
#include "netgame/solvers.hpp"

namespace netgame {

/// Link-bias games are reported in rewards (higher is better), the degree
/// game in costs (lower is better).
enum class Orientation { reward, cost };

enum class PoaMode { ratio, difference };

/// Ratio requested with a non-positive denominator.
class UndefinedRatioError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AnarchyReport {
  Orientation orientation = Orientation::reward;
  double worst_stable_value = 0.0;
  double best_value = 0.0;
  double poa_difference = 0.0;
  std::optional<double> poa_ratio;
  /// Both underlying solves were proven optimal.
  bool certified = true;

  friend bool operator==(const AnarchyReport&, const AnarchyReport&) = default;
};

/// Difference mode: best - worst for rewards, worst - best for costs; never
/// negative. Ratio mode: worst / best, which needs best > 0.
double price_of_anarchy(double worst_stable, double best, PoaMode mode,
                        Orientation orientation = Orientation::reward);

AnarchyReport anarchy_report(const LinkBiasGame& game);
AnarchyReport anarchy_report_degree(const DegreeSequence& d, const SolverOptions& options = {});

/// Reward lost when player i disappears: the summed value of its links in
/// the stable graph. Never negative.
double communal_utility_change(const LinkBiasGame& game, std::size_t i);

struct WhatIfResult {
  std::size_t removed = 0;  // index in the game it was removed from
  AnarchyReport report_before;
  AnarchyReport report_after;
  /// ratio before minus ratio after; absent if either ratio is undefined
  std::optional<double> delta_poa_ratio;
  double communal_utility_change = 0.0;
  int degree = 0;               // in the original worst stable graph
  double eig_centrality = 0.0;  // same graph, l1-normalized

  friend bool operator==(const WhatIfResult&, const WhatIfResult&) = default;
};

/// Throws std::out_of_range for a bad index and std::invalid_argument when
/// the game has fewer than two players.
WhatIfResult whatif_remove(const LinkBiasGame& game, std::size_t i);
WhatIfResult whatif_remove(const DegreeSequenceGame& game, std::size_t i,
                           const SolverOptions& options = {});

using SummaryTable = std::vector<WhatIfResult>;

/// One what-if row per player, in player order.
SummaryTable summary_table(const LinkBiasGame& game);
SummaryTable summary_table(const DegreeSequenceGame& game, const SolverOptions& options = {});

/// Rows not dominated when maximizing both communal_utility_change and
/// delta_poa_ratio. Returns the `removed` indices in ascending order.
std::vector<std::size_t> pareto_targets(std::span<const WhatIfResult> table);

}  // namespace netgame
