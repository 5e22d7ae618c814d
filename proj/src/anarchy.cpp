#include "netgame/anarchy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace netgame {

namespace {

void require_removable(std::size_t n, std::size_t i) {
  if (n < 2) throw std::invalid_argument("what-if removal needs at least two players");
  if (i >= n) {
    throw std::out_of_range("vertex " + std::to_string(i) + " out of range for n=" +
                            std::to_string(n));
  }
}

AnarchyReport make_report(Orientation orientation, double worst, double best, bool certified) {
  AnarchyReport r;
  r.orientation = orientation;
  r.worst_stable_value = worst;
  r.best_value = best;
  r.poa_difference = price_of_anarchy(worst, best, PoaMode::difference, orientation);
  if (best > 0.0) r.poa_ratio = worst / best;
  r.certified = certified;
  return r;
}

std::optional<double> ratio_delta(const AnarchyReport& before, const AnarchyReport& after) {
  if (!before.poa_ratio || !after.poa_ratio) return std::nullopt;
  return *before.poa_ratio - *after.poa_ratio;
}

struct StableContext {
  Graph stable;
  std::vector<double> centrality;
  AnarchyReport report;
};

StableContext link_bias_context(const LinkBiasGame& game) {
  StableContext ctx;
  ctx.stable = stable_graph_link_bias(game).graph;
  ctx.centrality = eigenvector_centrality(ctx.stable).scores;
  ctx.report = anarchy_report(game);
  return ctx;
}

WhatIfResult link_bias_row(const LinkBiasGame& game, const StableContext& ctx, std::size_t i) {
  WhatIfResult out;
  out.removed = i;
  out.report_before = ctx.report;
  out.report_after = anarchy_report(game.without_player(i));
  out.delta_poa_ratio = ratio_delta(out.report_before, out.report_after);
  out.communal_utility_change = communal_utility_change(game, i);
  out.degree = static_cast<int>(ctx.stable.degree(i));
  out.eig_centrality = ctx.centrality[i];

  // Links are pairwise-local, so removal loses exactly the removed player's
  // link values.
  const double expected = out.report_before.worst_stable_value - out.communal_utility_change;
  const double scale = std::max(1.0, std::abs(out.report_before.worst_stable_value));
  if (std::abs(out.report_after.worst_stable_value - expected) > 1e-9 * scale) {
    throw std::logic_error("what-if consistency law violated for vertex " + std::to_string(i));
  }
  return out;
}

struct DegreeContext {
  Graph worst;
  std::vector<double> centrality;
  AnarchyReport report;
};

DegreeContext degree_context(const DegreeSequenceGame& game, const SolverOptions& options) {
  const SolveResult worst = worst_stable_degree(game.targets(), options);
  const SolveResult best = best_graph_degree(game.targets(), options);
  DegreeContext ctx;
  ctx.worst = worst.graph;
  ctx.centrality = eigenvector_centrality(worst.graph).scores;
  ctx.report = make_report(Orientation::cost, worst.objective, best.objective,
                           worst.optimal && best.optimal);
  return ctx;
}

WhatIfResult degree_row(const DegreeSequenceGame& game, const DegreeContext& ctx, std::size_t i,
                        const SolverOptions& options) {
  WhatIfResult out;
  out.removed = i;
  out.report_before = ctx.report;
  out.report_after = anarchy_report_degree(game.targets().without(i), options);
  out.delta_poa_ratio = ratio_delta(out.report_before, out.report_after);
  // Communal value is minus the total cost, so the loss is after - before.
  out.communal_utility_change =
      out.report_after.worst_stable_value - out.report_before.worst_stable_value;
  out.degree = static_cast<int>(ctx.worst.degree(i));
  out.eig_centrality = ctx.centrality[i];
  return out;
}

template <class Row>
SummaryTable fan_out(std::size_t n, Row row) {
  std::vector<std::future<WhatIfResult>> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(std::async(std::launch::async, row, i));
  SummaryTable table;
  table.reserve(n);
  for (auto& f : rows) table.push_back(f.get());
  return table;
}

}  // namespace

double price_of_anarchy(double worst_stable, double best, PoaMode mode, Orientation orientation) {
  if (mode == PoaMode::difference) {
    return orientation == Orientation::reward ? best - worst_stable : worst_stable - best;
  }
  if (!(best > 0.0)) {
    throw UndefinedRatioError(
        "price of anarchy ratio is undefined for a non-positive best value; use difference mode");
  }
  return worst_stable / best;
}

AnarchyReport anarchy_report(const LinkBiasGame& game) {
  const SolveResult worst = stable_graph_link_bias(game);
  const SolveResult best = best_graph_link_bias(game);
  return make_report(Orientation::reward, worst.objective, best.objective, true);
}

AnarchyReport anarchy_report_degree(const DegreeSequence& d, const SolverOptions& options) {
  const SolveResult worst = worst_stable_degree(d, options);
  const SolveResult best = best_graph_degree(d, options);
  return make_report(Orientation::cost, worst.objective, best.objective,
                     worst.optimal && best.optimal);
}

double communal_utility_change(const LinkBiasGame& game, std::size_t i) {
  if (i >= game.size()) {
    throw std::out_of_range("vertex " + std::to_string(i) + " out of range for n=" +
                            std::to_string(game.size()));
  }
  double lost = 0.0;
  for (std::size_t j = 0; j < game.size(); ++j) {
    if (j == i) continue;
    if (game.cost(i, j) < 0.0 && game.cost(j, i) < 0.0) lost -= game.cost(i, j) + game.cost(j, i);
  }
  return lost;
}

WhatIfResult whatif_remove(const LinkBiasGame& game, std::size_t i) {
  require_removable(game.size(), i);
  return link_bias_row(game, link_bias_context(game), i);
}

WhatIfResult whatif_remove(const DegreeSequenceGame& game, std::size_t i,
                           const SolverOptions& options) {
  require_removable(game.size(), i);
  return degree_row(game, degree_context(game, options), i, options);
}

SummaryTable summary_table(const LinkBiasGame& game) {
  if (game.size() < 2) throw std::invalid_argument("summary table needs at least two players");
  const StableContext ctx = link_bias_context(game);
  return fan_out(game.size(), [&](std::size_t i) { return link_bias_row(game, ctx, i); });
}

SummaryTable summary_table(const DegreeSequenceGame& game, const SolverOptions& options) {
  if (game.size() < 2) throw std::invalid_argument("summary table needs at least two players");
  const DegreeContext ctx = degree_context(game, options);
  return fan_out(game.size(), [&](std::size_t i) { return degree_row(game, ctx, i, options); });
}

std::vector<std::size_t> pareto_targets(std::span<const WhatIfResult> table) {
  constexpr double kMissing = -std::numeric_limits<double>::infinity();
  auto second = [&](const WhatIfResult& r) { return r.delta_poa_ratio.value_or(kMissing); };
  std::vector<std::size_t> out;
  for (const auto& a : table) {
    bool dominated = false;
    for (const auto& b : table) {
      const bool ge = b.communal_utility_change >= a.communal_utility_change && second(b) >= second(a);
      const bool gt = b.communal_utility_change > a.communal_utility_change || second(b) > second(a);
      if (ge && gt) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(a.removed);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace netgame
