#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "netgame/games.hpp"
#include "netgame/graph.hpp"

namespace testing {

using namespace netgame;

inline std::string data_path(const std::string& name) { return std::string(NETGAME_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const std::vector<std::vector<double>>& complete_example_costs() {
  static const std::vector<std::vector<double>> c = {
      {0, -85, -29, 13, -25, -94, -19, -97, 10, 10},
      {75, 0, 9, 32, 78, 27, -55, -38, -44, -61},
      {-85, 19, 0, 48, 23, 18, 71, -36, 26, -26},
      {-19, 25, 35, 0, -67, 18, -50, -69, -3, -20},
      {57, 17, 80, 51, 0, 63, -17, 69, -62, -78},
      {83, 81, 20, 20, -81, 0, 35, -15, -83, -4},
      {-45, 89, 39, -46, -36, -51, 0, 2, 9, 5},
      {68, 92, -35, 35, -88, 51, -86, 0, 88, -91},
      {58, -2, 26, -54, 91, 38, 50, 99, 0, -44},
      {-43, -46, -74, -17, -62, -38, -94, -59, 63, 0},
  };
  return c;
}

inline LinkBiasGame complete_example() { return LinkBiasGame(complete_example_costs()); }

inline DegreeSequence powerlaw_sequence() {
  std::vector<int> d(75, 1);
  d.insert(d.end(), 14, 2);
  d.insert(d.end(), 5, 3);
  d.insert(d.end(), 2, 4);
  for (int k = 5; k <= 8; ++k) d.push_back(k);
  return DegreeSequence(d);
}

inline DegreeSequence ten_by_five() { return DegreeSequence(std::vector<int>(10, 5)); }

// Property-test seeds can be overridden to replay a failure.
inline std::uint64_t property_seed(std::uint64_t fallback) {
  if (const char* s = std::getenv("NETGAME_TEST_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  GraphBuilder b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) b.add_edge(i, j);
  return b.build();
}

/// Arbitrary targets in [0, max_value]; mostly not graphical.
inline DegreeSequence random_targets(std::mt19937_64& rng, std::size_t n, int max_value) {
  std::vector<int> d(n);
  for (auto& x : d) x = static_cast<int>(uniform(rng, 0, static_cast<std::size_t>(max_value)));
  return DegreeSequence(d);
}

/// Graphical by construction: the degrees of a random graph.
inline DegreeSequence random_graphical(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> p(0.05, 0.95);
  return degree_sequence(random_graph(rng, n, p(rng)));
}

/// Integer costs in [-range, range]; zero_free skips 0 off the diagonal.
inline LinkBiasGame random_costs(std::mt19937_64& rng, std::size_t n, int range, bool zero_free) {
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      int v = 0;
      do {
        v = static_cast<int>(uniform(rng, 0, static_cast<std::size_t>(2 * range))) - range;
      } while (zero_free && v == 0);
      c[i][j] = v;
    }
  return LinkBiasGame(c);
}

// ---- Independent oracles, written from the definitions only. ----

inline std::vector<Edge> all_pairs(std::size_t n) {
  std::vector<Edge> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

inline Graph graph_from_mask(std::size_t n, const std::vector<Edge>& pairs, std::uint64_t mask) {
  GraphBuilder b(n);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (mask >> k & 1U) b.add_edge(pairs[k].first, pairs[k].second);
  return b.build();
}

/// Pairwise stability checked literally: nobody gains by cutting one of their
/// links, and no absent link is a strict gain for one end without a strict
/// loss for the other. `payoff(g, i)` is the allocation rule.
template <class Payoff>
bool stable_by_definition(const Graph& g, Payoff payoff) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j)) {
        const Graph cut = g.without_edge(i, j);
        if (payoff(g, i) < payoff(cut, i) || payoff(g, j) < payoff(cut, j)) return false;
      } else {
        const Graph add = g.with_edge(i, j);
        const bool i_gains = payoff(add, i) > payoff(g, i);
        const bool j_gains = payoff(add, j) > payoff(g, j);
        const bool i_loses = payoff(add, i) < payoff(g, i);
        const bool j_loses = payoff(add, j) < payoff(g, j);
        if ((i_gains && !j_loses) || (j_gains && !i_loses)) return false;
      }
    }
  return true;
}

inline double degree_payoff(const DegreeSequence& d, const Graph& g, std::size_t i) {
  return -std::abs(static_cast<double>(g.degree(i)) - d[i]);
}

struct DegreeOracle {
  long long worst_stable = -1;  // max total |eta - d| over stable graphs
  long long best = std::numeric_limits<long long>::max();
  long long stable_count = 0;
};

/// Enumerates every graph; n <= 6 keeps this under 2^15 graphs.
inline DegreeOracle degree_oracle(const DegreeSequence& d) {
  const std::size_t n = d.size();
  const auto pairs = all_pairs(n);
  DegreeOracle out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    const Graph g = graph_from_mask(n, pairs, mask);
    long long cost = 0;
    for (std::size_t i = 0; i < n; ++i) cost += std::llabs(static_cast<long long>(g.degree(i)) - d[i]);
    out.best = std::min(out.best, cost);
    if (stable_by_definition(g, [&](const Graph& h, std::size_t i) { return degree_payoff(d, h, i); })) {
      ++out.stable_count;
      out.worst_stable = std::max(out.worst_stable, cost);
    }
  }
  return out;
}

inline double link_payoff(const LinkBiasGame& game, const Graph& g, std::size_t i) {
  double y = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (g.has_edge(i, j)) y -= game.cost(i, j);
  return y;
}

struct LinkBiasOracle {
  std::vector<Graph> stable;
  double best = -std::numeric_limits<double>::infinity();
};

inline LinkBiasOracle link_bias_oracle(const LinkBiasGame& game) {
  const std::size_t n = game.size();
  const auto pairs = all_pairs(n);
  LinkBiasOracle out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    const Graph g = graph_from_mask(n, pairs, mask);
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) value += link_payoff(game, g, i);
    out.best = std::max(out.best, value);
    if (stable_by_definition(g, [&](const Graph& h, std::size_t i) { return link_payoff(game, h, i); }))
      out.stable.push_back(g);
  }
  return out;
}

}  // namespace testing
