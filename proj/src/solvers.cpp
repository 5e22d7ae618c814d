#include "netgame/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "netgame/simulator.hpp"

namespace netgame {

namespace {

constexpr long long kNoValue = std::numeric_limits<long long>::min();

struct BudgetExhausted {};

long long total_deficit(const DegreeSequence& d, const Graph& g) {
  long long total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) total += d[i] - static_cast<long long>(g.degree(i));
  return total;
}

std::vector<int> deficit_vector(const DegreeSequence& d, const Graph& g) {
  std::vector<int> u(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) u[i] = d[i] - static_cast<int>(g.degree(i));
  return u;
}

// Smallest value >= lb with the same parity as `parity_ref`.
long long round_up_to_parity(long long lb, long long parity_ref) {
  return ((lb - parity_ref) % 2 != 0) ? lb + 1 : lb;
}

// Largest Erdős–Gallai violation of a sequence whose entries are all <= n-1.
long long eg_violation(std::vector<long long> s) {
  std::sort(s.begin(), s.end(), std::greater<>());
  const std::size_t n = s.size();
  long long worst = 0;
  long long prefix = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += s[k - 1];
    long long rhs = static_cast<long long>(k) * static_cast<long long>(k - 1);
    for (std::size_t i = k; i < n; ++i) rhs += std::min<long long>(s[i], static_cast<long long>(k));
    worst = std::max(worst, prefix - rhs);
  }
  return worst;
}

// Lower bound on min sum |eta_i - r_i| over graphs on the vertices of `r`.
long long closest_lower_bound(const std::vector<long long>& r) {
  const auto n = static_cast<long long>(r.size());
  long long excess = 0;
  long long sum = 0;
  std::vector<long long> clamped(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    clamped[i] = std::min(r[i], std::max(n - 1, 0LL));
    excess += r[i] - clamped[i];
    sum += r[i];
  }
  return round_up_to_parity(excess + eg_violation(std::move(clamped)), sum);
}

// ---------------------------------------------------------------------------
// Closest graph (min sum |eta_i - d_i|).
//
// Edges are decided row by row in lexicographic order, zero first, so leaves
// are visited in increasing lexicographic order of their edge vectors. Only
// graphs with eta_i <= min(d_i, n-1) are explored: dropping an edge at an
// over-target vertex never increases the objective and yields a
// lexicographically smaller vector, so the first optimum found is the
// lexicographically smallest one overall.
class ClosestGraphSearch {
 public:
  ClosestGraphSearch(const DegreeSequence& d, const SolverOptions& options)
      : n_(d.size()), budget_(options.node_budget), d_(d) {
    cap_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      cap_[i] = std::min<long long>(d[i], n_ == 0 ? 0 : static_cast<long long>(n_) - 1);
      excess_ += d[i] - cap_[i];
    }
    eta_.assign(n_, 0);
    free_.assign(n_, n_ == 0 ? 0 : static_cast<long long>(n_) - 1);
    adj_.assign(n_ * n_, 0);
  }

  SolveResult run(const Graph& incumbent) {
    best_value_ = l1_distance(degree_sequence(incumbent), d_);
    best_graph_ = incumbent;
    try {
      visit_row(0);
    } catch (const BudgetExhausted&) {
      aborted_ = true;
    }
    SolveResult out;
    out.graph = best_graph_;
    out.objective = static_cast<double>(l1_distance(degree_sequence(best_graph_), d_));
    if (static_cast<long long>(out.objective) != best_value_) {
      throw std::logic_error("closest-graph objective does not match its graph");
    }
    out.optimal = !aborted_;
    out.nodes_explored = nodes_;
    return out;
  }

 private:
  void tick() {
    if (++nodes_ > budget_) throw BudgetExhausted{};
  }

  bool prune(long long bound) const {
    return bound > best_value_ || (bound == best_value_ && found_);
  }

  void visit_row(std::size_t row) {
    tick();
    if (row + 1 >= n_) {
      leaf();
      return;
    }
    long long fixed = excess_;
    for (std::size_t v = 0; v < row; ++v) fixed += cap_[v] - eta_[v];
    std::vector<long long> residual;
    residual.reserve(n_ - row);
    for (std::size_t v = row; v < n_; ++v) residual.push_back(cap_[v] - eta_[v]);
    if (prune(fixed + closest_lower_bound(residual))) return;
    visit_edge(row, row + 1);
  }

  void visit_edge(std::size_t i, std::size_t j) {
    if (j == n_) {
      visit_row(i + 1);
      return;
    }
    tick();
    // x_ij = 0
    --free_[i];
    --free_[j];
    if (!prune(quick_bound())) visit_edge(i, j + 1);
    ++free_[i];
    ++free_[j];
    // x_ij = 1
    if (eta_[i] < cap_[i] && eta_[j] < cap_[j]) {
      set_edge(i, j, true);
      --free_[i];
      --free_[j];
      if (!prune(quick_bound())) visit_edge(i, j + 1);
      ++free_[i];
      ++free_[j];
      set_edge(i, j, false);
    }
  }

  long long quick_bound() const {
    long long lb = excess_;
    long long parity = d_.sum();
    for (std::size_t v = 0; v < n_; ++v) lb += std::max(0LL, cap_[v] - eta_[v] - free_[v]);
    return round_up_to_parity(lb, parity);
  }

  void set_edge(std::size_t i, std::size_t j, bool on) {
    adj_[i * n_ + j] = adj_[j * n_ + i] = on ? 1 : 0;
    eta_[i] += on ? 1 : -1;
    eta_[j] += on ? 1 : -1;
  }

  void leaf() {
    long long value = excess_;
    for (std::size_t v = 0; v < n_; ++v) value += cap_[v] - eta_[v];
    if (value < best_value_ || (value == best_value_ && !found_)) {
      best_value_ = value;
      found_ = true;
      GraphBuilder b(n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
          if (adj_[i * n_ + j]) b.add_edge(i, j);
      best_graph_ = b.build();
    }
  }

  std::size_t n_;
  std::uint64_t budget_;
  const DegreeSequence& d_;
  std::vector<long long> cap_, eta_, free_;
  std::vector<unsigned char> adj_;
  long long excess_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  bool found_ = false;
  long long best_value_ = kNoValue;
  Graph best_graph_;
};

// Greedy start for the closest-graph search: repeatedly link the vertex with
// the largest remaining need to the next-neediest vertices it is not yet
// joined to.
Graph greedy_closest(const DegreeSequence& d) {
  const std::size_t n = d.size();
  std::vector<long long> need(n);
  for (std::size_t i = 0; i < n; ++i)
    need[i] = std::min<long long>(d[i], n == 0 ? 0 : static_cast<long long>(n) - 1);
  GraphBuilder b(n);
  std::vector<Vertex> order(n);
  std::vector<bool> done(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex c) {
      if (done[a] != done[c]) return !done[a];
      return need[a] > need[c];
    });
    const Vertex hub = order.front();
    if (done[hub]) break;
    done[hub] = true;
    for (std::size_t t = 1; t < n && need[hub] > 0; ++t) {
      const Vertex v = order[t];
      if (done[v] || need[v] == 0 || b.has_edge(hub, v)) continue;
      b.add_edge(hub, v);
      --need[hub];
      --need[v];
    }
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Worst stable graph of the degree game (max total deficit).
//
// A graph is stable iff eta_i <= d_i everywhere and the strictly deficient
// set U is a clique. Fix U with |U| = k. Outside U every vertex is exactly
// saturated; inside U, eta_i = (k - 1) + r_i where r_i counts links leaving
// U, so r_i <= d_i - k. Writing e_w for the links a vertex w outside U sends
// into U, the rest splits into two independent parts:
//   - the graph inside W = V \ U realizes d_w - e_w (Erdős–Gallai);
//   - the bipartite U-W graph has W-degrees e_w and U-degrees at most
//     d_i - k (Gale–Ryser with capacities).
// The deficit is sum_U (d_i - k + 1) - E with E = sum_W e_w, so each U wants
// the smallest feasible E. Vertices with equal targets are interchangeable,
// so U is searched as a count per target class and e is kept non-increasing
// inside each class.
class WorstStableSearch {
 public:
  WorstStableSearch(const DegreeSequence& d, const SolverOptions& options)
      : n_(d.size()), budget_(options.node_budget), d_(d) {
    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d_[a] > d_[b]; });
    for (std::size_t v : order) {
      if (values_.empty() || values_.back() != d_[v]) {
        values_.push_back(d_[v]);
        members_.emplace_back();
      }
      members_.back().push_back(v);
    }
  }

  SolveResult run(const Graph& incumbent) {
    best_value_ = total_deficit(d_, incumbent);
    best_graph_ = incumbent;
    try {
      std::vector<std::size_t> take(values_.size(), 0);
      for (std::size_t k = 1; k <= n_; ++k) choose(k, 0, k, 0, take);
    } catch (const BudgetExhausted&) {
      aborted_ = true;
    }
    SolveResult out;
    out.graph = best_graph_;
    out.objective = static_cast<double>(total_deficit(d_, best_graph_));
    if (static_cast<long long>(out.objective) != best_value_ ||
        !is_pairwise_stable_degree(DegreeSequenceGame(d_), best_graph_)) {
      throw std::logic_error("worst-stable result is inconsistent");
    }
    out.optimal = !aborted_;
    out.nodes_explored = nodes_;
    out.deficits = deficit_vector(d_, best_graph_);
    return out;
  }

 private:
  void tick() {
    if (++nodes_ > budget_) throw BudgetExhausted{};
  }

  // Picks how many members of each class (from class c on) join U.
  void choose(std::size_t k, std::size_t c, std::size_t left, long long ub, std::vector<std::size_t>& take) {
    tick();
    if (left == 0) {
      evaluate(k, take, ub);
      return;
    }
    const auto kk = static_cast<long long>(k);
    if (c == values_.size() || values_[c] < kk) return;
    const long long gain = values_[c] - kk + 1;
    if (ub + static_cast<long long>(left) * gain <= best_value_) return;
    for (std::size_t u = std::min(left, members_[c].size()) + 1; u-- > 0;) {
      take[c] = u;
      choose(k, c + 1, left - u, ub + static_cast<long long>(u) * gain, take);
    }
    take[c] = 0;
  }

  void evaluate(std::size_t k, const std::vector<std::size_t>& take, long long ub) {
    const auto kk = static_cast<long long>(k);
    caps_.clear();
    slots_.clear();
    for (std::size_t c = 0; c < values_.size(); ++c) {
      for (std::size_t t = 0; t < take[c]; ++t) caps_.push_back(values_[c] - kk);
      for (std::size_t t = take[c]; t < members_[c].size(); ++t) slots_.push_back({c, values_[c], 0, 0});
    }
    const auto w = static_cast<long long>(slots_.size());
    long long cap_sum = 0;
    long long open_caps = 0;
    for (long long cap : caps_) {
      cap_sum += cap;
      open_caps += cap > 0 ? 1 : 0;
    }
    long long parity = 0;
    std::vector<long long> outside;
    outside.reserve(slots_.size());
    for (auto& s : slots_) {
      s.lo = std::max(0LL, s.value - (w - 1));
      s.hi = std::min({kk, s.value, open_caps});
      if (s.lo > s.hi) return;
      parity += s.value;
      outside.push_back(s.value);
    }
    hi_suffix_.assign(slots_.size() + 1, 0);
    for (std::size_t i = slots_.size(); i-- > 0;) hi_suffix_[i] = hi_suffix_[i + 1] + slots_[i].hi;
    const long long e_max = std::min({ub - best_value_ - 1, cap_sum, hi_suffix_[0]});
    // E changes d_W by E in l1 and must leave it graphical
    const long long e_min = closest_lower_bound(outside);
    if (e_min > e_max) return;
    e_.assign(slots_.size(), 0);
    for (long long e = round_up_to_parity(e_min, parity); e <= e_max; e += 2) {
      if (distribute(0, e)) {
        record(k, take, ub - e);
        return;
      }
    }
  }

  // Assigns e to slots i.. so that they sum to `left`.
  bool distribute(std::size_t i, long long left) {
    tick();
    if (i == slots_.size()) return left == 0 && realizable();
    if (left > hi_suffix_[i]) return false;
    long long top = std::min(slots_[i].hi, left);
    if (i > 0 && slots_[i - 1].cls == slots_[i].cls) top = std::min(top, e_[i - 1]);
    for (long long e = top; e >= slots_[i].lo; --e) {
      e_[i] = e;
      if (distribute(i + 1, left - e)) return true;
    }
    return false;
  }

  bool realizable() const {
    std::vector<int> inner(slots_.size());
    for (std::size_t i = 0; i < slots_.size(); ++i) inner[i] = static_cast<int>(slots_[i].value - e_[i]);
    if (!is_graphical(DegreeSequence(std::move(inner)))) return false;
    std::vector<long long> e = e_;
    std::sort(e.begin(), e.end(), std::greater<>());
    long long prefix = 0;
    for (std::size_t t = 1; t <= e.size() && e[t - 1] > 0; ++t) {
      prefix += e[t - 1];
      long long room = 0;
      for (long long cap : caps_) room += std::min(cap, static_cast<long long>(t));
      if (prefix > room) return false;
    }
    return true;
  }

  // Builds the graph for the current U and e and makes it the incumbent.
  void record(std::size_t k, const std::vector<std::size_t>& take, long long value) {
    std::vector<std::size_t> u;
    std::vector<std::size_t> w;
    for (std::size_t c = 0; c < values_.size(); ++c)
      for (std::size_t t = 0; t < members_[c].size(); ++t) (t < take[c] ? u : w).push_back(members_[c][t]);

    GraphBuilder b(n_);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t c = a + 1; c < u.size(); ++c) b.add_edge(u[a], u[c]);

    std::vector<int> inner(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) inner[i] = static_cast<int>(slots_[i].value - e_[i]);
    for (auto [x, y] : realize_graphical(DegreeSequence(inner)).edges()) b.add_edge(w[x], w[y]);

    // largest demand first, each to the U vertices with most room left
    std::vector<long long> room(u.size());
    for (std::size_t a = 0; a < u.size(); ++a) room[a] = d_[u[a]] - static_cast<long long>(k);
    std::vector<std::size_t> by_demand(w.size());
    std::iota(by_demand.begin(), by_demand.end(), std::size_t{0});
    std::stable_sort(by_demand.begin(), by_demand.end(), [&](auto x, auto y) { return e_[x] > e_[y]; });
    std::vector<std::size_t> targets(u.size());
    for (std::size_t i : by_demand) {
      std::iota(targets.begin(), targets.end(), std::size_t{0});
      std::stable_sort(targets.begin(), targets.end(), [&](auto x, auto y) { return room[x] > room[y]; });
      for (long long t = 0; t < e_[i]; ++t) {
        const std::size_t a = targets[static_cast<std::size_t>(t)];
        if (room[a] <= 0) throw std::logic_error("worst-stable bipartite completion failed");
        --room[a];
        b.add_edge(w[i], u[a]);
      }
    }
    best_graph_ = b.build();
    best_value_ = value;
  }

  struct Slot {
    std::size_t cls;
    long long value;
    long long lo;
    long long hi;
  };

  std::size_t n_;
  std::uint64_t budget_;
  const DegreeSequence& d_;
  std::vector<long long> values_;  // distinct targets, descending
  std::vector<std::vector<std::size_t>> members_;
  std::vector<long long> caps_;
  std::vector<Slot> slots_;
  std::vector<long long> hi_suffix_;
  std::vector<long long> e_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  long long best_value_ = kNoValue;
  Graph best_graph_;
};

// Stable starting graph: the best of a few seeded runs of the link-formation
// process, which always ends in a stable graph.
Graph stable_incumbent(const DegreeSequence& d) {
  constexpr std::uint64_t kStarts = 32;
  Graph best = simulate_once(d, 0);
  long long best_value = total_deficit(d, best);
  for (std::uint64_t s = 1; s < kStarts; ++s) {
    Graph g = simulate_once(d, s);
    const long long v = total_deficit(d, g);
    if (v > best_value) {
      best_value = v;
      best = std::move(g);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration (Gray code over the edge set).

struct Enumerator {
  explicit Enumerator(std::size_t n) : n(n) {
    if (n > kBruteForceMaxNodes) {
      throw std::invalid_argument("brute force supports n <= " +
                                  std::to_string(kBruteForceMaxNodes) + ", got " +
                                  std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }

  // Key ordering matches lexicographic order of the 0/1 edge vector.
  std::uint64_t key_bit(std::size_t k) const { return std::uint64_t{1} << (pairs.size() - 1 - k); }

  Graph graph_from_key(std::uint64_t key) const {
    GraphBuilder b(n);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (key & key_bit(k)) b.add_edge(pairs[k].first, pairs[k].second);
    return b.build();
  }

  // Calls visit(deg, adjmask, key) for all 2^E graphs.
  template <typename Visit>
  void for_each(Visit&& visit) const {
    std::vector<int> deg(n, 0);
    std::vector<std::uint32_t> adj(n, 0);
    std::uint64_t key = 0;
    visit(deg, adj, key);
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t g = 1; g < total; ++g) {
      const auto k = static_cast<std::size_t>(std::countr_zero(g));
      const auto [i, j] = pairs[k];
      const bool on = (adj[i] >> j & 1U) == 0;
      adj[i] ^= 1U << j;
      adj[j] ^= 1U << i;
      deg[i] += on ? 1 : -1;
      deg[j] += on ? 1 : -1;
      key ^= key_bit(k);
      visit(deg, adj, key);
    }
  }

  std::size_t n;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

}  // namespace

long long closest_graph_lower_bound(const DegreeSequence& d) {
  return closest_lower_bound(std::vector<long long>(d.begin(), d.end()));
}

SolveResult best_graph_degree(const DegreeSequence& d, const SolverOptions& options) {
  if (is_graphical(d)) {
    SolveResult out;
    out.graph = realize_graphical(d);
    out.objective = 0.0;
    return out;
  }
  const Graph start = greedy_closest(d);
  ClosestGraphSearch search(d, options);
  return search.run(start);
}

SolveResult worst_stable_degree(const DegreeSequence& d, const SolverOptions& options) {
  WorstStableSearch search(d, options);
  return search.run(stable_incumbent(d));
}

SolveResult stable_graph_link_bias(const LinkBiasGame& game) {
  SolveResult out;
  out.graph = graph_from_strategies(strategies_from_costs(game));
  out.objective = communal_value(payoffs_link_bias(game, out.graph));
  return out;
}

SolveResult best_graph_link_bias(const LinkBiasGame& game) {
  GraphBuilder b(game.size());
  for (std::size_t i = 0; i < game.size(); ++i)
    for (std::size_t j = i + 1; j < game.size(); ++j)
      if (game.cost(i, j) + game.cost(j, i) < 0.0) b.add_edge(i, j);
  SolveResult out;
  out.graph = b.build();
  out.objective = communal_value(payoffs_link_bias(game, out.graph));
  return out;
}

CostConstruction construct_cost_matrix(const DegreeSequence& d, const SolverOptions& options) {
  // Taking s = x satisfies s_ij + s_ji - 1 <= x_ij <= min(s_ij, s_ji) with
  // equality, and x already attains the unconstrained l1 minimum.
  SolveResult closest = best_graph_degree(d, options);
  CostConstruction out;
  out.graph = closest.graph;
  out.strategies = StrategyMatrix::from_graph(closest.graph);
  const std::size_t n = d.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) c[i][j] = out.strategies.desires(i, j) ? -1.0 : 1.0;
  out.game = LinkBiasGame(c);
  out.distance = l1_distance(degree_sequence(out.graph), d);
  out.optimal = closest.optimal;
  return out;
}

SolveResult brute_force_worst_stable(const DegreeSequence& d) {
  Enumerator e(d.size());
  const std::size_t n = d.size();
  long long best = kNoValue;
  std::uint64_t best_key = 0;
  std::uint64_t count = 0;
  e.for_each([&](const std::vector<int>& deg, const std::vector<std::uint32_t>& adj,
                 std::uint64_t key) {
    ++count;
    std::uint32_t deficient = 0;
    long long value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (deg[i] > d[i]) return;
      if (deg[i] < d[i]) deficient |= 1U << i;
      value += d[i] - deg[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(deficient >> i & 1U)) continue;
      if (deficient & ~adj[i] & ~(1U << i)) return;
    }
    if (value > best || (value == best && key < best_key)) {
      best = value;
      best_key = key;
    }
  });
  SolveResult out;
  out.graph = e.graph_from_key(best_key);
  out.objective = static_cast<double>(best);
  out.nodes_explored = count;
  out.deficits = deficit_vector(d, out.graph);
  return out;
}

SolveResult brute_force_best_graph(const DegreeSequence& d) {
  Enumerator e(d.size());
  const std::size_t n = d.size();
  long long best = std::numeric_limits<long long>::max();
  std::uint64_t best_key = 0;
  std::uint64_t count = 0;
  e.for_each([&](const std::vector<int>& deg, const std::vector<std::uint32_t>&, std::uint64_t key) {
    ++count;
    long long value = 0;
    for (std::size_t i = 0; i < n; ++i) value += std::abs(deg[i] - d[i]);
    if (value < best || (value == best && key < best_key)) {
      best = value;
      best_key = key;
    }
  });
  SolveResult out;
  out.graph = e.graph_from_key(best_key);
  out.objective = static_cast<double>(best);
  out.nodes_explored = count;
  return out;
}

}  // namespace netgame
