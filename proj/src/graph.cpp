#include "netgame/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netgame {

namespace {

constexpr std::size_t kWordBits = 64;

void require_vertex(std::size_t n, Vertex v, const char* what) {
  if (v >= n) {
    throw std::out_of_range(std::string(what) + ": vertex " + std::to_string(v) +
                            " out of range for n=" + std::to_string(n));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DegreeSequence

DegreeSequence::DegreeSequence(std::vector<int> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) {
      throw std::invalid_argument("degree sequence entry " + std::to_string(i) +
                                  " is negative");
    }
  }
}

DegreeSequence::DegreeSequence(std::initializer_list<int> values)
    : DegreeSequence(std::vector<int>(values)) {}

long long DegreeSequence::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0LL);
}

DegreeSequence DegreeSequence::without(std::size_t v) const {
  require_vertex(values_.size(), v, "DegreeSequence::without");
  std::vector<int> out = values_;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(v));
  return DegreeSequence(std::move(out));
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::size_t n)
    : n_(n), words_((n + kWordBits - 1) / kWordBits), bits_(n * words_, 0) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  GraphBuilder b(n);
  for (const auto& [i, j] : edges) b.add_edge(i, j);
  return b.build();
}

Graph Graph::from_edges(std::size_t n, std::initializer_list<Edge> edges) {
  return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
}

Graph Graph::from_matrix(const std::vector<std::vector<int>>& matrix) {
  const std::size_t n = matrix.size();
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw std::invalid_argument("adjacency row " + std::to_string(i) + " has length " +
                                  std::to_string(matrix[i].size()) + ", expected " +
                                  std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0) {
      throw std::invalid_argument("adjacency diagonal entry " + std::to_string(i) +
                                  " is nonzero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const int v = matrix[i][j];
      if (v != 0 && v != 1) {
        throw std::invalid_argument("adjacency entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not 0/1");
      }
      if (v != matrix[j][i]) {
        throw std::invalid_argument("adjacency matrix is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (v == 1 && i < j) g.set(i, j, true);
    }
  }
  g.check_invariants();
  return g;
}

Graph Graph::complete(std::size_t n) {
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) b.add_edge(i, j);
  return b.build();
}

bool Graph::bit(Vertex i, Vertex j) const {
  return (bits_[i * words_ + j / kWordBits] >> (j % kWordBits)) & 1U;
}

void Graph::set(Vertex i, Vertex j, bool value) {
  const std::uint64_t mask_j = std::uint64_t{1} << (j % kWordBits);
  const std::uint64_t mask_i = std::uint64_t{1} << (i % kWordBits);
  auto& wij = bits_[i * words_ + j / kWordBits];
  auto& wji = bits_[j * words_ + i / kWordBits];
  if (value) {
    wij |= mask_j;
    wji |= mask_i;
  } else {
    wij &= ~mask_j;
    wji &= ~mask_i;
  }
}

bool Graph::has_edge(Vertex i, Vertex j) const {
  require_vertex(n_, i, "Graph::has_edge");
  require_vertex(n_, j, "Graph::has_edge");
  return bit(i, j);
}

std::size_t Graph::degree(Vertex i) const {
  require_vertex(n_, i, "Graph::degree");
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += std::popcount(bits_[i * words_ + w]);
  return d;
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (auto w : bits_) total += std::popcount(w);
  return total / 2;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (Vertex i = 0; i < n_; ++i)
    for (Vertex j = i + 1; j < n_; ++j)
      if (bit(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<Vertex> Graph::neighbors(Vertex i) const {
  require_vertex(n_, i, "Graph::neighbors");
  std::vector<Vertex> out;
  for (Vertex j = 0; j < n_; ++j)
    if (bit(i, j)) out.push_back(j);
  return out;
}

Graph Graph::with_edge(Vertex i, Vertex j) const {
  return GraphBuilder(*this).add_edge(i, j).build();
}

Graph Graph::without_edge(Vertex i, Vertex j) const {
  return GraphBuilder(*this).remove_edge(i, j).build();
}

Graph Graph::without_vertex(Vertex v) const {
  require_vertex(n_, v, "Graph::without_vertex");
  Graph out(n_ - 1);
  auto shift = [v](Vertex u) { return u < v ? u : u - 1; };
  for (const auto& [i, j] : edges()) {
    if (i == v || j == v) continue;
    out.set(shift(i), shift(j), true);
  }
  out.check_invariants();
  return out;
}

void Graph::check_invariants() const {
  if (bits_.size() != n_ * words_) throw std::logic_error("graph storage size mismatch");
  for (Vertex i = 0; i < n_; ++i) {
    if (bit(i, i)) throw std::logic_error("graph has a self-loop at " + std::to_string(i));
    for (Vertex j = i + 1; j < n_; ++j) {
      if (bit(i, j) != bit(j, i)) {
        throw std::logic_error("graph adjacency is not symmetric at (" + std::to_string(i) +
                               "," + std::to_string(j) + ")");
      }
    }
    if (n_ % kWordBits != 0 && words_ > 0) {
      const std::uint64_t pad = ~std::uint64_t{0} << (n_ % kWordBits);
      if (bits_[i * words_ + words_ - 1] & pad) throw std::logic_error("graph padding bits set");
    }
  }
}

// ---------------------------------------------------------------------------
// GraphBuilder

GraphBuilder& GraphBuilder::add_edge(Vertex i, Vertex j) {
  require_vertex(graph_.n_, i, "GraphBuilder::add_edge");
  require_vertex(graph_.n_, j, "GraphBuilder::add_edge");
  if (i == j) throw std::invalid_argument("self-loop at vertex " + std::to_string(i));
  graph_.set(i, j, true);
  return *this;
}

GraphBuilder& GraphBuilder::remove_edge(Vertex i, Vertex j) {
  require_vertex(graph_.n_, i, "GraphBuilder::remove_edge");
  require_vertex(graph_.n_, j, "GraphBuilder::remove_edge");
  if (i != j) graph_.set(i, j, false);
  return *this;
}

Graph GraphBuilder::build() const {
  graph_.check_invariants();
  return graph_;
}

// ---------------------------------------------------------------------------
// Degree sequences

DegreeSequence degree_sequence(const Graph& g) {
  std::vector<int> d(g.size());
  for (Vertex i = 0; i < g.size(); ++i) d[i] = static_cast<int>(g.degree(i));
  return DegreeSequence(std::move(d));
}

long long l1_distance(const DegreeSequence& a, const DegreeSequence& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l1_distance: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  long long total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::llabs(static_cast<long long>(a[i]) - b[i]);
  return total;
}

bool is_graphical(const DegreeSequence& d) {
  const std::size_t n = d.size();
  if (d.sum() % 2 != 0) return false;
  std::vector<long long> s(d.begin(), d.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  if (n > 0 && s.front() > static_cast<long long>(n) - 1) return false;
  // prefix sums of the sorted sequence
  std::vector<long long> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i];
  for (std::size_t k = 1; k <= n; ++k) {
    long long rhs = static_cast<long long>(k) * static_cast<long long>(k - 1);
    for (std::size_t i = k; i < n; ++i) rhs += std::min<long long>(s[i], static_cast<long long>(k));
    if (prefix[k] > rhs) return false;
  }
  return true;
}

Graph realize_graphical(const DegreeSequence& d) {
  if (!is_graphical(d)) throw std::invalid_argument("degree sequence is not graphical");
  const std::size_t n = d.size();
  std::vector<long long> residual(d.begin(), d.end());
  GraphBuilder b(n);
  std::vector<Vertex> order(n);
  while (n > 0) {
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex c) { return residual[a] > residual[c]; });
    const Vertex hub = order.front();
    const long long k = residual[hub];
    if (k == 0) break;
    residual[hub] = 0;
    for (long long t = 1; t <= k; ++t) {
      const Vertex v = order[static_cast<std::size_t>(t)];
      if (residual[v] == 0) throw std::logic_error("Havel-Hakimi ran out of partners");
      b.add_edge(hub, v);
      --residual[v];
    }
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Centrality

CentralityResult eigenvector_centrality(const Graph& g, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigenvector_centrality: tol must be positive");
  const std::size_t n = g.size();
  if (n == 0) throw std::invalid_argument("eigenvector_centrality: empty graph");

  CentralityResult result;
  result.scores.assign(n, 0.0);
  if (g.edge_count() == 0) {
    result.degenerate = true;
    result.converged = true;
    return result;
  }

  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex i = 0; i < n; ++i) adj[i] = g.neighbors(i);

  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int it = 1; it <= max_iterations; ++it) {
    double total = 0.0;
    for (Vertex i = 0; i < n; ++i) {
      double acc = v[i];
      for (Vertex j : adj[i]) acc += v[j];
      next[i] = acc;
      total += acc;
    }
    for (Vertex i = 0; i < n; ++i) next[i] /= total;
    // relative change is measured on the support; isolated vertices decay to 0
    double support_change = 0.0;
    for (Vertex i = 0; i < n; ++i)
      if (!adj[i].empty()) support_change = std::max(support_change, std::abs(next[i] - v[i]) / next[i]);
    std::swap(v, next);
    result.iterations = it;
    if (support_change < tol) {
      result.converged = true;
      break;
    }
  }

  double total = 0.0;
  for (Vertex i = 0; i < n; ++i) {
    if (adj[i].empty()) v[i] = 0.0;
    total += v[i];
  }
  for (Vertex i = 0; i < n; ++i) result.scores[i] = v[i] / total;
  return result;
}

}  // namespace netgame
