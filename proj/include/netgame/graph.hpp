#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace netgame {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

/// Degree counts for n nodes. Entries are non-negative; values above n-1 are
/// legal because targets may be unrealizable.
class DegreeSequence {
 public:
  DegreeSequence() = default;
  explicit DegreeSequence(std::vector<int> values);
  DegreeSequence(std::initializer_list<int> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  int operator[](std::size_t i) const { return values_[i]; }
  int at(std::size_t i) const { return values_.at(i); }
  long long sum() const;

  const std::vector<int>& values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  /// Copy with entry `v` deleted.
  DegreeSequence without(std::size_t v) const;

  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;

 private:
  std::vector<int> values_;
};

/// Simple undirected graph over n labeled nodes stored as a dense symmetric
/// bit matrix. Values are immutable; use GraphBuilder or the with_/without_
/// helpers to derive modified copies.
class Graph {
 public:
  Graph() = default;
  /// Empty graph on n nodes.
  explicit Graph(std::size_t n);

  static Graph from_edges(std::size_t n, std::span<const Edge> edges);
  static Graph from_edges(std::size_t n, std::initializer_list<Edge> edges);
  /// Accepts a square 0/1 matrix; throws std::invalid_argument unless it is
  /// symmetric, binary and has a zero diagonal.
  static Graph from_matrix(const std::vector<std::vector<int>>& matrix);
  static Graph complete(std::size_t n);

  std::size_t size() const { return n_; }
  bool has_edge(Vertex i, Vertex j) const;
  std::size_t degree(Vertex i) const;
  std::size_t edge_count() const;
  /// Edges with i < j in lexicographic order.
  std::vector<Edge> edges() const;
  std::vector<Vertex> neighbors(Vertex i) const;

  Graph with_edge(Vertex i, Vertex j) const;
  Graph without_edge(Vertex i, Vertex j) const;
  /// Deletes row and column v; remaining vertices keep their relative order.
  Graph without_vertex(Vertex v) const;

  /// Throws std::logic_error if symmetry, zero diagonal or padding bits are
  /// violated. Called after every construction and mutation.
  void check_invariants() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class GraphBuilder;
  void set(Vertex i, Vertex j, bool value);
  bool bit(Vertex i, Vertex j) const;

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Mutable staging area for a Graph.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) : graph_(n) {}
  explicit GraphBuilder(Graph g) : graph_(std::move(g)) {}

  std::size_t size() const { return graph_.size(); }
  GraphBuilder& add_edge(Vertex i, Vertex j);
  GraphBuilder& remove_edge(Vertex i, Vertex j);
  bool has_edge(Vertex i, Vertex j) const { return graph_.has_edge(i, j); }
  Graph build() const;

 private:
  Graph graph_;
};

DegreeSequence degree_sequence(const Graph& g);

/// Sum of absolute componentwise differences. Throws std::invalid_argument on
/// length mismatch.
long long l1_distance(const DegreeSequence& a, const DegreeSequence& b);

/// Erdős–Gallai test.
bool is_graphical(const DegreeSequence& d);

/// Havel–Hakimi construction. Ties are broken towards the smaller index, so
/// the result is deterministic. Throws std::invalid_argument if d is not
/// graphical.
Graph realize_graphical(const DegreeSequence& d);

struct CentralityResult {
  std::vector<double> scores;
  bool degenerate = false;  // graph has no edges; scores are all zero
  bool converged = false;
  int iterations = 0;
};

/// Perron vector of the adjacency matrix, l1-normalized, isolated vertices
/// pinned to zero. Iterates on A + I, which shares A's dominant eigenvector
/// but converges on bipartite graphs where plain power iteration oscillates.
CentralityResult eigenvector_centrality(const Graph& g, double tol = 1e-12,
                                        int max_iterations = 100000);

}  // namespace netgame
