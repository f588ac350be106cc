#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace distsbm {

using Vertex = std::uint32_t;
using Label = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Returns the edge with endpoints ordered u < v.
inline Edge canonical(Vertex a, Vertex b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Immutable simple undirected graph in compressed-row form. Neighbor lists are
/// strictly increasing; construction drops duplicate edges and rejects
/// self-loops or out-of-range endpoints with InvalidGraph.
class SparseGraph {
 public:
  SparseGraph() = default;
  SparseGraph(std::size_t n, std::span<const Edge> edges);

  std::size_t n() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t m() const noexcept { return adj_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const noexcept;

  /// Edge list with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend bool operator==(const SparseGraph&, const SparseGraph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adj_;
};

/// Union of the edge sets of two graphs on the same vertex set.
SparseGraph graph_union(const SparseGraph& a, const SparseGraph& b);

/// Symmetric sparse integer matrix. Only the upper triangle (col >= row) is
/// stored; the lower triangle is implied.
class SparseSymMatrix {
 public:
  struct Entry {
    Vertex col;
    std::int32_t value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  struct Triplet {
    Vertex row;
    Vertex col;
    std::int32_t value;
  };

  SparseSymMatrix() = default;
  /// Builds from rows of upper-triangle entries; each row must be sorted by
  /// column with col >= row. Zero values are dropped.
  SparseSymMatrix(std::size_t n, const std::vector<std::vector<Entry>>& upper_rows);
  /// Accepts entries from either triangle; (i,j) and (j,i) are the same slot
  /// and duplicates are summed.
  static SparseSymMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);

  std::size_t n() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  /// Number of stored (upper triangle) entries.
  std::size_t stored_nnz() const noexcept { return entries_.size(); }
  /// Number of nonzeros of the full symmetric matrix.
  std::size_t nnz() const noexcept;

  std::span<const Entry> upper_row(Vertex i) const noexcept {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }
  std::int32_t at(Vertex i, Vertex j) const noexcept;

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  std::int32_t max_value() const noexcept;
  std::int32_t min_value() const noexcept;
  SparseSymMatrix abs() const;

  /// All nonzeros of the full matrix, sorted by (row, col).
  std::vector<Triplet> full_entries() const;

  friend bool operator==(const SparseSymMatrix& a, const SparseSymMatrix& b) {
    return a.offsets_ == b.offsets_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

/// Truncated breadth-first exploration with reusable scratch space. After
/// explore(), layer(t) lists the vertices at distance exactly t from the
/// source set, for t up to the requested radius.
class BallExplorer {
 public:
  explicit BallExplorer(const SparseGraph& g);

  void explore(std::span<const Vertex> sources, int radius);
  void explore(Vertex source, int radius) { explore(std::span<const Vertex>(&source, 1), radius); }

  /// Number of layers produced by the last explore (radius + 1 at most).
  int layers() const noexcept { return static_cast<int>(layer_offsets_.size()) - 1; }
  std::span<const Vertex> layer(int t) const noexcept;
  std::span<const Vertex> ball() const noexcept { return order_; }
  /// Distance found by the last explore, or -1 when outside the ball.
  int distance(Vertex v) const noexcept { return stamp_[v] == epoch_ ? dist_[v] : -1; }

 private:
  const SparseGraph* g_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::vector<Vertex> order_;
  std::vector<std::size_t> layer_offsets_;
  std::uint32_t epoch_ = 0;
};

struct ShellProfile {
  Vertex root = 0;
  std::vector<std::vector<Vertex>> shells;  // shells[t] = vertices at distance t
  std::vector<std::size_t> sizes;           // S_t
  /// type_counts[t][i] = number of type-i vertices at distance t; empty when
  /// no labels were supplied.
  std::vector<std::vector<std::size_t>> type_counts;
};

/// Exact distance layers 0..ell around v. Layers past the component are empty.
ShellProfile bfs_shells(const SparseGraph& g, Vertex v, int ell,
                        std::optional<std::span<const Label>> sigma = std::nullopt,
                        std::size_t r = 0);

/// Number of vertices at distance exactly t from the set, t = 0..ell.
std::vector<std::size_t> set_shell_sizes(const SparseGraph& g, std::span<const Vertex> sources,
                                         int ell);

/// Adjacency matrix as a 0/1 symmetric matrix.
SparseSymMatrix adjacency_matrix(const SparseGraph& g);

/// D^ell: entry (i,j) is 1 iff the graph distance between i and j is exactly
/// ell. Built by one truncated BFS per vertex.
SparseSymMatrix distance_matrix(const SparseGraph& g, int ell);

struct PathExpansion {
  SparseSymMatrix matrix;
  /// Pairs (i < j) whose count reached the cap.
  std::vector<Edge> saturated;
  std::int32_t cap = 0;
};

/// B^ell: entry (i,j) counts self-avoiding walks of length ell between i and j,
/// saturated at `cap`. Depth-limited DFS with on-path marking.
PathExpansion path_expansion_matrix(const SparseGraph& g, int ell, std::int32_t cap);

/// Delta^ell = B^ell - D^ell. Throws NegativeEntry when some D entry is not
/// covered by B.
SparseSymMatrix delta_matrix(const SparseSymMatrix& bl, const SparseSymMatrix& dl);

struct TangleReport {
  bool tangle_free = true;
  /// Vertices whose radius-ell ball has more than one independent cycle.
  std::vector<Vertex> offending;
  /// Largest excess (edges - vertices + 1) seen over all balls.
  std::size_t max_excess = 0;
};

/// Checks that every radius-ell ball induces a subgraph with cycle rank <= 1.
TangleReport tangle_free_check(const SparseGraph& g, int ell);

struct ShellGrowth {
  /// max over t in 1..ell and v of S_t(v) / alpha^t.
  double max_ratio = 0.0;
  Vertex argmax_vertex = 0;
  int argmax_t = 0;
  /// sum over v of S_ell(v)^2.
  double sum_sq_top = 0.0;
  /// S_ell(v) for every v.
  std::vector<std::size_t> top_shell;
};

ShellGrowth shell_growth_report(const SparseGraph& g, int ell, double alpha);

/// Simple cycles of length 3..max_len, each listed once as a vertex sequence
/// starting at its smallest vertex.
std::vector<std::vector<Vertex>> find_short_cycles(const SparseGraph& g, int max_len);

}  // namespace distsbm
