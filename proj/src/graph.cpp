#include "distsbm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "distsbm/errors.hpp"

namespace distsbm {

SparseGraph::SparseGraph(std::size_t n, std::span<const Edge> edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InvalidGraph("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                         std::to_string(e.v) + ")");
    }
    if (e.u == e.v) throw InvalidGraph("self-loop at vertex " + std::to_string(e.u));
    list.push_back(canonical(e.u, e.v));
  }
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());

  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : list) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adj_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Sorted edge order fills each list in increasing order for the u side; the
  // v side needs a sort afterwards.
  for (const Edge& e : list) {
    adj_[fill[e.u]++] = e.v;
    adj_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

bool SparseGraph::has_edge(Vertex u, Vertex v) const noexcept {
  if (u >= n() || v >= n()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> SparseGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m());
  for (Vertex u = 0; u < n(); ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

SparseGraph graph_union(const SparseGraph& a, const SparseGraph& b) {
  if (a.n() != b.n()) throw InvalidGraph("graph_union: vertex counts differ");
  std::vector<Edge> all = a.edges();
  auto eb = b.edges();
  all.insert(all.end(), eb.begin(), eb.end());
  return SparseGraph(a.n(), all);
}

// ---------------------------------------------------------------------------

SparseSymMatrix::SparseSymMatrix(std::size_t n, const std::vector<std::vector<Entry>>& upper_rows) {
  if (upper_rows.size() != n) throw InvalidGraph("SparseSymMatrix: row count mismatch");
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t kept = 0;
    for (const Entry& e : upper_rows[i]) kept += (e.value != 0);
    offsets_[i + 1] = offsets_[i] + kept;
  }
  entries_.reserve(offsets_[n]);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex prev = 0;
    bool first = true;
    for (const Entry& e : upper_rows[i]) {
      if (e.col < i || e.col >= n) throw InvalidGraph("SparseSymMatrix: entry outside upper triangle");
      if (!first && e.col <= prev) throw InvalidGraph("SparseSymMatrix: row not strictly sorted");
      prev = e.col;
      first = false;
      if (e.value != 0) entries_.push_back(e);
    }
  }
}

SparseSymMatrix SparseSymMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets) {
  for (Triplet& t : triplets) {
    if (t.row >= n || t.col >= n) throw InvalidGraph("from_triplets: index out of range");
    if (t.col < t.row) std::swap(t.row, t.col);
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::vector<Entry>> rows(n);
  for (const Triplet& t : triplets) {
    auto& row = rows[t.row];
    if (!row.empty() && row.back().col == t.col) {
      row.back().value += t.value;
    } else {
      row.push_back({t.col, t.value});
    }
  }
  return SparseSymMatrix(n, rows);
}

std::size_t SparseSymMatrix::nnz() const noexcept {
  std::size_t total = 0;
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    for (const Entry& e : upper_row(static_cast<Vertex>(i))) total += (e.col == i) ? 1 : 2;
  }
  return total;
}

std::int32_t SparseSymMatrix::at(Vertex i, Vertex j) const noexcept {
  if (j < i) std::swap(i, j);
  if (i >= n()) return 0;
  auto row = upper_row(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Entry& e, Vertex c) { return e.col < c; });
  return (it != row.end() && it->col == j) ? it->value : 0;
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t size = n();
  std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(size), 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    double acc = 0.0;
    const double xi = x[i];
    for (const Entry& e : upper_row(static_cast<Vertex>(i))) {
      const double v = e.value;
      acc += v * x[e.col];
      if (e.col != i) y[e.col] += v * xi;
    }
    y[i] += acc;
  }
}

std::int32_t SparseSymMatrix::max_value() const noexcept {
  std::int32_t best = 0;
  for (const Entry& e : entries_) best = std::max(best, e.value);
  return best;
}

std::int32_t SparseSymMatrix::min_value() const noexcept {
  std::int32_t best = 0;
  for (const Entry& e : entries_) best = std::min(best, e.value);
  return best;
}

SparseSymMatrix SparseSymMatrix::abs() const {
  SparseSymMatrix out = *this;
  for (Entry& e : out.entries_) e.value = std::abs(e.value);
  return out;
}

std::vector<SparseSymMatrix::Triplet> SparseSymMatrix::full_entries() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (Vertex i = 0; i < n(); ++i) {
    for (const Entry& e : upper_row(i)) {
      out.push_back({i, e.col, e.value});
      if (e.col != i) out.push_back({e.col, i, e.value});
    }
  }
  std::sort(out.begin(), out.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

// ---------------------------------------------------------------------------

BallExplorer::BallExplorer(const SparseGraph& g)
    : g_(&g), stamp_(g.n(), 0), dist_(g.n(), -1) {}

void BallExplorer::explore(std::span<const Vertex> sources, int radius) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  order_.clear();
  layer_offsets_.clear();
  layer_offsets_.push_back(0);
  for (Vertex s : sources) {
    if (stamp_[s] == epoch_) continue;
    stamp_[s] = epoch_;
    dist_[s] = 0;
    order_.push_back(s);
  }
  layer_offsets_.push_back(order_.size());
  for (int t = 1; t <= radius; ++t) {
    const std::size_t begin = layer_offsets_[static_cast<std::size_t>(t) - 1];
    const std::size_t end = layer_offsets_[static_cast<std::size_t>(t)];
    if (begin == end) break;
    for (std::size_t k = begin; k < end; ++k) {
      for (Vertex w : g_->neighbors(order_[k])) {
        if (stamp_[w] != epoch_) {
          stamp_[w] = epoch_;
          dist_[w] = t;
          order_.push_back(w);
        }
      }
    }
    layer_offsets_.push_back(order_.size());
  }
}

std::span<const Vertex> BallExplorer::layer(int t) const noexcept {
  if (t < 0 || t >= layers()) return {};
  const auto ut = static_cast<std::size_t>(t);
  return {order_.data() + layer_offsets_[ut], order_.data() + layer_offsets_[ut + 1]};
}

ShellProfile bfs_shells(const SparseGraph& g, Vertex v, int ell,
                        std::optional<std::span<const Label>> sigma, std::size_t r) {
  BallExplorer ex(g);
  ex.explore(v, ell);
  ShellProfile p;
  p.root = v;
  p.shells.resize(static_cast<std::size_t>(ell) + 1);
  p.sizes.assign(static_cast<std::size_t>(ell) + 1, 0);
  if (sigma) p.type_counts.assign(static_cast<std::size_t>(ell) + 1, std::vector<std::size_t>(r, 0));
  for (int t = 0; t <= ell; ++t) {
    auto layer = ex.layer(t);
    auto ut = static_cast<std::size_t>(t);
    p.shells[ut].assign(layer.begin(), layer.end());
    std::sort(p.shells[ut].begin(), p.shells[ut].end());
    p.sizes[ut] = layer.size();
    if (sigma) {
      for (Vertex w : layer) ++p.type_counts[ut].at((*sigma)[w]);
    }
  }
  return p;
}

std::vector<std::size_t> set_shell_sizes(const SparseGraph& g, std::span<const Vertex> sources,
                                         int ell) {
  BallExplorer ex(g);
  ex.explore(sources, ell);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(ell) + 1, 0);
  for (int t = 0; t < ex.layers() && t <= ell; ++t) sizes[static_cast<std::size_t>(t)] = ex.layer(t).size();
  return sizes;
}

SparseSymMatrix adjacency_matrix(const SparseGraph& g) {
  std::vector<std::vector<SparseSymMatrix::Entry>> rows(g.n());
  for (Vertex u = 0; u < g.n(); ++u) {
    for (Vertex v : g.neighbors(u)) {
      if (v > u) rows[u].push_back({v, 1});
    }
  }
  return SparseSymMatrix(g.n(), rows);
}

SparseSymMatrix distance_matrix(const SparseGraph& g, int ell) {
  if (ell < 1) throw InvalidParams("distance_matrix: ell must be >= 1");
  BallExplorer ex(g);
  std::vector<std::vector<SparseSymMatrix::Entry>> rows(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    ex.explore(v, ell);
    auto& row = rows[v];
    for (Vertex w : ex.layer(ell)) {
      if (w > v) row.push_back({w, 1});
    }
    std::sort(row.begin(), row.end(),
              [](const SparseSymMatrix::Entry& a, const SparseSymMatrix::Entry& b) { return a.col < b.col; });
  }
  return SparseSymMatrix(g.n(), rows);
}

namespace {

struct WalkCounter {
  const SparseGraph& g;
  int ell;
  std::int32_t cap;
  Vertex source = 0;
  std::vector<char> on_path;
  std::vector<std::int32_t> count;
  std::vector<Vertex> touched;

  void dfs(Vertex u, int depth) {
    if (depth == ell) {
      if (u > source) {
        if (count[u] == 0) touched.push_back(u);
        if (count[u] < cap) ++count[u];
      }
      return;
    }
    on_path[u] = 1;
    for (Vertex w : g.neighbors(u)) {
      if (!on_path[w]) dfs(w, depth + 1);
    }
    on_path[u] = 0;
  }
};

}  // namespace

PathExpansion path_expansion_matrix(const SparseGraph& g, int ell, std::int32_t cap) {
  if (ell < 1) throw InvalidParams("path_expansion_matrix: ell must be >= 1");
  if (cap < 1) throw InvalidParams("path_expansion_matrix: cap must be >= 1");
  WalkCounter wc{g, ell, cap, 0, std::vector<char>(g.n(), 0), std::vector<std::int32_t>(g.n(), 0), {}};
  PathExpansion out;
  out.cap = cap;
  std::vector<std::vector<SparseSymMatrix::Entry>> rows(g.n());
  for (Vertex i = 0; i < g.n(); ++i) {
    wc.source = i;
    wc.touched.clear();
    wc.dfs(i, 0);
    std::sort(wc.touched.begin(), wc.touched.end());
    auto& row = rows[i];
    row.reserve(wc.touched.size());
    for (Vertex j : wc.touched) {
      row.push_back({j, wc.count[j]});
      if (wc.count[j] >= cap) out.saturated.push_back({i, j});
      wc.count[j] = 0;
    }
  }
  out.matrix = SparseSymMatrix(g.n(), rows);
  return out;
}

SparseSymMatrix delta_matrix(const SparseSymMatrix& bl, const SparseSymMatrix& dl) {
  if (bl.n() != dl.n()) throw InvalidParams("delta_matrix: dimension mismatch");
  std::vector<std::vector<SparseSymMatrix::Entry>> rows(bl.n());
  for (Vertex i = 0; i < bl.n(); ++i) {
    auto b = bl.upper_row(i);
    auto d = dl.upper_row(i);
    std::size_t p = 0, q = 0;
    auto& row = rows[i];
    while (p < b.size() || q < d.size()) {
      Vertex col;
      std::int32_t value;
      if (q == d.size() || (p < b.size() && b[p].col < d[q].col)) {
        col = b[p].col;
        value = b[p++].value;
      } else if (p == b.size() || d[q].col < b[p].col) {
        col = d[q].col;
        value = -d[q++].value;
      } else {
        col = b[p].col;
        value = b[p++].value - d[q++].value;
      }
      if (value < 0) {
        throw NegativeEntry("delta_matrix: negative entry at (" + std::to_string(i) + "," +
                            std::to_string(col) + ")");
      }
      if (value != 0) row.push_back({col, value});
    }
  }
  return SparseSymMatrix(bl.n(), rows);
}

TangleReport tangle_free_check(const SparseGraph& g, int ell) {
  if (ell < 1) throw InvalidParams("tangle_free_check: ell must be >= 1");
  TangleReport report;
  BallExplorer ex(g);
  for (Vertex v = 0; v < g.n(); ++v) {
    ex.explore(v, ell);
    std::size_t endpoint_hits = 0;
    for (Vertex u : ex.ball()) {
      for (Vertex w : g.neighbors(u)) endpoint_hits += (ex.distance(w) >= 0);
    }
    // The induced subgraph of a BFS ball is connected.
    const std::size_t edges = endpoint_hits / 2;
    const std::size_t excess = edges + 1 - ex.ball().size();
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > 1) {
      report.tangle_free = false;
      report.offending.push_back(v);
    }
  }
  return report;
}

ShellGrowth shell_growth_report(const SparseGraph& g, int ell, double alpha) {
  if (!(alpha > 1.0)) throw InvalidParams("shell_growth_report: alpha must exceed 1");
  ShellGrowth out;
  out.top_shell.assign(g.n(), 0);
  BallExplorer ex(g);
  for (Vertex v = 0; v < g.n(); ++v) {
    ex.explore(v, ell);
    for (int t = 1; t <= ell; ++t) {
      const double ratio = static_cast<double>(ex.layer(t).size()) / std::pow(alpha, t);
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.argmax_vertex = v;
        out.argmax_t = t;
      }
    }
    const std::size_t top = ex.layer(ell).size();
    out.top_shell[v] = top;
    out.sum_sq_top += static_cast<double>(top) * static_cast<double>(top);
  }
  return out;
}

namespace {

struct CycleSearch {
  const SparseGraph& g;
  int max_len;
  Vertex start = 0;
  std::vector<char> on_path;
  std::vector<Vertex> path;
  std::vector<std::vector<Vertex>> found;

  void dfs(Vertex u) {
    for (Vertex w : g.neighbors(u)) {
      if (w == start) {
        // Each cycle is reached in both directions; keep one.
        if (path.size() >= 3 && path[1] < path.back()) found.push_back(path);
      } else if (w > start && !on_path[w] && static_cast<int>(path.size()) < max_len) {
        on_path[w] = 1;
        path.push_back(w);
        dfs(w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  }
};

}  // namespace

std::vector<std::vector<Vertex>> find_short_cycles(const SparseGraph& g, int max_len) {
  CycleSearch cs{g, max_len, 0, std::vector<char>(g.n(), 0), {}, {}};
  for (Vertex s = 0; s < g.n(); ++s) {
    cs.start = s;
    cs.path.assign(1, s);
    cs.on_path[s] = 1;
    cs.dfs(s);
    cs.on_path[s] = 0;
  }
  return std::move(cs.found);
}

}  // namespace distsbm
