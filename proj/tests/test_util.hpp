#pragma once

#include <vector>

#include "distsbm/graph.hpp"

namespace testutil {

using distsbm::Edge;
using distsbm::SparseGraph;
using distsbm::Vertex;

inline SparseGraph path_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return SparseGraph(n, e);
}

inline SparseGraph cycle_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.push_back(distsbm::canonical(v, (v + 1) % n));
  return SparseGraph(n, e);
}

inline SparseGraph star_graph(Vertex leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.push_back({0, v});
  return SparseGraph(leaves + 1, e);
}

/// Complete `arity`-ary tree of the given depth, root 0, breadth-first order.
inline SparseGraph complete_tree(Vertex arity, int depth) {
  std::vector<Edge> e;
  Vertex total = 1, level = 1;
  for (int d = 0; d < depth; ++d) {
    level *= arity;
    total += level;
  }
  for (Vertex v = 1; v < total; ++v) e.push_back({(v - 1) / arity, v});
  return SparseGraph(total, e);
}

inline SparseGraph complete_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) e.push_back({a, b});
  }
  return SparseGraph(n, e);
}

}  // namespace testutil
