#include "distsbm/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "distsbm/errors.hpp"
#include "distsbm/rng.hpp"

namespace distsbm {

namespace {

void canonicalize_edits(std::vector<Edge>& edges) {
  for (Edge& e : edges) {
    if (e.u == e.v) throw InconsistentEdit("perturbation: self-loop edit");
    e = canonical(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

std::vector<Vertex> affected_vertices(std::span<const Edge> added, std::span<const Edge> removed) {
  std::vector<Vertex> out;
  out.reserve(2 * (added.size() + removed.size()));
  for (const Edge& e : added) {
    out.push_back(e.u);
    out.push_back(e.v);
  }
  for (const Edge& e : removed) {
    out.push_back(e.u);
    out.push_back(e.v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Perturbation make_perturbation(std::size_t gamma_budget, std::vector<Edge> added,
                               std::vector<Edge> removed) {
  canonicalize_edits(added);
  canonicalize_edits(removed);
  Perturbation p;
  p.gamma_budget = gamma_budget;
  p.affected = affected_vertices(added, removed);
  p.added = std::move(added);
  p.removed = std::move(removed);
  return p;
}

Perturbation inverse(const Perturbation& p) {
  Perturbation q = p;
  std::swap(q.added, q.removed);
  return q;
}

SparseGraph apply_perturbation(const SparseGraph& g, const Perturbation& p) {
  const std::size_t n = g.n();
  for (const Edge& e : p.added) {
    if (e.u >= n || e.v >= n || e.u == e.v) throw InconsistentEdit("perturbation: invalid added edge");
    if (g.has_edge(e.u, e.v)) throw InconsistentEdit("perturbation: added edge already present");
  }
  for (const Edge& e : p.removed) {
    if (e.u >= n || e.v >= n || e.u == e.v) throw InconsistentEdit("perturbation: invalid removed edge");
    if (!g.has_edge(e.u, e.v)) throw InconsistentEdit("perturbation: removed edge absent");
  }
  std::vector<Edge> add = p.added, rem = p.removed;
  canonicalize_edits(add);
  canonicalize_edits(rem);
  std::vector<Edge> both;
  std::set_intersection(add.begin(), add.end(), rem.begin(), rem.end(), std::back_inserter(both));
  if (!both.empty()) throw InconsistentEdit("perturbation: edge both added and removed");
  if (affected_vertices(add, rem) != p.affected) {
    throw InconsistentEdit("perturbation: affected set does not match the edits");
  }
  if (p.affected.size() > p.gamma_budget) {
    throw BudgetExceeded("perturbation: " + std::to_string(p.affected.size()) +
                         " affected vertices exceed budget " + std::to_string(p.gamma_budget));
  }
  std::vector<Edge> edges = g.edges();
  std::vector<Edge> kept;
  kept.reserve(edges.size() + add.size());
  std::set_difference(edges.begin(), edges.end(), rem.begin(), rem.end(), std::back_inserter(kept));
  kept.insert(kept.end(), add.begin(), add.end());
  return SparseGraph(n, kept);
}

PlantedClique plant_clique(const SparseGraph& g, std::size_t gamma, std::uint64_t seed) {
  const std::size_t n = g.n();
  if (gamma > n) throw InvalidParams("plant_clique: gamma exceeds n");
  // Partial Fisher-Yates.
  SplitMix64 rng(derive_seed(seed, "clique"));
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < gamma; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<Vertex> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(gamma));
  std::sort(chosen.begin(), chosen.end());
  std::vector<Edge> add;
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    for (std::size_t b = a + 1; b < chosen.size(); ++b) {
      if (!g.has_edge(chosen[a], chosen[b])) add.push_back({chosen[a], chosen[b]});
    }
  }
  PlantedClique out;
  out.perturbation = make_perturbation(gamma, std::move(add), {});
  out.graph = apply_perturbation(g, out.perturbation);
  out.members = std::move(chosen);
  return out;
}

RobustnessBudget robustness_budget(const SpectralProfile& profile, int ell, double n) {
  if (!(profile.tau > 1.0)) throw AtOrBelowThreshold("robustness_budget: tau must exceed 1");
  if (!(n > 1.0)) throw InvalidParams("robustness_budget: need n > 1");
  RobustnessBudget b;
  b.gamma_break = std::pow(profile.tau, ell);
  b.gamma_safe = b.gamma_break / std::log(n);
  return b;
}

namespace {

QkBound qk_from_shells(std::vector<std::size_t> shells, std::size_t k_size, std::size_t n, double alpha) {
  QkBound out;
  const QcBound q = qc_bound(shells);
  out.exact = q.exact;
  out.row_sum = q.row_sum;
  out.degenerate = k_size >= n;
  if (alpha > 1.0 && n > 1) {
    const double base = static_cast<double>(k_size) * std::log(static_cast<double>(n));
    for (std::size_t t = 0; t < shells.size(); ++t) {
      out.growth_ratio = std::max(out.growth_ratio, static_cast<double>(shells[t]) /
                                                        (base * std::pow(alpha, static_cast<double>(t))));
    }
  }
  out.shells = std::move(shells);
  return out;
}

std::vector<Vertex> checked_set(std::span<const Vertex> k_set, std::size_t n) {
  if (k_set.empty()) throw InvalidParams("qk_bound: empty vertex set");
  std::vector<Vertex> k(k_set.begin(), k_set.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  if (k.back() >= n) throw InvalidParams("qk_bound: vertex out of range");
  return k;
}

}  // namespace

QkBound qk_bound(const SparseGraph& g, std::span<const Vertex> k_set, int ell, double alpha) {
  const auto k = checked_set(k_set, g.n());
  return qk_from_shells(set_shell_sizes(g, k, ell), k.size(), g.n(), alpha);
}

QkBound qk_bound(const SparseGraph& before, const SparseGraph& after, std::span<const Vertex> k_set,
                 int ell, double alpha) {
  if (before.n() != after.n()) throw InvalidParams("qk_bound: graphs differ in size");
  const SparseGraph u = graph_union(before, after);
  const auto k = checked_set(k_set, u.n());
  return qk_from_shells(set_shell_sizes(u, k, ell), k.size(), u.n(), alpha);
}

SparseSymMatrix distance_change(const SparseGraph& before, const SparseGraph& after, int ell) {
  if (before.n() != after.n()) throw InvalidParams("distance_change: graphs differ in size");
  std::vector<SparseSymMatrix::Triplet> t;
  for (const auto& e : distance_matrix(after, ell).full_entries()) {
    if (e.row <= e.col) t.push_back(e);
  }
  for (const auto& e : distance_matrix(before, ell).full_entries()) {
    if (e.row <= e.col) t.push_back({e.row, e.col, -e.value});
  }
  return SparseSymMatrix::from_triplets(before.n(), std::move(t));
}

const char* to_string(RogueMode mode) noexcept { return mode == RogueMode::greedy ? "greedy" : "wired"; }

RogueCertificate rogue_vector(const SparseGraph& g, const SparseSymMatrix& dl,
                              std::span<const Vertex> k_set, int ell,
                              std::span<const EigenPair> signal) {
  if (k_set.empty()) throw InvalidParams("rogue_vector: empty vertex set");
  RogueCertificate c;
  c.k_set.assign(k_set.begin(), k_set.end());
  std::sort(c.k_set.begin(), c.k_set.end());
  BallExplorer ex(g);
  ex.explore(c.k_set, ell);
  if (ex.layers() > ell) {
    auto layer = ex.layer(ell);
    c.shell.assign(layer.begin(), layer.end());
    std::sort(c.shell.begin(), c.shell.end());
  }
  if (c.shell.empty()) throw DegenerateOperator("rogue_vector: no vertex at distance ell from K");
  const double gamma = static_cast<double>(c.k_set.size());
  const double s = static_cast<double>(c.shell.size());
  const double vk = 1.0 / std::sqrt(gamma), vs = 1.0 / std::sqrt(s);

  std::vector<double> dense(g.n(), 0.0);
  for (Vertex v : c.k_set) dense[v] = vk;
  for (Vertex v : c.shell) dense[v] = vs;
  for (Vertex v : c.k_set) c.vector.emplace_back(v, vk);
  for (Vertex v : c.shell) c.vector.emplace_back(v, vs);
  std::sort(c.vector.begin(), c.vector.end());
  c.norm_sq = 0.0;
  for (const auto& [v, x] : c.vector) c.norm_sq += x * x;

  std::vector<double> dv(g.n(), 0.0);
  dl.multiply(dense, dv);
  for (const auto& [v, x] : c.vector) c.quadratic += x * dv[v];
  c.rayleigh = c.quadratic / c.norm_sq;
  c.closed_form = 2.0 * std::sqrt(gamma * s);

  for (const EigenPair& p : signal) {
    double dot = 0.0, nx = 0.0;
    for (double x : p.vector) nx += x * x;
    for (const auto& [v, x] : c.vector) dot += x * p.vector[v];
    c.cosines.push_back(std::fabs(dot) / std::sqrt(c.norm_sq * nx));
  }
  return c;
}

RogueCertificate build_rogue_certificate(const SparseGraph& g, const SpectralProfile& profile, int ell,
                                         std::size_t gamma, const RogueOptions& opts) {
  if (gamma < 1) throw InvalidParams("build_rogue_certificate: gamma must be positive");
  if (!(opts.epsilon > 0.0 && opts.epsilon < 0.25)) {
    throw InvalidParams("build_rogue_certificate: epsilon must lie in (0, 1/4)");
  }
  if (ell < 1) throw InvalidParams("build_rogue_certificate: ell must be positive");
  const std::size_t n = g.n();
  const SparseSymMatrix dl = distance_matrix(g, ell);
  const std::size_t r0 = static_cast<std::size_t>(std::max(profile.r0, 1));
  EigenResult er = top_eigenpairs(as_operator(dl), n, std::min(n, r0), opts.solver);
  if (er.pairs.size() < std::min(n, r0)) throw DegenerateOperator("build_rogue_certificate: " + er.diagnostics);

  if (opts.mode == RogueMode::greedy) {
    const ShellGrowth sg = shell_growth_report(g, ell, std::max(profile.alpha, 1.0 + 1e-12));
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return sg.top_shell[a] > sg.top_shell[b]; });
    const auto top = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 - opts.epsilon))));
    std::vector<char> blocked(n, 0);
    std::vector<Vertex> k;
    BallExplorer ex(g);
    for (std::size_t i = 0; i < top && k.size() < gamma; ++i) {
      const Vertex x = order[i];
      if (blocked[x]) continue;
      k.push_back(x);
      ex.explore(x, 2 * ell);
      for (Vertex y : ex.ball()) blocked[y] = 1;
    }
    if (k.size() < gamma) {
      throw GreedyExhausted("build_rogue_certificate: only " + std::to_string(k.size()) +
                                " separated vertices among the top candidates",
                            k.size());
    }
    RogueCertificate c = rogue_vector(g, dl, k, ell, er.pairs);
    c.mode = RogueMode::greedy;
    return c;
  }

  // Wired mode.
  std::vector<Vertex> isolated;
  for (Vertex v = 0; v < n && isolated.size() < gamma; ++v) {
    if (g.degree(v) == 0) isolated.push_back(v);
  }
  if (isolated.size() < gamma) {
    throw GreedyExhausted("build_rogue_certificate: only " + std::to_string(isolated.size()) +
                              " isolated vertices available for wiring",
                          isolated.size());
  }
  Vertex anchor = 0;
  std::size_t best = 0;
  bool found = false;
  BallExplorer ex(g);
  for (Vertex a = 0; a < n; ++a) {
    if (g.degree(a) == 0) continue;
    ex.explore(a, ell - 1);
    const std::size_t s = ex.layers() > ell - 1 ? ex.layer(ell - 1).size() : 0;
    if (!found || s > best) {
      anchor = a;
      best = s;
      found = true;
    }
  }
  if (!found) throw DegenerateOperator("build_rogue_certificate: graph has no edges");
  std::vector<Edge> wires;
  for (Vertex k : isolated) wires.push_back(canonical(k, anchor));
  Perturbation p = make_perturbation(gamma + 1, std::move(wires), {});
  const SparseGraph wired = apply_perturbation(g, p);
  const SparseSymMatrix dw = distance_matrix(wired, ell);
  RogueCertificate c = rogue_vector(wired, dw, isolated, ell, er.pairs);
  c.mode = RogueMode::wired;
  c.anchor = anchor;
  c.wiring = std::move(p);
  EigenSolverOptions sopts = opts.solver;
  EigenResult pr = top_eigenpairs(as_operator(dw), n, std::min(n, r0 + 2), sopts);
  for (const EigenPair& q : pr.pairs) c.perturbed_lambda.push_back(q.value);
  return c;
}

}  // namespace distsbm
