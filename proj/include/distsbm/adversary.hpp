#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distsbm/graph.hpp"
#include "distsbm/model.hpp"
#include "distsbm/spectral.hpp"

namespace distsbm {

/// Edge edits of an adversary. `affected` is the sorted set of endpoints of
/// all edits and must not exceed `gamma_budget` vertices.
struct Perturbation {
  std::size_t gamma_budget = 0;
  std::vector<Edge> added;
  std::vector<Edge> removed;
  std::vector<Vertex> affected;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

/// Canonicalizes and sorts the edit lists and fills `affected`.
Perturbation make_perturbation(std::size_t gamma_budget, std::vector<Edge> added,
                               std::vector<Edge> removed);

/// Sorted endpoint set of the edit lists.
std::vector<Vertex> affected_vertices(std::span<const Edge> added, std::span<const Edge> removed);

/// Swaps the roles of added and removed edges.
Perturbation inverse(const Perturbation& p);

/// Throws InconsistentEdit when an added edge exists, a removed edge is
/// missing, an edge is both added and removed, or `affected` disagrees with the
/// edits; BudgetExceeded when |affected| > gamma_budget.
SparseGraph apply_perturbation(const SparseGraph& g, const Perturbation& p);

struct PlantedClique {
  SparseGraph graph;
  Perturbation perturbation;  // affected = endpoints of added edges, a subset of members
  std::vector<Vertex> members;
};

/// Picks gamma distinct vertices uniformly and adds every missing pair among
/// them. Throws InvalidParams when gamma > n.
PlantedClique plant_clique(const SparseGraph& g, std::size_t gamma, std::uint64_t seed);

struct RobustnessBudget {
  double gamma_safe = 0.0;   // tau^ell / ln n
  double gamma_break = 0.0;  // tau^ell
};

RobustnessBudget robustness_budget(const SpectralProfile& profile, int ell, double n);

struct QkBound {
  std::vector<std::size_t> shells;  // S_t(K), t = 0..ell
  double exact = 0.0;               // spectral radius of Q_K
  double row_sum = 0.0;
  /// max_t S_t(K) / (|K| ln(n) alpha^t); zero when alpha was not supplied.
  double growth_ratio = 0.0;
  bool degenerate = false;          // K covers every vertex
};

/// Bound on rho(D~^ell - D^ell) for edits touching only K. Throws
/// InvalidParams when K is empty.
QkBound qk_bound(const SparseGraph& g, std::span<const Vertex> k_set, int ell, double alpha = 0.0);

/// Same bound for an actual edit: shells are measured in the union of the
/// graphs before and after, where every changed distance is witnessed.
QkBound qk_bound(const SparseGraph& before, const SparseGraph& after, std::span<const Vertex> k_set,
                 int ell, double alpha = 0.0);

/// D~^ell - D^ell for the graphs before and after an edit.
SparseSymMatrix distance_change(const SparseGraph& before, const SparseGraph& after, int ell);

enum class RogueMode { greedy, wired };

struct RogueCertificate {
  RogueMode mode = RogueMode::greedy;
  std::vector<Vertex> k_set;
  std::vector<Vertex> shell;  // vertices at distance exactly ell from K
  /// Sparse test vector: gamma^{-1/2} on K, S^{-1/2} on the shell.
  std::vector<std::pair<Vertex, double>> vector;
  double norm_sq = 0.0;
  double quadratic = 0.0;    // v^T D v
  double rayleigh = 0.0;     // v^T D v / ||v||^2
  double closed_form = 0.0;  // 2 sqrt(gamma S)
  /// |<v, xi_k>| / (||v|| ||xi_k||) against the top-r0 eigenvectors of the
  /// unperturbed D^ell.
  std::vector<double> cosines;
  /// Wired mode only: edges from every vertex of K to the anchor.
  std::optional<Perturbation> wiring;
  std::optional<Vertex> anchor;
  /// Wired mode only: leading eigenvalues of the perturbed D^ell.
  std::vector<double> perturbed_lambda;
};

/// Test vector for a given K on matrix `dl` (D^ell of `g`).
RogueCertificate rogue_vector(const SparseGraph& g, const SparseSymMatrix& dl,
                              std::span<const Vertex> k_set, int ell,
                              std::span<const EigenPair> signal);

struct RogueOptions {
  RogueMode mode = RogueMode::greedy;
  double epsilon = 0.2;
  EigenSolverOptions solver;
};

/// Greedy: K is built from the top n^{1-eps} vertices by S_ell, pairwise more
/// than 2 ell apart; throws GreedyExhausted when fewer than gamma qualify.
/// Wired: K is gamma isolated vertices joined to the vertex a maximizing
/// S_{ell-1}(a), so every K-to-shell pair sits at distance exactly ell; throws
/// GreedyExhausted when too few isolated vertices exist.
RogueCertificate build_rogue_certificate(const SparseGraph& g, const SpectralProfile& profile, int ell,
                                         std::size_t gamma, const RogueOptions& opts = {});

const char* to_string(RogueMode mode) noexcept;

}  // namespace distsbm
