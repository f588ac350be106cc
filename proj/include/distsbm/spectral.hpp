#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "distsbm/graph.hpp"
#include "distsbm/model.hpp"

namespace distsbm {

/// y = A x for a symmetric operator A; x and y have length n.
using SymmetricOperator = std::function<void(std::span<const double>, std::span<double>)>;

inline SymmetricOperator as_operator(const SparseSymMatrix& a) {
  return [&a](std::span<const double> x, std::span<double> y) { a.multiply(x, y); };
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, first nonzero coordinate positive
  double residual = 0.0;       // ||A x - value x||
};

struct EigenSolverOptions {
  double tol = 1e-8;
  int max_iter = 5000;  // operator applications
  std::uint64_t seed = 0;
};

struct EigenResult {
  std::vector<EigenPair> pairs;  // sorted by |value| desc, ties by value desc
  bool converged = true;         // false: only `pairs` (the converged prefix) is returned
  int matvecs = 0;
  int restarts = 0;
  std::string diagnostics;
};

/// Largest-magnitude eigenpairs of a symmetric operator by thick-restart
/// Lanczos with full reorthogonalization. A pair is accepted once
/// ||A x - lambda x|| <= tol * max(1, |lambda|). Throws DegenerateOperator when
/// n == 0.
EigenResult top_eigenpairs(const SymmetricOperator& op, std::size_t n, std::size_t k,
                           const EigenSolverOptions& opts = {});

/// Flips v so that its first coordinate that is not negligible is positive.
void canonicalize_sign(std::span<double> v);

struct SeparationReport {
  std::vector<double> lambda;     // top eigenvalues, |.| descending
  std::vector<double> mu_powers;  // mu_k^ell for k < r0
  double bulk_scale = 0.0;        // alpha^{ell/2}
  std::vector<double> ratios;     // lambda_k / mu_k^ell for k < r0
  double bulk_ratio = 0.0;        // |lambda_{r0}| / alpha^{ell/2}
  double bulk_limit = 0.0;        // log(n)^2 alpha^{ell/2}
  bool informative_ok = true;     // every ratio within [1/factor, factor]
  bool bulk_ok = true;            // |lambda_{r0}| <= bulk_limit
};

/// Compares measured eigenvalues of D^ell or B^ell with the mean progeny
/// predictions. Needs at least r0 + 1 eigenvalues.
SeparationReport separation_report(std::span<const EigenPair> pairs, const SpectralProfile& profile,
                                   int ell, std::size_t n, double factor = 10.0);

struct QcBound {
  double exact = 0.0;    // spectral radius of the shell matrix
  double row_sum = 0.0;  // max_t sum_{u <= ell - t} sqrt(S_t S_u)
};

/// Spectral radius of the (ell+1) x (ell+1) anti-triangular matrix with
/// entries sqrt(S_t S_u) for t + u <= ell, and its row-sum bound.
QcBound qc_bound(std::span<const std::size_t> shell_sizes);

struct DeltaRadius {
  double rho = 0.0;                // spectral radius of Delta^ell
  std::int32_t max_entry = 0;
  bool tangle_free = true;
  std::size_t cycles = 0;          // simple cycles of length <= 2 ell
  std::size_t clusters = 0;        // cycle groups with overlapping ell-neighbourhoods
  double max_cycle_qc_exact = 0.0; // max over single cycles
  double max_cluster_qc_exact = 0.0;
  double max_cluster_qc_row_sum = 0.0;
  /// max_entry * max_cluster_qc_exact; dominates rho on every graph.
  double cycle_bound = 0.0;
  double harness_bound = 0.0;      // 10 log(n) alpha^{ell/2}
  std::vector<Edge> saturated;     // B^ell pairs that hit the cap
};

/// Measures rho(B^ell - D^ell) and the cycle-neighbourhood bound on it.
DeltaRadius delta_radius_check(const SparseGraph& g, int ell, double alpha,
                               std::int32_t cap = 1 << 20, const EigenSolverOptions& opts = {});

/// 2 sqrt(2d) ||perturbation|| / gap. Throws ZeroGap when gap <= 0.
double davis_kahan_bound(double gap, double perturbation_norm, int d);

}  // namespace distsbm
