#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distsbm/graph.hpp"
#include "distsbm/model.hpp"
#include "distsbm/spectral.hpp"

namespace distsbm {

/// K = r tau sqrt(d tau / (tau - 1)). Throws AtOrBelowThreshold when tau <= 1.
double explicit_K(std::size_t r, double tau, int d);

/// Copy of v scaled to squared norm n, sign canonicalized. Throws ZeroVector.
std::vector<double> normalize_for_algorithm(std::span<const double> v, std::size_t n);

/// Probability that v joins the positive side: 1/2 + xi/(2K) when |xi| <= K,
/// exactly 1/2 otherwise.
inline double plus_probability(double xi, double K) noexcept {
  return std::fabs(xi) <= K ? 0.5 + xi / (2.0 * K) : 0.5;
}

struct LabelAssignment {
  std::vector<Label> labels;  // 1 = positive side, 0 = negative side
  std::size_t source = 1;     // index of the eigenpair used
  double K_used = 0.0;
  std::uint64_t seed = 0;
};

/// One independent coin per vertex; the coin of vertex v is the v-th draw of
/// the stream derive_seed(seed, "labels"), so the result does not depend on
/// evaluation order.
LabelAssignment label_two_way(std::span<const double> xi, double K, std::uint64_t seed);

struct OverlapScore {
  double value = 0.0;
  /// best_permutation[a] = estimated label matched to true label a.
  std::vector<Label> best_permutation;
};

/// max over permutations p of (1/n) #{v : sigma_hat(v) = p(sigma(v))} minus
/// max_k pi_k. Labels of both vectors must lie in [0, pi.size()); r <= 8.
OverlapScore overlap(std::span<const Label> sigma, std::span<const Label> sigma_hat,
                     std::span<const double> pi);

enum class MatrixKind { distance, path };

const char* to_string(MatrixKind kind) noexcept;
MatrixKind parse_matrix_kind(const std::string& s);

struct DetectOptions {
  MatrixKind kind = MatrixKind::distance;
  std::optional<double> K_override;
  std::size_t eigenpairs = 4;
  std::int32_t path_cap = 1 << 20;
  EigenSolverOptions solver;
};

struct DetectResult {
  LabelAssignment assignment;
  std::vector<EigenPair> pairs;
  std::optional<SeparationReport> separation;  // present when enough pairs converged
  std::vector<std::string> warnings;
  bool tie_resolved = false;  // |lambda_2| candidates of opposite sign were compared with mu_2^ell
  double ms_build = 0.0;
  double ms_eig = 0.0;
  double ms_label = 0.0;
};

/// Two-way labeling from D^ell (or B^ell): second eigenvector by |eigenvalue|,
/// normalized to squared norm n, labeled with K = explicit_K(r, tau, d) unless
/// overridden. At or below the threshold without an override, K = max |xi(v)|
/// and the warning "KFallback" is recorded.
DetectResult detect(const SparseGraph& g, const SpectralProfile& profile, int ell,
                    std::uint64_t seed, const DetectOptions& opts = {});

}  // namespace distsbm
