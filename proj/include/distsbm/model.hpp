#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "distsbm/graph.hpp"

namespace distsbm {

/// Parameters of a stochastic block model: r blocks, symmetric connectivity W
/// (edge probability W_ab / n), block prior pi, n vertices.
struct SbmParams {
  std::size_t r = 2;
  Eigen::MatrixXd W;
  Eigen::VectorXd pi;
  std::size_t n = 0;

  /// Throws InvalidParams when any invariant fails.
  void validate() const;
  bool uniform_prior(double tol = 1e-12) const;
};

/// W = a on the diagonal, b elsewhere.
Eigen::MatrixXd planted_partition(std::size_t r, double a, double b);
SbmParams uniform_sbm(const Eigen::MatrixXd& W, std::size_t n);

struct SpectralProfile {
  Eigen::MatrixXd M;        // mean progeny matrix Pi W
  double alpha = 0.0;       // common column sum (Perron root if irregular)
  Eigen::VectorXd mu;       // eigenvalues ordered by |.| descending
  /// Column k is the left eigenvector of M for mu[k], Euclidean norm 1, first
  /// nonzero coordinate positive.
  Eigen::MatrixXd phi;
  double tau = 0.0;         // mu[1]^2 / mu[0]
  int r0 = 0;               // number of k with mu[k]^2 > mu[0]
  int d = 0;                // multiplicity of mu[1]
  bool degree_regular = false;
  bool subcritical = false;
  bool uniform_prior = false;
  /// Smallest t with M^t entrywise positive.
  int regularity_power = 0;
  std::vector<std::string> warnings;

  std::size_t r() const noexcept { return static_cast<std::size_t>(mu.size()); }
  /// Left eigenvector k as a column vector.
  Eigen::VectorXd left_vector(std::size_t k) const { return phi.col(static_cast<Eigen::Index>(k)); }
};

/// Throws NotPositiveRegular; records degree irregularity and subcriticality.
SpectralProfile derive_spectral_profile(const SbmParams& params);

struct DegreeRegularity {
  bool regular = false;
  Eigen::VectorXd column_sums;
  Eigen::VectorXd residuals;  // column_sums - alpha
};

DegreeRegularity check_degree_regularity(const SpectralProfile& profile);

struct TypedGraphSample {
  SparseGraph graph;
  std::vector<Label> sigma;
  std::uint64_t seed = 0;
};

/// Draws sigma i.i.d. from pi, then each pair independently with probability
/// min(W_ab / n, 1). Deterministic in `seed`.
TypedGraphSample sample_graph(const SbmParams& params, std::uint64_t seed);

struct EllChoice {
  int ell = 1;
  bool overridden = false;
  bool clamped = false;      // floor(kappa log_alpha n) was below 1
  bool theoretical = false;  // kappa < 1/12 and no clamp or override
};

inline constexpr double kDefaultKappa = 1.0 / 13.0;

/// ell = max(1, floor(kappa ln n / ln alpha)) unless overridden. `n` is a real
/// so that astronomically large sizes can be evaluated.
EllChoice choose_ell(const SpectralProfile& profile, double n, double kappa,
                     std::optional<int> override_ell = std::nullopt);

}  // namespace distsbm
