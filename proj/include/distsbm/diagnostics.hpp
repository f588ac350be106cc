#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "distsbm/graph.hpp"
#include "distsbm/model.hpp"
#include "distsbm/spectral.hpp"

namespace distsbm {

/// White-box statistics of the typed shells Y_ell(v); uses the true labels.
struct LocalMomentReport {
  int ell = 0;
  /// N(v, k) = <phi_k, Y_ell(v)> / mu_k^ell; moments(j, k) = (1/n) sum_v N(v, j) N(v, k).
  Eigen::MatrixXd moments;
  std::vector<double> diagonal;
  /// max over j != k of |moments(j, k)| / sqrt(moments(j, j) moments(k, k)).
  double max_cross_ratio = 0.0;
  /// |<xi_k, N_k>| / (||xi_k|| ||N_k||) for the top eigenvectors of D^ell, k < r0.
  std::vector<double> alignment;
  /// 1 / (r (tau - 1)); NaN unless the prior is uniform.
  double rho_reference = 0.0;
  /// sum_i pi_i E[X_i^2] = tau / (r (tau - 1)) under a uniform prior; NaN otherwise.
  double rho_second_moment = 0.0;
};

/// When `pairs` is empty the top r0 eigenpairs of D^ell are computed here.
LocalMomentReport local_moment_report(const SparseGraph& g, std::span<const Label> sigma,
                                      const SpectralProfile& profile, int ell,
                                      std::span<const EigenPair> pairs = {},
                                      const EigenSolverOptions& opts = {});

}  // namespace distsbm
