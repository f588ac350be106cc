#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "distsbm/graph.hpp"
#include "distsbm/model.hpp"

namespace distsbm {

/// Multitype Galton-Watson process: a type-j particle has Poi(M(i, j))
/// children of type i, so E[Z_{t+1} | Z_t] = M Z_t.
struct GwConfig {
  Eigen::MatrixXd M;
  Eigen::VectorXd root_law;  // distribution of the root type
  int depth = 8;
  std::size_t runs = 100000;
  std::uint64_t seed = 0;
  double population_cap = 1e7;  // particles per generation

  void validate() const;
};

Eigen::VectorXd point_mass(std::size_t r, std::size_t j);
Eigen::VectorXd uniform_law(std::size_t r);

/// Population vectors Z_0..Z_depth of every run. Run k uses the stream
/// derive_seed(derive_seed(seed, "gw"), k). Runs whose population exceeds the
/// cap stop growing and are flagged.
struct GwSimulation {
  std::size_t r = 0;
  int depth = 0;
  std::size_t runs = 0;
  std::vector<Label> roots;
  std::vector<double> counts;  // [run][t][i], row-major
  std::vector<char> capped;
  std::size_t capped_runs = 0;

  double z(std::size_t run, int t, std::size_t i) const {
    return counts[(run * static_cast<std::size_t>(depth + 1) + static_cast<std::size_t>(t)) * r + i];
  }
};

GwSimulation simulate_population(const GwConfig& cfg);

/// Largest |eigenvalue| of M.
double perron_root(const Eigen::MatrixXd& M);

struct MartingaleSample {
  std::vector<double> values;  // X = mu^{-T} <phi, Z_T> per kept run
  std::vector<Label> roots;    // root type per kept run
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double expected = 0.0;       // <phi, nu>
  std::vector<double> mean_by_depth;
  std::vector<double> stderr_by_depth;
  std::vector<std::size_t> type_count;
  std::vector<double> type_mean;
  std::vector<double> type_variance;   // Var(X_T | root type)
  double var_sum_raw = 0.0;            // sum of type_variance
  double var_sum_raw_stderr = 0.0;
  /// Var of the limit per root type: c = v_T + mu^{-2T} E_hat c, where
  /// E_hat(j, i) is the sample mean of Z_T(i) from root j.
  std::vector<double> type_variance_limit;
  double var_sum = 0.0;
  std::size_t capped_runs = 0;
};

/// Throws AtOrBelowThreshold unless mu^2 exceeds the Perron root of M.
MartingaleSample martingale_limit_check(const GwConfig& cfg, const Eigen::VectorXd& phi, double mu);

struct ClosedForms {
  Eigen::VectorXd c2;  // (I - M^T/mu^2)^{-1} (M^T/mu^2) phi^2
  Eigen::VectorXd m2;  // (I - M^T/mu^2)^{-1} phi^2
  double var_sum = 0.0;
  double sqmean_sum = 0.0;
  double tau = 0.0;    // mu^2 / alpha
};

/// Throws SingularSystem when mu^2 <= alpha.
ClosedForms moment_closed_forms(const Eigen::MatrixXd& M, double alpha, const Eigen::VectorXd& phi,
                                double mu);
ClosedForms moment_closed_forms(const SpectralProfile& profile, const Eigen::VectorXd& phi, double mu);

struct CumulantCheck {
  int order = 1;
  std::vector<double> lhs;        // j-th cumulant of X_T per root type
  std::vector<double> rhs;        // mu^{-j} sum_l M(l, i) m_j(X_{T-1} | root l)
  std::vector<double> residual;   // lhs - rhs
  std::vector<double> std_error;  // bootstrap
  double residual_inf = 0.0;
  bool within_3se = true;
  std::size_t capped_runs = 0;
};

/// One step down the tree gives the cumulant relation exactly between depths
/// T and T-1. `runs` trees are grown from each root type; order <= 3, with
/// unbiased k-statistics for the cumulants.
CumulantCheck cumulant_relation_check(const Eigen::MatrixXd& M, const Eigen::VectorXd& phi, double mu,
                                      int order, std::size_t runs, std::uint64_t seed, int depth = 8,
                                      std::size_t bootstrap = 200);

struct MarkovCheck {
  double eta = 0.0;
  double threshold = 0.0;            // sqrt(tau / (eta (tau - 1)))
  std::vector<double> tail_by_type;  // empirical P(|X| > threshold | root type)
  bool holds = true;
};

MarkovCheck markov_bound_check(const MartingaleSample& sample, double tau, double eta);

struct ProgenyCheck {
  double max_abs_z = 0.0;  // largest |mean residual| / s.e. over depths and types
  int worst_depth = 0;
  bool within_3se = true;
};

/// Tests E[Z_{t+1} - M Z_t] = 0 in sample mean at every depth.
ProgenyCheck mean_progeny_check(const GwSimulation& sim, const Eigen::MatrixXd& M);

}  // namespace distsbm
