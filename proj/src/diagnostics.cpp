#include "distsbm/diagnostics.hpp"

#include <cmath>

#include "distsbm/errors.hpp"

namespace distsbm {

LocalMomentReport local_moment_report(const SparseGraph& g, std::span<const Label> sigma,
                                      const SpectralProfile& profile, int ell,
                                      std::span<const EigenPair> pairs, const EigenSolverOptions& opts) {
  const std::size_t n = g.n();
  const std::size_t r = profile.r();
  if (sigma.size() != n) throw InvalidParams("local_moment_report: label vector has the wrong length");
  if (ell < 1) throw InvalidParams("local_moment_report: ell must be positive");
  for (Label s : sigma) {
    if (s >= r) throw LabelOutOfRange("local_moment_report: label outside [0, r)");
  }
  const auto R = static_cast<Eigen::Index>(r);
  Eigen::VectorXd scale(R);
  for (Eigen::Index k = 0; k < R; ++k) scale(k) = std::pow(profile.mu(k), ell);

  Eigen::MatrixXd N(static_cast<Eigen::Index>(n), R);
  BallExplorer ex(g);
  Eigen::VectorXd y(R);
  for (Vertex v = 0; v < n; ++v) {
    ex.explore(v, ell);
    y.setZero();
    if (ex.layers() > ell) {
      for (Vertex w : ex.layer(ell)) y(sigma[w]) += 1.0;
    }
    N.row(v) = (profile.phi.transpose() * y).cwiseQuotient(scale).transpose();
  }

  LocalMomentReport out;
  out.ell = ell;
  out.moments = N.transpose() * N / static_cast<double>(n);
  for (Eigen::Index k = 0; k < R; ++k) out.diagonal.push_back(out.moments(k, k));
  for (Eigen::Index j = 0; j < R; ++j) {
    for (Eigen::Index k = 0; k < R; ++k) {
      const double denom = std::sqrt(out.moments(j, j) * out.moments(k, k));
      if (j != k && denom > 0.0) out.max_cross_ratio = std::max(out.max_cross_ratio, std::fabs(out.moments(j, k)) / denom);
    }
  }

  const std::size_t r0 = static_cast<std::size_t>(std::max(profile.r0, 0));
  std::vector<EigenPair> own;
  if (pairs.empty() && r0 > 0) {
    const SparseSymMatrix dl = distance_matrix(g, ell);
    EigenResult er = top_eigenpairs(as_operator(dl), n, std::min(n, r0), opts);
    own = std::move(er.pairs);
    pairs = own;
  }
  for (std::size_t k = 0; k < std::min(r0, pairs.size()); ++k) {
    const Eigen::Map<const Eigen::VectorXd> xi(pairs[k].vector.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd nk = N.col(static_cast<Eigen::Index>(k));
    const double denom = xi.norm() * nk.norm();
    out.alignment.push_back(denom > 0.0 ? std::fabs(xi.dot(nk)) / denom : 0.0);
  }

  if (profile.uniform_prior && profile.tau > 1.0) {
    out.rho_reference = 1.0 / (static_cast<double>(r) * (profile.tau - 1.0));
    out.rho_second_moment = profile.tau * out.rho_reference;
  } else {
    out.rho_reference = out.rho_second_moment = std::nan("");
  }
  return out;
}

}  // namespace distsbm
