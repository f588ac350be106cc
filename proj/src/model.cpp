#include "distsbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "distsbm/errors.hpp"
#include "distsbm/rng.hpp"

namespace distsbm {

void SbmParams::validate() const {
  if (r < 2) throw InvalidParams("SbmParams: r must be >= 2");
  if (n < r) throw InvalidParams("SbmParams: n must be >= r");
  const auto ri = static_cast<Eigen::Index>(r);
  if (W.rows() != ri || W.cols() != ri) throw InvalidParams("SbmParams: W must be r x r");
  if (pi.size() != ri) throw InvalidParams("SbmParams: pi must have length r");
  for (Eigen::Index a = 0; a < ri; ++a) {
    for (Eigen::Index b = 0; b < ri; ++b) {
      if (!(W(a, b) >= 0.0) || !std::isfinite(W(a, b))) throw InvalidParams("SbmParams: W entries must be >= 0");
      if (W(a, b) != W(b, a)) throw InvalidParams("SbmParams: W must be symmetric");
    }
    if (!(pi(a) >= 0.0)) throw InvalidParams("SbmParams: pi entries must be >= 0");
  }
  if (std::fabs(pi.sum() - 1.0) > 1e-12) throw InvalidParams("SbmParams: pi must sum to 1");
}

bool SbmParams::uniform_prior(double tol) const {
  const double target = 1.0 / static_cast<double>(r);
  for (Eigen::Index a = 0; a < pi.size(); ++a) {
    if (std::fabs(pi(a) - target) > tol) return false;
  }
  return true;
}

Eigen::MatrixXd planted_partition(std::size_t r, double a, double b) {
  const auto ri = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(ri, ri, b);
  W.diagonal().setConstant(a);
  return W;
}

SbmParams uniform_sbm(const Eigen::MatrixXd& W, std::size_t n) {
  SbmParams p;
  p.r = static_cast<std::size_t>(W.rows());
  p.W = W;
  p.pi = Eigen::VectorXd::Constant(W.rows(), 1.0 / static_cast<double>(W.rows()));
  p.n = n;
  return p;
}

namespace {

int positive_regularity_power(const Eigen::MatrixXd& M) {
  // Wielandt: a primitive r x r matrix has M^t > 0 for some t <= (r-1)^2 + 1.
  const Eigen::Index r = M.rows();
  const int limit = static_cast<int>((r - 1) * (r - 1) + 1);
  Eigen::MatrixXd pattern = (M.array() > 0.0).cast<double>().matrix();
  Eigen::MatrixXd power = pattern;
  for (int t = 1; t <= limit; ++t) {
    if ((power.array() > 0.0).all()) return t;
    power = ((power * pattern).array() > 0.0).cast<double>().matrix();
  }
  return 0;
}

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::fabs(v(i)) > 1e-9 * scale) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

}  // namespace

SpectralProfile derive_spectral_profile(const SbmParams& params) {
  params.validate();
  const auto r = static_cast<Eigen::Index>(params.r);
  SpectralProfile prof;
  prof.M = params.pi.asDiagonal() * params.W;
  prof.uniform_prior = params.uniform_prior();

  prof.regularity_power = positive_regularity_power(prof.M);
  if (prof.regularity_power == 0) {
    throw NotPositiveRegular("mean progeny matrix is not positive regular");
  }

  // Eigenvalues via the symmetric S = Pi^{1/2} W Pi^{1/2}; left eigenvectors
  // of M are Pi^{-1/2} x for eigenvectors x of S.
  const Eigen::VectorXd sqrt_pi = params.pi.cwiseSqrt();
  const Eigen::MatrixXd S = sqrt_pi.asDiagonal() * params.W * sqrt_pi.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double fa = std::fabs(ev(a)), fb = std::fabs(ev(b));
    if (std::fabs(fa - fb) > 1e-12 * std::max(1.0, std::max(fa, fb))) return fa > fb;
    return ev(a) > ev(b);
  });
  prof.mu.resize(r);
  prof.phi.resize(r, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    prof.mu(k) = ev(src);
    Eigen::VectorXd left = es.eigenvectors().col(src).cwiseQuotient(sqrt_pi);
    left.normalize();
    canonicalize_sign(left);
    prof.phi.col(k) = left;
  }

  const DegreeRegularity reg = check_degree_regularity(prof);
  prof.degree_regular = reg.regular;
  prof.alpha = reg.regular ? reg.column_sums.mean() : prof.mu(0);
  if (!prof.degree_regular) prof.warnings.push_back("NotDegreeRegular");
  prof.subcritical = !(prof.mu(0) > 1.0);
  if (prof.subcritical) prof.warnings.push_back("SubCritical");
  if (!prof.uniform_prior) prof.warnings.push_back("NonUniformPrior");

  prof.tau = prof.mu(1) * prof.mu(1) / prof.mu(0);
  prof.r0 = 0;
  for (Eigen::Index k = 0; k < r; ++k) {
    if (prof.mu(k) * prof.mu(k) > prof.mu(0)) ++prof.r0;
  }
  prof.d = 0;
  const double tol = 1e-9 * std::max(1.0, std::fabs(prof.mu(1)));
  for (Eigen::Index k = 1; k < r; ++k) {
    if (std::fabs(prof.mu(k) - prof.mu(1)) <= tol) ++prof.d;
  }
  return prof;
}

DegreeRegularity check_degree_regularity(const SpectralProfile& profile) {
  DegreeRegularity out;
  out.column_sums = profile.M.colwise().sum().transpose();
  // Under regularity the Perron root equals the common column sum.
  const double alpha = profile.mu(0);
  out.residuals = out.column_sums.array() - alpha;
  out.regular = out.residuals.cwiseAbs().maxCoeff() <= 1e-9;
  return out;
}

TypedGraphSample sample_graph(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t r = params.r;
  TypedGraphSample out;
  out.seed = seed;
  out.sigma.resize(n);

  SplitMix64 label_rng(derive_seed(seed, "types"));
  std::vector<double> cdf(r);
  std::partial_sum(params.pi.data(), params.pi.data() + r, cdf.begin());
  for (std::size_t v = 0; v < n; ++v) {
    const double u = label_rng.uniform();
    std::size_t k = 0;
    while (k + 1 < r && u >= cdf[k]) ++k;
    out.sigma[v] = static_cast<Label>(k);
  }

  std::vector<std::vector<Vertex>> blocks(r);
  for (std::size_t v = 0; v < n; ++v) blocks[out.sigma[v]].push_back(static_cast<Vertex>(v));

  // Geometric skipping over the pair index space of each block pair; the
  // streams are keyed by the block pair so the result does not depend on the
  // order in which pairs are visited.
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      const double p = std::min(params.W(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) /
                                    static_cast<double>(n),
                                1.0);
      const auto& A = blocks[a];
      const auto& B = blocks[b];
      const std::uint64_t na = A.size(), nb = B.size();
      const std::uint64_t pairs = (a == b) ? na * (na - (na > 0 ? 1 : 0)) / 2 : na * nb;
      if (p <= 0.0 || pairs == 0) continue;
      auto emit = [&](std::uint64_t idx) {
        if (a == b) {
          // idx -> (i, j), i < j, row-major over the strict upper triangle
          // via j(j-1)/2 + i.
          auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(idx))) / 2.0);
          while (j * (j - 1) / 2 > idx) --j;
          while ((j + 1) * j / 2 <= idx) ++j;
          const std::uint64_t i = idx - j * (j - 1) / 2;
          edges.push_back(canonical(A[i], A[j]));
        } else {
          edges.push_back(canonical(A[idx / nb], B[idx % nb]));
        }
      };
      if (p >= 1.0) {
        for (std::uint64_t idx = 0; idx < pairs; ++idx) emit(idx);
        continue;
      }
      SplitMix64 rng(derive_seed(derive_seed(seed, "edges"), a * r + b));
      const double log_q = std::log1p(-p);
      std::uint64_t idx = 0;
      for (;;) {
        const double skip = std::floor(std::log(rng.uniform_pos()) / log_q);
        if (skip >= static_cast<double>(pairs - idx)) break;
        idx += static_cast<std::uint64_t>(skip);
        emit(idx);
        ++idx;
        if (idx >= pairs) break;
      }
    }
  }
  out.graph = SparseGraph(n, edges);
  return out;
}

EllChoice choose_ell(const SpectralProfile& profile, double n, double kappa,
                     std::optional<int> override_ell) {
  EllChoice c;
  if (override_ell) {
    if (*override_ell < 1) throw InvalidParams("choose_ell: override must be >= 1");
    c.ell = *override_ell;
    c.overridden = true;
    return c;
  }
  if (!(kappa > 0.0)) throw InvalidKappa("choose_ell: kappa must be positive");
  if (!(profile.alpha > 1.0)) throw InvalidParams("choose_ell: alpha must exceed 1");
  const double raw = kappa * std::log(n) / std::log(profile.alpha);
  const auto fl = static_cast<int>(std::floor(raw + 1e-9));
  c.clamped = fl < 1;
  c.ell = std::max(1, fl);
  c.theoretical = kappa < 1.0 / 12.0 && !c.clamped;
  return c;
}

}  // namespace distsbm
