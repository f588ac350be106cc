#include "distsbm/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "distsbm/errors.hpp"
#include "distsbm/rng.hpp"

namespace distsbm {

void canonicalize_sign(std::span<double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  for (double x : v) {
    if (std::fabs(x) > 1e-9 * scale) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

namespace {

// |value| descending; equal magnitudes ordered by signed value descending.
bool magnitude_order(double a, double b) {
  const double fa = std::fabs(a), fb = std::fabs(b);
  if (std::fabs(fa - fb) > 1e-12 * std::max(1.0, std::max(fa, fb))) return fa > fb;
  return a > b;
}

std::vector<Eigen::Index> ritz_order(const Eigen::VectorXd& theta) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(theta.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return magnitude_order(theta(a), theta(b)); });
  return idx;
}

class Lanczos {
 public:
  Lanczos(const SymmetricOperator& op, std::size_t n, std::size_t k, const EigenSolverOptions& opts)
      : op_(op), n_(static_cast<Eigen::Index>(n)), k_(static_cast<Eigen::Index>(k)), opts_(opts),
        rng_(derive_seed(opts.seed, "lanczos")) {
    m_max_ = std::min<Eigen::Index>(n_, std::max<Eigen::Index>(3 * k_ + 30, 64));
    keep_ = std::min<Eigen::Index>(m_max_ - 2, std::max<Eigen::Index>(k_ + 8, m_max_ / 2));
    V_.setZero(n_, m_max_);
    H_.setZero(m_max_, m_max_);
    w_.resize(n_);
    tmp_.resize(n_);
  }

  EigenResult run() {
    EigenResult res;
    V_.col(0) = random_orthogonal(0);
    Eigen::Index size = 1;
    Eigen::Index since_check = 0;
    double h_scale = 0.0;
    for (;;) {
      const Eigen::Index j = size - 1;
      apply(V_.col(j), w_);
      ++res.matvecs;
      Eigen::VectorXd coeff = V_.leftCols(size).transpose() * w_;
      w_.noalias() -= V_.leftCols(size) * coeff;
      Eigen::VectorXd again = V_.leftCols(size).transpose() * w_;
      w_.noalias() -= V_.leftCols(size) * again;
      coeff += again;
      H_.block(0, j, size, 1) = coeff;
      H_.block(j, 0, 1, size) = coeff.transpose();
      h_scale = std::max(h_scale, coeff.cwiseAbs().maxCoeff());
      const double fnorm = w_.norm();
      const bool invariant = fnorm <= 1e-10 * std::max(1.0, h_scale);
      const bool full = size == m_max_;
      const bool complete = size == n_;
      ++since_check;

      if (invariant || full || complete || since_check >= 5 || res.matvecs >= opts_.max_iter) {
        since_check = 0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H_.topLeftCorner(size, size));
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Eigen::MatrixXd& Y = es.eigenvectors();
        const auto order = ritz_order(theta);
        const Eigen::Index want = std::min<Eigen::Index>(k_, size);
        bool estimated = want == k_;
        for (Eigen::Index q = 0; q < want && estimated; ++q) {
          const Eigen::Index c = order[static_cast<std::size_t>(q)];
          const double est = (invariant || complete) ? 0.0 : fnorm * std::fabs(Y(size - 1, c));
          estimated = est <= 0.5 * opts_.tol * std::max(1.0, std::fabs(theta(c)));
        }
        if (estimated || complete || res.matvecs >= opts_.max_iter) {
          auto pairs = extract(Y, order, size, want, res.matvecs);
          std::size_t good = 0;
          while (good < pairs.size() &&
                 pairs[good].residual <= opts_.tol * std::max(1.0, std::fabs(pairs[good].value))) {
            ++good;
          }
          if (good == static_cast<std::size_t>(k_) || complete || res.matvecs >= opts_.max_iter) {
            res.converged = good == static_cast<std::size_t>(k_);
            pairs.resize(good);
            res.pairs = std::move(pairs);
            res.restarts = restarts_;
            if (!res.converged) {
              res.diagnostics = "NoConvergence: " + std::to_string(good) + " of " + std::to_string(k_) +
                                " pairs after " + std::to_string(res.matvecs) + " operator applications";
            }
            return res;
          }
        }
        if (full) {
          // Thick restart on the best `keep_` Ritz vectors.
          const Eigen::Index p = keep_;
          Eigen::MatrixXd Yp(size, p);
          Eigen::VectorXd tp(p);
          for (Eigen::Index q = 0; q < p; ++q) {
            const Eigen::Index c = order[static_cast<std::size_t>(q)];
            Yp.col(q) = Y.col(c);
            tp(q) = theta(c);
          }
          Eigen::MatrixXd U = V_.leftCols(size) * Yp;
          V_.leftCols(p) = U;
          H_.setZero();
          H_.topLeftCorner(p, p).diagonal() = tp;
          if (invariant) {
            V_.col(p) = random_orthogonal(p);
          } else {
            V_.col(p) = w_ / fnorm;
          }
          size = p + 1;
          ++restarts_;
          continue;
        }
      }

      if (invariant) {
        // The Krylov space closed; continue from a fresh direction.
        V_.col(size) = random_orthogonal(size);
        ++size;
      } else {
        V_.col(size) = w_ / fnorm;
        ++size;
      }
    }
  }

 private:
  void apply(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::VectorXd& y) {
    tmp_ = x;
    op_(std::span<const double>(tmp_.data(), static_cast<std::size_t>(n_)),
        std::span<double>(y.data(), static_cast<std::size_t>(n_)));
  }

  Eigen::VectorXd random_orthogonal(Eigen::Index size) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      Eigen::VectorXd v(n_);
      for (Eigen::Index i = 0; i < n_; ++i) v(i) = rng_.normal();
      for (int pass = 0; pass < 2 && size > 0; ++pass) {
        v -= V_.leftCols(size) * (V_.leftCols(size).transpose() * v);
      }
      const double nv = v.norm();
      if (nv > 1e-8) return v / nv;
    }
    throw DegenerateOperator("top_eigenpairs: could not extend the Krylov basis");
  }

  std::vector<EigenPair> extract(const Eigen::MatrixXd& Y,
                                 const std::vector<Eigen::Index>& order, Eigen::Index size,
                                 Eigen::Index want, int& matvecs) {
    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(want));
    Eigen::VectorXd ax(n_);
    for (Eigen::Index q = 0; q < want; ++q) {
      const Eigen::Index c = order[static_cast<std::size_t>(q)];
      Eigen::VectorXd x = V_.leftCols(size) * Y.col(c);
      x.normalize();
      apply(x, ax);
      ++matvecs;
      EigenPair pair;
      pair.value = x.dot(ax);
      pair.residual = (ax - pair.value * x).norm();
      pair.vector.assign(x.data(), x.data() + n_);
      canonicalize_sign(pair.vector);
      pairs.push_back(std::move(pair));
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair& a, const EigenPair& b) { return magnitude_order(a.value, b.value); });
    return pairs;
  }

  const SymmetricOperator& op_;
  Eigen::Index n_;
  Eigen::Index k_;
  EigenSolverOptions opts_;
  SplitMix64 rng_;
  Eigen::Index m_max_ = 0;
  Eigen::Index keep_ = 0;
  Eigen::MatrixXd V_;
  Eigen::MatrixXd H_;
  Eigen::VectorXd w_;
  Eigen::VectorXd tmp_;
  int restarts_ = 0;
};

}  // namespace

EigenResult top_eigenpairs(const SymmetricOperator& op, std::size_t n, std::size_t k,
                           const EigenSolverOptions& opts) {
  if (n == 0) throw DegenerateOperator("top_eigenpairs: empty operator");
  if (k == 0) return {};
  k = std::min(k, n);
  Lanczos solver(op, n, k, opts);
  return solver.run();
}

SeparationReport separation_report(std::span<const EigenPair> pairs, const SpectralProfile& profile,
                                   int ell, std::size_t n, double factor) {
  const auto r0 = static_cast<std::size_t>(profile.r0);
  if (pairs.size() < r0 + 1) throw InvalidParams("separation_report: need at least r0 + 1 eigenpairs");
  SeparationReport rep;
  for (const EigenPair& p : pairs) rep.lambda.push_back(p.value);
  rep.bulk_scale = std::pow(profile.alpha, ell / 2.0);
  const double logn = std::log(static_cast<double>(n));
  rep.bulk_limit = logn * logn * rep.bulk_scale;
  for (std::size_t k = 0; k < r0; ++k) {
    const double predicted = std::pow(profile.mu(static_cast<Eigen::Index>(k)), ell);
    rep.mu_powers.push_back(predicted);
    const double ratio = rep.lambda[k] / predicted;
    rep.ratios.push_back(ratio);
    if (!(ratio >= 1.0 / factor && ratio <= factor)) rep.informative_ok = false;
  }
  rep.bulk_ratio = std::fabs(rep.lambda[r0]) / rep.bulk_scale;
  rep.bulk_ok = std::fabs(rep.lambda[r0]) <= rep.bulk_limit;
  return rep;
}

QcBound qc_bound(std::span<const std::size_t> shell_sizes) {
  if (shell_sizes.empty()) return {};
  const auto size = static_cast<Eigen::Index>(shell_sizes.size());
  const Eigen::Index ell = size - 1;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(size, size);
  QcBound out;
  for (Eigen::Index t = 0; t <= ell; ++t) {
    double row = 0.0;
    for (Eigen::Index u = 0; u + t <= ell; ++u) {
      const double entry = std::sqrt(static_cast<double>(shell_sizes[static_cast<std::size_t>(t)]) *
                                     static_cast<double>(shell_sizes[static_cast<std::size_t>(u)]));
      Q(t, u) = entry;
      row += entry;
    }
    out.row_sum = std::max(out.row_sum, row);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
  out.exact = es.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

DeltaRadius delta_radius_check(const SparseGraph& g, int ell, double alpha, std::int32_t cap,
                               const EigenSolverOptions& opts) {
  DeltaRadius out;
  PathExpansion pe = path_expansion_matrix(g, ell, cap);
  out.saturated = std::move(pe.saturated);
  const SparseSymMatrix dl = distance_matrix(g, ell);
  const SparseSymMatrix delta = delta_matrix(pe.matrix, dl).abs();
  out.max_entry = delta.max_value();
  if (delta.stored_nnz() > 0) {
    EigenResult er = top_eigenpairs(as_operator(delta), g.n(), 1, opts);
    if (er.pairs.empty()) throw DegenerateOperator("delta_radius_check: " + er.diagnostics);
    out.rho = std::fabs(er.pairs[0].value);
  }
  out.tangle_free = tangle_free_check(g, ell).tangle_free;

  // Delta_ij != 0 needs two distinct paths of length <= ell, hence a cycle of
  // length <= 2 ell within the combined distance budget.
  const auto cycles = find_short_cycles(g, 2 * ell);
  out.cycles = cycles.size();
  DisjointSets sets(cycles.size());
  std::vector<std::size_t> owner(g.n(), cycles.size());
  BallExplorer ex(g);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    ex.explore(cycles[c], ell);
    for (Vertex v : ex.ball()) {
      if (owner[v] == cycles.size()) {
        owner[v] = c;
      } else {
        sets.unite(owner[v], c);
      }
    }
    const auto shells = set_shell_sizes(g, cycles[c], ell);
    out.max_cycle_qc_exact = std::max(out.max_cycle_qc_exact, qc_bound(shells).exact);
  }
  std::vector<std::vector<Vertex>> cluster_vertices(cycles.size());
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    auto& dst = cluster_vertices[sets.find(c)];
    dst.insert(dst.end(), cycles[c].begin(), cycles[c].end());
  }
  for (auto& verts : cluster_vertices) {
    if (verts.empty()) continue;
    ++out.clusters;
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    const QcBound qb = qc_bound(set_shell_sizes(g, verts, ell));
    out.max_cluster_qc_exact = std::max(out.max_cluster_qc_exact, qb.exact);
    out.max_cluster_qc_row_sum = std::max(out.max_cluster_qc_row_sum, qb.row_sum);
  }
  out.cycle_bound = static_cast<double>(out.max_entry) * out.max_cluster_qc_exact;
  out.harness_bound = 10.0 * std::log(static_cast<double>(g.n())) * std::pow(alpha, ell / 2.0);
  return out;
}

double davis_kahan_bound(double gap, double perturbation_norm, int d) {
  if (!(gap > 0.0)) throw ZeroGap("davis_kahan_bound: gap must be positive");
  return 2.0 * std::sqrt(2.0 * d) * perturbation_norm / gap;
}

}  // namespace distsbm
