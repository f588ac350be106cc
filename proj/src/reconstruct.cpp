#include "distsbm/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "distsbm/errors.hpp"
#include "distsbm/rng.hpp"

namespace distsbm {

double explicit_K(std::size_t r, double tau, int d) {
  if (!(tau > 1.0)) throw AtOrBelowThreshold("explicit_K: tau must exceed 1");
  if (r < 2 || d < 1) throw InvalidParams("explicit_K: need r >= 2 and d >= 1");
  return static_cast<double>(r) * tau * std::sqrt(d * tau / (tau - 1.0));
}

std::vector<double> normalize_for_algorithm(std::span<const double> v, std::size_t n) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (!(sq > 0.0)) throw ZeroVector("normalize_for_algorithm: zero vector");
  const double scale = std::sqrt(static_cast<double>(n) / sq);
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x *= scale;
  canonicalize_sign(out);
  return out;
}

LabelAssignment label_two_way(std::span<const double> xi, double K, std::uint64_t seed) {
  if (!(K > 0.0)) throw InvalidParams("label_two_way: K must be positive");
  LabelAssignment out;
  out.K_used = K;
  out.seed = seed;
  out.labels.resize(xi.size());
  const std::uint64_t key = derive_seed(seed, "labels");
  for (std::size_t v = 0; v < xi.size(); ++v) {
    out.labels[v] = uniform_at(key, v) < plus_probability(xi[v], K) ? 1 : 0;
  }
  return out;
}

OverlapScore overlap(std::span<const Label> sigma, std::span<const Label> sigma_hat,
                     std::span<const double> pi) {
  const std::size_t r = pi.size();
  if (sigma.size() != sigma_hat.size()) throw InvalidParams("overlap: length mismatch");
  if (r == 0 || r > 8) throw InvalidParams("overlap: need 1 <= r <= 8");
  std::vector<std::size_t> confusion(r * r, 0);
  for (std::size_t v = 0; v < sigma.size(); ++v) {
    if (sigma[v] >= r || sigma_hat[v] >= r) throw LabelOutOfRange("overlap: label outside [0, r)");
    ++confusion[sigma[v] * r + sigma_hat[v]];
  }
  std::vector<Label> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  std::vector<Label> best_perm = perm;
  do {
    std::size_t agree = 0;
    for (std::size_t a = 0; a < r; ++a) agree += confusion[a * r + perm[a]];
    if (agree > best) {
      best = agree;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double max_pi = *std::max_element(pi.begin(), pi.end());
  OverlapScore out;
  out.value = (sigma.empty() ? 0.0 : static_cast<double>(best) / static_cast<double>(sigma.size())) - max_pi;
  out.best_permutation = std::move(best_perm);
  return out;
}

const char* to_string(MatrixKind kind) noexcept {
  return kind == MatrixKind::distance ? "distance" : "path";
}

MatrixKind parse_matrix_kind(const std::string& s) {
  if (s == "distance") return MatrixKind::distance;
  if (s == "path") return MatrixKind::path;
  throw InvalidParams("unknown matrix kind '" + s + "'");
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DetectResult detect(const SparseGraph& g, const SpectralProfile& profile, int ell,
                    std::uint64_t seed, const DetectOptions& opts) {
  const std::size_t n = g.n();
  if (n < 2) throw InvalidGraph("detect: need at least two vertices");
  DetectResult out;
  if (profile.r0 <= 1) out.warnings.push_back("BelowThreshold");
  if (!profile.uniform_prior) out.warnings.push_back("NonUniformPrior");

  std::optional<double> K = opts.K_override;
  if (!K && profile.tau > 1.0) K = explicit_K(profile.r(), profile.tau, profile.d);

  auto t0 = std::chrono::steady_clock::now();
  SparseSymMatrix a;
  if (opts.kind == MatrixKind::distance) {
    a = distance_matrix(g, ell);
  } else {
    PathExpansion pe = path_expansion_matrix(g, ell, opts.path_cap);
    if (!pe.saturated.empty()) out.warnings.push_back("CapSaturated");
    a = std::move(pe.matrix);
  }
  out.ms_build = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  EigenSolverOptions sopts = opts.solver;
  sopts.seed = derive_seed(seed, "eig");
  const std::size_t want = std::min(n, std::max<std::size_t>(opts.eigenpairs, 3));
  EigenResult er = top_eigenpairs(as_operator(a), n, want, sopts);
  out.ms_eig = ms_since(t0);
  if (er.pairs.size() < 2) throw DegenerateOperator("detect: " + er.diagnostics);
  if (!er.converged) out.warnings.push_back(er.diagnostics);

  // Second pair by |value|; when its magnitude ties with a pair of the
  // opposite sign, prefer the one closer to mu_2^ell.
  std::size_t pick = 1;
  if (er.pairs.size() > 2 && profile.r() > 1) {
    const double l1 = er.pairs[1].value, l2 = er.pairs[2].value;
    const double scale = std::max(1.0, std::fabs(l1));
    if (std::fabs(std::fabs(l1) - std::fabs(l2)) <= 1e-9 * scale && (l1 > 0) != (l2 > 0)) {
      const double target = std::pow(profile.mu(1), ell);
      out.tie_resolved = true;
      if (std::fabs(l2 - target) < std::fabs(l1 - target)) pick = 2;
    }
  }

  t0 = std::chrono::steady_clock::now();
  const auto xi = normalize_for_algorithm(er.pairs[pick].vector, n);
  if (!K) {
    // No closed form at or below the threshold: use the smallest K that keeps
    // every vertex's coin informative.
    double peak = 0.0;
    for (double x : xi) peak = std::max(peak, std::fabs(x));
    K = peak;
    out.warnings.push_back("KFallback");
  }
  out.assignment = label_two_way(xi, *K, seed);
  out.assignment.source = pick;
  out.ms_label = ms_since(t0);

  if (er.pairs.size() >= static_cast<std::size_t>(profile.r0) + 1) {
    out.separation = separation_report(er.pairs, profile, ell, n);
  }
  out.pairs = std::move(er.pairs);
  return out;
}

}  // namespace distsbm
