// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "distsbm/adversary.hpp"
#include "distsbm/errors.hpp"
#include "distsbm/graph.hpp"
#include "distsbm/gw.hpp"
#include "distsbm/model.hpp"
#include "distsbm/oracles.hpp"
#include "distsbm/reconstruct.hpp"
#include "distsbm/spectral.hpp"

using namespace distsbm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

SbmParams two_block(double a, double b, std::size_t n) { return uniform_sbm(planted_partition(2, a, b), n); }

double spectral_radius(const SparseSymMatrix& m, std::uint64_t seed) {
  EigenSolverOptions o;
  o.seed = seed;
  o.tol = 1e-9;
  o.max_iter = 20000;
  const auto res = top_eigenpairs(as_operator(m), m.n(), 1, o);
  if (res.pairs.empty()) throw DegenerateOperator(res.diagnostics);
  return std::fabs(res.pairs[0].value);
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  int graphs = 0, mismatches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 100 + 5 * seed;
    const auto g = sample_graph(two_block(5, 1, n), seed).graph;
    ++graphs;
    for (int ell = 1; ell <= 4; ++ell) mismatches += !(distance_matrix(g, ell) == oracle::distance_matrix(g, ell));
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 10.0,
          std::to_string(graphs) + " graphs x 4 ell, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", t)};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 30 + seed;
    const auto g = sample_graph(two_block(12, 4, n), seed).graph;
    for (int ell = 1; ell <= 4; ++ell) {
      mismatches += !(path_expansion_matrix(g, ell, 1 << 30).matrix == oracle::path_count_matrix(g, ell));
    }
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 30.0, "20 graphs x 4 ell, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", t)};
}

Outcome criterion3() {
  // Tangle-free radius-3 balls are rare at n = 300 unless the mean degree is low.
  const auto params = two_block(3, 0.5, 300);
  int found = 0, bad = 0;
  std::uint64_t seed = 0;
  for (; found < 10 && seed < 2000; ++seed) {
    const auto g = sample_graph(params, seed).graph;
    if (!tangle_free_check(g, 3).tangle_free) continue;
    ++found;
    const auto d = delta_matrix(path_expansion_matrix(g, 3, 1 << 20).matrix, distance_matrix(g, 3));
    bad += d.min_value() < 0 || d.max_value() > 1;
  }
  return {found == 10 && bad == 0, std::to_string(found) + " tangle-free samples from " + std::to_string(seed) +
                                       " seeds, " + std::to_string(bad) + " with entries outside {0,1}"};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  const auto params = two_block(5, 1, 500);
  int harness_ok = 0, cycle_ok = 0, cluster_ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = sample_graph(params, seed).graph;
    const auto rep = delta_radius_check(g, 3, 3.0);
    const auto b = path_expansion_matrix(g, 3, 1 << 20).matrix;
    const double rho = oracle::dense_spectral_radius(delta_matrix(b, distance_matrix(g, 3)));
    harness_ok += rho <= rep.harness_bound;
    cycle_ok += rho <= rep.max_cycle_qc_exact * (1 + 1e-9);
    cluster_ok += rho <= rep.cycle_bound * (1 + 1e-9);
    worst = std::max(worst, rep.max_cycle_qc_exact > 0 ? rho / rep.max_cycle_qc_exact : rho);
  }
  const double t = seconds_since(t0);
  return {harness_ok == 10 && cycle_ok == 10 && t < 120.0,
          "rho <= 10 ln(n) alpha^1.5 in " + std::to_string(harness_ok) + "/10, <= max per-cycle bound in " +
              std::to_string(cycle_ok) + "/10 (worst ratio " + fmt("%.3f", worst) + "), <= cluster bound in " +
              std::to_string(cluster_ok) + "/10, " + fmt("%.1f s", t)};
}

struct DetectionRuns {
  std::vector<double> above_overlap;
  std::vector<double> below_overlap;
  std::vector<SeparationReport> separation;
  double seconds = 0.0;
};

const DetectionRuns& detection_runs() {
  static const DetectionRuns runs = [] {
    DetectionRuns r;
    const auto t0 = Clock::now();
    const std::vector<double> half{0.5, 0.5};
    DetectOptions opts;
    opts.K_override = 16.0 / 3.0;
    for (const bool above : {true, false}) {
      const auto params = above ? two_block(5, 1, 2000) : two_block(4, 2, 2000);
      const auto profile = derive_spectral_profile(params);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = sample_graph(params, seed);
        const auto res = detect(s.graph, profile, 4, seed, opts);
        const double ov = overlap(s.sigma, res.assignment.labels, half).value;
        if (above) {
          r.above_overlap.push_back(ov);
          if (res.separation) r.separation.push_back(*res.separation);
        } else {
          r.below_overlap.push_back(ov);
        }
      }
    }
    r.seconds = seconds_since(t0);
    return r;
  }();
  return runs;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

Outcome criterion5() {
  const auto& r = detection_runs();
  const double above = mean(r.above_overlap), below = mean(r.below_overlap);
  return {above > 0.05 && std::fabs(below) < 0.03 && r.seconds < 300.0,
          "mean overlap above " + fmt("%.4f", above) + " (need > 0.05), below " + fmt("%.4f", below) +
              " (need |.| < 0.03), " + fmt("%.1f s", r.seconds)};
}

Outcome criterion6() {
  const auto& r = detection_runs();
  int informative = 0, bulk = 0;
  for (const auto& s : r.separation) {
    bool ok = true;
    for (std::size_t k = 0; k < 2 && k < s.ratios.size(); ++k) ok = ok && s.ratios[k] >= 0.1 && s.ratios[k] <= 10.0;
    informative += ok;
    bulk += s.bulk_ok;
  }
  return {informative >= 8 && bulk >= 8, "lambda_k / mu_k^ell in [0.1, 10] in " + std::to_string(informative) +
                                             "/10, |lambda_3| <= ln(n)^2 alpha^2 in " + std::to_string(bulk) + "/10"};
}

Outcome criterion7() {
  const std::size_t n = 2000;
  const int ell = 4;
  const auto params = two_block(5, 1, n);
  const auto profile = derive_spectral_profile(params);
  const auto budget = robustness_budget(profile, ell, static_cast<double>(n));
  const std::vector<double> half{0.5, 0.5};
  const std::vector<std::size_t> sweep{0, 2, 4, 8, 16};
  std::vector<double> sum(sweep.size(), 0.0);
  int qk_runs = 0, qk_ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample_graph(params, seed);
    for (std::size_t gi = 0; gi < sweep.size(); ++gi) {
      const auto pc = plant_clique(s.graph, sweep[gi], seed);
      const auto res = detect(pc.graph, profile, ell, seed);
      sum[gi] += overlap(s.sigma, res.assignment.labels, half).value;
      if (pc.perturbation.affected.empty()) continue;
      const auto q = qk_bound(s.graph, pc.graph, pc.perturbation.affected, ell, profile.alpha);
      const double rho = spectral_radius(distance_change(s.graph, pc.graph, ell), seed);
      ++qk_runs;
      qk_ok += rho <= q.exact * (1 + 1e-9);
    }
  }
  const double base = sum[0] / 10;
  bool safe_ok = true;
  std::ostringstream os;
  os << "gamma_safe " << fmt("%.3f", budget.gamma_safe) << ", mean overlap by gamma:";
  for (std::size_t gi = 0; gi < sweep.size(); ++gi) {
    const double m = sum[gi] / 10;
    os << ' ' << sweep[gi] << '=' << fmt("%.4f", m);
    if (static_cast<double>(sweep[gi]) <= budget.gamma_safe) safe_ok = safe_ok && std::fabs(m - base) <= 0.05;
  }
  os << "; rho <= qk_bound in " << qk_ok << '/' << qk_runs << " edited runs";
  return {safe_ok && qk_ok == qk_runs, os.str()};
}

Outcome criterion8() {
  const std::size_t n = 2000;
  const int ell = 3;
  const auto params = two_block(5, 1, n);
  const auto profile = derive_spectral_profile(params);
  const auto budget = robustness_budget(profile, ell, static_cast<double>(n));
  const auto gamma = static_cast<std::size_t>(std::ceil(budget.gamma_break));
  int ok = 0, runs = 0;
  double min_ratio = 1e300, max_cos = 0.0, greedy_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = sample_graph(params, seed).graph;
    RogueOptions wired;
    wired.mode = RogueMode::wired;
    wired.solver.seed = seed;
    const auto c = build_rogue_certificate(g, profile, ell, gamma, wired);
    ++runs;
    double cmax = 0.0;
    for (double x : c.cosines) cmax = std::max(cmax, std::fabs(x));
    const double ratio = c.rayleigh / c.closed_form;
    min_ratio = std::min(min_ratio, ratio);
    max_cos = std::max(max_cos, cmax);
    ok += ratio >= 0.5 && cmax <= 0.2;
    try {
      RogueOptions greedy;
      greedy.solver.seed = seed;
      const auto gc = build_rogue_certificate(g, profile, ell, gamma, greedy);
      greedy_ratio = std::max(greedy_ratio, gc.rayleigh / gc.closed_form);
    } catch (const GreedyExhausted&) {
    }
  }
  return {ok == runs, "gamma " + std::to_string(gamma) + ", wired: min Rayleigh / 2 sqrt(gamma S) " +
                          fmt("%.3f", min_ratio) + ", max |cos| " + fmt("%.3f", max_cos) + ", " + std::to_string(ok) +
                          "/" + std::to_string(runs) + " pass; greedy max ratio " + fmt("%.3f", greedy_ratio)};
}

Outcome criterion9() {
  const auto t0 = Clock::now();
  std::ostringstream os;
  bool pass = true;
  const auto p2 = derive_spectral_profile(two_block(5, 1, 1000));
  const auto p3 = derive_spectral_profile(uniform_sbm(planted_partition(3, 9, 1.5), 900));
  for (const auto* p : {&p2, &p3}) {
    const auto cf = moment_closed_forms(*p, p->left_vector(1), p->mu(1));
    const double var_ref = 1.0 / (p->tau - 1.0), sq_ref = p->tau / (p->tau - 1.0);
    const bool exact = std::fabs(cf.var_sum - var_ref) <= 1e-9 && std::fabs(cf.sqmean_sum - sq_ref) <= 1e-9;
    GwConfig cfg;
    cfg.M = p->M;
    cfg.root_law = uniform_law(p->r());
    cfg.depth = 8;
    cfg.runs = 100000;
    cfg.seed = 2024 + p->r();
    const auto mc = martingale_limit_check(cfg, p->left_vector(1), p->mu(1));
    const bool close = std::fabs(mc.var_sum - var_ref) <= 0.1 * var_ref;
    pass = pass && exact && close;
    os << p->r() << "-type: closed " << fmt("%.10f", cf.var_sum) << '/' << fmt("%.10f", cf.sqmean_sum)
       << (exact ? " exact" : " MISMATCH") << ", MC var sum " << fmt("%.4f", mc.var_sum) << " vs "
       << fmt("%.4f", var_ref) << (close ? "" : " OUT") << "; ";
  }
  for (int j = 1; j <= 2; ++j) {
    const auto cc = cumulant_relation_check(p2.M, p2.left_vector(1), p2.mu(1), j, 50000, 77 + j, 8, 200);
    pass = pass && cc.within_3se;
    os << "cumulant j=" << j << " max |residual| " << fmt("%.4f", cc.residual_inf) << (cc.within_3se ? " ok" : " OUT")
       << "; ";
  }
  const double t = seconds_since(t0);
  pass = pass && t < 180.0;
  os << fmt("%.1f s", t);
  return {pass, os.str()};
}

Outcome criterion10() {
  const double k2 = explicit_K(2, 4.0 / 3.0, 1), k3 = explicit_K(3, 1.5625, 2);
  const double ref3 = 3 * 1.5625 * std::sqrt(2 * 1.5625 / 0.5625);
  const bool pass = std::fabs(k2 - 16.0 / 3.0) <= 1e-9 && std::fabs(k3 - ref3) <= 1e-9 && std::fabs(k3 - 11.049) < 5e-4;
  return {pass, "K(2, 4/3, 1) = " + fmt("%.12f", k2) + ", K(3, 1.5625, 2) = " + fmt("%.12f", k3)};
}

double median_build_seconds(const SparseGraph& g, int reps) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    const auto d = distance_matrix(g, 3);
    t.push_back(seconds_since(t0));
    if (d.n() != g.n()) throw InvalidGraph("unexpected matrix size");
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome criterion11() {
  const auto small = sample_graph(two_block(5, 1, 1000), 1).graph;
  const auto large = sample_graph(two_block(5, 1, 10000), 1).graph;
  const double ts = median_build_seconds(small, 15), tl = median_build_seconds(large, 5);
  const double ratio = tl / ts;
  return {ratio <= 20.0, "n=1e3 " + fmt("%.2f ms", 1e3 * ts) + ", n=1e4 " + fmt("%.2f ms", 1e3 * tl) + ", ratio " +
                             fmt("%.2f", ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 distance matrix oracle", criterion1},     {"2 path expansion oracle", criterion2},
      {"3 zero-one delta", criterion3},             {"4 delta radius", criterion4},
      {"5 detection above threshold", criterion5},  {"6 eigenvalue separation", criterion6},
      {"7 robustness frontier", criterion7},        {"8 rogue certificate", criterion8},
      {"9 branching identities", criterion9},       {"10 explicit K", criterion10},
      {"11 build scaling", criterion11},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
