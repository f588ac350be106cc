#include "distsbm/gw.hpp"

#include <algorithm>
#include <cmath>

#include "distsbm/errors.hpp"
#include "distsbm/rng.hpp"

namespace distsbm {

void GwConfig::validate() const {
  const auto r = M.rows();
  if (r < 1 || M.cols() != r) throw InvalidParams("GwConfig: M must be square and nonempty");
  if ((M.array() < 0.0).any()) throw InvalidParams("GwConfig: M has negative entries");
  if (root_law.size() != r) throw InvalidParams("GwConfig: root law has the wrong length");
  if ((root_law.array() < 0.0).any() || std::fabs(root_law.sum() - 1.0) > 1e-12) {
    throw InvalidParams("GwConfig: root law is not a probability vector");
  }
  if (depth < 0) throw InvalidParams("GwConfig: negative depth");
  if (runs < 1) throw InvalidParams("GwConfig: need at least one run");
  if (!(population_cap > 0.0)) throw InvalidParams("GwConfig: population cap must be positive");
}

Eigen::VectorXd point_mass(std::size_t r, std::size_t j) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r));
  v(static_cast<Eigen::Index>(j)) = 1.0;
  return v;
}

Eigen::VectorXd uniform_law(std::size_t r) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(r), 1.0 / static_cast<double>(r));
}

double perron_root(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

GwSimulation simulate_population(const GwConfig& cfg) {
  cfg.validate();
  GwSimulation sim;
  sim.r = static_cast<std::size_t>(cfg.M.rows());
  sim.depth = cfg.depth;
  sim.runs = cfg.runs;
  sim.roots.resize(cfg.runs);
  sim.capped.assign(cfg.runs, 0);
  const std::size_t r = sim.r;
  const std::size_t stride = static_cast<std::size_t>(cfg.depth + 1) * r;
  sim.counts.assign(cfg.runs * stride, 0.0);

  const std::uint64_t base = derive_seed(cfg.seed, "gw");
  std::vector<double> cur(r), next(r);
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    SplitMix64 rng(derive_seed(base, static_cast<std::uint64_t>(run)));
    const double u = rng.uniform();
    std::size_t root = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      if (cfg.root_law(static_cast<Eigen::Index>(i)) <= 0.0) continue;
      root = i;
      acc += cfg.root_law(static_cast<Eigen::Index>(i));
      if (u < acc) break;
    }
    sim.roots[run] = static_cast<Label>(root);
    std::fill(cur.begin(), cur.end(), 0.0);
    cur[root] = 1.0;
    double* out = sim.counts.data() + run * stride;
    std::copy(cur.begin(), cur.end(), out);
    for (int t = 1; t <= cfg.depth; ++t) {
      // A generation of z_j type-j parents has Poi(M(i, j) z_j) type-i children.
      double total = 0.0;
      for (std::size_t i = 0; i < r; ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
          const double mean = cfg.M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * cur[j];
          if (mean > 0.0) c += static_cast<double>(rng.poisson(mean));
        }
        next[i] = c;
        total += c;
      }
      if (total > cfg.population_cap) {
        sim.capped[run] = 1;
        ++sim.capped_runs;
        break;
      }
      cur.swap(next);
      std::copy(cur.begin(), cur.end(), out + static_cast<std::size_t>(t) * r);
    }
  }
  return sim;
}

namespace {

double dot_phi(const GwSimulation& sim, std::size_t run, int t, const Eigen::VectorXd& phi) {
  double s = 0.0;
  for (std::size_t i = 0; i < sim.r; ++i) s += phi(static_cast<Eigen::Index>(i)) * sim.z(run, t, i);
  return s;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double m4 = 0.0;        // fourth central moment
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  if (x.empty()) return m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  double s2 = 0.0, s4 = 0.0;
  for (double v : x) {
    const double d = (v - m.mean) * (v - m.mean);
    s2 += d;
    s4 += d * d;
  }
  m.variance = x.size() > 1 ? s2 / static_cast<double>(x.size() - 1) : 0.0;
  m.m4 = s4 / static_cast<double>(x.size());
  return m;
}

void require_above_threshold(const Eigen::MatrixXd& M, double mu) {
  if (!(mu * mu > perron_root(M) * (1.0 + 1e-12))) {
    throw AtOrBelowThreshold("martingale: need mu^2 above the Perron root of M");
  }
}

}  // namespace

MartingaleSample martingale_limit_check(const GwConfig& cfg, const Eigen::VectorXd& phi, double mu) {
  cfg.validate();
  if (phi.size() != cfg.M.rows()) throw InvalidParams("martingale_limit_check: phi has the wrong length");
  require_above_threshold(cfg.M, mu);
  const GwSimulation sim = simulate_population(cfg);
  const std::size_t r = sim.r;
  const int T = cfg.depth;

  MartingaleSample out;
  out.capped_runs = sim.capped_runs;
  out.expected = phi.dot(cfg.root_law);
  std::vector<std::vector<double>> by_depth(static_cast<std::size_t>(T + 1));
  std::vector<std::vector<double>> by_type(r);
  Eigen::MatrixXd e_hat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  for (std::size_t run = 0; run < sim.runs; ++run) {
    if (sim.capped[run]) continue;
    for (int t = 0; t <= T; ++t) {
      by_depth[static_cast<std::size_t>(t)].push_back(std::pow(mu, -t) * dot_phi(sim, run, t, phi));
    }
    const double x = by_depth[static_cast<std::size_t>(T)].back();
    out.values.push_back(x);
    out.roots.push_back(sim.roots[run]);
    by_type[sim.roots[run]].push_back(x);
    for (std::size_t i = 0; i < r; ++i) {
      e_hat(static_cast<Eigen::Index>(sim.roots[run]), static_cast<Eigen::Index>(i)) += sim.z(run, T, i);
    }
  }
  if (out.values.empty()) throw InvalidParams("martingale_limit_check: every run hit the population cap");
  const Moments all = moments(out.values);
  out.mean = all.mean;
  out.variance = all.variance;
  out.std_error = std::sqrt(all.variance / static_cast<double>(out.values.size()));
  for (const auto& xs : by_depth) {
    const Moments m = moments(xs);
    out.mean_by_depth.push_back(m.mean);
    out.stderr_by_depth.push_back(std::sqrt(m.variance / static_cast<double>(xs.size())));
  }

  bool complete = true;
  Eigen::VectorXd v_t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r));
  double var_of_sum = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    const auto& xs = by_type[j];
    const Moments m = moments(xs);
    out.type_count.push_back(xs.size());
    out.type_mean.push_back(m.mean);
    out.type_variance.push_back(m.variance);
    out.var_sum_raw += m.variance;
    if (xs.size() > 1) {
      var_of_sum += (m.m4 - m.variance * m.variance) / static_cast<double>(xs.size());
      e_hat.row(static_cast<Eigen::Index>(j)) /= static_cast<double>(xs.size());
    } else {
      complete = false;
    }
    v_t(static_cast<Eigen::Index>(j)) = m.variance;
  }
  out.var_sum_raw_stderr = std::sqrt(std::max(0.0, var_of_sum));
  if (complete) {
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) -
        std::pow(mu, -2.0 * T) * e_hat;
    const Eigen::VectorXd c = A.fullPivLu().solve(v_t);
    out.type_variance_limit.assign(c.data(), c.data() + c.size());
    out.var_sum = c.sum();
  } else {
    out.var_sum = std::nan("");
  }
  return out;
}

ClosedForms moment_closed_forms(const Eigen::MatrixXd& M, double alpha, const Eigen::VectorXd& phi,
                                double mu) {
  if (M.rows() != M.cols() || phi.size() != M.rows()) throw InvalidParams("moment_closed_forms: shape mismatch");
  if (!(mu * mu > alpha)) throw SingularSystem("moment_closed_forms: need mu^2 > alpha");
  const Eigen::Index r = M.rows();
  const Eigen::MatrixXd B = M.transpose() / (mu * mu);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(r, r) - B;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularSystem("moment_closed_forms: I - M^T/mu^2 is singular");
  const Eigen::VectorXd phi2 = phi.array().square();
  ClosedForms out;
  out.c2 = lu.solve(B * phi2);
  out.m2 = lu.solve(phi2);
  out.var_sum = out.c2.sum();
  out.sqmean_sum = out.m2.sum();
  out.tau = mu * mu / alpha;
  return out;
}

ClosedForms moment_closed_forms(const SpectralProfile& profile, const Eigen::VectorXd& phi, double mu) {
  return moment_closed_forms(profile.M, profile.alpha, phi, mu);
}

namespace {

// j-th cumulant by unbiased k-statistics from power sums.
double k_statistic(int j, double n, double s1, double s2, double s3) {
  const double m = s1 / n;
  if (j == 1) return m;
  const double c2 = s2 / n - m * m;  // biased central moments
  if (j == 2) return c2 * n / (n - 1.0);
  const double c3 = s3 / n - 3.0 * m * s2 / n + 2.0 * m * m * m;
  return c3 * n * n / ((n - 1.0) * (n - 2.0));
}

struct PowerSums {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, sj = 0.0;
  double n = 0.0;
};

}  // namespace

CumulantCheck cumulant_relation_check(const Eigen::MatrixXd& M, const Eigen::VectorXd& phi, double mu,
                                      int order, std::size_t runs, std::uint64_t seed, int depth,
                                      std::size_t bootstrap) {
  if (order < 1 || order > 3) throw InvalidParams("cumulant_relation_check: order must be 1, 2 or 3");
  if (depth < 1) throw InvalidParams("cumulant_relation_check: depth must be at least 1");
  if (runs < 3) throw InvalidParams("cumulant_relation_check: need at least three runs");
  require_above_threshold(M, mu);
  const std::size_t r = static_cast<std::size_t>(M.rows());
  // xt[i] / xp[i]: X at depths T and T-1 for trees rooted at type i.
  std::vector<std::vector<double>> xt(r), xp(r);
  CumulantCheck out;
  out.order = order;
  for (std::size_t i = 0; i < r; ++i) {
    GwConfig cfg;
    cfg.M = M;
    cfg.root_law = point_mass(r, i);
    cfg.depth = depth;
    cfg.runs = runs;
    cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const GwSimulation sim = simulate_population(cfg);
    out.capped_runs += sim.capped_runs;
    for (std::size_t run = 0; run < sim.runs; ++run) {
      if (sim.capped[run]) continue;
      xt[i].push_back(std::pow(mu, -depth) * dot_phi(sim, run, depth, phi));
      xp[i].push_back(std::pow(mu, -(depth - 1)) * dot_phi(sim, run, depth - 1, phi));
    }
  }

  auto evaluate = [&](const std::vector<std::vector<std::size_t>>* idx, std::vector<double>& lhs,
                      std::vector<double>& rhs) {
    std::vector<double> mj(r);
    lhs.assign(r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
      PowerSums ps;
      const std::size_t count = idx ? (*idx)[i].size() : xt[i].size();
      for (std::size_t q = 0; q < count; ++q) {
        const std::size_t k = idx ? (*idx)[i][q] : q;
        const double a = xt[i][k], b = xp[i][k];
        ps.s1 += a;
        ps.s2 += a * a;
        ps.s3 += a * a * a;
        ps.sj += std::pow(b, order);
      }
      ps.n = static_cast<double>(count);
      lhs[i] = k_statistic(order, ps.n, ps.s1, ps.s2, ps.s3);
      mj[i] = ps.sj / ps.n;
    }
    rhs.assign(r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t l = 0; l < r; ++l) {
        rhs[i] += M(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)) * mj[l];
      }
      rhs[i] /= std::pow(mu, order);
    }
  };

  evaluate(nullptr, out.lhs, out.rhs);
  out.residual.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    out.residual[i] = out.lhs[i] - out.rhs[i];
    out.residual_inf = std::max(out.residual_inf, std::fabs(out.residual[i]));
  }

  SplitMix64 rng(derive_seed(seed, "bootstrap"));
  std::vector<double> sum(r, 0.0), sum_sq(r, 0.0);
  std::vector<std::vector<std::size_t>> idx(r);
  std::vector<double> lhs, rhs;
  for (std::size_t b = 0; b < bootstrap; ++b) {
    for (std::size_t i = 0; i < r; ++i) {
      idx[i].resize(xt[i].size());
      for (auto& k : idx[i]) k = rng.below(xt[i].size());
    }
    evaluate(&idx, lhs, rhs);
    for (std::size_t i = 0; i < r; ++i) {
      const double d = lhs[i] - rhs[i];
      sum[i] += d;
      sum_sq[i] += d * d;
    }
  }
  out.std_error.resize(r);
  const double B = static_cast<double>(bootstrap);
  for (std::size_t i = 0; i < r; ++i) {
    const double mean = sum[i] / B;
    out.std_error[i] = B > 1 ? std::sqrt(std::max(0.0, (sum_sq[i] - B * mean * mean) / (B - 1.0))) : 0.0;
    if (std::fabs(out.residual[i]) > 3.0 * out.std_error[i]) out.within_3se = false;
  }
  return out;
}

MarkovCheck markov_bound_check(const MartingaleSample& sample, double tau, double eta) {
  if (!(tau > 1.0)) throw AtOrBelowThreshold("markov_bound_check: tau must exceed 1");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidParams("markov_bound_check: eta must lie in (0, 1)");
  MarkovCheck out;
  out.eta = eta;
  out.threshold = std::sqrt(tau / (eta * (tau - 1.0)));
  const std::size_t r = sample.type_count.size();
  std::vector<double> hits(r, 0.0);
  for (std::size_t k = 0; k < sample.values.size(); ++k) {
    if (std::fabs(sample.values[k]) > out.threshold) hits[sample.roots[k]] += 1.0;
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (sample.type_count[i] == 0) continue;
    const double p = hits[i] / static_cast<double>(sample.type_count[i]);
    out.tail_by_type.push_back(p);
    if (p > eta) out.holds = false;
  }
  return out;
}

ProgenyCheck mean_progeny_check(const GwSimulation& sim, const Eigen::MatrixXd& M) {
  ProgenyCheck out;
  const std::size_t r = sim.r;
  for (int t = 0; t < sim.depth; ++t) {
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0.0, s2 = 0.0, count = 0.0;
      for (std::size_t run = 0; run < sim.runs; ++run) {
        if (sim.capped[run]) continue;
        double d = sim.z(run, t + 1, i);
        for (std::size_t j = 0; j < r; ++j) {
          d -= M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * sim.z(run, t, j);
        }
        s += d;
        s2 += d * d;
        count += 1.0;
      }
      if (count < 2) continue;
      const double mean = s / count;
      const double var = (s2 - count * mean * mean) / (count - 1.0);
      const double se = std::sqrt(std::max(var, 0.0) / count);
      const double z = se > 0.0 ? std::fabs(mean) / se : (mean == 0.0 ? 0.0 : INFINITY);
      if (z > out.max_abs_z) {
        out.max_abs_z = z;
        out.worst_depth = t + 1;
      }
    }
  }
  out.within_3se = out.max_abs_z <= 3.0;
  return out;
}

}  // namespace distsbm
