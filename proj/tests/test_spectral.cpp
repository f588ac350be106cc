#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "distsbm/errors.hpp"
#include "distsbm/graph.hpp"
#include "distsbm/model.hpp"
#include "distsbm/oracles.hpp"
#include "distsbm/rng.hpp"
#include "distsbm/spectral.hpp"
#include "test_util.hpp"

using namespace distsbm;
using namespace testutil;

namespace {

TypedGraphSample sbm(std::size_t n, std::uint64_t seed) {
  return sample_graph(uniform_sbm(planted_partition(2, 5, 1), n), seed);
}

SymmetricOperator dense_operator(const Eigen::MatrixXd& a) {
  return [a](std::span<const double> x, std::span<double> y) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv = a * xv;
  };
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

TEST_CASE("identity operator") {
  const auto res = top_eigenpairs(dense_operator(Eigen::MatrixXd::Identity(10, 10)), 10, 3);
  REQUIRE(res.converged);
  REQUIRE(res.pairs.size() == 3);
  for (const auto& p : res.pairs) CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two by two example") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const auto res = top_eigenpairs(dense_operator(a), 2, 2);
  REQUIRE(res.pairs.size() == 2);
  CHECK(res.pairs[0].value == doctest::Approx(3.0));
  CHECK(res.pairs[1].value == doctest::Approx(1.0));
  CHECK(res.pairs[0].vector[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(res.pairs[0].vector[1] == doctest::Approx(std::sqrt(0.5)));
  CHECK(res.pairs[1].vector[0] > 0);
}

TEST_CASE("magnitude ordering puts negative eigenvalues by absolute value") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a.diagonal() << 1, -5, 3, -2;
  const auto res = top_eigenpairs(dense_operator(a), 4, 4);
  REQUIRE(res.pairs.size() == 4);
  CHECK(res.pairs[0].value == doctest::Approx(-5));
  CHECK(res.pairs[1].value == doctest::Approx(3));
  CHECK(res.pairs[2].value == doctest::Approx(-2));
  CHECK(res.pairs[3].value == doctest::Approx(1));
}

TEST_CASE("distance matrix spectrum agrees with dense solver") {
  const auto g = sbm(300, 11).graph;
  const auto d3 = distance_matrix(g, 3);
  const auto dense = oracle::dense_eigenvalues(d3);
  const auto res = top_eigenpairs(as_operator(d3), 300, 6, {.tol = 1e-10, .max_iter = 20000, .seed = 3});
  REQUIRE(res.converged);
  for (std::size_t k = 0; k < 6; ++k) {
    CAPTURE(k);
    CHECK(res.pairs[k].value == doctest::Approx(dense[k]).epsilon(1e-6));
  }
}

TEST_CASE("residuals and orthogonality") {
  const auto g = sbm(2000, 5).graph;
  const auto d = distance_matrix(g, 3);
  EigenSolverOptions opts;
  opts.seed = 7;
  const auto res = top_eigenpairs(as_operator(d), 2000, 5, opts);
  REQUIRE(res.converged);
  std::vector<double> ax(2000);
  for (std::size_t a = 0; a < res.pairs.size(); ++a) {
    const auto& p = res.pairs[a];
    CHECK(dot(p.vector, p.vector) == doctest::Approx(1.0).epsilon(1e-12));
    d.multiply(p.vector, ax);
    double r2 = 0;
    for (std::size_t i = 0; i < ax.size(); ++i) r2 += (ax[i] - p.value * p.vector[i]) * (ax[i] - p.value * p.vector[i]);
    CHECK(std::sqrt(r2) <= 1e-8 * std::max(1.0, std::fabs(p.value)));
    CHECK(std::sqrt(r2) == doctest::Approx(p.residual).epsilon(1e-3).scale(1e-12));
    for (std::size_t b = 0; b < a; ++b) CHECK(std::fabs(dot(p.vector, res.pairs[b].vector)) <= 1e-8);
  }
}

TEST_CASE("top eigenvalue dominates random Rayleigh quotients") {
  const auto g = sbm(500, 2).graph;
  const auto d = distance_matrix(g, 2);
  const auto res = top_eigenpairs(as_operator(d), 500, 1);
  REQUIRE(res.converged);
  const double top = std::fabs(res.pairs[0].value);
  SplitMix64 rng(99);
  std::vector<double> x(500), y(500);
  for (int probe = 0; probe < 1000; ++probe) {
    for (double& v : x) v = rng.normal();
    d.multiply(x, y);
    CHECK(std::fabs(dot(x, y)) / dot(x, x) <= top * (1 + 1e-9));
  }
}

TEST_CASE("sign convention") {
  std::vector<double> v{0.0, 1e-300, -0.6, 0.8};
  canonicalize_sign(v);
  CHECK(v[2] == doctest::Approx(0.6));
  CHECK(v[3] == doctest::Approx(-0.8));
  std::vector<double> w{0.5, -0.5};
  canonicalize_sign(w);
  CHECK(w[0] == 0.5);
}

TEST_CASE("solver is deterministic") {
  const auto d = distance_matrix(sbm(800, 4).graph, 3);
  EigenSolverOptions opts;
  opts.seed = 42;
  const auto a = top_eigenpairs(as_operator(d), 800, 4, opts);
  const auto b = top_eigenpairs(as_operator(d), 800, 4, opts);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    CHECK(a.pairs[k].value == b.pairs[k].value);
    CHECK(a.pairs[k].vector == b.pairs[k].vector);
  }
}

TEST_CASE("empty operator and budget exhaustion") {
  CHECK_THROWS_AS(top_eigenpairs(dense_operator(Eigen::MatrixXd(0, 0)), 0, 1), DegenerateOperator);
  const auto d = distance_matrix(sbm(2000, 9).graph, 4);
  EigenSolverOptions opts;
  opts.max_iter = 6;
  const auto res = top_eigenpairs(as_operator(d), 2000, 4, opts);
  CHECK_FALSE(res.converged);
  CHECK(res.pairs.size() < 4);
  CHECK(res.diagnostics.rfind("NoConvergence", 0) == 0);
  for (const auto& p : res.pairs) CHECK(p.residual <= opts.tol * std::max(1.0, std::fabs(p.value)));
}

TEST_CASE("separation report on a synthetic spectrum") {
  const auto profile = derive_spectral_profile(uniform_sbm(planted_partition(2, 5, 1), 2000));
  std::vector<EigenPair> pairs(3);
  pairs[0].value = 81.0 * 1.1;
  pairs[1].value = 16.0 * 0.9;
  pairs[2].value = 12.0;
  const auto rep = separation_report(pairs, profile, 4, 2000);
  CHECK(rep.bulk_scale == doctest::Approx(9.0));
  CHECK(rep.ratios[0] == doctest::Approx(1.1));
  CHECK(rep.ratios[1] == doctest::Approx(0.9));
  CHECK(rep.informative_ok);
  CHECK(rep.bulk_ok);
  pairs[1].value = 1.0;
  CHECK_FALSE(separation_report(pairs, profile, 4, 2000).informative_ok);
  CHECK_THROWS(separation_report(std::span<const EigenPair>(pairs.data(), 2), profile, 4, 2000));
}

TEST_CASE("informative eigenvalues separate from the bulk") {
  const auto params = uniform_sbm(planted_partition(2, 5, 1), 2000);
  const auto profile = derive_spectral_profile(params);
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = distance_matrix(sample_graph(params, seed).graph, 4);
    const auto res = top_eigenpairs(as_operator(d), 2000, 3, {.tol = 1e-8, .max_iter = 5000, .seed = seed});
    if (res.pairs.size() < 3) continue;
    const auto rep = separation_report(res.pairs, profile, 4, 2000);
    ok += rep.informative_ok && rep.bulk_ok;
  }
  CHECK(ok >= 8);
}

TEST_CASE("shell matrix bound") {
  const std::size_t one[] = {1, 0, 0};
  const auto a = qc_bound(one);
  CHECK(a.exact == doctest::Approx(1.0));
  CHECK(a.row_sum == doctest::Approx(1.0));

  const std::size_t grow[] = {1, 4, 16};
  const auto b = qc_bound(grow);
  CHECK(b.row_sum == doctest::Approx(7.0));
  Eigen::Matrix3d q;
  q << 1, 2, 4, 2, 4, 0, 4, 0, 0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(q);
  CHECK(b.exact == doctest::Approx(es.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-12));
  CHECK(b.exact <= b.row_sum);

  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> s(1 + rng.below(6));
    for (auto& x : s) x = rng.below(50);
    const auto q2 = qc_bound(s);
    CHECK(q2.exact <= q2.row_sum * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("delta radius examples") {
  const auto tree = delta_radius_check(complete_tree(3, 4), 3, 3.0);
  CHECK(tree.rho == doctest::Approx(0.0));
  CHECK(tree.cycles == 0);
  CHECK(tree.tangle_free);

  const auto c4 = delta_radius_check(cycle_graph(4), 2, 2.0);
  CHECK(c4.rho == doctest::Approx(1.0));
  CHECK(c4.max_entry == 1);
  CHECK(c4.cycles == 1);
  CHECK(c4.cycle_bound >= c4.rho);
}

TEST_CASE("delta radius stays below the cycle bound on sampled graphs") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = sbm(500, 20 + seed).graph;
    const auto rep = delta_radius_check(g, 3, 3.0);
    CAPTURE(seed);
    CHECK(rep.rho <= rep.cycle_bound * (1 + 1e-9) + 1e-9);
    CHECK(rep.rho <= rep.harness_bound);
    const auto b = path_expansion_matrix(g, 3, 1 << 20).matrix;
    const auto dense = oracle::dense_spectral_radius(delta_matrix(b, distance_matrix(g, 3)));
    CHECK(rep.rho == doctest::Approx(dense).epsilon(1e-6).scale(1e-9));
  }
}

TEST_CASE("eigenvector perturbation bound") {
  CHECK(davis_kahan_bound(2.0, 1.0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(davis_kahan_bound(1.0, 1.0, 2) == doctest::Approx(4.0));
  CHECK(davis_kahan_bound(3.0, 0.0, 1) == 0.0);
  CHECK_THROWS_AS(davis_kahan_bound(0.0, 1.0, 1), ZeroGap);
}
