#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "distsbm/errors.hpp"
#include "distsbm/model.hpp"

using namespace distsbm;
using doctest::Approx;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd W(2, 2);
  W << a, b, c, d;
  return W;
}

}  // namespace

TEST_CASE("two-block profile") {
  const auto p = derive_spectral_profile(uniform_sbm(mat2(5, 1, 1, 5), 2000));
  CHECK(p.M(0, 0) == Approx(2.5));
  CHECK(p.M(0, 1) == Approx(0.5));
  CHECK(p.alpha == Approx(3.0));
  CHECK(p.mu(0) == Approx(3.0));
  CHECK(p.mu(1) == Approx(2.0));
  CHECK(p.tau == Approx(4.0 / 3.0));
  CHECK(p.r0 == 2);
  CHECK(p.d == 1);
  CHECK(p.degree_regular);
  CHECK_FALSE(p.subcritical);
  for (Eigen::Index i = 0; i < 2; ++i) CHECK(p.phi(i, 0) == Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("below the threshold") {
  const auto p = derive_spectral_profile(uniform_sbm(mat2(4, 2, 2, 4), 2000));
  CHECK(p.mu(0) == Approx(3.0));
  CHECK(p.mu(1) == Approx(1.0));
  CHECK(p.tau == Approx(1.0 / 3.0));
  CHECK(p.r0 == 1);
}

TEST_CASE("three-block circulant with a repeated eigenvalue") {
  const auto p = derive_spectral_profile(uniform_sbm(planted_partition(3, 9, 1.5), 3000));
  CHECK(p.alpha == Approx(4.0));
  CHECK(p.mu(1) == Approx(2.5));
  CHECK(p.mu(2) == Approx(2.5));
  CHECK(p.d == 2);
  CHECK(p.tau == Approx(1.5625));
  CHECK(p.r0 == 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(p.phi(i, 0) == Approx(1 / std::sqrt(3.0)));
}

TEST_CASE("left eigenvector identity and ordering") {
  for (const auto& W : {mat2(5, 1, 1, 5), planted_partition(3, 9, 1.5), planted_partition(4, 2, 6)}) {
    const auto p = derive_spectral_profile(uniform_sbm(W, 1000));
    for (Eigen::Index k = 0; k < p.phi.cols(); ++k) {
      const Eigen::RowVectorXd res = p.phi.col(k).transpose() * p.M - p.mu(k) * p.phi.col(k).transpose();
      CHECK(res.cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(p.phi.col(k).norm() == Approx(1.0));
      if (k > 0) CHECK(std::fabs(p.mu(k)) <= std::fabs(p.mu(k - 1)) + 1e-12);
    }
    // r0 brackets mu_1.
    if (p.r0 < static_cast<int>(p.r())) CHECK(p.mu(p.r0) * p.mu(p.r0) <= p.mu(0));
    CHECK(p.mu(p.r0 - 1) * p.mu(p.r0 - 1) > p.mu(0));
  }
}

TEST_CASE("degree regularity") {
  {
    const auto p = derive_spectral_profile(uniform_sbm(mat2(5, 1, 1, 5), 100));
    const auto dr = check_degree_regularity(p);
    CHECK(dr.regular);
    CHECK(dr.residuals.cwiseAbs().maxCoeff() <= 1e-12);
  }
  {
    const auto p = derive_spectral_profile(uniform_sbm(mat2(5, 1, 1, 3), 100));
    const auto dr = check_degree_regularity(p);
    CHECK_FALSE(dr.regular);
    CHECK(dr.column_sums(0) == Approx(3.0));
    CHECK(dr.column_sums(1) == Approx(2.0));
    CHECK_FALSE(p.degree_regular);
    CHECK(std::find(p.warnings.begin(), p.warnings.end(), "NotDegreeRegular") != p.warnings.end());
  }
  CHECK(check_degree_regularity(derive_spectral_profile(uniform_sbm(planted_partition(3, 9, 1.5), 100))).regular);
}

TEST_CASE("column sums equal alpha on regular profiles") {
  for (const auto& W : {mat2(5, 1, 1, 5), planted_partition(3, 9, 1.5), planted_partition(5, 1, 3)}) {
    const auto p = derive_spectral_profile(uniform_sbm(W, 1000));
    REQUIRE(p.degree_regular);
    for (Eigen::Index j = 0; j < p.M.cols(); ++j) CHECK(std::fabs(p.M.col(j).sum() - p.alpha) <= 1e-9);
  }
}

TEST_CASE("profile errors and flags") {
  CHECK_THROWS_AS(derive_spectral_profile(uniform_sbm(mat2(1, 0, 0, 1), 10)), NotPositiveRegular);
  CHECK_THROWS_AS(derive_spectral_profile(uniform_sbm(mat2(0, 2, 2, 0), 10)), NotPositiveRegular);
  const auto sub = derive_spectral_profile(uniform_sbm(mat2(1, 0.5, 0.5, 1), 10));
  CHECK(sub.subcritical);

  SbmParams bad = uniform_sbm(mat2(5, 1, 2, 5), 10);
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  bad = uniform_sbm(mat2(5, 1, 1, 5), 10);
  bad.pi << 0.5, 0.6;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  bad = uniform_sbm(mat2(5, 1, 1, 5), 1);
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  bad = uniform_sbm(mat2(5, -1, -1, 5), 10);
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("non-uniform prior is flagged") {
  SbmParams p = uniform_sbm(mat2(5, 1, 1, 5), 100);
  p.pi << 0.3, 0.7;
  const auto prof = derive_spectral_profile(p);
  CHECK_FALSE(prof.uniform_prior);
  CHECK(std::find(prof.warnings.begin(), prof.warnings.end(), "NonUniformPrior") != prof.warnings.end());
}

TEST_CASE("sampling edge cases") {
  const auto empty = sample_graph(uniform_sbm(Eigen::MatrixXd::Zero(2, 2), 50), 1);
  CHECK(empty.graph.m() == 0);
  CHECK(empty.sigma.size() == 50);
  // W / n >= 1 clamps to an edge with probability one.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_graph(uniform_sbm(Eigen::MatrixXd::Constant(2, 2, 8.0), 2), seed);
    CHECK(s.graph.m() == 1);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto p = uniform_sbm(mat2(5, 1, 1, 5), 500);
  const auto a = sample_graph(p, 42), b = sample_graph(p, 42), c = sample_graph(p, 43);
  CHECK(a.graph == b.graph);
  CHECK(a.sigma == b.sigma);
  CHECK_FALSE(a.graph == c.graph);
  for (Label s : a.sigma) CHECK(s < 2);
}

TEST_CASE("mean degree matches alpha") {
  const auto p = uniform_sbm(mat2(5, 1, 1, 5), 2000);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_graph(p, seed);
    CAPTURE(seed);
    CHECK(std::fabs(static_cast<double>(s.graph.m()) - 3000.0) <= 0.05 * 3000.0);
  }
}

TEST_CASE("within-block and cross-block edge rates") {
  const auto p = uniform_sbm(mat2(5, 1, 1, 5), 4000);
  const auto s = sample_graph(p, 9);
  double within = 0, across = 0;
  for (const Edge& e : s.graph.edges()) (s.sigma[e.u] == s.sigma[e.v] ? within : across) += 1;
  // Expected counts n^2/4 * 5/n and n^2/4 * 1/n.
  CHECK(within == Approx(5000).epsilon(0.05));
  CHECK(across == Approx(1000).epsilon(0.1));
}

TEST_CASE("block fractions concentrate") {
  SbmParams p = uniform_sbm(mat2(5, 1, 1, 5), 1000);
  p.pi << 0.3, 0.7;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = sample_graph(p, seed);
    const double frac = static_cast<double>(std::count(s.sigma.begin(), s.sigma.end(), 0u)) / 1000.0;
    if (std::fabs(frac - 0.3) > 3 * std::sqrt(0.3 / 1000.0)) ++violations;
  }
  CHECK(violations <= 2);
}

TEST_CASE("choose_ell") {
  const auto p = derive_spectral_profile(uniform_sbm(mat2(5, 1, 1, 5), 10000));
  const auto small = choose_ell(p, 1e4, 1.0 / 12.0);
  CHECK(small.ell == 1);
  CHECK(small.clamped);
  CHECK_FALSE(small.theoretical);

  const auto forced = choose_ell(p, 1e4, 1.0 / 12.0, 4);
  CHECK(forced.ell == 4);
  CHECK(forced.overridden);

  CHECK(choose_ell(p, std::pow(3.0, 60), 1.0 / 12.0).ell == 5);
  const auto inside = choose_ell(p, std::pow(3.0, 130), kDefaultKappa);
  CHECK(inside.ell == 10);
  CHECK(inside.theoretical);

  CHECK_THROWS_AS(choose_ell(p, 1e4, 0.0), InvalidKappa);
  CHECK_THROWS_AS(choose_ell(p, 1e4, -1.0), InvalidKappa);
}
