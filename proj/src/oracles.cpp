#include "distsbm/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "distsbm/errors.hpp"

namespace distsbm::oracle {

namespace {

std::vector<std::vector<char>> dense_adjacency(const SparseGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (const Edge& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1;
  return a;
}

SparseSymMatrix from_dense(const std::vector<std::vector<std::int32_t>>& m) {
  std::vector<SparseSymMatrix::Triplet> t;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j) {
      if (m[i][j] != 0) t.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), m[i][j]});
    }
  }
  return SparseSymMatrix::from_triplets(m.size(), std::move(t));
}

}  // namespace

std::vector<std::vector<int>> all_pairs_distances(const SparseGraph& g) {
  const std::size_t n = g.n();
  constexpr int inf = 1 << 29;
  const auto a = dense_adjacency(g);
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == inf) continue;
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  for (auto& row : d) {
    for (int& x : row) {
      if (x == inf) x = -1;
    }
  }
  return d;
}

SparseSymMatrix distance_matrix(const SparseGraph& g, int ell) {
  const auto d = all_pairs_distances(g);
  std::vector<std::vector<std::int32_t>> m(g.n(), std::vector<std::int32_t>(g.n(), 0));
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = 0; j < g.n(); ++j) m[i][j] = d[i][j] == ell ? 1 : 0;
  }
  return from_dense(m);
}

SparseSymMatrix path_count_matrix(const SparseGraph& g, int ell) {
  const std::size_t n = g.n();
  const auto a = dense_adjacency(g);
  std::vector<std::vector<std::int32_t>> m(n, std::vector<std::int32_t>(n, 0));
  std::vector<std::size_t> tuple;
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(tuple.size()) == ell + 1) {
      ++m[tuple.front()][tuple.back()];
      return;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (!a[tuple.back()][x]) continue;
      if (std::find(tuple.begin(), tuple.end(), x) != tuple.end()) continue;
      tuple.push_back(x);
      self(self);
      tuple.pop_back();
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    tuple.assign(1, i);
    extend(extend);
  }
  return from_dense(m);
}

std::vector<double> dense_eigenvalues(const SparseSymMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : m.full_entries()) a(t.row, t.col) = t.value;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end(), [](double x, double y) {
    return std::fabs(x) != std::fabs(y) ? std::fabs(x) > std::fabs(y) : x > y;
  });
  return ev;
}

double dense_spectral_radius(const SparseSymMatrix& m) {
  if (m.n() == 0) return 0.0;
  return std::fabs(dense_eigenvalues(m).front());
}

double overlap(std::span<const Label> sigma, std::span<const Label> sigma_hat, std::span<const double> pi) {
  const std::size_t r = pi.size();
  std::vector<Label> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t agree = 0;
    for (std::size_t v = 0; v < sigma.size(); ++v) {
      if (sigma_hat[v] == perm[sigma[v]]) ++agree;
    }
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(sigma.size()) - *std::max_element(pi.begin(), pi.end());
}

}  // namespace distsbm::oracle
