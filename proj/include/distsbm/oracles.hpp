#pragma once

#include <span>
#include <vector>

#include "distsbm/graph.hpp"

namespace distsbm::oracle {

// Slow reference implementations for cross-checks. They share no code paths
// with the production kernels: everything runs on dense matrices.

/// Floyd-Warshall; -1 marks unreachable pairs.
std::vector<std::vector<int>> all_pairs_distances(const SparseGraph& g);

/// D^ell from the all-pairs distance table.
SparseSymMatrix distance_matrix(const SparseGraph& g, int ell);

/// B^ell by enumerating every vertex tuple (v_0, ..., v_ell) of distinct
/// vertices with consecutive entries adjacent in the dense adjacency matrix.
SparseSymMatrix path_count_matrix(const SparseGraph& g, int ell);

/// All eigenvalues of the symmetric matrix, |.| descending, ties by value.
std::vector<double> dense_eigenvalues(const SparseSymMatrix& m);

double dense_spectral_radius(const SparseSymMatrix& m);

/// Overlap by direct agreement counting for every permutation.
double overlap(std::span<const Label> sigma, std::span<const Label> sigma_hat, std::span<const double> pi);

}  // namespace distsbm::oracle
