#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "distsbm/adversary.hpp"
#include "distsbm/graph.hpp"
#include "distsbm/reconstruct.hpp"

namespace distsbm {

/// {"n":int,"r":int,"seed":int,"types":[int...],"edges":[[u,v]...]}, 0-based, u < v.
struct GraphDocument {
  std::size_t r = 0;
  std::uint64_t seed = 0;
  std::vector<Label> types;  // may be empty when labels are unknown
  SparseGraph graph;
};

std::string graph_to_json(const GraphDocument& doc);
GraphDocument graph_from_json(const std::string& text);

/// {"gamma":int,"add":[[u,v]...],"remove":[[u,v]...]}
std::string perturbation_to_json(const Perturbation& p);
Perturbation perturbation_from_json(const std::string& text);

/// {"labels":[...],"overlap":x,"perm":[...]}; overlap and perm are null when
/// the true labels are unknown.
std::string assignment_to_json(const LabelAssignment& a, const std::optional<OverlapScore>& score);

/// Header "n ell kind", then "i j v" for every nonzero of the full symmetric
/// matrix in lexicographic order.
void write_matrix_dump(std::ostream& os, const SparseSymMatrix& m, int ell, const std::string& kind);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Shortest decimal text that reads back as the same double.
std::string format_double(double x);

}  // namespace distsbm
