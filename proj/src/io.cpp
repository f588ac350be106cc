#include "distsbm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "distsbm/errors.hpp"

namespace distsbm {

using nlohmann::json;

namespace {

json edges_to_json(const std::vector<Edge>& edges) {
  json a = json::array();
  for (const Edge& e : edges) a.push_back({e.u, e.v});
  return a;
}

std::vector<Edge> edges_from_json(const json& a, std::size_t n, const char* what) {
  if (!a.is_array()) throw IoError(std::string(what) + ": expected an array of pairs");
  std::vector<Edge> out;
  out.reserve(a.size());
  for (const json& e : a) {
    if (!e.is_array() || e.size() != 2) throw IoError(std::string(what) + ": expected [u,v] pairs");
    const auto u = e[0].get<std::int64_t>(), v = e[1].get<std::int64_t>();
    if (u < 0 || v < 0 || (n > 0 && (static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n))) {
      throw IoError(std::string(what) + ": vertex out of range");
    }
    if (u == v) throw IoError(std::string(what) + ": self-loop");
    out.push_back(canonical(static_cast<Vertex>(u), static_cast<Vertex>(v)));
  }
  return out;
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string graph_to_json(const GraphDocument& doc) {
  json j;
  j["n"] = doc.graph.n();
  j["r"] = doc.r;
  j["seed"] = doc.seed;
  j["types"] = doc.types;
  j["edges"] = edges_to_json(doc.graph.edges());
  return j.dump() + "\n";
}

GraphDocument graph_from_json(const std::string& text) {
  const json j = parse(text, "graph");
  try {
    GraphDocument doc;
    const auto n = j.at("n").get<std::size_t>();
    doc.r = j.value("r", std::size_t{0});
    doc.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("types")) doc.types = j.at("types").get<std::vector<Label>>();
    if (!doc.types.empty()) {
      if (doc.types.size() != n) throw IoError("graph: types length differs from n");
      for (Label t : doc.types) {
        if (doc.r > 0 && t >= doc.r) throw IoError("graph: type label outside [0, r)");
      }
    }
    const auto edges = edges_from_json(j.at("edges"), n, "graph");
    doc.graph = SparseGraph(n, edges);
    return doc;
  } catch (const json::exception& e) {
    throw IoError(std::string("graph: ") + e.what());
  }
}

std::string perturbation_to_json(const Perturbation& p) {
  json j;
  j["gamma"] = p.gamma_budget;
  j["add"] = edges_to_json(p.added);
  j["remove"] = edges_to_json(p.removed);
  return j.dump() + "\n";
}

Perturbation perturbation_from_json(const std::string& text) {
  const json j = parse(text, "perturbation");
  try {
    return make_perturbation(j.at("gamma").get<std::size_t>(),
                             edges_from_json(j.value("add", json::array()), 0, "perturbation"),
                             edges_from_json(j.value("remove", json::array()), 0, "perturbation"));
  } catch (const json::exception& e) {
    throw IoError(std::string("perturbation: ") + e.what());
  }
}

std::string assignment_to_json(const LabelAssignment& a, const std::optional<OverlapScore>& score) {
  json j;
  j["labels"] = a.labels;
  if (score) {
    j["overlap"] = score->value;
    j["perm"] = score->best_permutation;
  } else {
    j["overlap"] = nullptr;
    j["perm"] = nullptr;
  }
  return j.dump() + "\n";
}

void write_matrix_dump(std::ostream& os, const SparseSymMatrix& m, int ell, const std::string& kind) {
  os << m.n() << ' ' << ell << ' ' << kind << '\n';
  for (const auto& t : m.full_entries()) os << t.row << ' ' << t.col << ' ' << t.value << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace distsbm
