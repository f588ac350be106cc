#include "distsbm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "distsbm/diagnostics.hpp"
#include "distsbm/errors.hpp"
#include "distsbm/gw.hpp"
#include "distsbm/oracles.hpp"
#include "distsbm/rng.hpp"
#include "distsbm/spectral.hpp"

namespace distsbm {

using nlohmann::json;

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.params = uniform_sbm(planted_partition(2, 5.0, 1.0), 2000);
  c.ell = 4;
  for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(s);
  return c;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (seeds.empty()) throw InvalidParams("config: at least one seed is required");
  if (ell && *ell < 1) throw InvalidParams("config: ell must be positive");
  if (!(kappa > 0.0)) throw InvalidKappa("config: kappa must be positive");
  if (K && !(*K > 0.0)) throw InvalidParams("config: K must be positive");
  if (perturbation != "clique") throw InvalidParams("config: unknown perturbation kind '" + perturbation + "'");
  if (gw_depth < 1 || gw_runs < 3) throw InvalidParams("config: gw needs depth >= 1 and runs >= 3");
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  ExperimentConfig c = ExperimentConfig::defaults();
  try {
    if (j.contains("W")) {
      const auto rows = j.at("W").get<std::vector<std::vector<double>>>();
      const std::size_t r = rows.size();
      c.params.r = r;
      c.params.W.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
      for (std::size_t a = 0; a < r; ++a) {
        if (rows[a].size() != r) throw InvalidParams("config: W must be square");
        for (std::size_t b = 0; b < r; ++b) c.params.W(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rows[a][b];
      }
      c.params.pi = uniform_law(r);
    }
    if (j.contains("r") && j.at("r").get<std::size_t>() != c.params.r) {
      throw InvalidParams("config: r disagrees with W");
    }
    if (j.contains("pi")) {
      const auto pi = j.at("pi").get<std::vector<double>>();
      c.params.pi = Eigen::Map<const Eigen::VectorXd>(pi.data(), static_cast<Eigen::Index>(pi.size()));
    }
    if (j.contains("n")) c.params.n = j.at("n").get<std::size_t>();
    if (j.contains("ell")) {
      if (j.at("ell").is_null()) {
        c.ell.reset();
      } else {
        c.ell = j.at("ell").get<int>();
      }
    }
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("matrix")) c.matrix = parse_matrix_kind(j.at("matrix").get<std::string>());
    if (j.contains("K") && !j.at("K").is_null()) c.K = j.at("K").get<double>();
    if (j.contains("perturbation")) c.perturbation = j.at("perturbation").get<std::string>();
    if (j.contains("gamma")) c.gammas = j.at("gamma").get<std::vector<std::size_t>>();
    if (j.contains("rogue")) c.rogue = j.at("rogue").get<bool>();
    if (j.contains("rogue_mode")) {
      const auto m = j.at("rogue_mode").get<std::string>();
      if (m == "greedy") {
        c.rogue_mode = RogueMode::greedy;
      } else if (m == "wired") {
        c.rogue_mode = RogueMode::wired;
      } else {
        throw InvalidParams("config: rogue_mode must be greedy or wired");
      }
    }
    if (j.contains("gw")) {
      c.gw_runs = j.at("gw").value("runs", c.gw_runs);
      c.gw_depth = j.at("gw").value("depth", c.gw_depth);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string csv_header() { return std::string(kCsvVersion) + "\n" + kCsvColumns + "\n"; }

std::string csv_row(const ExperimentRecord& rec) {
  std::ostringstream os;
  os << rec.seed << ',' << rec.n << ',' << rec.r << ',' << rec.ell << ',' << rec.gamma << ','
     << format_double(rec.overlap);
  for (std::size_t k = 0; k < 4; ++k) {
    os << ',';
    if (k < rec.lambda.size()) os << format_double(rec.lambda[k]);
  }
  os << ',';
  if (rec.qk_bound) os << format_double(*rec.qk_bound);
  os << ',';
  if (rec.rogue_rayleigh) os << format_double(*rec.rogue_rayleigh);
  os << ',' << format_double(rec.ms_build) << ',' << format_double(rec.ms_eig) << ','
     << format_double(rec.ms_label) << '\n';
  return os.str();
}

int resolve_ell(const ExperimentConfig& cfg, const SpectralProfile& profile) {
  if (cfg.ell) return choose_ell(profile, static_cast<double>(cfg.params.n), cfg.kappa, cfg.ell).ell;
  return choose_ell(profile, static_cast<double>(cfg.params.n), cfg.kappa).ell;
}

namespace {

DetectOptions detect_options(const ExperimentConfig& cfg) {
  DetectOptions o;
  o.kind = cfg.matrix;
  o.K_override = cfg.K;
  return o;
}

ExperimentRecord base_record(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t n, int ell,
                             const DetectResult& dr) {
  ExperimentRecord rec;
  rec.seed = seed;
  rec.n = n;
  rec.r = cfg.params.r;
  rec.ell = ell;
  for (std::size_t k = 0; k < std::min<std::size_t>(4, dr.pairs.size()); ++k) rec.lambda.push_back(dr.pairs[k].value);
  rec.ms_build = dr.ms_build;
  rec.ms_eig = dr.ms_eig;
  rec.ms_label = dr.ms_label;
  return rec;
}

std::vector<double> pi_vector(const SbmParams& p) { return {p.pi.data(), p.pi.data() + p.pi.size()}; }

}  // namespace

ExperimentRecord run_record(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t gamma) {
  const SpectralProfile profile = derive_spectral_profile(cfg.params);
  const int ell = resolve_ell(cfg, profile);
  const TypedGraphSample sample = sample_graph(cfg.params, seed);
  SparseGraph g = sample.graph;
  std::optional<double> qk;
  if (gamma > 0) {
    PlantedClique pc = plant_clique(sample.graph, gamma, seed);
    qk = pc.perturbation.affected.empty()
             ? 0.0
             : qk_bound(sample.graph, pc.graph, pc.perturbation.affected, ell).exact;
    g = std::move(pc.graph);
  }
  const DetectResult dr = detect(g, profile, ell, seed, detect_options(cfg));
  ExperimentRecord rec = base_record(cfg, seed, g.n(), ell, dr);
  rec.gamma = gamma;
  const auto pi = pi_vector(cfg.params);
  rec.overlap = overlap(sample.sigma, dr.assignment.labels, pi).value;
  rec.qk_bound = qk;
  if (cfg.rogue) {
    RogueOptions ro;
    ro.mode = cfg.rogue_mode;
    ro.solver.seed = derive_seed(seed, "rogue");
    try {
      rec.rogue_rayleigh = build_rogue_certificate(g, profile, ell, std::max<std::size_t>(gamma, 1), ro).rayleigh;
    } catch (const GreedyExhausted&) {
      rec.rogue_rayleigh.reset();
    }
  }
  return rec;
}

DetectRun run_detect(const GraphDocument& doc, const ExperimentConfig& cfg, std::uint64_t seed) {
  if (doc.r != 0 && doc.r != cfg.params.r) throw InvalidParams("detect: graph r differs from the configured profile");
  SbmParams params = cfg.params;
  params.n = doc.graph.n();
  const SpectralProfile profile = derive_spectral_profile(params);
  ExperimentConfig local = cfg;
  local.params = params;
  const int ell = resolve_ell(local, profile);
  DetectRun run;
  run.result = detect(doc.graph, profile, ell, seed, detect_options(cfg));
  run.record = base_record(cfg, seed, doc.graph.n(), ell, run.result);
  if (!doc.types.empty()) {
    run.score = overlap(doc.types, run.result.assignment.labels, pi_vector(params));
    run.record.overlap = run.score->value;
  } else {
    run.record.overlap = std::nan("");
  }
  return run;
}

// ---------------------------------------------------------------------------
// Verification suites.

namespace {

std::string fmt(double x) { return format_double(x); }

void add(std::vector<CheckResult>& out, const std::string& suite, const std::string& name, bool pass,
         const std::string& detail) {
  out.push_back({suite, name, pass, detail});
}

std::vector<CheckResult> verify_oracles(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::string s = "oracles";
  {
    bool ok = true;
    std::size_t compared = 0;
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto p = uniform_sbm(planted_partition(2, 5.0, 1.0), 150);
      const auto g = sample_graph(p, derive_seed(seed, k)).graph;
      for (int ell = 1; ell <= 4; ++ell, ++compared) ok = ok && distance_matrix(g, ell) == oracle::distance_matrix(g, ell);
    }
    add(out, s, "distance_matrix", ok, std::to_string(compared) + " matrices against Floyd-Warshall");
  }
  {
    bool ok = true;
    std::size_t compared = 0;
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto p = uniform_sbm(planted_partition(2, 12.0, 4.0), 40);
      const auto g = sample_graph(p, derive_seed(seed, 100 + k)).graph;
      for (int ell = 1; ell <= 4; ++ell, ++compared) {
        ok = ok && path_expansion_matrix(g, ell, 1 << 30).matrix == oracle::path_count_matrix(g, ell);
      }
    }
    add(out, s, "path_expansion_matrix", ok, std::to_string(compared) + " matrices against tuple enumeration");
  }
  {
    const auto p = uniform_sbm(planted_partition(2, 5.0, 1.0), 300);
    const auto g = sample_graph(p, derive_seed(seed, "eig-oracle")).graph;
    const auto d3 = distance_matrix(g, 3);
    EigenSolverOptions o;
    o.seed = seed;
    const auto er = top_eigenpairs(as_operator(d3), g.n(), 4, o);
    const auto dense = oracle::dense_eigenvalues(d3);
    double worst = er.pairs.size() == 4 ? 0.0 : INFINITY;
    for (std::size_t k = 0; k < er.pairs.size(); ++k) {
      worst = std::max(worst, std::fabs(er.pairs[k].value - dense[k]) / std::max(1.0, std::fabs(dense[k])));
    }
    add(out, s, "top_eigenpairs", worst <= 1e-6, "max relative error " + fmt(worst) + " on D^3, n=300");
  }
  return out;
}

std::vector<CheckResult> verify_spectra(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::string s = "spectra";
  {
    const auto pr = derive_spectral_profile(uniform_sbm(planted_partition(2, 5.0, 1.0), 2000));
    const bool ok = std::fabs(pr.alpha - 3) < 1e-12 && std::fabs(pr.mu(1) - 2) < 1e-12 &&
                    std::fabs(pr.tau - 4.0 / 3) < 1e-12 && pr.r0 == 2 && pr.d == 1;
    add(out, s, "profile_two_type", ok, "alpha=" + fmt(pr.alpha) + " tau=" + fmt(pr.tau));
  }
  {
    const auto pr = derive_spectral_profile(uniform_sbm(planted_partition(3, 9.0, 1.5), 3000));
    const bool ok = std::fabs(pr.alpha - 4) < 1e-12 && std::fabs(pr.mu(1) - 2.5) < 1e-12 &&
                    std::fabs(pr.tau - 1.5625) < 1e-12 && pr.r0 == 3 && pr.d == 2;
    add(out, s, "profile_three_type", ok, "d=" + std::to_string(pr.d) + " r0=" + std::to_string(pr.r0));
  }
  {
    double worst = 0.0;
    for (const auto& W : {planted_partition(2, 5.0, 1.0), planted_partition(3, 9.0, 1.5), planted_partition(4, 7.0, 0.5)}) {
      const auto pr = derive_spectral_profile(uniform_sbm(W, 1000));
      for (Eigen::Index k = 0; k < pr.phi.cols(); ++k) {
        const Eigen::RowVectorXd res = pr.phi.col(k).transpose() * pr.M - pr.mu(k) * pr.phi.col(k).transpose();
        worst = std::max(worst, res.cwiseAbs().maxCoeff());
      }
    }
    add(out, s, "left_eigenvectors", worst <= 1e-8, "max |phi^T M - mu phi^T| = " + fmt(worst));
  }
  {
    const auto cfg = ExperimentConfig::defaults();
    const auto pr = derive_spectral_profile(cfg.params);
    std::size_t good = 0;
    double worst_res = 0.0, worst_orth = 0.0;
    const int runs = 3;
    for (int k = 0; k < runs; ++k) {
      const auto g = sample_graph(cfg.params, derive_seed(seed, static_cast<std::uint64_t>(k))).graph;
      const auto d4 = distance_matrix(g, 4);
      EigenSolverOptions o;
      o.seed = seed;
      const auto er = top_eigenpairs(as_operator(d4), g.n(), 4, o);
      for (std::size_t a = 0; a < er.pairs.size(); ++a) {
        worst_res = std::max(worst_res, er.pairs[a].residual / std::max(1.0, std::fabs(er.pairs[a].value)));
        for (std::size_t b = a + 1; b < er.pairs.size(); ++b) {
          double dot = 0.0;
          for (std::size_t i = 0; i < g.n(); ++i) dot += er.pairs[a].vector[i] * er.pairs[b].vector[i];
          worst_orth = std::max(worst_orth, std::fabs(dot));
        }
      }
      const auto rep = separation_report(er.pairs, pr, 4, g.n());
      if (rep.informative_ok && rep.bulk_ok) ++good;
    }
    add(out, s, "solver_residuals", worst_res <= 1e-8 && worst_orth <= 1e-8,
        "relative residual " + fmt(worst_res) + ", orthogonality " + fmt(worst_orth));
    add(out, s, "separation", good == static_cast<std::size_t>(runs),
        std::to_string(good) + "/" + std::to_string(runs) + " samples within the separation bands");
  }
  return out;
}

std::vector<CheckResult> verify_bounds(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::string s = "bounds";
  {
    std::vector<Edge> path;
    for (Vertex v = 0; v + 1 < 60; ++v) path.push_back({v, v + 1});
    const SparseGraph tree(60, path);
    const auto dr = delta_radius_check(tree, 3, 3.0);
    add(out, s, "tree_delta_zero", dr.rho == 0.0 && dr.max_entry == 0, "rho=" + fmt(dr.rho));
  }
  {
    const std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    const auto dr = delta_radius_check(SparseGraph(4, c4), 2, 2.0);
    add(out, s, "four_cycle_delta", std::fabs(dr.rho - 1.0) < 1e-9, "rho=" + fmt(dr.rho));
  }
  {
    SplitMix64 rng(derive_seed(seed, "qc"));
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::size_t> shells(1 + rng.below(6));
      for (auto& x : shells) x = rng.below(50);
      const auto q = qc_bound(shells);
      ok = ok && q.exact <= q.row_sum * (1 + 1e-12) + 1e-12;
    }
    add(out, s, "qc_exact_below_row_sum", ok, "200 random shell profiles");
  }
  const auto p = uniform_sbm(planted_partition(2, 5.0, 1.0), 500);
  const auto g = sample_graph(p, derive_seed(seed, "bounds")).graph;
  {
    const auto dr = delta_radius_check(g, 3, 3.0);
    add(out, s, "delta_radius", dr.rho <= dr.harness_bound && dr.rho <= dr.cycle_bound + 1e-9,
        "rho=" + fmt(dr.rho) + " cycle_bound=" + fmt(dr.cycle_bound) + " harness=" + fmt(dr.harness_bound));
  }
  {
    const auto pc = plant_clique(g, 5, seed);
    const auto diff = distance_change(g, pc.graph, 3);
    const double rho = diff.stored_nnz() == 0 ? 0.0 : oracle::dense_spectral_radius(diff);
    const auto qk = qk_bound(g, pc.graph, pc.perturbation.affected, 3);
    add(out, s, "qk_dominates", rho <= qk.exact + 1e-9, "rho=" + fmt(rho) + " qk=" + fmt(qk.exact));
  }
  return out;
}

std::vector<CheckResult> verify_gw(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::string s = "gw";
  const auto two = derive_spectral_profile(uniform_sbm(planted_partition(2, 5.0, 1.0), 2000));
  const auto three = derive_spectral_profile(uniform_sbm(planted_partition(3, 9.0, 1.5), 3000));
  for (const auto* pr : {&two, &three}) {
    const auto cf = moment_closed_forms(*pr, pr->left_vector(1), pr->mu(1));
    const double ev = 1.0 / (pr->tau - 1.0), es = pr->tau / (pr->tau - 1.0);
    const bool ok = std::fabs(cf.var_sum - ev) <= 1e-9 && std::fabs(cf.sqmean_sum - es) <= 1e-9;
    add(out, s, "closed_forms_r" + std::to_string(pr->r()), ok,
        "var_sum=" + fmt(cf.var_sum) + " sqmean_sum=" + fmt(cf.sqmean_sum));
  }
  for (const auto* pr : {&two, &three}) {
    GwConfig c;
    c.M = pr->M;
    c.root_law = uniform_law(pr->r());
    c.runs = 100000;
    c.seed = derive_seed(seed, pr->r());
    const auto ms = martingale_limit_check(c, pr->left_vector(1), pr->mu(1));
    const double ev = 1.0 / (pr->tau - 1.0);
    add(out, s, "var_sum_monte_carlo_r" + std::to_string(pr->r()), std::fabs(ms.var_sum - ev) <= 0.1 * ev,
        "estimate=" + fmt(ms.var_sum) + " raw_depth8=" + fmt(ms.var_sum_raw) + " closed_form=" + fmt(ev));
    add(out, s, "martingale_mean_r" + std::to_string(pr->r()),
        std::fabs(ms.mean - ms.expected) <= 3 * ms.std_error,
        "mean=" + fmt(ms.mean) + " expected=" + fmt(ms.expected) + " se=" + fmt(ms.std_error));
    for (double eta : {0.1, 0.05}) {
      const auto mk = markov_bound_check(ms, pr->tau, eta);
      add(out, s, "markov_r" + std::to_string(pr->r()) + "_eta" + fmt(eta), mk.holds,
          "threshold=" + fmt(mk.threshold));
    }
  }
  for (int j = 1; j <= 2; ++j) {
    const auto cc = cumulant_relation_check(two.M, two.left_vector(1), two.mu(1), j, 50000, derive_seed(seed, "cumulant"));
    add(out, s, "cumulant_j" + std::to_string(j), cc.within_3se, "residual_inf=" + fmt(cc.residual_inf));
  }
  {
    GwConfig c;
    c.M = two.M;
    c.root_law = uniform_law(2);
    c.runs = 20000;
    c.seed = derive_seed(seed, "progeny");
    const auto pc = mean_progeny_check(simulate_population(c), c.M);
    add(out, s, "mean_progeny", pc.within_3se, "max |z| = " + fmt(pc.max_abs_z));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "oracles") return verify_oracles(seed);
  if (suite == "spectra") return verify_spectra(seed);
  if (suite == "bounds") return verify_bounds(seed);
  if (suite == "gw") return verify_gw(seed);
  throw InvalidParams("unknown verify suite '" + suite + "'");
}

std::vector<std::string> gw_records(const ExperimentConfig& cfg, std::uint64_t seed) {
  const SpectralProfile pr = derive_spectral_profile(cfg.params);
  if (pr.r() < 2) throw InvalidParams("gw: need at least two types");
  const Eigen::VectorXd phi = pr.left_vector(1);
  const double mu = pr.mu(1);
  std::vector<std::string> lines;
  auto emit = [&](const std::string& name, double est, double se, double closed) {
    json j;
    j["name"] = name;
    j["estimate"] = est;
    j["stderr"] = se;
    j["closed_form"] = closed;
    j["residual"] = est - closed;
    lines.push_back(j.dump());
  };
  const ClosedForms cf = moment_closed_forms(pr, phi, mu);
  GwConfig c;
  c.M = pr.M;
  c.root_law = uniform_law(pr.r());
  c.depth = cfg.gw_depth;
  c.runs = cfg.gw_runs;
  c.seed = seed;
  const MartingaleSample ms = martingale_limit_check(c, phi, mu);
  emit("martingale_mean", ms.mean, ms.std_error, ms.expected);
  emit("var_sum", ms.var_sum, ms.var_sum_raw_stderr, cf.var_sum);
  emit("var_sum_raw", ms.var_sum_raw, ms.var_sum_raw_stderr, cf.var_sum);
  emit("sqmean_sum", ms.var_sum + phi.squaredNorm(), ms.var_sum_raw_stderr, cf.sqmean_sum);
  for (int j = 1; j <= 3; ++j) {
    const CumulantCheck cc = cumulant_relation_check(pr.M, phi, mu, j, cfg.gw_runs / pr.r(), derive_seed(seed, "cumulant"),
                                                     cfg.gw_depth);
    double se = 0.0;
    for (double x : cc.std_error) se = std::max(se, x);
    emit("cumulant_j" + std::to_string(j), cc.residual_inf, se, 0.0);
  }
  return lines;
}

// ---------------------------------------------------------------------------
// Commands.

namespace {

void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

void append_records(const std::string& path, const std::string& rows) {
  bool fresh = true;
  {
    std::ifstream probe(path);
    fresh = !probe || probe.peek() == std::ifstream::traits_type::eof();
  }
  std::ofstream os(path, std::ios::app);
  if (!os) throw IoError("cannot open '" + path + "' for appending");
  if (fresh) os << csv_header();
  os << rows;
}

}  // namespace

int cmd_generate(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  const TypedGraphSample s = sample_graph(cfg.params, seed);
  GraphDocument doc;
  doc.r = cfg.params.r;
  doc.seed = seed;
  doc.types = s.sigma;
  doc.graph = s.graph;
  emit_text(out_path, graph_to_json(doc), out);
  return 0;
}

int cmd_detect(const std::string& graph_path, const ExperimentConfig& cfg, std::uint64_t seed,
               const std::string& out_path, const std::string& records_path, const std::string& dump_path,
               std::ostream& out, std::ostream& err) {
  const GraphDocument doc = graph_from_json(read_file(graph_path));
  const DetectRun run = run_detect(doc, cfg, seed);
  for (const auto& w : run.result.warnings) err << "warning: " << w << '\n';
  emit_text(out_path, assignment_to_json(run.result.assignment, run.score), out);
  if (!records_path.empty()) append_records(records_path, csv_row(run.record));
  if (!dump_path.empty()) {
    const int ell = run.record.ell;
    const SparseSymMatrix m = cfg.matrix == MatrixKind::distance
                                  ? distance_matrix(doc.graph, ell)
                                  : path_expansion_matrix(doc.graph, ell, DetectOptions{}.path_cap).matrix;
    std::ostringstream os;
    write_matrix_dump(os, m, ell, to_string(cfg.matrix));
    write_file(dump_path, os.str());
  }
  return 0;
}

int cmd_perturb(const std::string& graph_path, std::optional<std::size_t> gamma, const std::string& edits_in,
                std::uint64_t seed, const std::string& out_path, const std::string& edits_out, std::ostream& out) {
  GraphDocument doc = graph_from_json(read_file(graph_path));
  Perturbation p;
  if (!edits_in.empty()) {
    p = perturbation_from_json(read_file(edits_in));
    doc.graph = apply_perturbation(doc.graph, p);
  } else {
    if (!gamma) throw InvalidParams("perturb: give --gamma or --edits");
    PlantedClique pc = plant_clique(doc.graph, *gamma, seed);
    p = std::move(pc.perturbation);
    doc.graph = std::move(pc.graph);
  }
  emit_text(out_path, graph_to_json(doc), out);
  if (!edits_out.empty()) write_file(edits_out, perturbation_to_json(p));
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out, std::ostream& err) {
  cfg.validate();
  std::ofstream file;
  std::ostream* os = &out;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::trunc);
    if (!file) throw IoError("cannot open '" + out_path + "' for writing");
    os = &file;
  }
  std::vector<std::size_t> gammas = cfg.gammas;
  if (gammas.empty()) gammas.push_back(0);
  *os << csv_header() << std::flush;
  int failures = 0;
  for (std::uint64_t seed : cfg.seeds) {
    for (std::size_t gamma : gammas) {
      try {
        *os << csv_row(run_record(cfg, seed, gamma)) << std::flush;
      } catch (const std::exception& e) {
        ++failures;
        *os << "# error seed=" << seed << " gamma=" << gamma << ": " << e.what() << '\n' << std::flush;
        err << "sweep: seed " << seed << " gamma " << gamma << " failed: " << e.what() << '\n';
      }
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed, std::ostream& out) {
  std::vector<std::string> which = suites;
  if (which.empty()) which = {"oracles", "spectra", "bounds", "gw"};
  bool all = true;
  for (const auto& suite : which) {
    for (const CheckResult& c : run_verify_suite(suite, seed)) {
      out << (c.pass ? "PASS " : "FAIL ") << c.suite << '/' << c.name << ": " << c.detail << '\n';
      all = all && c.pass;
    }
  }
  return all ? 0 : 1;
}

int cmd_gw(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  std::string text;
  for (const auto& line : gw_records(cfg, seed)) text += line + "\n";
  emit_text(out_path, text, out);
  return 0;
}

}  // namespace distsbm
