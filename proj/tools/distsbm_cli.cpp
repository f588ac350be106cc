// distsbm: generate, detect, perturb, sweep, verify and gw commands.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "distsbm/errors.hpp"
#include "distsbm/experiment.hpp"
#include "distsbm/io.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> ell;
  std::optional<double> kappa;
  std::optional<std::string> matrix;
  std::optional<double> K;
  std::string gamma;
  std::string out;
};

void add_profile_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "64-bit seed");
  cmd->add_option("--ell", c.ell, "distance ell (overrides kappa)")->check(CLI::PositiveNumber);
  cmd->add_option("--kappa", c.kappa, "ell = floor(kappa log_alpha n) when --ell is absent");
  cmd->add_option("--matrix", c.matrix, "distance or path")->check(CLI::IsMember({"distance", "path"}));
  cmd->add_option("--K", c.K, "override the labeling constant K");
  cmd->add_option("--out", c.out, "output path (stdout when absent)");
}

std::vector<std::size_t> parse_gamma_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const long long v = std::stoll(item, &pos);
    if (pos != item.size() || v < 0) throw distsbm::InvalidParams("--gamma: expected non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

distsbm::ExperimentConfig build_config(const Common& c) {
  distsbm::ExperimentConfig cfg =
      c.config.empty() ? distsbm::ExperimentConfig::defaults() : distsbm::config_from_json(distsbm::read_file(c.config));
  if (c.seed) cfg.seeds = {*c.seed};
  if (c.ell) cfg.ell = *c.ell;
  if (c.kappa) {
    cfg.kappa = *c.kappa;
    if (!c.ell) cfg.ell.reset();
  }
  if (c.matrix) cfg.matrix = distsbm::parse_matrix_kind(*c.matrix);
  if (c.K) cfg.K = *c.K;
  if (!c.gamma.empty()) cfg.gammas = parse_gamma_list(c.gamma);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-matrix spectral community detection for sparse block models"};
  app.require_subcommand(1);

  Common gen;
  auto* generate = app.add_subcommand("generate", "sample a graph and write it as JSON");
  add_profile_flags(generate, gen);

  Common det;
  std::string det_graph, det_records, det_dump;
  auto* detect = app.add_subcommand("detect", "run the labeling algorithm on a graph file");
  detect->add_option("graph", det_graph, "graph JSON")->required()->check(CLI::ExistingFile);
  detect->add_option("--records", det_records, "append the CSV record row to this file");
  detect->add_option("--dump", det_dump, "write the matrix as 'n ell kind' then sorted 'i j v' lines");
  add_profile_flags(detect, det);

  Common per;
  std::string per_graph, per_edits_in, per_edits_out;
  std::optional<std::size_t> per_gamma;
  auto* perturb = app.add_subcommand("perturb", "plant a clique or apply an edit file");
  perturb->add_option("graph", per_graph, "graph JSON")->required()->check(CLI::ExistingFile);
  perturb->add_option("--gamma", per_gamma, "clique size");
  perturb->add_option("--seed", per.seed, "64-bit seed");
  perturb->add_option("--edits", per_edits_in, "perturbation JSON to apply")->check(CLI::ExistingFile);
  perturb->add_option("--edits-out", per_edits_out, "write the applied perturbation JSON here");
  perturb->add_option("--out", per.out, "output graph path (stdout when absent)");

  Common swp;
  auto* sweep = app.add_subcommand("sweep", "CSV records over seeds x gamma");
  add_profile_flags(sweep, swp);
  sweep->add_option("--gamma", swp.gamma, "comma-separated clique sizes");

  std::vector<std::string> suites;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("suites", suites, "gw, spectra, bounds, oracles (all when omitted)")
      ->check(CLI::IsMember({"gw", "spectra", "bounds", "oracles"}));
  verify->add_option("--seed", verify_seed, "64-bit seed");

  Common gwc;
  std::optional<std::size_t> gw_runs;
  std::optional<int> gw_depth;
  auto* gw = app.add_subcommand("gw", "branching-process identities as JSON lines");
  add_profile_flags(gw, gwc);
  gw->add_option("--runs", gw_runs, "trees per estimate")->check(CLI::PositiveNumber);
  gw->add_option("--depth", gw_depth, "generations")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const auto cfg = build_config(gen);
      return distsbm::cmd_generate(cfg, cfg.seeds.front(), gen.out, std::cout);
    }
    if (*detect) {
      const auto cfg = build_config(det);
      return distsbm::cmd_detect(det_graph, cfg, cfg.seeds.front(), det.out, det_records, det_dump, std::cout, std::cerr);
    }
    if (*perturb) {
      return distsbm::cmd_perturb(per_graph, per_gamma, per_edits_in, per.seed.value_or(0), per.out, per_edits_out,
                                  std::cout);
    }
    if (*sweep) return distsbm::cmd_sweep(build_config(swp), swp.out, std::cout, std::cerr);
    if (*verify) return distsbm::cmd_verify(suites, verify_seed, std::cout);
    if (*gw) {
      auto cfg = build_config(gwc);
      if (gw_runs) cfg.gw_runs = *gw_runs;
      if (gw_depth) cfg.gw_depth = *gw_depth;
      cfg.validate();
      return distsbm::cmd_gw(cfg, cfg.seeds.front(), gwc.out, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
