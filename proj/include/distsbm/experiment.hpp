#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "distsbm/adversary.hpp"
#include "distsbm/io.hpp"
#include "distsbm/model.hpp"
#include "distsbm/reconstruct.hpp"

namespace distsbm {

struct ExperimentConfig {
  SbmParams params;
  std::optional<int> ell;
  double kappa = kDefaultKappa;
  std::vector<std::uint64_t> seeds;
  MatrixKind matrix = MatrixKind::distance;
  std::optional<double> K;
  std::string perturbation = "clique";
  std::vector<std::size_t> gammas;
  bool rogue = false;
  RogueMode rogue_mode = RogueMode::greedy;
  int gw_depth = 8;
  std::size_t gw_runs = 100000;

  /// r = 2, W = [[5,1],[1,5]], uniform prior, n = 2000, ell = 4, seeds 0..9.
  static ExperimentConfig defaults();
  void validate() const;
};

/// JSON object mirroring ExperimentConfig; absent keys keep their defaults.
/// Keys: r, W, pi, n, ell, kappa, seeds, matrix, K, perturbation, gamma,
/// rogue, rogue_mode, gw {runs, depth}.
ExperimentConfig config_from_json(const std::string& text);

struct ExperimentRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  int ell = 0;
  std::size_t gamma = 0;
  double overlap = 0.0;
  std::vector<double> lambda;  // up to four, |.| descending
  std::optional<double> qk_bound;
  std::optional<double> rogue_rayleigh;
  double ms_build = 0.0;
  double ms_eig = 0.0;
  double ms_label = 0.0;
};

inline constexpr const char* kCsvVersion = "# distsbm-records v1";
inline constexpr const char* kCsvColumns =
    "seed,n,r,ell,gamma,overlap,lambda1,lambda2,lambda3,lambda4,qk_bound,rogue_rayleigh,ms_build,ms_eig,ms_label";

/// Version comment line followed by the column line.
std::string csv_header();
std::string csv_row(const ExperimentRecord& rec);

/// ell from the config override or choose_ell.
int resolve_ell(const ExperimentConfig& cfg, const SpectralProfile& profile);

/// Samples the graph for `seed`, plants a clique of size gamma when gamma > 0,
/// runs detection and scores it against the planted labels.
ExperimentRecord run_record(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t gamma);

struct DetectRun {
  DetectResult result;
  std::optional<OverlapScore> score;
  ExperimentRecord record;
};

/// Detection on a loaded graph; the profile comes from cfg.params with n taken
/// from the graph.
DetectRun run_detect(const GraphDocument& doc, const ExperimentConfig& cfg, std::uint64_t seed);

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Suites: "oracles", "spectra", "bounds", "gw".
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed);

/// JSON lines {"name","estimate","stderr","closed_form","residual"} for the
/// second eigenvector of the configured profile.
std::vector<std::string> gw_records(const ExperimentConfig& cfg, std::uint64_t seed);

// Command entry points. Each returns the process exit code; normal output goes
// to `out`, diagnostics to `err`.
int cmd_generate(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& out_path,
                 std::ostream& out);
int cmd_detect(const std::string& graph_path, const ExperimentConfig& cfg, std::uint64_t seed,
               const std::string& out_path, const std::string& records_path, const std::string& dump_path,
               std::ostream& out, std::ostream& err);
int cmd_perturb(const std::string& graph_path, std::optional<std::size_t> gamma,
                const std::string& edits_in, std::uint64_t seed, const std::string& out_path,
                const std::string& edits_out, std::ostream& out);
int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed, std::ostream& out);
int cmd_gw(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& out_path, std::ostream& out);

}  // namespace distsbm
