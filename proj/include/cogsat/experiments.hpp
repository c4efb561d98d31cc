#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogsat/asymptotics.hpp"

namespace cogsat {

// Batch-run configuration. Flat key = value text files plus command-line
// overrides; unknown keys are rejected by name.
struct RunConfig {
  std::string experiment;  // lemma3 | lemma4 | theorem1 | compare_solvers | oracle_regression

  int operators = 5;
  int beams = 2;
  int subbands = 3;
  std::vector<std::int64_t> pu_sweep;
  double lambda = 10.0;
  double beta = 0.5;
  bool use_beta = false;
  double epsilon = 0.5;
  std::int64_t trials = -1;  // -1: per-experiment default
  std::uint64_t seed = 1;

  double path_gain = 1.0;
  double alpha = 2.0;
  double sigma_s = 0.0;
  double i_th = 1.0;
  double p_max = 10.0;
  double boresight = 1.0;
  double beam_width = 0.3;

  std::string region_shape;  // "disk" | "square"; empty: per-experiment default
  double region_size = 1.0;
  std::string cochannel;  // "all" | "dims"; empty: per-experiment default
  // Far-PU estimator: "conditional" integrates the PU draw in closed form
  // per trial, "indicator" counts far trials directly.
  std::string pf_estimator = "conditional";
  int grid_levels = 8;
  int threads = 0;
  std::string out_dir = ".";
};

// Parses a key = value file ('#' comments allowed). Keys must be known,
// values well-typed.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(std::istream& in, const std::string& origin);

// Applies a single key/value override; same validation as the file parser.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

// Fills experiment-specific defaults (trials, region, sweep, co-channel
// policy) for fields the user left unset, then checks every invariant.
void finalize_config(RunConfig& config);

// The resolved configuration as parseable 'key = value' lines. Output
// location and thread count are not part of the result and are left out.
std::string config_to_text(const RunConfig& config);

// Same content as '# key = value' comment lines; every output CSV starts
// with this block so results are self-describing.
std::string effective_config_block(const RunConfig& config);

Region make_region(const RunConfig& config);

struct ComparisonPoint {
  std::int64_t num_pus = 0;
  double rate_decentralized_mean = 0.0;
  double rate_equal_split_mean = 0.0;
  double ci_dec_low = 0.0, ci_dec_high = 0.0;
  double ci_es_low = 0.0, ci_es_high = 0.0;
  double win_fraction = 0.0;           // share of paired trials won by decentralized
  double c1_satisfaction_rate = 0.0;   // decentralized (l, m) rows satisfied, averaged
  double es_c1_feasible_fraction = 0.0;  // equal-split trials passing full C1
};

// The paired comparison behind compare_solvers; one entry per sweep point.
std::vector<ComparisonPoint> compare_solvers_series(const RunConfig& config);

// Probability estimator runs (lemma3 | lemma4 | theorem1); writes
// <out_dir>/<experiment>_{pf|pc|ps}.csv.
// Returns the written paths.
std::vector<std::string> run_lemma_experiments(const RunConfig& config);

// Paired decentralized-vs-equal-split comparison on identical scenarios;
// writes <out_dir>/compare_solvers.csv.
std::vector<std::string> run_solver_comparison(const RunConfig& config);

// Exhaustive-oracle solution of one pinned small instance; writes
// <out_dir>/oracle_regression.csv (golden-file material).
std::vector<std::string> run_oracle_regression(const RunConfig& config);

// Dispatches on config.experiment; returns the written paths.
std::vector<std::string> run_experiment(const RunConfig& config);

}  // namespace cogsat
