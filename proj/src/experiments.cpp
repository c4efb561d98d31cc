#include "cogsat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "cogsat/csv.hpp"
#include "cogsat/parallel.hpp"
#include "cogsat/solvers.hpp"

namespace cogsat {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<std::int64_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

bool is_probability_experiment(const std::string& experiment) {
  return experiment == "lemma3" || experiment == "lemma4" || experiment == "theorem1";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

struct MeanCi {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

MeanCi mean_ci(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    sq[i] = (values[i] - mean) * (values[i] - mean);
  }
  const double var = values.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  const double half = kZ95 * std::sqrt(var / n);
  return {mean, mean - half, mean + half};
}

}  // namespace

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    c.experiment = value;
  } else if (key == "operators") {
    c.operators = static_cast<int>(parse_int(key, value));
  } else if (key == "beams") {
    c.beams = static_cast<int>(parse_int(key, value));
  } else if (key == "subbands") {
    c.subbands = static_cast<int>(parse_int(key, value));
  } else if (key == "pu_sweep") {
    c.pu_sweep = parse_int_list(key, value);
  } else if (key == "lambda") {
    c.lambda = parse_double(key, value);
  } else if (key == "beta") {
    c.beta = parse_double(key, value);
  } else if (key == "use_beta") {
    c.use_beta = parse_bool(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, value);
  } else if (key == "trials") {
    c.trials = parse_int(key, value);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "path_gain") {
    c.path_gain = parse_double(key, value);
  } else if (key == "alpha") {
    c.alpha = parse_double(key, value);
  } else if (key == "sigma_s") {
    c.sigma_s = parse_double(key, value);
  } else if (key == "i_th") {
    c.i_th = parse_double(key, value);
  } else if (key == "p_max") {
    c.p_max = parse_double(key, value);
  } else if (key == "boresight") {
    c.boresight = parse_double(key, value);
  } else if (key == "beam_width") {
    c.beam_width = parse_double(key, value);
  } else if (key == "region_shape") {
    if (value != "disk" && value != "square") {
      throw std::invalid_argument("config key 'region_shape': expected disk or square");
    }
    c.region_shape = value;
  } else if (key == "region_size") {
    c.region_size = parse_double(key, value);
  } else if (key == "cochannel") {
    if (value != "all" && value != "dims") {
      throw std::invalid_argument("config key 'cochannel': expected all or dims");
    }
    c.cochannel = value;
  } else if (key == "pf_estimator") {
    if (value != "conditional" && value != "indicator") {
      throw std::invalid_argument("config key 'pf_estimator': expected conditional or indicator");
    }
    c.pf_estimator = value;
  } else if (key == "grid_levels") {
    c.grid_levels = static_cast<int>(parse_int(key, value));
  } else if (key == "threads") {
    c.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "out") {
    c.out_dir = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_text(std::istream& in, const std::string& origin) {
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    apply_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config_text(in, path);
}

void finalize_config(RunConfig& c) {
  static const std::vector<std::string> kExperiments = {
      "lemma3", "lemma4", "theorem1", "compare_solvers", "oracle_regression"};
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end()) {
    throw std::invalid_argument("config key 'experiment': unknown experiment '" + c.experiment +
                                "'");
  }

  if (c.experiment == "oracle_regression") {
    if (c.operators == 5 && c.beams == 2 && c.subbands == 3) {
      c.operators = 2;
      c.beams = 1;
      c.subbands = 2;
    }
    if (c.pu_sweep.empty()) c.pu_sweep = {3};
    if (c.trials < 0) c.trials = 1;
  } else if (c.experiment == "compare_solvers") {
    if (c.pu_sweep.empty()) c.pu_sweep = {100, 200, 400, 800};
    if (c.trials < 0) c.trials = 200;
  } else {
    if (c.pu_sweep.empty()) c.pu_sweep = {100, 316, 1000, 3162, 10000};
    if (c.trials < 0) c.trials = 10000;
  }

  // Probability-verification runs default to the analysis region (a unit
  // disk); the solver-comparison experiments default to the unit square.
  if (c.region_shape.empty()) {
    c.region_shape = is_probability_experiment(c.experiment) ? "disk" : "square";
  }
  if (c.cochannel.empty()) {
    // The close-SU experiment watches a co-channel set that must grow with
    // the sweep; the cap-satisfaction experiment keeps the dims-defined
    // per-subband population.
    c.cochannel = c.experiment == "theorem1" ? "dims" : "all";
  }

  if (c.operators < 1 || c.beams < 1 || c.subbands < 1) {
    throw std::invalid_argument("config keys 'operators'/'beams'/'subbands' must be >= 1");
  }
  if (c.pu_sweep.empty()) throw std::invalid_argument("config key 'pu_sweep': empty sweep");
  for (const std::int64_t l : c.pu_sweep) {
    if (l < 1) throw std::invalid_argument("config key 'pu_sweep': L must be >= 1");
  }
  if (!(c.epsilon > 0.0) || !(c.epsilon < 1.0)) {
    throw std::invalid_argument(
        "config key 'epsilon': must lie in (0, 1), the distance-bound exponent range");
  }
  if (c.trials < 1) throw std::invalid_argument("config key 'trials': must be >= 1");
  if (is_probability_experiment(c.experiment) && c.trials < 100) {
    throw std::invalid_argument("config key 'trials': probability estimates need >= 100");
  }
  if (!c.use_beta && !(c.lambda >= 1.0)) {
    throw std::invalid_argument("config key 'lambda': must be >= 1");
  }
  if (c.use_beta && (!(c.beta > 0.0) || !(c.beta < 1.0))) {
    throw std::invalid_argument("config key 'beta': must lie in (0, 1)");
  }
  if (!(c.path_gain > 0.0)) throw std::invalid_argument("config key 'path_gain': must be > 0");
  if (!(c.alpha > 0.0)) throw std::invalid_argument("config key 'alpha': must be > 0");
  if (c.sigma_s < 0.0) throw std::invalid_argument("config key 'sigma_s': must be >= 0");
  if (!(c.i_th > 0.0)) throw std::invalid_argument("config key 'i_th': must be > 0");
  if (!(c.p_max > 0.0)) throw std::invalid_argument("config key 'p_max': must be > 0");
  if (!(c.boresight > 0.0)) throw std::invalid_argument("config key 'boresight': must be > 0");
  if (!(c.beam_width > 0.0)) throw std::invalid_argument("config key 'beam_width': must be > 0");
  if (!(c.region_size > 0.0)) throw std::invalid_argument("config key 'region_size': must be > 0");
  if (c.grid_levels < 2 || c.grid_levels > kOracleMaxGridLevels) {
    throw std::invalid_argument("config key 'grid_levels': must lie in [2, 12]");
  }
  if (c.threads < 0) throw std::invalid_argument("config key 'threads': must be >= 0");
}

Region make_region(const RunConfig& c) {
  return c.region_shape == "disk" ? Region::disk(c.region_size)
                                  : Region::square(c.region_size);
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "experiment = " << c.experiment << '\n';
  out << "operators = " << c.operators << '\n';
  out << "beams = " << c.beams << '\n';
  out << "subbands = " << c.subbands << '\n';
  out << "pu_sweep = ";
  for (std::size_t i = 0; i < c.pu_sweep.size(); ++i) {
    if (i > 0) out << ',';
    out << c.pu_sweep[i];
  }
  out << '\n';
  out << "use_beta = " << (c.use_beta ? "true" : "false") << '\n';
  out << "lambda = " << csv::fmt(c.lambda) << '\n';
  out << "beta = " << csv::fmt(c.beta) << '\n';
  out << "epsilon = " << csv::fmt(c.epsilon) << '\n';
  out << "trials = " << c.trials << '\n';
  out << "seed = " << c.seed << '\n';
  out << "path_gain = " << csv::fmt(c.path_gain) << '\n';
  out << "alpha = " << csv::fmt(c.alpha) << '\n';
  out << "sigma_s = " << csv::fmt(c.sigma_s) << '\n';
  out << "i_th = " << csv::fmt(c.i_th) << '\n';
  out << "p_max = " << csv::fmt(c.p_max) << '\n';
  out << "boresight = " << csv::fmt(c.boresight) << '\n';
  out << "beam_width = " << csv::fmt(c.beam_width) << '\n';
  out << "region_shape = " << c.region_shape << '\n';
  out << "region_size = " << csv::fmt(c.region_size) << '\n';
  out << "cochannel = " << c.cochannel << '\n';
  out << "pf_estimator = " << c.pf_estimator << '\n';
  out << "grid_levels = " << c.grid_levels << '\n';
  return out.str();
}

std::string effective_config_block(const RunConfig& c) {
  std::istringstream in(config_to_text(c));
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
  return out.str();
}

namespace {

BoundConfig to_bound_config(const RunConfig& c) {
  BoundConfig b;
  b.epsilon = c.epsilon;
  b.scaling = c.use_beta ? BoundConfig::Scaling::kBeta : BoundConfig::Scaling::kLambda;
  b.lambda = c.lambda;
  b.beta = c.beta;
  b.pu_sweep = c.pu_sweep;
  b.trials = c.trials;
  b.seed = c.seed;
  b.region = make_region(c);
  b.operators = c.operators;
  b.beams = c.beams;
  b.cochannel = c.cochannel == "dims" ? BoundConfig::Cochannel::kDims
                                      : BoundConfig::Cochannel::kAllSus;
  b.path_gain = c.path_gain;
  b.alpha = c.alpha;
  b.i_th = c.i_th;
  b.p_max = c.p_max;
  b.threads = c.threads;
  return b;
}

std::string series_file(const RunConfig& c, const EstimateSeries& series,
                        const std::string& name) {
  std::ostringstream body;
  dump_series_csv(series, body);
  std::filesystem::create_directories(c.out_dir);
  const std::string path = (std::filesystem::path(c.out_dir) / name).string();
  write_file(path, effective_config_block(c) + body.str());
  return path;
}

}  // namespace

std::vector<std::string> run_lemma_experiments(const RunConfig& c) {
  const BoundConfig bound = to_bound_config(c);
  std::vector<std::string> written;
  if (c.experiment == "lemma3") {
    const EstimateSeries series =
        c.pf_estimator == "indicator" ? estimate_pf(bound) : estimate_pf_conditional(bound);
    written.push_back(series_file(c, series, "lemma3_pf.csv"));
  } else if (c.experiment == "lemma4") {
    written.push_back(series_file(c, estimate_pc(bound), "lemma4_pc.csv"));
  } else if (c.experiment == "theorem1") {
    written.push_back(series_file(c, estimate_ps(bound, false), "theorem1_ps.csv"));
    written.push_back(series_file(c, estimate_ps(bound, true), "theorem1_ps_pmax.csv"));
  } else {
    throw std::invalid_argument("run_lemma_experiments: experiment '" + c.experiment +
                                "' is not a lemma/theorem run");
  }
  return written;
}

std::vector<ComparisonPoint> compare_solvers_series(const RunConfig& c) {
  const Dims dims{c.operators, c.beams, c.subbands};
  const Region region = make_region(c);
  const std::uint64_t exp_seed =
      rng::derive_stream(c.seed, rng::kTagExperimentBase + 0x636D70);

  ChannelParams params;
  params.path_gain = c.path_gain;
  params.alpha = c.alpha;
  params.sigma_s = c.sigma_s;
  params.beam_model = make_grid_beam_model(region, dims.operators, dims.beams, c.boresight,
                                           c.beam_width);
  const Thresholds thresholds = Thresholds::uniform(c.i_th);
  const double split = 1.0 / dims.operators;

  std::vector<ComparisonPoint> series;
  for (const std::int64_t L : c.pu_sweep) {
    const double lambda = static_cast<double>(L) / dims.total_sus();
    if (!(lambda >= 1.0)) {
      throw std::invalid_argument("compare_solvers: L must be >= the SU count (lambda >= 1)");
    }
    std::vector<double> rate_dec(static_cast<std::size_t>(c.trials));
    std::vector<double> rate_es(static_cast<std::size_t>(c.trials));
    std::vector<double> c1_frac(static_cast<std::size_t>(c.trials));
    std::vector<std::uint8_t> win(static_cast<std::size_t>(c.trials), 0);
    std::vector<std::uint8_t> es_ok(static_cast<std::size_t>(c.trials), 0);

    parallel_for(c.trials, c.threads, [&](std::int64_t t) {
      const std::uint64_t ts = rng::trial_seed(exp_seed, t);
      const Scenario scenario = generate_scenario(dims, L, region, ts);
      const ChannelRealization channels = sample_channels(scenario, params, ts);

      std::vector<OperatorSolution> dec_ops;
      std::vector<OperatorSolution> es_ops;
      dec_ops.reserve(static_cast<std::size_t>(dims.operators));
      es_ops.reserve(static_cast<std::size_t>(dims.operators));
      for (int n = 0; n < dims.operators; ++n) {
        const OperatorView view =
            make_operator_view(scenario, channels, thresholds, c.p_max, lambda, n);
        dec_ops.push_back(solve_decentralized(view));
        es_ops.push_back(solve_equal_split(view, split));
      }
      const Solution dec = assemble_solution(dims, c.p_max, dec_ops, channels);
      const Solution es = assemble_solution(dims, c.p_max, es_ops, channels);

      rate_dec[static_cast<std::size_t>(t)] = dec.rate;
      rate_es[static_cast<std::size_t>(t)] = es.rate;
      win[static_cast<std::size_t>(t)] = dec.rate > es.rate ? 1 : 0;

      // Fraction of (l, m) interference rows the decentralized caps satisfy.
      std::int64_t rows_ok = 0;
      for (std::int64_t l = 0; l < L; ++l) {
        for (int m = 0; m < dims.subbands; ++m) {
          const double interference =
              interference_at_pu(dec.assignment, dec.powers, channels, l, m);
          if (interference <= thresholds.at(l, m) * (1.0 + kC1RelativeSlack)) ++rows_ok;
        }
      }
      c1_frac[static_cast<std::size_t>(t)] =
          static_cast<double>(rows_ok) / static_cast<double>(L * dims.subbands);
      es_ok[static_cast<std::size_t>(t)] =
          check_feasibility(es.assignment, es.powers, channels, thresholds).feasible() ? 1 : 0;
    });

    const MeanCi dec_ci = mean_ci(rate_dec);
    const MeanCi es_ci = mean_ci(rate_es);
    std::int64_t wins = 0, es_feasible = 0;
    for (std::int64_t t = 0; t < c.trials; ++t) {
      wins += win[static_cast<std::size_t>(t)];
      es_feasible += es_ok[static_cast<std::size_t>(t)];
    }
    series.push_back(
        {L, dec_ci.mean, es_ci.mean, dec_ci.low, dec_ci.high, es_ci.low, es_ci.high,
         static_cast<double>(wins) / static_cast<double>(c.trials),
         pairwise_sum(c1_frac) / static_cast<double>(c.trials),
         static_cast<double>(es_feasible) / static_cast<double>(c.trials)});
  }
  return series;
}

std::vector<std::string> run_solver_comparison(const RunConfig& c) {
  if (c.experiment != "compare_solvers") {
    throw std::invalid_argument("run_solver_comparison: wrong experiment");
  }
  const std::vector<ComparisonPoint> series = compare_solvers_series(c);

  std::ostringstream body;
  body << "L,rate_decentralized_mean,rate_equal_split_mean,ci_dec_low,ci_dec_high,"
          "ci_es_low,ci_es_high,win_fraction,c1_satisfaction_rate,es_c1_feasible_fraction\n";
  for (const ComparisonPoint& p : series) {
    body << p.num_pus << ',' << csv::fmt(p.rate_decentralized_mean) << ','
         << csv::fmt(p.rate_equal_split_mean) << ',' << csv::fmt(p.ci_dec_low) << ','
         << csv::fmt(p.ci_dec_high) << ',' << csv::fmt(p.ci_es_low) << ','
         << csv::fmt(p.ci_es_high) << ',' << csv::fmt(p.win_fraction) << ','
         << csv::fmt(p.c1_satisfaction_rate) << ',' << csv::fmt(p.es_c1_feasible_fraction)
         << '\n';
  }

  std::filesystem::create_directories(c.out_dir);
  const std::string path = (std::filesystem::path(c.out_dir) / "compare_solvers.csv").string();
  write_file(path, effective_config_block(c) + body.str());
  return {path};
}

std::vector<std::string> run_oracle_regression(const RunConfig& c) {
  if (c.experiment != "oracle_regression") {
    throw std::invalid_argument("run_oracle_regression: wrong experiment");
  }
  const Dims dims{c.operators, c.beams, c.subbands};
  const Region region = make_region(c);
  const std::uint64_t ts =
      rng::trial_seed(rng::derive_stream(c.seed, rng::kTagExperimentBase + 0x6F7263), 0);
  const Scenario scenario = generate_scenario(dims, c.pu_sweep.front(), region, ts);

  ChannelParams params;
  params.path_gain = c.path_gain;
  params.alpha = c.alpha;
  params.sigma_s = c.sigma_s;
  params.beam_model = make_grid_beam_model(region, dims.operators, dims.beams, c.boresight,
                                           c.beam_width);
  const ChannelRealization channels = sample_channels(scenario, params, ts);
  const OracleSolution oracle = solve_centralized_oracle(
      channels, Thresholds::uniform(c.i_th), c.p_max, c.grid_levels);

  std::ostringstream body;
  dump_solution_csv(oracle.assignment, oracle.powers, body);
  body << "# total_rate = " << csv::fmt(oracle.rate) << '\n';

  std::filesystem::create_directories(c.out_dir);
  const std::string path = (std::filesystem::path(c.out_dir) / "oracle_regression.csv").string();
  write_file(path, effective_config_block(c) + body.str());
  return {path};
}

std::vector<std::string> run_experiment(const RunConfig& c) {
  if (is_probability_experiment(c.experiment)) return run_lemma_experiments(c);
  if (c.experiment == "compare_solvers") return run_solver_comparison(c);
  if (c.experiment == "oracle_regression") return run_oracle_regression(c);
  throw std::invalid_argument("unknown experiment '" + c.experiment + "'");
}

}  // namespace cogsat
