#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cogsat/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cogsat-ra: cognitive satellite uplink resource-allocation experiments"};

  std::string experiment;
  app.add_option("experiment", experiment,
                 "lemma3 | lemma4 | theorem1 | compare_solvers | oracle_regression")
      ->required();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  // Flag overrides; anything set here wins over the config file.
  std::vector<std::pair<std::string, std::string>> overrides;
  auto add_override = [&](const std::string& flag, const std::string& key,
                          const std::string& help) {
    app.add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
        help);
  };
  add_override("--L", "pu_sweep", "PU counts to sweep, comma separated");
  add_override("--lambda", "lambda", "asymptotic index L/K");
  add_override("--beta", "beta", "scaling exponent for K = floor(L^beta)");
  add_override("--use-beta", "use_beta", "true: derive K from beta instead of lambda");
  add_override("--epsilon", "epsilon", "distance-bound exponent constant in (0,1)");
  add_override("--trials", "trials", "Monte Carlo trials per sweep point");
  add_override("--seed", "seed", "64-bit run seed");
  add_override("--N", "operators", "secondary operators");
  add_override("--B", "beams", "beams per operator");
  add_override("--M", "subbands", "subbands (and SUs per beam)");
  add_override("--C", "path_gain", "path-gain constant in C / r^alpha");
  add_override("--alpha", "alpha", "path-loss exponent");
  add_override("--sigma-s", "sigma_s", "shadowing standard deviation");
  add_override("--i-th", "i_th", "interference-temperature threshold");
  add_override("--p-max", "p_max", "peak transmit power");
  add_override("--g0", "boresight", "beam boresight gain");
  add_override("--theta", "beam_width", "beam roll-off width");
  add_override("--region", "region_shape", "disk | square");
  add_override("--region-size", "region_size", "disk radius or square side");
  add_override("--cochannel", "cochannel", "co-channel set policy: all | dims");
  add_override("--pf-estimator", "pf_estimator", "far-PU estimator: conditional | indicator");
  add_override("--grid-levels", "grid_levels", "oracle power grid levels");
  add_override("--threads", "threads", "worker threads (0 = hardware)");
  add_override("--out", "out", "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    cogsat::RunConfig config;
    if (!config_path.empty()) config = cogsat::parse_config(config_path);
    config.experiment = experiment;
    for (const auto& [key, value] : overrides) {
      cogsat::apply_config_value(config, key, value);
    }
    cogsat::finalize_config(config);

    const std::vector<std::string> written = cogsat::run_experiment(config);
    for (const std::string& path : written) {
      std::printf("wrote %s\n", path.c_str());
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
