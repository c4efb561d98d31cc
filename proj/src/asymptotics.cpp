#include "cogsat/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cogsat/csv.hpp"
#include "cogsat/parallel.hpp"
#include "cogsat/problem.hpp"

namespace cogsat {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Reduced single-subband layout: the analysis in the asymptotic regime drops
// operator and beam indices and watches one subband's co-channel SUs against
// all L PUs. Streams match generate_scenario, so PU prefixes nest across L.
struct ReducedLayout {
  std::vector<Point> pus;
  std::vector<Point> sus;
};

ReducedLayout draw_reduced(const Region& region, std::int64_t num_pus, std::int64_t num_sus,
                           std::uint64_t trial_seed) {
  rng::Stream pu_stream(rng::derive_stream(trial_seed, rng::kTagPuPositions));
  rng::Stream su_stream(rng::derive_stream(trial_seed, rng::kTagSuPositions));
  ReducedLayout layout;
  layout.pus.reserve(static_cast<std::size_t>(num_pus));
  layout.sus.reserve(static_cast<std::size_t>(num_sus));
  for (std::int64_t l = 0; l < num_pus; ++l) layout.pus.push_back(sample_point(region, pu_stream));
  for (std::int64_t k = 0; k < num_sus; ++k) layout.sus.push_back(sample_point(region, su_stream));
  return layout;
}

double nearest_squared(Point from, std::span<const Point> candidates) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : candidates) best = std::min(best, squared_distance(from, p));
  return best;
}

}  // namespace

std::int64_t BoundConfig::sus_at(std::int64_t num_pus) const {
  if (scaling == Scaling::kBeta) return scaling_from(num_pus, beta).num_sus;
  return std::max<std::int64_t>(1, std::llround(static_cast<double>(num_pus) / lambda));
}

std::int64_t BoundConfig::cochannel_at(std::int64_t num_pus) const {
  if (cochannel == Cochannel::kDims) return static_cast<std::int64_t>(operators) * beams;
  return sus_at(num_pus);
}

void BoundConfig::validate() const {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("bound config: epsilon must lie in (0, 1)");
  }
  if (trials < 100) throw std::invalid_argument("bound config: trials must be >= 100");
  if (pu_sweep.empty()) throw std::invalid_argument("bound config: empty L sweep");
  for (const std::int64_t l : pu_sweep) {
    if (l < 1) throw std::invalid_argument("bound config: L must be >= 1");
  }
  if (scaling == Scaling::kLambda && !(lambda >= 1.0)) {
    throw std::invalid_argument("bound config: lambda must be >= 1");
  }
  if (scaling == Scaling::kBeta && (!(beta > 0.0) || !(beta < 1.0))) {
    throw std::invalid_argument("bound config: beta must lie in (0, 1)");
  }
  if (operators < 1 || beams < 1) {
    throw std::invalid_argument("bound config: operators and beams must be >= 1");
  }
  if (enforce_residual_epsilon && scaling == Scaling::kBeta &&
      !(epsilon < residual_epsilon_ceiling(beta))) {
    throw std::invalid_argument(
        "bound config: epsilon must stay below 2(1-beta)/(1+beta/2) for this run");
  }
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t count) {
  if (count <= 0) throw std::invalid_argument("wilson_interval: count must be > 0");
  const double n = static_cast<double>(count);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  // At the boundary counts the interval ends exactly on 0 or 1; rounding in
  // center - half must not leak a denormal past them.
  if (successes == 0) w.low = 0.0;
  if (successes == count) w.high = 1.0;
  return w;
}

double log_analytic_pf_bound(std::int64_t num_pus, double epsilon) {
  const double L = static_cast<double>(num_pus);
  return L * std::log1p(-0.25 * std::pow(L, epsilon - 1.0));
}

double analytic_pf_bound(std::int64_t num_pus, double epsilon) {
  return std::exp(log_analytic_pf_bound(num_pus, epsilon));
}

double analytic_pc_bound(std::int64_t cochannel, double epsilon) {
  const double k = static_cast<double>(cochannel);
  return std::exp(k * std::log1p(-std::pow(k, -(1.0 + epsilon))));
}

EstimateSeries estimate_pf(const BoundConfig& config) {
  config.validate();
  const std::uint64_t exp_seed = rng::derive_stream(config.seed, rng::kTagExperimentBase + 0x70665F);
  EstimateSeries series;
  for (const std::int64_t L : config.pu_sweep) {
    const double threshold2 = std::pow(static_cast<double>(L), -(1.0 - config.epsilon));
    std::vector<std::uint8_t> far(static_cast<std::size_t>(config.trials), 0);
    parallel_for(config.trials, config.threads, [&](std::int64_t t) {
      const ReducedLayout layout =
          draw_reduced(config.region, L, 1, rng::trial_seed(exp_seed, t));
      far[static_cast<std::size_t>(t)] =
          nearest_squared(layout.sus[0], layout.pus) > threshold2 ? 1 : 0;
    });
    std::int64_t hits = 0;
    for (const std::uint8_t f : far) hits += f;
    const WilsonInterval ci = wilson_interval(hits, config.trials);
    series.points.push_back({L, config.sus_at(L), config.cochannel_at(L),
                             static_cast<double>(hits) / static_cast<double>(config.trials),
                             ci.low, ci.high, config.trials,
                             analytic_pf_bound(L, config.epsilon)});
  }
  return series;
}

EstimateSeries estimate_pf_conditional(const BoundConfig& config) {
  config.validate();
  // Shares the experiment stream with estimate_pf: trial t sees the same SU
  // draw in both estimators.
  const std::uint64_t exp_seed = rng::derive_stream(config.seed, rng::kTagExperimentBase + 0x70665F);
  const double region_area = config.region.area();
  EstimateSeries series;
  for (const std::int64_t L : config.pu_sweep) {
    const double threshold = std::pow(static_cast<double>(L), -(1.0 - config.epsilon) / 2.0);
    std::vector<double> values(static_cast<std::size_t>(config.trials), 0.0);
    parallel_for(config.trials, config.threads, [&](std::int64_t t) {
      const std::uint64_t ts = rng::trial_seed(exp_seed, t);
      rng::Stream su_stream(rng::derive_stream(ts, rng::kTagSuPositions));
      const Point su = sample_point(config.region, su_stream);
      const double covered = disk_region_intersection_area(config.region, su, threshold);
      const double fraction = std::min(covered / region_area, 1.0);
      values[static_cast<std::size_t>(t)] =
          fraction >= 1.0 ? 0.0 : std::exp(static_cast<double>(L) * std::log1p(-fraction));
    });
    const double n = static_cast<double>(config.trials);
    const double mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    const double sd = config.trials > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1.0)) : 0.0;
    const double half = kZ95 * sd / std::sqrt(n);
    series.points.push_back({L, config.sus_at(L), config.cochannel_at(L), mean,
                             std::max(0.0, mean - half), std::min(1.0, mean + half),
                             config.trials, analytic_pf_bound(L, config.epsilon)});
  }
  return series;
}

EstimateSeries estimate_pc(const BoundConfig& config) {
  config.validate();
  const std::uint64_t exp_seed = rng::derive_stream(config.seed, rng::kTagExperimentBase + 0x70635F);
  EstimateSeries series;
  for (const std::int64_t L : config.pu_sweep) {
    const std::int64_t k_bar = config.cochannel_at(L);
    const double threshold2 = std::pow(static_cast<double>(k_bar), -(1.0 + config.epsilon));
    std::vector<std::uint8_t> close(static_cast<std::size_t>(config.trials), 0);
    parallel_for(config.trials, config.threads, [&](std::int64_t t) {
      const std::uint64_t ts = rng::trial_seed(exp_seed, t);
      rng::Stream su_stream(rng::derive_stream(ts, rng::kTagSuPositions));
      std::vector<Point> sus(static_cast<std::size_t>(k_bar));
      for (auto& p : sus) p = sample_point(config.region, su_stream);
      Point pu = config.region.center();
      if (config.pu_placement == BoundConfig::PuPlacement::kUniform) {
        rng::Stream pu_stream(rng::derive_stream(ts, rng::kTagPuPositions));
        pu = sample_point(config.region, pu_stream);
      }
      close[static_cast<std::size_t>(t)] = nearest_squared(pu, sus) < threshold2 ? 1 : 0;
    });
    std::int64_t hits = 0;
    for (const std::uint8_t c : close) hits += c;
    const WilsonInterval ci = wilson_interval(hits, config.trials);
    series.points.push_back({L, config.sus_at(L), k_bar,
                             static_cast<double>(hits) / static_cast<double>(config.trials),
                             ci.low, ci.high, config.trials,
                             1.0 - analytic_pc_bound(k_bar, config.epsilon)});
  }
  return series;
}

EstimateSeries estimate_ps(const BoundConfig& config, bool include_pmax) {
  config.validate();
  const std::uint64_t exp_seed = rng::derive_stream(config.seed, rng::kTagExperimentBase + 0x70735F);
  EstimateSeries series;
  const std::int64_t k_bar = static_cast<std::int64_t>(config.operators) * config.beams;
  for (const std::int64_t L : config.pu_sweep) {
    const std::int64_t K = config.sus_at(L);
    const double lambda = config.scaling == BoundConfig::Scaling::kLambda
                              ? config.lambda
                              : static_cast<double>(L) / static_cast<double>(K);
    std::vector<std::int64_t> satisfied(static_cast<std::size_t>(config.trials), 0);
    parallel_for(config.trials, config.threads, [&](std::int64_t t) {
      const ReducedLayout layout =
          draw_reduced(config.region, L, k_bar, rng::trial_seed(exp_seed, t));
      // Peak power of SU i from its nearest PU: (I_th / F_i) (1 - 1/lambda),
      // optionally clipped by the original p_max.
      std::vector<double> power(layout.sus.size());
      for (std::size_t i = 0; i < layout.sus.size(); ++i) {
        const double d = std::sqrt(nearest_squared(layout.sus[i], layout.pus));
        const double gain = config.path_gain / std::pow(d, config.alpha);
        double cap = lemma1_power_cap(gain, config.i_th);
        if (lambda > 1.0) cap *= 1.0 - 1.0 / lambda;
        if (lambda == 1.0) cap = 0.0;
        if (include_pmax) cap = std::min(cap, config.p_max);
        power[i] = cap;
      }
      std::int64_t ok = 0;
      for (const Point& pu : layout.pus) {
        double interference = 0.0;
        for (std::size_t i = 0; i < layout.sus.size(); ++i) {
          const double r = distance(pu, layout.sus[i]);
          interference += power[i] * config.path_gain / std::pow(r, config.alpha);
        }
        if (interference <= config.i_th * (1.0 + kC1RelativeSlack)) ++ok;
      }
      satisfied[static_cast<std::size_t>(t)] = ok;
    });
    std::int64_t sat_total = 0;
    for (const std::int64_t s : satisfied) sat_total += s;
    const std::int64_t rows = config.trials * L;
    const WilsonInterval ci = wilson_interval(sat_total, rows);
    series.points.push_back({L, K, k_bar,
                             static_cast<double>(sat_total) / static_cast<double>(rows),
                             ci.low, ci.high, config.trials, 1.0});
  }
  return series;
}

double residual_interference_bound(double i_th, std::int64_t cochannel, std::int64_t num_pus,
                                   double epsilon, double alpha) {
  if (cochannel <= 1) return 0.0;
  const double k = static_cast<double>(cochannel);
  const double L = static_cast<double>(num_pus);
  return i_th * (k - 1.0) * std::pow(k, (1.0 + epsilon) * alpha / 2.0) /
         std::pow(L, (1.0 - epsilon) * alpha / 2.0);
}

double residual_epsilon_ceiling(double beta) {
  return 2.0 * (1.0 - beta) / (1.0 + beta / 2.0);
}

ResidualBoundReport verify_residual_bound(std::span<const Point> pu_positions,
                                          std::span<const Point> cochannel_sus, double i_th,
                                          double alpha, std::int64_t num_pus_for_bound,
                                          double epsilon) {
  if (pu_positions.empty() || cochannel_sus.empty()) {
    throw std::invalid_argument("verify_residual_bound: empty geometry");
  }
  const std::int64_t k_bar = static_cast<std::int64_t>(cochannel_sus.size());
  ResidualBoundReport report;
  report.rhs = residual_interference_bound(i_th, k_bar, num_pus_for_bound, epsilon, alpha);
  if (k_bar == 1) {
    report.applicable = true;
    report.lhs = 0.0;
    report.holds = true;
    return report;
  }

  const double su_threshold =
      std::pow(static_cast<double>(num_pus_for_bound), -(1.0 - epsilon) / 2.0);
  const double pu_threshold = std::pow(static_cast<double>(k_bar), -(1.0 + epsilon) / 2.0);

  // Reference PU: the nearest PU of SU 1.
  const NearestResult ref = nearest_point(cochannel_sus[0], pu_positions);
  const Point ref_pu = pu_positions[ref.index];

  bool e1 = true;  // every other SU has a PU within the shrinking radius
  bool e2 = true;  // every other SU is far from the reference PU
  double lhs = 0.0;
  for (std::size_t i = 1; i < cochannel_sus.size(); ++i) {
    const double d_i = nearest_point(cochannel_sus[i], pu_positions).distance;
    const double r_i = distance(ref_pu, cochannel_sus[i]);
    e1 = e1 && d_i < su_threshold;
    e2 = e2 && r_i > pu_threshold;
    // Single-PU cap I_th / F_i against the reference PU's gain F_{1,i}:
    // the path-gain constant cancels, leaving I_th (d_i / r_i)^alpha.
    lhs += i_th * std::pow(d_i / r_i, alpha);
  }
  report.applicable = e1 && e2;
  report.lhs = lhs;
  report.holds = !report.applicable || lhs <= report.rhs * (1.0 + 1e-12);
  return report;
}

ResidualSweepResult residual_bound_sweep(std::int64_t num_pus, std::int64_t cochannel,
                                         const Region& region, double i_th, double alpha,
                                         double epsilon, std::int64_t trials,
                                         std::uint64_t seed, int threads) {
  const std::uint64_t exp_seed = rng::derive_stream(seed, rng::kTagExperimentBase + 0x726573);
  std::vector<std::uint8_t> applicable(static_cast<std::size_t>(trials), 0);
  std::vector<std::uint8_t> violated(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, threads, [&](std::int64_t t) {
    const ReducedLayout layout =
        draw_reduced(region, num_pus, cochannel, rng::trial_seed(exp_seed, t));
    const ResidualBoundReport r =
        verify_residual_bound(layout.pus, layout.sus, i_th, alpha, num_pus, epsilon);
    applicable[static_cast<std::size_t>(t)] = r.applicable ? 1 : 0;
    violated[static_cast<std::size_t>(t)] = (r.applicable && !r.holds) ? 1 : 0;
  });
  ResidualSweepResult result;
  result.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    result.applicable += applicable[static_cast<std::size_t>(t)];
    result.violations += violated[static_cast<std::size_t>(t)];
  }
  return result;
}

void dump_series_csv(const EstimateSeries& series, std::ostream& out) {
  out << "L,K,K_bar,estimate,ci_low,ci_high,trials,analytic_bound\n";
  for (const PointEstimate& p : series.points) {
    out << p.num_pus << ',' << p.num_sus << ',' << p.cochannel << ',' << csv::fmt(p.estimate)
        << ',' << csv::fmt(p.ci_low) << ',' << csv::fmt(p.ci_high) << ',' << p.trials << ','
        << csv::fmt(p.analytic_bound) << '\n';
  }
}

}  // namespace cogsat
