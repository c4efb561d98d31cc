#include <cmath>
#include <limits>
#include <vector>

#include "cogsat/solvers.hpp"
#include "doctest.h"

using namespace cogsat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

OperatorView manual_view(int beams, int subbands, std::int64_t num_pus,
                         std::vector<double> beam_gain, std::vector<double> det_pu_gain,
                         double i_th, double p_max, double lambda) {
  OperatorView v;
  v.operator_index = 0;
  v.beams = beams;
  v.subbands = subbands;
  v.num_pus = num_pus;
  v.su_positions.assign(static_cast<std::size_t>(beams * subbands), Point{0.0, 0.0});
  v.beam_gain = std::move(beam_gain);
  v.det_pu_gain = std::move(det_pu_gain);
  v.thresholds = Thresholds::uniform(i_th);
  v.p_max = p_max;
  v.lambda = lambda;
  return v;
}

struct Instance {
  Scenario scenario;
  ChannelRealization channels;
  Thresholds thresholds;
  double p_max;
};

Instance make_instance(Dims dims, std::int64_t num_pus, std::uint64_t seed, double i_th,
                       double p_max) {
  const Region region = Region::unit_square();
  Scenario scenario = generate_scenario(dims, num_pus, region, seed);
  ChannelParams params;
  params.beam_model = make_grid_beam_model(region, dims.operators, dims.beams, 1.0, 0.3);
  ChannelRealization channels = sample_channels(scenario, params, seed);
  return {std::move(scenario), std::move(channels), Thresholds::uniform(i_th), p_max};
}

double caps_grid_floor(double value, double ub, int levels) {
  if (ub <= 0.0) return 0.0;
  const double step = ub / (levels - 1);
  return std::floor(value / step) * step;
}

}  // namespace

TEST_CASE("best response returns the cap for monotone objectives") {
  const auto increasing = [](double p) { return std::log2(1.0 + 3.0 * p); };
  CHECK(power_best_response(increasing, 2.5) == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(power_best_response(increasing, 0.0) == 0.0);
}

TEST_CASE("best response matches a dense grid scan on coupled objectives") {
  rng::Stream s(808);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = s.next_uniform(0.2, 5.0);
    const double c = s.next_uniform(0.2, 5.0);
    const double d = s.next_uniform(0.2, 5.0);
    const double cap = 2.0;
    const auto f = [&](double p) {
      return std::log2(1.0 + a * p) + std::log2(1.0 + c / (1.0 + d * p));
    };

    double grid_best_x = 0.0, grid_best_v = f(0.0);
    const int n = 100000;
    for (int i = 1; i <= n; ++i) {
      const double x = cap * i / n;
      const double v = f(x);
      if (v > grid_best_v) {
        grid_best_v = v;
        grid_best_x = x;
      }
    }

    const double got = power_best_response(f, cap);
    CHECK(std::abs(got - grid_best_x) < 1e-4);
    CHECK(std::abs(f(got) - grid_best_v) < 1e-8);
  }
}

TEST_CASE("assignment search with one subband is forced") {
  const auto evaluate = [](const std::vector<std::vector<int>>&) { return 1.0; };
  const auto perms = assignment_search(evaluate, 3, 1, SearchMode::kExhaustive);
  REQUIRE(perms.size() == 3);
  for (const auto& p : perms) CHECK(p == std::vector<int>{0});
}

TEST_CASE("assignment search finds the separable optimum") {
  // Slot-subband weights [[1, 2], [3, 1]]: the anti-diagonal scores 2 + 3 = 5.
  const double w[2][2] = {{1.0, 2.0}, {3.0, 1.0}};
  const auto evaluate = [&](const std::vector<std::vector<int>>& perms) {
    return w[0][perms[0][0]] + w[1][perms[0][1]];
  };
  const auto perms = assignment_search(evaluate, 1, 2, SearchMode::kExhaustive);
  CHECK(perms[0] == std::vector<int>{1, 0});
  CHECK(evaluate(perms) == doctest::Approx(5.0));
}

TEST_CASE("local search stays within 5% of exhaustive on most seeds") {
  rng::Stream s(4242);
  int good = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    double w[3][3];
    for (auto& row : w) {
      for (double& x : row) x = s.next_uniform(0.0, 1.0);
    }
    const auto evaluate = [&](const std::vector<std::vector<int>>& perms) {
      return w[0][perms[0][0]] + w[1][perms[0][1]] + w[2][perms[0][2]];
    };
    const auto ex = assignment_search(evaluate, 1, 3, SearchMode::kExhaustive);
    const auto loc = assignment_search(evaluate, 1, 3, SearchMode::kLocal);
    if (evaluate(loc) >= 0.95 * evaluate(ex)) ++good;
  }
  CHECK(good >= 950);
}

TEST_CASE("decentralized solver saturates decoupled SUs at their caps") {
  // Single SU: cap = (I_th / F)(1 - 1/lambda) = 0.9.
  {
    OperatorView v = manual_view(1, 1, 1, {1.0}, {1.0}, 1.0, 10.0, 10.0);
    const OperatorSolution sol = solve_decentralized(v);
    CHECK(sol.power[0] == doctest::Approx(0.9));
    CHECK(sol.cap[0] == doctest::Approx(0.9));
    CHECK(sol.converged);
  }
  // Two beams with zero cross-beam gain: no coupling, both at cap.
  {
    OperatorView v = manual_view(2, 1, 1,
                                 {1.0, 0.0,   // q0: own beam 0, none into beam 1
                                  0.0, 1.0},  // q1: none into beam 0, own beam 1
                                 {2.0, 4.0}, 1.0, 10.0, 10.0);
    const OperatorSolution sol = solve_decentralized(v);
    CHECK(sol.power[0] == doctest::Approx(0.9 / 2.0));
    CHECK(sol.power[1] == doctest::Approx(0.9 / 4.0));
  }
}

TEST_CASE("equal split honors the binding interference row") {
  // One SU, two PU rows; the close PU (gain 100) binds: P = (I/2) / 100.
  OperatorView v = manual_view(1, 1, 2, {1.0}, {100.0, 1.0}, 1.0, 10.0, 10.0);
  const OperatorSolution sol = solve_equal_split(v, 0.5);
  CHECK(sol.power[0] == doctest::Approx(0.005));
  CHECK(sol.converged);
}

TEST_CASE("best response never ends below its starting rate") {
  rng::Stream s(909);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = make_instance({1, 2, 2}, 8, 1000 + trial, 5.0, 1.0);
    const OperatorView view =
        make_operator_view(inst.scenario, inst.channels, inst.thresholds, inst.p_max, 10.0, 0);
    const OperatorSolution sol = solve_decentralized(view);
    // Rate at the half-cap start under the chosen assignment.
    std::vector<double> half(sol.power.size());
    for (std::size_t q = 0; q < half.size(); ++q) half[q] = sol.cap[q] / 2.0;
    CHECK(sol.rate >= view_operator_rate(view, sol.beam_perms, half) - 1e-9);
  }
}

TEST_CASE("decentralized output depends only on the operator view") {
  // Two scenarios differing only in the other operator's SU positions.
  const Region region = Region::unit_square();
  const Dims dims{2, 1, 2};
  std::vector<Point> pus{{0.2, 0.3}, {0.7, 0.8}, {0.5, 0.1}};
  std::vector<Point> own{{0.1, 0.1}, {0.9, 0.4}};
  std::vector<Point> other_a{{0.3, 0.6}, {0.6, 0.2}};
  std::vector<Point> other_b{{0.8, 0.9}, {0.05, 0.95}};

  ScalingParams scaling;
  scaling.num_pus = 3;
  scaling.num_sus = 4;
  scaling.cochannel = 2;
  scaling.lambda = 0.75;

  std::vector<Point> sus_a = own;
  sus_a.insert(sus_a.end(), other_a.begin(), other_a.end());
  std::vector<Point> sus_b = own;
  sus_b.insert(sus_b.end(), other_b.begin(), other_b.end());
  const Scenario scen_a(region, dims, pus, sus_a, scaling);
  const Scenario scen_b(region, dims, pus, sus_b, scaling);

  ChannelParams params;
  params.beam_model = make_grid_beam_model(region, 2, 1, 1.0, 0.3);
  const ChannelRealization ch_a = sample_channels(scen_a, params, 5);
  const ChannelRealization ch_b = sample_channels(scen_b, params, 5);
  const Thresholds th = Thresholds::uniform(1.0);

  const OperatorView view_a = make_operator_view(scen_a, ch_a, th, 10.0, 10.0, 0);
  const OperatorView view_b = make_operator_view(scen_b, ch_b, th, 10.0, 10.0, 0);
  REQUIRE(view_a.det_pu_gain == view_b.det_pu_gain);
  REQUIRE(view_a.beam_gain == view_b.beam_gain);

  const OperatorSolution sol_a = solve_decentralized(view_a);
  const OperatorSolution sol_b = solve_decentralized(view_b);
  CHECK(sol_a.power == sol_b.power);
  CHECK(sol_a.beam_perms == sol_b.beam_perms);
  CHECK(sol_a.rate == sol_b.rate);

  const OperatorSolution es_a = solve_equal_split(view_a, 0.5);
  const OperatorSolution es_b = solve_equal_split(view_b, 0.5);
  CHECK(es_a.power == es_b.power);
  CHECK(es_a.rate == es_b.rate);
}

TEST_CASE("solver outputs are feasible under their constraint sets") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Dims dims{3, 2, 2};
    const Instance inst = make_instance(dims, 30, seed, 5.0, 1.0);
    const double lambda = 30.0 / dims.total_sus();

    std::vector<OperatorSolution> dec_ops, es_ops;
    for (int n = 0; n < dims.operators; ++n) {
      const OperatorView view =
          make_operator_view(inst.scenario, inst.channels, inst.thresholds, inst.p_max, lambda, n);
      dec_ops.push_back(solve_decentralized(view));
      es_ops.push_back(solve_equal_split(view, 1.0 / dims.operators));
    }
    const Solution dec = assemble_solution(dims, inst.p_max, dec_ops, inst.channels);
    const Solution es = assemble_solution(dims, inst.p_max, es_ops, inst.channels);

    // Decentralized: C2-C5 plus the per-SU caps.
    const FeasibilityReport dec_report =
        check_feasibility(dec.assignment, dec.powers, inst.channels, inst.thresholds);
    CHECK(dec_report.c2.ok);
    CHECK(dec_report.c3.ok);
    CHECK(dec_report.c4.ok);
    CHECK(dec_report.c5.ok);
    for (int n = 0; n < dims.operators; ++n) {
      for (int q = 0; q < dims.sus_per_operator(); ++q) {
        const int m = dec.assignment.subband_of(n, q);
        CHECK(dec.powers.at(n, q, m) <=
              dec_ops[static_cast<std::size_t>(n)].cap[static_cast<std::size_t>(q)] * (1.0 + 1e-12));
      }
    }

    // Equal split: full C1 holds deterministically (N rows of I_th / N).
    CHECK(check_feasibility(es.assignment, es.powers, inst.channels, inst.thresholds).feasible());
  }
}

TEST_CASE("decentralized tracks the cap-restricted oracle on small instances") {
  for (std::uint64_t seed = 11; seed <= 16; ++seed) {
    const Dims dims{1, 2, 2};
    const Instance inst = make_instance(dims, 6, seed, 5.0, 1.0);
    const OperatorView view =
        make_operator_view(inst.scenario, inst.channels, inst.thresholds, inst.p_max, 10.0, 0);
    const OperatorSolution dec = solve_decentralized(view);

    OracleOptions options;
    options.mode = OracleOptions::Mode::kPerSuCaps;
    options.caps = dec.cap;
    const OracleSolution oracle =
        solve_centralized_oracle(inst.channels, inst.thresholds, inst.p_max, 8, options);

    CHECK(dec.rate >= 0.98 * oracle.rate);

    // Snapping the continuous powers onto the oracle grid gives a candidate
    // the oracle enumerated, so it cannot beat the oracle.
    std::vector<OperatorSolution> ops{dec};
    Solution dec_full = assemble_solution(dims, inst.p_max, ops, inst.channels);
    PowerAllocation floored(dims, inst.p_max);
    for (int q = 0; q < dims.sus_per_operator(); ++q) {
      const int m = dec_full.assignment.subband_of(0, q);
      const double ub = std::min(dec.cap[static_cast<std::size_t>(q)], inst.p_max);
      floored.set(0, q, m, caps_grid_floor(dec_full.powers.at(0, q, m), ub, 8));
    }
    CHECK(oracle.rate >=
          total_rate(dec_full.assignment, floored, inst.channels) - 1e-9);
  }
}

TEST_CASE("equal split tracks the split-constrained oracle on small instances") {
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    const Dims dims{2, 1, 2};
    const Instance inst = make_instance(dims, 3, seed, 5.0, 1.0);
    const double split = 0.5;

    std::vector<OperatorSolution> es_ops;
    for (int n = 0; n < dims.operators; ++n) {
      const OperatorView view =
          make_operator_view(inst.scenario, inst.channels, inst.thresholds, inst.p_max, kInf, n);
      es_ops.push_back(solve_equal_split(view, split));
    }
    const Solution es = assemble_solution(dims, inst.p_max, es_ops, inst.channels);

    OracleOptions options;
    options.mode = OracleOptions::Mode::kSplitC1;
    options.split_factor = split;
    const OracleSolution oracle =
        solve_centralized_oracle(inst.channels, inst.thresholds, inst.p_max, 8, options);

    CHECK(es.rate >= 0.98 * oracle.rate);

    PowerAllocation floored(dims, inst.p_max);
    for (int n = 0; n < dims.operators; ++n) {
      for (int q = 0; q < dims.sus_per_operator(); ++q) {
        const int m = es.assignment.subband_of(n, q);
        floored.set(n, q, m, caps_grid_floor(es.powers.at(n, q, m), inst.p_max, 8));
      }
    }
    CHECK(oracle.rate >= total_rate(es.assignment, floored, inst.channels) - 1e-9);
  }
}

TEST_CASE("with one operator the unsplit local solver matches the full oracle") {
  // split factor 1: the local constraint set is the whole problem.
  for (std::uint64_t seed = 31; seed <= 34; ++seed) {
    const Dims dims{1, 1, 2};
    const Instance inst = make_instance(dims, 3, seed, 5.0, 1.0);
    const OperatorView view =
        make_operator_view(inst.scenario, inst.channels, inst.thresholds, inst.p_max, kInf, 0);
    const OperatorSolution es = solve_equal_split(view, 1.0);

    const OracleSolution oracle =
        solve_centralized_oracle(inst.channels, inst.thresholds, inst.p_max, 10);
    CHECK(es.rate >= 0.98 * oracle.rate);
  }
}

TEST_CASE("oracle respects its cost guard") {
  const Instance big = make_instance({2, 2, 2}, 3, 1, 1.0, 1.0);  // N*B = 4
  CHECK_THROWS_AS(solve_centralized_oracle(big.channels, big.thresholds, 1.0, 8),
                  std::invalid_argument);
  const Instance fine = make_instance({2, 1, 2}, 3, 1, 1.0, 1.0);
  CHECK_THROWS_AS(solve_centralized_oracle(fine.channels, fine.thresholds, 1.0, 13),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_centralized_oracle(fine.channels, fine.thresholds, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("oracle saturates when interference budgets are unbounded") {
  // B = 1 keeps rates monotone in power, so every SU lands on the top level.
  const Instance inst = make_instance({2, 1, 2}, 3, 7, 1e18, 1.0);
  const OracleSolution oracle = solve_centralized_oracle(inst.channels, inst.thresholds, 1.0, 8);
  for (int n = 0; n < 2; ++n) {
    for (int q = 0; q < 2; ++q) {
      CHECK(oracle.powers.at(n, q, oracle.assignment.subband_of(n, q)) == doctest::Approx(1.0));
    }
  }
  CHECK(check_feasibility(oracle.assignment, oracle.powers, inst.channels,
                          Thresholds::uniform(1e18))
            .feasible());
}

TEST_CASE("oracle rate is permutation-invariant on symmetric instances") {
  const Dims dims{2, 1, 2};
  std::vector<double> f(static_cast<std::size_t>(2 * 2 * 1 * 2), 1.0);
  std::vector<double> f_det(static_cast<std::size_t>(2 * 2 * 1), 1.0);
  std::vector<double> g(static_cast<std::size_t>(2 * 2 * 1 * 2), 1.0);
  const ChannelRealization ch(dims, 1, std::move(f), std::move(f_det), std::move(g));
  const Thresholds th = Thresholds::uniform(1e18);
  const OracleSolution oracle = solve_centralized_oracle(ch, th, 1.0, 4);

  // Any assignment with all powers at the top level scores the same.
  PowerAllocation top(dims, 1.0);
  const Assignment identity = Assignment::identity(dims);
  for (int n = 0; n < 2; ++n) {
    for (int q = 0; q < 2; ++q) top.set(n, q, identity.subband_of(n, q), 1.0);
  }
  CHECK(oracle.rate == doctest::Approx(total_rate(identity, top, ch)));
}

TEST_CASE("oracle output passes the feasibility checker") {
  for (std::uint64_t seed = 41; seed <= 45; ++seed) {
    const Instance inst = make_instance({2, 1, 2}, 3, seed, 5.0, 1.0);
    const OracleSolution oracle =
        solve_centralized_oracle(inst.channels, inst.thresholds, inst.p_max, 8);
    CHECK(check_feasibility(oracle.assignment, oracle.powers, inst.channels, inst.thresholds)
              .feasible());
  }
}
