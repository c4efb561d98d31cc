#include "cogsat/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cogsat {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // 1/phi
constexpr double kGoldenInterval = 1e-10;
constexpr double kSweepRelTol = 1e-8;
constexpr int kMaxSweeps = 200;
constexpr int kCoarseBracket = 32;
// Joint enumeration budget for exhaustive assignment search.
constexpr long kJointEnumerationLimit = 50000;

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<int> base(static_cast<std::size_t>(m));
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(factorial(m)));
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

std::vector<std::vector<int>> identity_perms(int beams, int subbands) {
  std::vector<int> id(static_cast<std::size_t>(subbands));
  std::iota(id.begin(), id.end(), 0);
  return std::vector<std::vector<int>>(static_cast<std::size_t>(beams), id);
}

}  // namespace

double OperatorView::nearest_pu_gain(int q) const {
  return pu(q, nearest_pu_index(q));
}

std::int64_t OperatorView::nearest_pu_index(int q) const {
  std::int64_t best = 0;
  double best_gain = -1.0;
  for (std::int64_t l = 0; l < num_pus; ++l) {
    const double g = pu(q, l);
    if (g > best_gain) {
      best_gain = g;
      best = l;
    }
  }
  return best;
}

OperatorView make_operator_view(const Scenario& scenario, const ChannelRealization& channels,
                                const Thresholds& thresholds, double p_max, double lambda,
                                int operator_index) {
  const Dims& d = scenario.dims();
  if (operator_index < 0 || operator_index >= d.operators) {
    throw std::invalid_argument("make_operator_view: operator index out of range");
  }
  OperatorView v;
  v.operator_index = operator_index;
  v.beams = d.beams;
  v.subbands = d.subbands;
  v.num_pus = scenario.num_pus();
  v.thresholds = thresholds;
  v.p_max = p_max;
  v.lambda = lambda;
  const int Q = d.sus_per_operator();
  v.su_positions.reserve(static_cast<std::size_t>(Q));
  v.beam_gain.resize(static_cast<std::size_t>(Q) * d.beams * d.subbands);
  v.det_pu_gain.resize(static_cast<std::size_t>(Q) * v.num_pus);
  for (int q = 0; q < Q; ++q) {
    v.su_positions.push_back(scenario.su(operator_index, q));
    for (int b = 0; b < d.beams; ++b) {
      for (int m = 0; m < d.subbands; ++m) {
        v.beam_gain[(static_cast<std::size_t>(q) * d.beams + b) * d.subbands + m] =
            channels.gain_to_beam(operator_index, q, b, m);
      }
    }
    for (std::int64_t l = 0; l < v.num_pus; ++l) {
      v.det_pu_gain[static_cast<std::size_t>(q) * v.num_pus + l] =
          channels.det_gain_to_pu(operator_index, q, l);
    }
  }
  return v;
}

double view_operator_rate(const OperatorView& view,
                          const std::vector<std::vector<int>>& beam_perms,
                          const std::vector<double>& power) {
  const int B = view.beams;
  const int M = view.subbands;
  // su_on[b][m] = q transmitting on subband m in beam b
  std::vector<int> su_on(static_cast<std::size_t>(B) * M);
  for (int b = 0; b < B; ++b) {
    for (int slot = 0; slot < M; ++slot) {
      su_on[static_cast<std::size_t>(b) * M + beam_perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot)]] =
          b * M + slot;
    }
  }
  double rate = 0.0;
  for (int b = 0; b < B; ++b) {
    for (int m = 0; m < M; ++m) {
      const int q = su_on[static_cast<std::size_t>(b) * M + m];
      double j = 0.0;
      for (int bb = 0; bb < B; ++bb) {
        if (bb == b) continue;
        const int i = su_on[static_cast<std::size_t>(bb) * M + m];
        j += view.beam(i, b, m) * power[static_cast<std::size_t>(i)];
      }
      rate += std::log2(1.0 + view.beam(q, b, m) * power[static_cast<std::size_t>(q)] / (1.0 + j));
    }
  }
  return rate;
}

namespace {

bool joint_enumeration_fits(int beams, std::size_t perm_count) {
  long j = 1;
  for (int b = 0; b < beams; ++b) {
    if (j > kJointEnumerationLimit / static_cast<long>(perm_count)) return false;
    j *= static_cast<long>(perm_count);
  }
  return true;
}

// Beam-sweep enumeration (exhaustive per beam) or 2-swap local search; both
// ascend until stable. Used where the joint candidate space is too large.
std::vector<std::vector<int>> iterative_assignment_search(const RateEvaluator& evaluate,
                                                          int beams, int subbands,
                                                          SearchMode mode) {
  std::vector<std::vector<int>> current = identity_perms(beams, subbands);
  double current_rate = evaluate(current);

  if (mode == SearchMode::kExhaustive && subbands <= 6) {
    const auto perms = all_permutations(subbands);
    for (bool improved = true; improved;) {
      improved = false;
      for (int b = 0; b < beams; ++b) {
        auto candidate = current;
        for (const auto& perm : perms) {
          candidate[static_cast<std::size_t>(b)] = perm;
          const double r = evaluate(candidate);
          if (r > current_rate) {
            current_rate = r;
            current[static_cast<std::size_t>(b)] = perm;
            improved = true;
          }
        }
      }
    }
    return current;
  }

  for (bool improved = true; improved;) {
    improved = false;
    for (int b = 0; b < beams; ++b) {
      for (int i = 0; i < subbands; ++i) {
        for (int j = i + 1; j < subbands; ++j) {
          auto candidate = current;
          std::swap(candidate[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)],
                    candidate[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)]);
          const double r = evaluate(candidate);
          if (r > current_rate) {
            current_rate = r;
            current = candidate;
            improved = true;
          }
        }
      }
    }
  }
  return current;
}

}  // namespace

std::vector<std::vector<std::vector<int>>> assignment_search_top(const RateEvaluator& evaluate,
                                                                 int beams, int subbands,
                                                                 SearchMode mode, int count) {
  if (count < 1) throw std::invalid_argument("assignment_search_top: count must be >= 1");
  if (beams < 1 || subbands < 1) {
    throw std::invalid_argument("assignment_search: beams and subbands must be >= 1");
  }
  if (subbands == 1) return {identity_perms(beams, subbands)};  // forced

  if (mode == SearchMode::kExhaustive && subbands <= 6) {
    const auto perms = all_permutations(subbands);
    if (joint_enumeration_fits(beams, perms.size())) {
      // Full joint enumeration in lexicographic order of permutation ranks;
      // a strict-greater insert keeps ranking stable under ties.
      struct Ranked {
        double rate;
        std::vector<std::vector<int>> perms;
      };
      std::vector<Ranked> top;
      std::vector<std::size_t> odo(static_cast<std::size_t>(beams), 0);
      std::vector<std::vector<int>> candidate(static_cast<std::size_t>(beams));
      for (;;) {
        for (int b = 0; b < beams; ++b) candidate[static_cast<std::size_t>(b)] = perms[odo[static_cast<std::size_t>(b)]];
        const double r = evaluate(candidate);
        std::size_t pos_in = top.size();
        while (pos_in > 0 && top[pos_in - 1].rate < r) --pos_in;
        if (pos_in < static_cast<std::size_t>(count)) {
          top.insert(top.begin() + static_cast<std::ptrdiff_t>(pos_in), {r, candidate});
          if (top.size() > static_cast<std::size_t>(count)) top.pop_back();
        }
        int pos = beams - 1;
        while (pos >= 0 && ++odo[static_cast<std::size_t>(pos)] == perms.size()) {
          odo[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
      std::vector<std::vector<std::vector<int>>> out;
      out.reserve(top.size());
      for (const Ranked& r : top) out.push_back(r.perms);
      return out;
    }
  }
  return {iterative_assignment_search(evaluate, beams, subbands, mode)};
}

std::vector<std::vector<int>> assignment_search(const RateEvaluator& evaluate, int beams,
                                                int subbands, SearchMode mode) {
  return assignment_search_top(evaluate, beams, subbands, mode, 1).front();
}

double power_best_response(const std::function<double(double)>& rate_of_power, double cap) {
  if (!(cap > 0.0)) return 0.0;

  // Coarse scan brackets the maximizer; coupled objectives are not always
  // unimodal over the whole interval.
  double best_x = 0.0;
  double best_v = rate_of_power(0.0);
  int best_i = 0;
  for (int i = 1; i <= kCoarseBracket; ++i) {
    const double x = cap * static_cast<double>(i) / kCoarseBracket;
    const double v = rate_of_power(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
      best_i = i;
    }
  }

  double lo = cap * static_cast<double>(std::max(0, best_i - 1)) / kCoarseBracket;
  double hi = cap * static_cast<double>(std::min(kCoarseBracket, best_i + 1)) / kCoarseBracket;
  double x1 = hi - kGoldenRatio * (hi - lo);
  double x2 = lo + kGoldenRatio * (hi - lo);
  double f1 = rate_of_power(x1);
  double f2 = rate_of_power(x2);
  while (hi - lo > kGoldenInterval) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGoldenRatio * (hi - lo);
      f1 = rate_of_power(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGoldenRatio * (hi - lo);
      f2 = rate_of_power(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = rate_of_power(mid);
  if (fm > best_v) {
    best_v = fm;
    best_x = mid;
  }
  const double fcap = rate_of_power(cap);
  if (fcap > best_v) {
    best_v = fcap;
    best_x = cap;
  }
  return best_x;
}

namespace {

struct SweepResult {
  int sweeps = 0;
  bool converged = false;
};

// Cyclic best response over the SUs. `upper(q)` returns the current interval
// end for SU q (recomputed every update so row-coupled intervals stay fresh);
// `monotone(q, m)` short-circuits to the interval end when raising the power
// cannot hurt anyone.
SweepResult best_response_sweeps(const OperatorView& view,
                                 const std::vector<std::vector<int>>& perms,
                                 std::vector<double>& power, std::vector<double>& cap_out,
                                 const std::function<double(int)>& upper) {
  const int B = view.beams;
  const int M = view.subbands;
  const int Q = view.sus();
  std::vector<int> subband_of(static_cast<std::size_t>(Q));
  for (int b = 0; b < B; ++b) {
    for (int slot = 0; slot < M; ++slot) {
      subband_of[static_cast<std::size_t>(b) * M + slot] = perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot)];
    }
  }

  SweepResult result;
  double rate = view_operator_rate(view, perms, power);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (int q = 0; q < Q; ++q) {
      const int m = subband_of[static_cast<std::size_t>(q)];
      const double ub = upper(q);
      cap_out[static_cast<std::size_t>(q)] = ub;
      if (ub <= 0.0) {
        power[static_cast<std::size_t>(q)] = 0.0;
        continue;
      }
      double cross = 0.0;
      const int b_own = q / M;
      for (int b = 0; b < B; ++b) {
        if (b != b_own) cross += view.beam(q, b, m);
      }
      if (cross == 0.0) {
        power[static_cast<std::size_t>(q)] = ub;  // raising power hurts nobody
        continue;
      }
      power[static_cast<std::size_t>(q)] = power_best_response(
          [&](double x) {
            const double saved = power[static_cast<std::size_t>(q)];
            power[static_cast<std::size_t>(q)] = x;
            const double r = view_operator_rate(view, perms, power);
            power[static_cast<std::size_t>(q)] = saved;
            return r;
          },
          ub);
    }
    const double new_rate = view_operator_rate(view, perms, power);
    result.sweeps = sweep + 1;
    if (std::abs(new_rate - rate) < kSweepRelTol * std::max(1.0, std::abs(new_rate))) {
      result.converged = true;
      rate = new_rate;
      break;
    }
    rate = new_rate;
  }
  return result;
}

}  // namespace

namespace {

// Candidate assignments whose final rate is worth checking with a full
// best-response pass; the cheap pre-score can misorder close candidates.
constexpr int kAssignmentShortlist = 4;

}  // namespace

OperatorSolution solve_decentralized(const OperatorView& view) {
  const int Q = view.sus();
  const int M = view.subbands;

  // Cap per (q, m): the nearest PU's budget converted to a peak power. With
  // uniform thresholds this is subband-independent.
  std::vector<double> cap(static_cast<std::size_t>(Q) * M);
  for (int q = 0; q < Q; ++q) {
    const std::int64_t l = view.nearest_pu_index(q);
    const double gain = view.pu(q, l);
    for (int m = 0; m < M; ++m) {
      cap[static_cast<std::size_t>(q) * M + m] =
          theorem1_power_cap(gain, view.thresholds.at(l, m), view.lambda, view.p_max);
    }
  }

  // Candidates pre-scored at half-cap powers, the best-response start.
  const auto evaluate = [&](const std::vector<std::vector<int>>& perms) {
    std::vector<double> p(static_cast<std::size_t>(Q));
    for (int b = 0; b < view.beams; ++b) {
      for (int slot = 0; slot < M; ++slot) {
        const int q = b * M + slot;
        const int m = perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot)];
        p[static_cast<std::size_t>(q)] = cap[static_cast<std::size_t>(q) * M + m] / 2.0;
      }
    }
    return view_operator_rate(view, perms, p);
  };
  const auto candidates = assignment_search_top(
      evaluate, view.beams, M, M <= 6 ? SearchMode::kExhaustive : SearchMode::kLocal,
      kAssignmentShortlist);

  OperatorSolution best;
  best.rate = -std::numeric_limits<double>::infinity();
  for (const auto& perms : candidates) {
    OperatorSolution sol;
    sol.solver = "decentralized";
    sol.beam_perms = perms;
    sol.power.assign(static_cast<std::size_t>(Q), 0.0);
    sol.cap.assign(static_cast<std::size_t>(Q), 0.0);
    for (int b = 0; b < view.beams; ++b) {
      for (int slot = 0; slot < M; ++slot) {
        const int q = b * M + slot;
        const int m = perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot)];
        sol.cap[static_cast<std::size_t>(q)] = cap[static_cast<std::size_t>(q) * M + m];
        sol.power[static_cast<std::size_t>(q)] = sol.cap[static_cast<std::size_t>(q)] / 2.0;
      }
    }
    const auto upper = [&](int q) { return sol.cap[static_cast<std::size_t>(q)]; };
    const SweepResult sr = best_response_sweeps(view, perms, sol.power, sol.cap, upper);
    sol.sweeps = sr.sweeps;
    sol.converged = sr.converged;
    sol.rate = view_operator_rate(view, perms, sol.power);
    if (sol.rate > best.rate) best = std::move(sol);
  }
  return best;
}

OperatorSolution solve_equal_split(const OperatorView& view, double split_factor) {
  if (!(split_factor > 0.0) || split_factor > 1.0) {
    throw std::invalid_argument("solve_equal_split: split factor must lie in (0, 1]");
  }
  const int Q = view.sus();
  const int M = view.subbands;

  // Zero-coupling row bound: largest power satisfying every local row alone.
  std::vector<double> solo(static_cast<std::size_t>(Q) * M);
  for (int q = 0; q < Q; ++q) {
    for (int m = 0; m < M; ++m) {
      double ub = view.p_max;
      for (std::int64_t l = 0; l < view.num_pus; ++l) {
        ub = std::min(ub, split_factor * view.thresholds.at(l, m) / view.pu(q, l));
      }
      solo[static_cast<std::size_t>(q) * M + m] = ub;
    }
  }

  const auto evaluate = [&](const std::vector<std::vector<int>>& perms) {
    std::vector<double> p(static_cast<std::size_t>(Q));
    for (int b = 0; b < view.beams; ++b) {
      for (int slot = 0; slot < M; ++slot) {
        const int q = b * M + slot;
        const int m = perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot)];
        p[static_cast<std::size_t>(q)] = solo[static_cast<std::size_t>(q) * M + m] / 2.0;
      }
    }
    return view_operator_rate(view, perms, p);
  };
  const auto candidates = assignment_search_top(
      evaluate, view.beams, M, M <= 6 ? SearchMode::kExhaustive : SearchMode::kLocal,
      kAssignmentShortlist);

  OperatorSolution best;
  best.rate = -std::numeric_limits<double>::infinity();
  for (const auto& perms : candidates) {
    std::vector<int> subband_of(static_cast<std::size_t>(Q));
    for (int b = 0; b < view.beams; ++b) {
      for (int slot = 0; slot < M; ++slot) {
        subband_of[static_cast<std::size_t>(b) * M + slot] =
            perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot)];
      }
    }

    OperatorSolution sol;
    sol.solver = "equal_split";
    sol.beam_perms = perms;
    // Powers start at zero (always row-feasible); each update then fits
    // inside the residual budget of the binding row.
    sol.power.assign(static_cast<std::size_t>(Q), 0.0);
    sol.cap.assign(static_cast<std::size_t>(Q), 0.0);

    const auto upper = [&](int q) {
      const int m = subband_of[static_cast<std::size_t>(q)];
      double ub = view.p_max;
      for (std::int64_t l = 0; l < view.num_pus; ++l) {
        double other = 0.0;
        for (int i = 0; i < Q; ++i) {
          if (i == q || subband_of[static_cast<std::size_t>(i)] != m) continue;
          other += view.pu(i, l) * sol.power[static_cast<std::size_t>(i)];
        }
        ub = std::min(ub, (split_factor * view.thresholds.at(l, m) - other) / view.pu(q, l));
      }
      return std::max(ub, 0.0);
    };

    const SweepResult sr = best_response_sweeps(view, perms, sol.power, sol.cap, upper);
    sol.sweeps = sr.sweeps;
    sol.converged = sr.converged;
    sol.rate = view_operator_rate(view, perms, sol.power);
    if (sol.rate > best.rate) best = std::move(sol);
  }
  return best;
}

Solution assemble_solution(const Dims& dims, double p_max,
                           const std::vector<OperatorSolution>& per_operator,
                           const ChannelRealization& channels) {
  if (per_operator.size() != static_cast<std::size_t>(dims.operators)) {
    throw std::invalid_argument("assemble_solution: one solution per operator expected");
  }
  std::vector<std::vector<int>> perms;
  perms.reserve(static_cast<std::size_t>(dims.operators) * dims.beams);
  for (const auto& op : per_operator) {
    perms.insert(perms.end(), op.beam_perms.begin(), op.beam_perms.end());
  }
  Assignment assignment = Assignment::from_beam_permutations(dims, perms);
  PowerAllocation powers(dims, p_max);
  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < dims.sus_per_operator(); ++q) {
      powers.set(n, q, assignment.subband_of(n, q),
                 per_operator[static_cast<std::size_t>(n)].power[static_cast<std::size_t>(q)]);
    }
  }
  Solution sol{std::move(assignment), std::move(powers), 0.0,
               per_operator.empty() ? "" : per_operator.front().solver, 0, true};
  for (const auto& op : per_operator) {
    sol.sweeps = std::max(sol.sweeps, op.sweeps);
    sol.converged = sol.converged && op.converged;
  }
  sol.rate = total_rate(sol.assignment, sol.powers, channels);
  return sol;
}

OracleSolution solve_centralized_oracle(const ChannelRealization& channels,
                                        const Thresholds& thresholds, double p_max,
                                        int grid_levels, const OracleOptions& options) {
  const Dims& d = channels.dims();
  if (d.cochannel_sus() > kOracleMaxCochannel || d.subbands > kOracleMaxSubbands ||
      grid_levels < 2 || grid_levels > kOracleMaxGridLevels) {
    throw std::invalid_argument("oracle: instance exceeds the cost guard");
  }
  if (options.mode == OracleOptions::Mode::kPerSuCaps &&
      options.caps.size() != static_cast<std::size_t>(d.operators) * d.sus_per_operator()) {
    throw std::invalid_argument("oracle: caps size mismatch");
  }

  const int M = d.subbands;
  const int NB = d.cochannel_sus();
  const std::int64_t L = channels.num_pus();
  const auto perms = all_permutations(M);
  const std::size_t perm_count = perms.size();

  struct Best {
    double rate = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> perms;
    std::vector<double> powers;  // [n][q] on the assigned subband
  } best;

  std::vector<std::size_t> odo(static_cast<std::size_t>(NB), 0);
  std::vector<std::vector<int>> candidate(static_cast<std::size_t>(NB));
  for (;;) {
    for (int i = 0; i < NB; ++i) candidate[static_cast<std::size_t>(i)] = perms[odo[static_cast<std::size_t>(i)]];

    // su_of[slot i][m]: (n, q) transmitting on subband m for co-channel slot
    // i = n * B + b.
    double rate_sum = 0.0;
    std::vector<double> chosen(static_cast<std::size_t>(d.operators) * d.sus_per_operator(), 0.0);
    bool assignment_ok = true;

    for (int m = 0; m < M && assignment_ok; ++m) {
      struct Entry {
        int n, b, q;
        double ub;
      };
      std::vector<Entry> entries;
      entries.reserve(static_cast<std::size_t>(NB));
      for (int i = 0; i < NB; ++i) {
        const int n = i / d.beams;
        const int b = i % d.beams;
        const auto& perm = candidate[static_cast<std::size_t>(i)];
        int q = -1;
        for (int slot = 0; slot < M; ++slot) {
          if (perm[static_cast<std::size_t>(slot)] == m) q = b * M + slot;
        }
        double ub = p_max;
        if (options.mode == OracleOptions::Mode::kPerSuCaps) {
          ub = std::min(ub, options.caps[static_cast<std::size_t>(n) * d.sus_per_operator() + q]);
        }
        entries.push_back({n, b, q, ub});
      }

      // All grid combinations in lexicographic order; first strict maximum
      // wins, so ties resolve to the smallest power encoding.
      double best_m_rate = -std::numeric_limits<double>::infinity();
      std::vector<double> best_m_powers(static_cast<std::size_t>(NB), 0.0);
      std::vector<int> podo(static_cast<std::size_t>(NB), 0);
      std::vector<double> pw(static_cast<std::size_t>(NB), 0.0);
      for (;;) {
        for (int i = 0; i < NB; ++i) {
          pw[static_cast<std::size_t>(i)] =
              entries[static_cast<std::size_t>(i)].ub * podo[static_cast<std::size_t>(i)] / (grid_levels - 1);
        }

        bool feasible = true;
        if (options.mode == OracleOptions::Mode::kFullC1) {
          for (std::int64_t l = 0; l < L && feasible; ++l) {
            double acc = 0.0;
            for (int i = 0; i < NB; ++i) {
              const auto& e = entries[static_cast<std::size_t>(i)];
              acc += channels.det_gain_to_pu(e.n, e.q, l) * pw[static_cast<std::size_t>(i)];
            }
            const double i_th = thresholds.at(l, m);
            feasible = acc <= i_th * (1.0 + kC1RelativeSlack);
          }
        } else if (options.mode == OracleOptions::Mode::kSplitC1) {
          for (int n = 0; n < d.operators && feasible; ++n) {
            for (std::int64_t l = 0; l < L && feasible; ++l) {
              double acc = 0.0;
              for (int i = 0; i < NB; ++i) {
                const auto& e = entries[static_cast<std::size_t>(i)];
                if (e.n == n) acc += channels.det_gain_to_pu(e.n, e.q, l) * pw[static_cast<std::size_t>(i)];
              }
              const double i_th = options.split_factor * thresholds.at(l, m);
              feasible = acc <= i_th * (1.0 + kC1RelativeSlack);
            }
          }
        }

        if (feasible) {
          double r = 0.0;
          for (int i = 0; i < NB; ++i) {
            const auto& e = entries[static_cast<std::size_t>(i)];
            double j = 0.0;
            for (int k = 0; k < NB; ++k) {
              if (k == i) continue;
              const auto& o = entries[static_cast<std::size_t>(k)];
              if (o.n != e.n) continue;
              j += channels.gain_to_beam(o.n, o.q, e.b, m) * pw[static_cast<std::size_t>(k)];
            }
            r += std::log2(1.0 + channels.gain_to_beam(e.n, e.q, e.b, m) *
                                     pw[static_cast<std::size_t>(i)] / (1.0 + j));
          }
          if (r > best_m_rate) {
            best_m_rate = r;
            best_m_powers = pw;
          }
        }

        int pos = NB - 1;
        while (pos >= 0 && ++podo[static_cast<std::size_t>(pos)] == grid_levels) {
          podo[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }

      if (best_m_rate == -std::numeric_limits<double>::infinity()) {
        assignment_ok = false;  // cannot happen: zero powers are feasible
        break;
      }
      rate_sum += best_m_rate;
      for (int i = 0; i < NB; ++i) {
        const auto& e = entries[static_cast<std::size_t>(i)];
        chosen[static_cast<std::size_t>(e.n) * d.sus_per_operator() + e.q] =
            best_m_powers[static_cast<std::size_t>(i)];
      }
    }

    if (assignment_ok && rate_sum > best.rate) {
      best.rate = rate_sum;
      best.perms = candidate;
      best.powers = chosen;
    }

    int pos = NB - 1;
    while (pos >= 0 && ++odo[static_cast<std::size_t>(pos)] == perm_count) {
      odo[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  Assignment assignment = Assignment::from_beam_permutations(d, best.perms);
  PowerAllocation powers(d, p_max);
  for (int n = 0; n < d.operators; ++n) {
    for (int q = 0; q < d.sus_per_operator(); ++q) {
      powers.set(n, q, assignment.subband_of(n, q),
                 best.powers[static_cast<std::size_t>(n) * d.sus_per_operator() + q]);
    }
  }
  return OracleSolution{std::move(assignment), std::move(powers), best.rate};
}

}  // namespace cogsat
