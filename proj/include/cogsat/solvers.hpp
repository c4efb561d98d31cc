#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cogsat/problem.hpp"

namespace cogsat {

// Everything one secondary operator can see: its own SU geometry and gains,
// the thresholds, and the scaling index. No other operator's powers or
// assignments appear here, which is the whole point of the decentralized
// scheme.
struct OperatorView {
  int operator_index = 0;
  int beams = 1;
  int subbands = 1;
  std::int64_t num_pus = 0;
  std::vector<Point> su_positions;   // [Q], q = beam * M + slot
  std::vector<double> beam_gain;     // [q][b][m], SU -> own beams
  std::vector<double> det_pu_gain;   // [q][l], deterministic SU -> PU
  Thresholds thresholds = Thresholds::uniform(1.0);
  double p_max = 10.0;
  double lambda = 10.0;

  int sus() const { return beams * subbands; }
  double beam(int q, int b, int m) const {
    return beam_gain[(static_cast<std::size_t>(q) * beams + b) * subbands + m];
  }
  double pu(int q, std::int64_t l) const {
    return det_pu_gain[static_cast<std::size_t>(q) * num_pus + l];
  }
  // Gain toward the nearest PU (the largest deterministic gain).
  double nearest_pu_gain(int q) const;
  std::int64_t nearest_pu_index(int q) const;
};

OperatorView make_operator_view(const Scenario& scenario, const ChannelRealization& channels,
                                const Thresholds& thresholds, double p_max, double lambda,
                                int operator_index);

struct OperatorSolution {
  std::vector<std::vector<int>> beam_perms;  // [b][slot] = subband
  std::vector<double> power;                 // [q], on the assigned subband
  std::vector<double> cap;                   // [q] interval upper end used last
  double rate = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::string solver;
};

// Operator rate for a candidate per-beam assignment and per-SU powers.
double view_operator_rate(const OperatorView& view,
                          const std::vector<std::vector<int>>& beam_perms,
                          const std::vector<double>& power);

using RateEvaluator = std::function<double(const std::vector<std::vector<int>>&)>;

enum class SearchMode { kExhaustive, kLocal };

// Per-beam slot-to-subband permutations maximizing the evaluated rate.
// Exhaustive mode enumerates all beam permutations jointly when that is
// small, otherwise sweeps beams with per-beam enumeration (M <= 6); beyond
// that, and always in local mode, a 2-swap local search runs to stability.
// Ties keep the lexicographically first candidate.
std::vector<std::vector<int>> assignment_search(const RateEvaluator& evaluate, int beams,
                                                int subbands, SearchMode mode);

// Up to `count` best candidates under the evaluator, best first, ties in
// enumeration order. Search modes without a full candidate sweep return the
// single endpoint.
std::vector<std::vector<std::vector<int>>> assignment_search_top(const RateEvaluator& evaluate,
                                                                 int beams, int subbands,
                                                                 SearchMode mode, int count);

// Maximizer of `rate_of_power` over [0, cap]: a coarse bracket followed by
// golden-section refinement to an interval below 1e-10, checked against both
// endpoints.
double power_best_response(const std::function<double(double)>& rate_of_power, double cap);

// Converted-cap solver: per-SU caps from the nearest-PU gain with the
// (1 - 1/lambda) slack, per-beam assignment search, then cyclic best-response
// power updates from a half-cap start. Uses nothing but the view.
OperatorSolution solve_decentralized(const OperatorView& view);

// Baseline: the operator keeps split_factor (1/N) of every interference
// budget and optimizes locally; each best-response interval is shrunk so all
// local C1 rows stay satisfied.
OperatorSolution solve_equal_split(const OperatorView& view, double split_factor);

struct Solution {
  Assignment assignment;
  PowerAllocation powers;
  double rate = 0.0;
  std::string solver;
  int sweeps = 0;
  bool converged = true;
};

Solution assemble_solution(const Dims& dims, double p_max,
                           const std::vector<OperatorSolution>& per_operator,
                           const ChannelRealization& channels);

// Desk-scale exhaustive oracle: all per-beam permutations jointly, powers on
// a uniform grid, subbands optimized independently (they share no constraint
// or rate term). Ties resolve to the lexicographically smallest assignment
// and power encoding.
struct OracleOptions {
  enum class Mode {
    kFullC1,    // joint C1 rows across operators
    kPerSuCaps, // grid confined to [0, caps[n][q]]; no rows
    kSplitC1,   // per-operator rows against split_factor * I_th
  };
  Mode mode = Mode::kFullC1;
  std::vector<double> caps;      // [n][q], kPerSuCaps only
  double split_factor = 1.0;     // kSplitC1 only
};

struct OracleSolution {
  Assignment assignment;
  PowerAllocation powers;
  double rate = 0.0;
};

inline constexpr int kOracleMaxCochannel = 3;
inline constexpr int kOracleMaxSubbands = 3;
inline constexpr int kOracleMaxGridLevels = 12;

OracleSolution solve_centralized_oracle(const ChannelRealization& channels,
                                        const Thresholds& thresholds, double p_max,
                                        int grid_levels, const OracleOptions& options = {});

}  // namespace cogsat
