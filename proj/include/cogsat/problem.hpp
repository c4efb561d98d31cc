#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cogsat/channel.hpp"
#include "cogsat/scenario.hpp"

namespace cogsat {

// Binary subband assignment A[n][q][m]. Validity is enforced at
// construction: entries are 0/1, each (operator, beam, subband) carries
// exactly one SU, and each SU holds exactly one subband — i.e. per beam the
// slot-to-subband map is a permutation.
class Assignment {
 public:
  Assignment(Dims dims, std::vector<std::uint8_t> entries);

  // perms[n * B + b][slot] = subband of that slot's SU.
  static Assignment from_beam_permutations(const Dims& dims,
                                           const std::vector<std::vector<int>>& perms);
  static Assignment identity(const Dims& dims);

  const Dims& dims() const { return dims_; }
  bool assigned(int n, int q, int m) const { return entries_[index(n, q, m)] != 0; }
  int subband_of(int n, int q) const { return subband_of_[flat(n, q)]; }
  // SU (q index) of beam b of operator n transmitting on subband m.
  int su_on(int n, int b, int m) const {
    return su_on_[(static_cast<std::size_t>(n) * dims_.beams + b) * dims_.subbands + m];
  }
  const std::vector<std::uint8_t>& raw() const { return entries_; }

 private:
  std::size_t index(int n, int q, int m) const {
    return (static_cast<std::size_t>(n) * dims_.sus_per_operator() + q) * dims_.subbands + m;
  }
  std::size_t flat(int n, int q) const {
    return static_cast<std::size_t>(n) * dims_.sus_per_operator() + q;
  }

  Dims dims_;
  std::vector<std::uint8_t> entries_;
  std::vector<int> subband_of_;
  std::vector<int> su_on_;
};

// Per-SU per-subband transmit powers, all in [0, p_max].
class PowerAllocation {
 public:
  PowerAllocation(Dims dims, double p_max);
  PowerAllocation(Dims dims, double p_max, std::vector<double> powers);

  const Dims& dims() const { return dims_; }
  double p_max() const { return p_max_; }
  double at(int n, int q, int m) const { return p_[index(n, q, m)]; }
  void set(int n, int q, int m, double value);
  const std::vector<double>& raw() const { return p_; }

 private:
  std::size_t index(int n, int q, int m) const {
    return (static_cast<std::size_t>(n) * dims_.sus_per_operator() + q) * dims_.subbands + m;
  }

  Dims dims_;
  double p_max_;
  std::vector<double> p_;
};

// Interference-temperature thresholds, uniform scalar by default with an
// optional per-(PU, subband) table.
class Thresholds {
 public:
  static Thresholds uniform(double value);
  static Thresholds table(std::int64_t num_pus, int subbands, std::vector<double> values);

  double at(std::int64_t l, int m) const {
    return table_.empty() ? uniform_ : table_[static_cast<std::size_t>(l) * subbands_ + m];
  }
  bool is_uniform() const { return table_.empty(); }
  double uniform_value() const { return uniform_; }

 private:
  double uniform_ = 1.0;
  std::vector<double> table_;
  int subbands_ = 1;
};

enum class GainKind { kDeterministic, kRealized };

// Total SU interference received at PU l on subband m.
double interference_at_pu(const Assignment& a, const PowerAllocation& p,
                          const ChannelRealization& ch, std::int64_t l, int m,
                          GainKind kind = GainKind::kDeterministic);

// Co-channel interference at beam b of operator n seen by its SU q on subband
// m. Only same-operator SUs contribute; other satellites are out of the beam.
double intra_sat_interference(const Assignment& a, const PowerAllocation& p,
                              const ChannelRealization& ch, int n, int b, int q, int m);

// Sum rate of operator n in bits/s/Hz, unit noise in the SINR denominator.
double operator_rate(const Assignment& a, const PowerAllocation& p,
                     const ChannelRealization& ch, int n);
double total_rate(const Assignment& a, const PowerAllocation& p,
                  const ChannelRealization& ch);

struct ConstraintReport {
  bool ok = true;
  double worst_violation = 0.0;
};

struct FeasibilityReport {
  ConstraintReport c1, c2, c3, c4, c5;
  bool feasible() const { return c1.ok && c2.ok && c3.ok && c4.ok && c5.ok; }
};

// Relative slack absorbing summation noise in the C1 comparison.
inline constexpr double kC1RelativeSlack = 1e-9;

// C1 is checked on deterministic gains (the averaged constraint); pass
// GainKind::kRealized for the shadow-sensitive strict mode.
FeasibilityReport check_feasibility(const Assignment& a, const PowerAllocation& p,
                                    const ChannelRealization& ch, const Thresholds& thresholds,
                                    GainKind kind = GainKind::kDeterministic);

// Single-PU power cap I_th / F for the SU's nearest-PU gain F.
double lemma1_power_cap(double nearest_pu_gain, double i_th);

// Finite-lambda cap min((I_th / F) * (1 - 1/lambda), p_max); lambda may be
// +infinity, recovering the single-PU cap.
double theorem1_power_cap(double nearest_pu_gain, double i_th, double lambda, double p_max);

// CSV schema: n,q,m,assigned(0|1),power with 1-based indices.
void dump_solution_csv(const Assignment& a, const PowerAllocation& p, std::ostream& out);

}  // namespace cogsat
