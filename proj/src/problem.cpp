#include "cogsat/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cogsat/csv.hpp"

namespace cogsat {

namespace {

void index_assignment(const Dims& dims, const std::vector<std::uint8_t>& entries,
                      std::vector<int>& subband_of, std::vector<int>& su_on) {
  const int Q = dims.sus_per_operator();
  const int M = dims.subbands;
  subband_of.assign(static_cast<std::size_t>(dims.operators) * Q, -1);
  su_on.assign(static_cast<std::size_t>(dims.operators) * dims.beams * M, -1);

  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < Q; ++q) {
      int count = 0;
      for (int m = 0; m < M; ++m) {
        const std::uint8_t v = entries[(static_cast<std::size_t>(n) * Q + q) * M + m];
        if (v > 1) throw std::invalid_argument("assignment: entries must be 0 or 1");
        if (v == 1) {
          ++count;
          subband_of[static_cast<std::size_t>(n) * Q + q] = m;
        }
      }
      if (count != 1) {
        throw std::invalid_argument("assignment: each SU needs exactly one subband");
      }
    }
    for (int b = 0; b < dims.beams; ++b) {
      for (int m = 0; m < M; ++m) {
        int owner = -1;
        for (int slot = 0; slot < M; ++slot) {
          const int q = b * M + slot;
          if (entries[(static_cast<std::size_t>(n) * Q + q) * M + m] == 1) {
            if (owner >= 0) {
              throw std::invalid_argument("assignment: subband reused within a beam");
            }
            owner = q;
          }
        }
        if (owner < 0) {
          throw std::invalid_argument("assignment: subband unassigned within a beam");
        }
        su_on[(static_cast<std::size_t>(n) * dims.beams + b) * M + m] = owner;
      }
    }
  }
}

}  // namespace

Assignment::Assignment(Dims dims, std::vector<std::uint8_t> entries)
    : dims_(dims), entries_(std::move(entries)) {
  if (!dims_.valid()) throw std::invalid_argument("assignment: bad dims");
  const std::size_t expected =
      static_cast<std::size_t>(dims_.operators) * dims_.sus_per_operator() * dims_.subbands;
  if (entries_.size() != expected) {
    throw std::invalid_argument("assignment: tensor size does not match dims");
  }
  index_assignment(dims_, entries_, subband_of_, su_on_);
}

Assignment Assignment::from_beam_permutations(const Dims& dims,
                                              const std::vector<std::vector<int>>& perms) {
  const int M = dims.subbands;
  if (perms.size() != static_cast<std::size_t>(dims.operators) * dims.beams) {
    throw std::invalid_argument("assignment: need one permutation per (operator, beam)");
  }
  std::vector<std::uint8_t> entries(
      static_cast<std::size_t>(dims.operators) * dims.sus_per_operator() * M, 0);
  for (int n = 0; n < dims.operators; ++n) {
    for (int b = 0; b < dims.beams; ++b) {
      const auto& perm = perms[static_cast<std::size_t>(n) * dims.beams + b];
      std::vector<int> sorted(perm);
      std::sort(sorted.begin(), sorted.end());
      for (int m = 0; m < M; ++m) {
        if (sorted[static_cast<std::size_t>(m)] != m) {
          throw std::invalid_argument("assignment: slot map is not a permutation");
        }
      }
      for (int slot = 0; slot < M; ++slot) {
        const int q = b * M + slot;
        entries[(static_cast<std::size_t>(n) * dims.sus_per_operator() + q) * M +
                perm[static_cast<std::size_t>(slot)]] = 1;
      }
    }
  }
  return Assignment(dims, std::move(entries));
}

Assignment Assignment::identity(const Dims& dims) {
  std::vector<int> id(static_cast<std::size_t>(dims.subbands));
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> perms(
      static_cast<std::size_t>(dims.operators) * dims.beams, id);
  return from_beam_permutations(dims, perms);
}

PowerAllocation::PowerAllocation(Dims dims, double p_max)
    : dims_(dims),
      p_max_(p_max),
      p_(static_cast<std::size_t>(dims.operators) * dims.sus_per_operator() * dims.subbands,
         0.0) {
  if (!(p_max_ >= 0.0)) throw std::invalid_argument("powers: p_max must be >= 0");
}

PowerAllocation::PowerAllocation(Dims dims, double p_max, std::vector<double> powers)
    : dims_(dims), p_max_(p_max), p_(std::move(powers)) {
  if (!(p_max_ >= 0.0)) throw std::invalid_argument("powers: p_max must be >= 0");
  const std::size_t expected =
      static_cast<std::size_t>(dims_.operators) * dims_.sus_per_operator() * dims_.subbands;
  if (p_.size() != expected) {
    throw std::invalid_argument("powers: tensor size does not match dims");
  }
  for (const double v : p_) {
    if (!(v >= 0.0) || v > p_max_ * (1.0 + 1e-12)) {
      throw std::invalid_argument("powers: entries must lie in [0, p_max]");
    }
  }
}

void PowerAllocation::set(int n, int q, int m, double value) {
  if (!(value >= 0.0) || value > p_max_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("powers: value outside [0, p_max]");
  }
  p_[index(n, q, m)] = value;
}

Thresholds Thresholds::uniform(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("thresholds: I_th must be > 0");
  Thresholds t;
  t.uniform_ = value;
  return t;
}

Thresholds Thresholds::table(std::int64_t num_pus, int subbands, std::vector<double> values) {
  if (values.size() != static_cast<std::size_t>(num_pus) * subbands) {
    throw std::invalid_argument("thresholds: table size mismatch");
  }
  for (const double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("thresholds: entries must be > 0");
  }
  Thresholds t;
  t.table_ = std::move(values);
  t.subbands_ = subbands;
  return t;
}

double interference_at_pu(const Assignment& a, const PowerAllocation& p,
                          const ChannelRealization& ch, std::int64_t l, int m,
                          GainKind kind) {
  const Dims& d = a.dims();
  double sum = 0.0;
  for (int n = 0; n < d.operators; ++n) {
    for (int b = 0; b < d.beams; ++b) {
      const int q = a.su_on(n, b, m);
      const double gain = kind == GainKind::kDeterministic ? ch.det_gain_to_pu(n, q, l)
                                                           : ch.gain_to_pu(n, q, l, m);
      sum += gain * p.at(n, q, m);
    }
  }
  return sum;
}

double intra_sat_interference(const Assignment& a, const PowerAllocation& p,
                              const ChannelRealization& ch, int n, int b, int q, int m) {
  const Dims& d = a.dims();
  double sum = 0.0;
  for (int bb = 0; bb < d.beams; ++bb) {
    const int i = a.su_on(n, bb, m);
    if (i == q) continue;
    sum += ch.gain_to_beam(n, i, b, m) * p.at(n, i, m);
  }
  return sum;
}

double operator_rate(const Assignment& a, const PowerAllocation& p,
                     const ChannelRealization& ch, int n) {
  const Dims& d = a.dims();
  double rate = 0.0;
  for (int b = 0; b < d.beams; ++b) {
    for (int slot = 0; slot < d.subbands; ++slot) {
      const int q = b * d.subbands + slot;
      const int m = a.subband_of(n, q);
      const double signal = ch.gain_to_beam(n, q, b, m) * p.at(n, q, m);
      const double j = intra_sat_interference(a, p, ch, n, b, q, m);
      rate += std::log2(1.0 + signal / (1.0 + j));
    }
  }
  return rate;
}

double total_rate(const Assignment& a, const PowerAllocation& p,
                  const ChannelRealization& ch) {
  double sum = 0.0;
  for (int n = 0; n < a.dims().operators; ++n) sum += operator_rate(a, p, ch, n);
  return sum;
}

FeasibilityReport check_feasibility(const Assignment& a, const PowerAllocation& p,
                                    const ChannelRealization& ch, const Thresholds& thresholds,
                                    GainKind kind) {
  const Dims& d = a.dims();
  FeasibilityReport report;

  for (std::int64_t l = 0; l < ch.num_pus(); ++l) {
    for (int m = 0; m < d.subbands; ++m) {
      const double i_th = thresholds.at(l, m);
      const double excess = interference_at_pu(a, p, ch, l, m, kind) - i_th;
      if (excess > i_th * kC1RelativeSlack) {
        report.c1.ok = false;
        report.c1.worst_violation = std::max(report.c1.worst_violation, excess);
      }
    }
  }

  // C2/C4/C5 hold for any constructed Assignment; recheck the raw tensor
  // rather than assuming it.
  const auto& raw = a.raw();
  const int Q = d.sus_per_operator();
  for (const std::uint8_t v : raw) {
    if (v > 1) {
      report.c2.ok = false;
      report.c2.worst_violation = std::max<double>(report.c2.worst_violation, v - 1.0);
    }
  }
  for (int n = 0; n < d.operators; ++n) {
    for (int b = 0; b < d.beams; ++b) {
      for (int m = 0; m < d.subbands; ++m) {
        int sum = 0;
        for (int slot = 0; slot < d.subbands; ++slot) {
          sum += raw[(static_cast<std::size_t>(n) * Q + b * d.subbands + slot) * d.subbands + m];
        }
        if (sum != 1) {
          report.c4.ok = false;
          report.c4.worst_violation =
              std::max(report.c4.worst_violation, std::abs(sum - 1.0));
        }
      }
    }
    for (int q = 0; q < Q; ++q) {
      int sum = 0;
      for (int m = 0; m < d.subbands; ++m) {
        sum += raw[(static_cast<std::size_t>(n) * Q + q) * d.subbands + m];
      }
      if (sum != 1) {
        report.c5.ok = false;
        report.c5.worst_violation = std::max(report.c5.worst_violation, std::abs(sum - 1.0));
      }
    }
  }

  for (int n = 0; n < d.operators; ++n) {
    for (int q = 0; q < Q; ++q) {
      for (int m = 0; m < d.subbands; ++m) {
        const double v = p.at(n, q, m);
        const double excess = std::max(-v, v - p.p_max());
        if (excess > 0.0) {
          report.c3.ok = false;
          report.c3.worst_violation = std::max(report.c3.worst_violation, excess);
        }
      }
    }
  }

  return report;
}

double lemma1_power_cap(double nearest_pu_gain, double i_th) {
  if (!(nearest_pu_gain > 0.0)) {
    throw std::invalid_argument("lemma1_power_cap: gain must be > 0");
  }
  return i_th / nearest_pu_gain;
}

double theorem1_power_cap(double nearest_pu_gain, double i_th, double lambda, double p_max) {
  if (!(lambda >= 1.0)) {
    throw std::invalid_argument("theorem1_power_cap: lambda must be >= 1");
  }
  const double slack = std::isinf(lambda) ? 1.0 : 1.0 - 1.0 / lambda;
  return std::min(lemma1_power_cap(nearest_pu_gain, i_th) * slack, p_max);
}

void dump_solution_csv(const Assignment& a, const PowerAllocation& p, std::ostream& out) {
  const Dims& d = a.dims();
  out << "n,q,m,assigned,power\n";
  for (int n = 0; n < d.operators; ++n) {
    for (int q = 0; q < d.sus_per_operator(); ++q) {
      for (int m = 0; m < d.subbands; ++m) {
        out << (n + 1) << ',' << (q + 1) << ',' << (m + 1) << ','
            << (a.assigned(n, q, m) ? 1 : 0) << ',' << csv::fmt(p.at(n, q, m)) << '\n';
      }
    }
  }
}

}  // namespace cogsat
