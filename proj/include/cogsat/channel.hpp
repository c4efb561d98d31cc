#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cogsat/scenario.hpp"

namespace cogsat {

// Gaussian beam pattern: boresight gain with squared-exponential roll-off
// around a fixed per-(operator, beam) center. Only relative beam gains enter
// the rate comparisons, so the model is deliberately simple and replaceable.
struct BeamGainModel {
  double boresight = 1.0;              // gain at the beam center
  double width = 0.3;                  // roll-off length scale
  int operators = 1;
  int beams = 1;
  std::vector<Point> centers;          // [operator][beam], flattened

  Point center(int op, int beam) const {
    return centers[static_cast<std::size_t>(op) * beams + beam];
  }
  bool has(int op, int beam) const {
    return op >= 0 && op < operators && beam >= 0 && beam < beams;
  }
};

// Beam centers on a near-square grid over the region, identical for every
// operator (each satellite covers the whole region).
BeamGainModel make_grid_beam_model(const Region& region, int operators, int beams,
                                   double boresight, double width);

struct ChannelParams {
  double path_gain = 1.0;   // C in C / r^alpha
  double alpha = 2.0;       // path-loss exponent
  double sigma_s = 0.0;     // shadowing std deviation (SU->PU links)
  double min_gain = 1e-12;  // clamp floor; additive shadowing must not turn a gain negative
  bool shadow_beam_links = false;  // SU->beam shadowing, off by default
  BeamGainModel beam_model;
};

// Deterministic part of the SU->PU gain, C / r^alpha.
double expected_gain_su_to_pu(const ChannelParams& params, double r);

// One shadowed draw: deterministic part plus a caller-supplied N(0, sigma_s^2)
// offset, clamped at min_gain.
double sample_gain_su_to_pu(const ChannelParams& params, double r, double shadow);

double gain_su_to_beam(const ChannelParams& params, Point su_position, int op,
                       int beam, double shadow = 0.0);

// Gain tensors for a scenario realization.
//   F      [n][q][l][m]  shadowed SU->PU gains
//   F_det  [n][q][l]     deterministic part, identical across subbands
//   G      [n][q][b][m]  SU->beam gains (deterministic unless shadow_beam_links)
class ChannelRealization {
 public:
  ChannelRealization(Dims dims, std::int64_t num_pus, std::vector<double> f,
                     std::vector<double> f_det, std::vector<double> g);

  const Dims& dims() const { return dims_; }
  std::int64_t num_pus() const { return num_pus_; }

  double gain_to_pu(int n, int q, std::int64_t l, int m) const {
    return f_[f_index(n, q, l, m)];
  }
  double det_gain_to_pu(int n, int q, std::int64_t l) const {
    return f_det_[det_index(n, q, l)];
  }
  double gain_to_beam(int n, int q, int b, int m) const {
    return g_[g_index(n, q, b, m)];
  }

 private:
  std::size_t f_index(int n, int q, std::int64_t l, int m) const {
    return ((static_cast<std::size_t>(n) * dims_.sus_per_operator() + q) * num_pus_ + l) *
               dims_.subbands +
           m;
  }
  std::size_t det_index(int n, int q, std::int64_t l) const {
    return (static_cast<std::size_t>(n) * dims_.sus_per_operator() + q) * num_pus_ + l;
  }
  std::size_t g_index(int n, int q, int b, int m) const {
    return ((static_cast<std::size_t>(n) * dims_.sus_per_operator() + q) * dims_.beams + b) *
               dims_.subbands +
           m;
  }

  Dims dims_;
  std::int64_t num_pus_;
  std::vector<double> f_;
  std::vector<double> f_det_;
  std::vector<double> g_;
};

// Fills all tensors; shadowing samples are i.i.d. across (n, q, l, m) and come
// from a substream of `seed`, so the realization is reproducible bit-exactly.
ChannelRealization sample_channels(const Scenario& scenario, const ChannelParams& params,
                                   std::uint64_t seed);

// CSV schema: n,q,l_or_b,m,kind(F|G),value with 1-based indices.
void dump_channels_csv(const ChannelRealization& ch, std::ostream& out);

}  // namespace cogsat
