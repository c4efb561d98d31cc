#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cogsat/geometry.hpp"
#include "cogsat/rng.hpp"

namespace cogsat {

// Network dimensions: N operators, B beams per operator, M subbands (and M
// SUs per beam). Q = B*M SUs per operator, K = N*Q in total, K_bar = N*B SUs
// sharing any one subband.
struct Dims {
  int operators = 1;
  int beams = 1;
  int subbands = 1;

  int sus_per_operator() const { return beams * subbands; }
  int total_sus() const { return operators * beams * subbands; }
  int cochannel_sus() const { return operators * beams; }
  bool valid() const { return operators >= 1 && beams >= 1 && subbands >= 1; }
};

struct ScalingParams {
  std::int64_t num_pus = 0;      // L
  std::int64_t num_sus = 0;      // K
  std::int64_t cochannel = 0;    // K_bar
  double beta = 0.0;             // scaling exponent; informational when derived from dims
  double lambda = 0.0;           // L / K
  // K_bar^2 <= K and lambda >= 1; configurations outside it are usable but
  // do not claim the asymptotic-conversion regime.
  bool theorem_regime = false;
};

// K = floor(L^beta), lambda = L/K. A small relative snap absorbs pow()
// rounding when L^beta is mathematically integral (e.g. 1e4^0.75 = 1000).
ScalingParams scaling_from(std::int64_t num_pus, double beta);

class Scenario {
 public:
  Scenario(Region region, Dims dims, std::vector<Point> pu_positions,
           std::vector<Point> su_positions, ScalingParams scaling);

  const Region& region() const { return region_; }
  const Dims& dims() const { return dims_; }
  const ScalingParams& scaling() const { return scaling_; }

  std::int64_t num_pus() const { return static_cast<std::int64_t>(pus_.size()); }
  Point pu(std::size_t l) const { return pus_[l]; }
  const std::vector<Point>& pu_positions() const { return pus_; }

  // q indexes SUs within an operator: q = beam * M + slot.
  Point su(int op, int q) const {
    return sus_[static_cast<std::size_t>(op) * dims_.sus_per_operator() + q];
  }
  std::size_t su_global_index(int op, int q) const {
    return static_cast<std::size_t>(op) * dims_.sus_per_operator() + q;
  }
  Point su_by_global(std::size_t g) const { return sus_[g]; }
  const std::vector<Point>& su_positions() const { return sus_; }

  static int beam_of(int q, int subbands) { return q / subbands; }
  static int slot_of(int q, int subbands) { return q % subbands; }

 private:
  Region region_;
  Dims dims_;
  std::vector<Point> pus_;
  std::vector<Point> sus_;
  ScalingParams scaling_;
};

Point sample_point(const Region& region, rng::Stream& stream);

// Positions i.i.d. uniform over the region; PU and SU coordinates come from
// separate substreams of `seed`, so changing L leaves SU draws untouched and
// a larger L extends the PU set by a prefix of the same stream. An exact
// SU/PU coincidence triggers a redraw of the whole layout.
Scenario generate_scenario(Dims dims, std::int64_t num_pus, const Region& region,
                           std::uint64_t seed);

struct NearestResult {
  double distance = 0.0;
  std::size_t index = 0;
};

NearestResult nearest_point(Point from, std::span<const Point> candidates);

// Distance from an SU to its closest PU (d_SU) and from a PU to the closest
// SU of a co-channel set (d_PU).
NearestResult nearest_pu_distance(const Scenario& s, std::size_t su_global);
NearestResult nearest_su_distance(const Scenario& s, std::size_t pu_index,
                                  std::span<const std::size_t> cochannel_sus);

// CSV schema: kind(pu|su),operator,beam,slot,x,y with 1-based indices and
// empty operator/beam/slot fields on PU rows.
void dump_scenario_csv(const Scenario& s, std::ostream& out);
Scenario load_scenario_csv(std::istream& in, const Region& region);

}  // namespace cogsat
