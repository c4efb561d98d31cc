#include "cogsat/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cogsat/csv.hpp"

namespace cogsat {

ScalingParams scaling_from(std::int64_t num_pus, double beta) {
  if (num_pus < 1) throw std::invalid_argument("scaling_from: L must be >= 1");
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw std::invalid_argument("scaling_from: beta must lie in (0, 1)");
  }
  const long double v = std::pow(static_cast<long double>(num_pus),
                                 static_cast<long double>(beta));
  const long double snap = 1e-9L * std::max<long double>(1.0L, v);
  const auto k = static_cast<std::int64_t>(std::floor(v + snap));

  ScalingParams p;
  p.num_pus = num_pus;
  p.num_sus = std::max<std::int64_t>(1, k);
  p.beta = beta;
  p.lambda = static_cast<double>(num_pus) / static_cast<double>(p.num_sus);
  p.cochannel = p.num_sus;  // reduced single-subband reading; dims override it
  p.theorem_regime = p.lambda >= 1.0 && p.cochannel * p.cochannel <= p.num_sus;
  return p;
}

Scenario::Scenario(Region region, Dims dims, std::vector<Point> pu_positions,
                   std::vector<Point> su_positions, ScalingParams scaling)
    : region_(region),
      dims_(dims),
      pus_(std::move(pu_positions)),
      sus_(std::move(su_positions)),
      scaling_(scaling) {
  if (!dims_.valid()) throw std::invalid_argument("scenario: dims must be >= 1");
  if (pus_.empty()) throw std::invalid_argument("scenario: needs at least one PU");
  if (sus_.size() != static_cast<std::size_t>(dims_.total_sus())) {
    throw std::invalid_argument("scenario: SU count does not match dims");
  }
  for (const Point& p : pus_) {
    if (!region_.contains(p)) throw std::invalid_argument("scenario: PU outside region");
  }
  for (const Point& p : sus_) {
    if (!region_.contains(p)) throw std::invalid_argument("scenario: SU outside region");
  }
}

Point sample_point(const Region& region, rng::Stream& stream) {
  const Point c = region.center();
  const double h = region.bounding_half_width();
  if (region.shape() == Region::Shape::kSquare) {
    return {stream.next_uniform(c.x - h, c.x + h),
            stream.next_uniform(c.y - h, c.y + h)};
  }
  // Disk: rejection from the bounding square, exactly uniform.
  for (;;) {
    const Point p{stream.next_uniform(c.x - h, c.x + h),
                  stream.next_uniform(c.y - h, c.y + h)};
    if (region.contains(p)) return p;
  }
}

Scenario generate_scenario(Dims dims, std::int64_t num_pus, const Region& region,
                           std::uint64_t seed) {
  if (!dims.valid() || num_pus < 1) {
    throw std::invalid_argument("generate_scenario: dims and L must be >= 1");
  }

  rng::Stream pu_stream(rng::derive_stream(seed, rng::kTagPuPositions));
  rng::Stream su_stream(rng::derive_stream(seed, rng::kTagSuPositions));

  const auto num_sus = static_cast<std::size_t>(dims.total_sus());
  std::vector<Point> pus;
  std::vector<Point> sus;
  for (;;) {
    pus.clear();
    sus.clear();
    pus.reserve(static_cast<std::size_t>(num_pus));
    sus.reserve(num_sus);
    for (std::int64_t l = 0; l < num_pus; ++l) pus.push_back(sample_point(region, pu_stream));
    for (std::size_t k = 0; k < num_sus; ++k) sus.push_back(sample_point(region, su_stream));

    // Reject exact SU/PU coincidences; the path-loss law is singular at r=0.
    bool collision = false;
    for (const Point& s : sus) {
      for (const Point& p : pus) {
        if (s.x == p.x && s.y == p.y) {
          collision = true;
          break;
        }
      }
      if (collision) break;
    }
    if (!collision) break;
  }

  ScalingParams scaling;
  scaling.num_pus = num_pus;
  scaling.num_sus = static_cast<std::int64_t>(num_sus);
  scaling.cochannel = dims.cochannel_sus();
  scaling.lambda = static_cast<double>(num_pus) / static_cast<double>(num_sus);
  scaling.beta = num_pus > 1
                     ? std::log(static_cast<double>(num_sus)) / std::log(static_cast<double>(num_pus))
                     : 0.0;
  scaling.theorem_regime =
      scaling.lambda >= 1.0 && scaling.cochannel * scaling.cochannel <= scaling.num_sus;

  return Scenario(region, dims, std::move(pus), std::move(sus), scaling);
}

NearestResult nearest_point(Point from, std::span<const Point> candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("nearest_point: empty candidate set");
  }
  NearestResult best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double d2 = squared_distance(from, candidates[i]);
    if (d2 < best.distance) {
      best.distance = d2;
      best.index = i;
    }
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

NearestResult nearest_pu_distance(const Scenario& s, std::size_t su_global) {
  return nearest_point(s.su_by_global(su_global), s.pu_positions());
}

NearestResult nearest_su_distance(const Scenario& s, std::size_t pu_index,
                                  std::span<const std::size_t> cochannel_sus) {
  if (cochannel_sus.empty()) {
    throw std::invalid_argument("nearest_su_distance: empty co-channel set");
  }
  const Point pu = s.pu(pu_index);
  NearestResult best{std::numeric_limits<double>::infinity(), 0};
  for (const std::size_t g : cochannel_sus) {
    const double d2 = squared_distance(pu, s.su_by_global(g));
    if (d2 < best.distance) {
      best.distance = d2;
      best.index = g;
    }
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

void dump_scenario_csv(const Scenario& s, std::ostream& out) {
  out << "kind,operator,beam,slot,x,y\n";
  for (std::int64_t l = 0; l < s.num_pus(); ++l) {
    const Point p = s.pu(static_cast<std::size_t>(l));
    out << "pu,,,," << csv::fmt(p.x) << ',' << csv::fmt(p.y) << '\n';
  }
  const Dims d = s.dims();
  for (int n = 0; n < d.operators; ++n) {
    for (int q = 0; q < d.sus_per_operator(); ++q) {
      const Point p = s.su(n, q);
      out << "su," << (n + 1) << ',' << (Scenario::beam_of(q, d.subbands) + 1) << ','
          << (Scenario::slot_of(q, d.subbands) + 1) << ',' << csv::fmt(p.x) << ','
          << csv::fmt(p.y) << '\n';
    }
  }
}

Scenario load_scenario_csv(std::istream& in, const Region& region) {
  std::string line;
  std::vector<Point> pus;
  struct SuRow {
    int op, beam, slot;
    Point p;
  };
  std::vector<SuRow> sus;
  int max_op = 0, max_beam = 0, max_slot = 0;

  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // skip the column header
      continue;
    }
    std::stringstream ss(line);
    std::string kind, op_s, beam_s, slot_s, x_s, y_s;
    std::getline(ss, kind, ',');
    std::getline(ss, op_s, ',');
    std::getline(ss, beam_s, ',');
    std::getline(ss, slot_s, ',');
    std::getline(ss, x_s, ',');
    std::getline(ss, y_s, ',');
    const Point p{std::stod(x_s), std::stod(y_s)};
    if (kind == "pu") {
      pus.push_back(p);
    } else if (kind == "su") {
      SuRow r{std::stoi(op_s) - 1, std::stoi(beam_s) - 1, std::stoi(slot_s) - 1, p};
      max_op = std::max(max_op, r.op + 1);
      max_beam = std::max(max_beam, r.beam + 1);
      max_slot = std::max(max_slot, r.slot + 1);
      sus.push_back(r);
    } else {
      throw std::invalid_argument("scenario csv: unknown kind '" + kind + "'");
    }
  }

  Dims dims{max_op, max_beam, max_slot};
  if (!dims.valid() || sus.size() != static_cast<std::size_t>(dims.total_sus())) {
    throw std::invalid_argument("scenario csv: inconsistent SU rows");
  }
  std::vector<Point> su_points(sus.size());
  for (const SuRow& r : sus) {
    const std::size_t idx = static_cast<std::size_t>(r.op) * dims.sus_per_operator() +
                            r.beam * dims.subbands + r.slot;
    su_points[idx] = r.p;
  }

  ScalingParams scaling;
  scaling.num_pus = static_cast<std::int64_t>(pus.size());
  scaling.num_sus = static_cast<std::int64_t>(su_points.size());
  scaling.cochannel = dims.cochannel_sus();
  scaling.lambda =
      static_cast<double>(scaling.num_pus) / static_cast<double>(scaling.num_sus);
  scaling.beta = scaling.num_pus > 1 ? std::log(static_cast<double>(scaling.num_sus)) /
                                           std::log(static_cast<double>(scaling.num_pus))
                                     : 0.0;
  scaling.theorem_regime =
      scaling.lambda >= 1.0 && scaling.cochannel * scaling.cochannel <= scaling.num_sus;
  return Scenario(region, dims, std::move(pus), std::move(su_points), scaling);
}

}  // namespace cogsat
