#include "cogsat/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cogsat/csv.hpp"

namespace cogsat {

BeamGainModel make_grid_beam_model(const Region& region, int operators, int beams,
                                   double boresight, double width) {
  if (operators < 1 || beams < 1) {
    throw std::invalid_argument("beam model: operators and beams must be >= 1");
  }
  if (!(boresight > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("beam model: boresight and width must be > 0");
  }

  // Grid over the square inscribed in the region so every center lies inside.
  const Point c = region.center();
  const double half = region.shape() == Region::Shape::kDisk
                          ? region.extent() / std::sqrt(2.0)
                          : region.extent() / 2.0;
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(beams))));
  const int rows = (beams + cols - 1) / cols;

  BeamGainModel model;
  model.boresight = boresight;
  model.width = width;
  model.operators = operators;
  model.beams = beams;
  model.centers.reserve(static_cast<std::size_t>(operators) * beams);
  std::vector<Point> grid;
  grid.reserve(beams);
  for (int b = 0; b < beams; ++b) {
    const int i = b / cols;
    const int j = b % cols;
    grid.push_back({c.x - half + (2.0 * j + 1.0) * half / cols,
                    c.y - half + (2.0 * i + 1.0) * half / rows});
  }
  for (int n = 0; n < operators; ++n) {
    model.centers.insert(model.centers.end(), grid.begin(), grid.end());
  }
  return model;
}

double expected_gain_su_to_pu(const ChannelParams& params, double r) {
  if (!(r > 0.0)) {
    throw std::domain_error("expected_gain_su_to_pu: r must be > 0");
  }
  return params.path_gain / std::pow(r, params.alpha);
}

double sample_gain_su_to_pu(const ChannelParams& params, double r, double shadow) {
  return std::max(expected_gain_su_to_pu(params, r) + shadow, params.min_gain);
}

double gain_su_to_beam(const ChannelParams& params, Point su_position, int op, int beam,
                       double shadow) {
  const BeamGainModel& bm = params.beam_model;
  if (!bm.has(op, beam)) {
    throw std::invalid_argument("gain_su_to_beam: unknown (operator, beam)");
  }
  const double d2 = squared_distance(su_position, bm.center(op, beam));
  const double det = bm.boresight * std::exp(-d2 / (bm.width * bm.width));
  return std::max(det + shadow, params.min_gain);
}

ChannelRealization::ChannelRealization(Dims dims, std::int64_t num_pus,
                                       std::vector<double> f, std::vector<double> f_det,
                                       std::vector<double> g)
    : dims_(dims), num_pus_(num_pus), f_(std::move(f)), f_det_(std::move(f_det)), g_(std::move(g)) {}

ChannelRealization sample_channels(const Scenario& scenario, const ChannelParams& params,
                                   std::uint64_t seed) {
  const Dims dims = scenario.dims();
  const std::int64_t L = scenario.num_pus();
  const int Q = dims.sus_per_operator();
  const int M = dims.subbands;
  const int B = dims.beams;
  if (params.beam_model.operators < dims.operators || params.beam_model.beams < B) {
    throw std::invalid_argument("sample_channels: beam model smaller than dims");
  }

  rng::Stream shadow_f(rng::derive_stream(seed, rng::kTagShadowF));
  rng::Stream shadow_g(rng::derive_stream(seed, rng::kTagShadowG));

  std::vector<double> f_det(static_cast<std::size_t>(dims.operators) * Q * L);
  std::vector<double> f(f_det.size() * M);
  std::vector<double> g(static_cast<std::size_t>(dims.operators) * Q * B * M);

  std::size_t det_i = 0;
  std::size_t f_i = 0;
  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < Q; ++q) {
      const Point su = scenario.su(n, q);
      for (std::int64_t l = 0; l < L; ++l) {
        const double r = distance(su, scenario.pu(static_cast<std::size_t>(l)));
        if (r == 0.0) {
          // generate_scenario redraws on coincidence; hitting this means the
          // scenario came from elsewhere.
          throw std::domain_error("sample_channels: SU coincides with PU, regenerate scenario");
        }
        const double det = expected_gain_su_to_pu(params, r);
        f_det[det_i++] = det;
        for (int m = 0; m < M; ++m) {
          const double shadow = params.sigma_s > 0.0 ? shadow_f.next_normal(params.sigma_s) : 0.0;
          f[f_i++] = std::max(det + shadow, params.min_gain);
        }
      }
    }
  }

  std::size_t g_i = 0;
  for (int n = 0; n < dims.operators; ++n) {
    for (int q = 0; q < Q; ++q) {
      const Point su = scenario.su(n, q);
      for (int b = 0; b < B; ++b) {
        const double det = gain_su_to_beam(params, su, n, b, 0.0);
        for (int m = 0; m < M; ++m) {
          const double shadow = params.shadow_beam_links && params.sigma_s > 0.0
                                    ? shadow_g.next_normal(params.sigma_s)
                                    : 0.0;
          g[g_i++] = std::max(det + shadow, params.min_gain);
        }
      }
    }
  }

  return ChannelRealization(dims, L, std::move(f), std::move(f_det), std::move(g));
}

void dump_channels_csv(const ChannelRealization& ch, std::ostream& out) {
  const Dims d = ch.dims();
  out << "n,q,l_or_b,m,kind,value\n";
  for (int n = 0; n < d.operators; ++n) {
    for (int q = 0; q < d.sus_per_operator(); ++q) {
      for (std::int64_t l = 0; l < ch.num_pus(); ++l) {
        for (int m = 0; m < d.subbands; ++m) {
          out << (n + 1) << ',' << (q + 1) << ',' << (l + 1) << ',' << (m + 1) << ",F,"
              << csv::fmt(ch.gain_to_pu(n, q, l, m)) << '\n';
        }
      }
      for (int b = 0; b < d.beams; ++b) {
        for (int m = 0; m < d.subbands; ++m) {
          out << (n + 1) << ',' << (q + 1) << ',' << (b + 1) << ',' << (m + 1) << ",G,"
              << csv::fmt(ch.gain_to_beam(n, q, b, m)) << '\n';
        }
      }
    }
  }
}

}  // namespace cogsat
