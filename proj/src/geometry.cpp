#include "cogsat/geometry.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace cogsat {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Lens area of two circles with radii big >= small at center distance d.
double circle_circle_area(double big, double small, double d) {
  if (d >= big + small) return 0.0;
  if (d + small <= big) return kPi * small * small;
  if (d + big <= small) return kPi * big * big;
  const double r2 = small * small;
  const double R2 = big * big;
  const double alpha = std::acos(clamp_unit((d * d + r2 - R2) / (2.0 * d * small)));
  const double beta = std::acos(clamp_unit((d * d + R2 - r2) / (2.0 * d * big)));
  const double kite = 0.5 * std::sqrt(std::max(0.0, (-d + small + big) * (d + small - big) *
                                                         (d - small + big) * (d + small + big)));
  return r2 * alpha + R2 * beta - kite;
}

// Contribution of one directed polygon edge to the circle-polygon area:
// chord pieces add the triangle term 0.5 (a x b), pieces outside the circle
// add the arc term 0.5 r^2 dtheta. Summed over a CCW boundary the pieces
// telescope into the intersection area.
double edge_contribution(Point p, Point q, double radius) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double a = dx * dx + dy * dy;
  if (a == 0.0) return 0.0;
  const double b = 2.0 * (p.x * dx + p.y * dy);
  const double c = p.x * p.x + p.y * p.y - radius * radius;

  std::array<double, 4> ts{0.0, 1.0, 0.0, 0.0};
  std::size_t count = 2;
  const double disc = b * b - 4.0 * a * c;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
      if (t > 0.0 && t < 1.0) ts[count++] = t;
    }
  }
  std::sort(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(count));

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double t0 = ts[i];
    const double t1 = ts[i + 1];
    if (t1 <= t0) continue;
    const Point s0{p.x + t0 * dx, p.y + t0 * dy};
    const Point s1{p.x + t1 * dx, p.y + t1 * dy};
    const double tm = 0.5 * (t0 + t1);
    const Point mid{p.x + tm * dx, p.y + tm * dy};
    if (mid.x * mid.x + mid.y * mid.y <= radius * radius) {
      total += 0.5 * (s0.x * s1.y - s0.y * s1.x);
    } else {
      const double cross = s0.x * s1.y - s0.y * s1.x;
      const double dot = s0.x * s1.x + s0.y * s1.y;
      total += 0.5 * radius * radius * std::atan2(cross, dot);
    }
  }
  return total;
}

}  // namespace

double circle_polygon_intersection_area(std::span<const Point> vertices, double radius) {
  if (vertices.size() < 3 || !(radius > 0.0)) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    total += edge_contribution(vertices[i], vertices[(i + 1) % vertices.size()], radius);
  }
  return std::max(total, 0.0);
}

double disk_region_intersection_area(const Region& region, Point center, double radius) {
  if (!(radius > 0.0)) return 0.0;
  if (region.shape() == Region::Shape::kDisk) {
    const double d = distance(center, region.center());
    const double big = std::max(region.extent(), radius);
    const double small = std::min(region.extent(), radius);
    return circle_circle_area(big, small, d);
  }
  const double h = region.extent() / 2.0;
  const Point c = region.center();
  // Translate so the probe disk sits at the origin.
  const std::array<Point, 4> corners{Point{c.x - h - center.x, c.y - h - center.y},
                                     Point{c.x + h - center.x, c.y - h - center.y},
                                     Point{c.x + h - center.x, c.y + h - center.y},
                                     Point{c.x - h - center.x, c.y + h - center.y}};
  return circle_polygon_intersection_area(corners, radius);
}

}  // namespace cogsat
