#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace cogsat {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Deployment region. The boundary counts as inside so that membership is a
// closed predicate.
class Region {
 public:
  enum class Shape { kDisk, kSquare };

  static Region disk(double radius, Point center = {0.0, 0.0}) {
    if (!(radius > 0.0)) throw std::invalid_argument("region radius must be > 0");
    return Region(Shape::kDisk, radius, center);
  }

  static Region square(double side, Point center = {0.5, 0.5}) {
    if (!(side > 0.0)) throw std::invalid_argument("region side must be > 0");
    return Region(Shape::kSquare, side, center);
  }

  static Region unit_disk() { return disk(1.0); }
  static Region unit_square() { return square(1.0); }

  Shape shape() const { return shape_; }
  Point center() const { return center_; }

  // Radius for disks, side length for squares.
  double extent() const { return extent_; }

  bool contains(Point p) const {
    if (shape_ == Shape::kDisk) {
      return squared_distance(p, center_) <= extent_ * extent_;
    }
    const double h = extent_ / 2.0;
    return std::abs(p.x - center_.x) <= h && std::abs(p.y - center_.y) <= h;
  }

  double area() const {
    if (shape_ == Shape::kDisk) return 3.14159265358979323846 * extent_ * extent_;
    return extent_ * extent_;
  }

  double diameter() const {
    if (shape_ == Shape::kDisk) return 2.0 * extent_;
    return extent_ * std::sqrt(2.0);
  }

  // Smallest axis-aligned square covering the region, used for sampling.
  double bounding_half_width() const {
    return shape_ == Shape::kDisk ? extent_ : extent_ / 2.0;
  }

 private:
  Region(Shape shape, double extent, Point center)
      : shape_(shape), extent_(extent), center_(center) {}

  Shape shape_;
  double extent_;
  Point center_;
};

// Area of disk(center, radius) intersected with the region: circle-circle
// lens for disk regions, circle-polygon clipping for squares.
double disk_region_intersection_area(const Region& region, Point center, double radius);

// Area of disk(origin, radius) intersected with a simple CCW polygon.
double circle_polygon_intersection_area(std::span<const Point> vertices, double radius);

}  // namespace cogsat
