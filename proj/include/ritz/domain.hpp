#ifndef RITZ_DOMAIN_HPP
#define RITZ_DOMAIN_HPP

#include <string>

#include <Eigen/Core>

namespace ritz {

using Point = Eigen::Vector2d;

enum class DomainKind {
  UnitSquare,  // (0,1)^2
  LShape,      // (-1,1)^2 \ [0,1]^2
  UnitDisc,    // |x| < 1
};

std::string to_string(DomainKind kind);

struct Domain {
  DomainKind kind;

  double area() const;
  double perimeter() const;
  bool contains(const Point& x) const;  // open domain

  /// Bounding box [lo, hi].
  Point lower() const;
  Point upper() const;

  /// Point at arc-length parameter s in [0, perimeter()), walking the
  /// boundary counter-clockwise.
  Point boundary_point(double s) const;

  /// Outward unit normal at a boundary point (corners take the normal of
  /// the segment that starts there).
  Point outward_normal(const Point& x) const;

  /// Distance from x to the boundary.
  double boundary_distance(const Point& x) const;
};

}  // namespace ritz

#endif  // RITZ_DOMAIN_HPP
