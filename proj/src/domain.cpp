#include "ritz/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace ritz {

namespace {

struct Segment {
  Point a, b;
};

// Counter-clockwise boundary polygons.
std::array<Segment, 4> square_segments() {
  return {{{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}}};
}

std::array<Segment, 6> lshape_segments() {
  return {{{{-1, -1}, {1, -1}},
           {{1, -1}, {1, 0}},
           {{1, 0}, {0, 0}},
           {{0, 0}, {0, 1}},
           {{0, 1}, {-1, 1}},
           {{-1, 1}, {-1, -1}}}};
}

template <std::size_t N>
Point walk(const std::array<Segment, N>& segs, double s) {
  for (const auto& seg : segs) {
    const double len = (seg.b - seg.a).norm();
    if (s < len) return seg.a + (s / len) * (seg.b - seg.a);
    s -= len;
  }
  return segs.back().b;
}

template <std::size_t N>
const Segment& nearest(const std::array<Segment, N>& segs, const Point& x, double* dist) {
  const Segment* best = &segs[0];
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& seg : segs) {
    const Point d = seg.b - seg.a;
    const double t = std::clamp((x - seg.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    const double dd = (seg.a + t * d - x).norm();
    if (dd < bd - 1e-14) {
      bd = dd;
      best = &seg;
    }
  }
  if (dist) *dist = bd;
  return *best;
}

Point outward(const Segment& s) {
  const Point d = (s.b - s.a).normalized();
  return {d.y(), -d.x()};
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::UnitSquare: return "UnitSquare";
    case DomainKind::LShape: return "LShape";
    case DomainKind::UnitDisc: return "UnitDisc";
  }
  return "?";
}

double Domain::area() const {
  switch (kind) {
    case DomainKind::UnitSquare: return 1.0;
    case DomainKind::LShape: return 3.0;
    case DomainKind::UnitDisc: return std::numbers::pi;
  }
  return 0.0;
}

double Domain::perimeter() const {
  switch (kind) {
    case DomainKind::UnitSquare: return 4.0;
    case DomainKind::LShape: return 8.0;
    case DomainKind::UnitDisc: return 2.0 * std::numbers::pi;
  }
  return 0.0;
}

bool Domain::contains(const Point& x) const {
  switch (kind) {
    case DomainKind::UnitSquare: return x.x() > 0 && x.x() < 1 && x.y() > 0 && x.y() < 1;
    case DomainKind::LShape:
      return x.x() > -1 && x.x() < 1 && x.y() > -1 && x.y() < 1 && !(x.x() >= 0 && x.y() >= 0);
    case DomainKind::UnitDisc: return x.squaredNorm() < 1.0;
  }
  return false;
}

Point Domain::lower() const {
  return kind == DomainKind::UnitSquare ? Point(0, 0) : Point(-1, -1);
}

Point Domain::upper() const { return {1, 1}; }

Point Domain::boundary_point(double s) const {
  switch (kind) {
    case DomainKind::UnitSquare: return walk(square_segments(), s);
    case DomainKind::LShape: return walk(lshape_segments(), s);
    case DomainKind::UnitDisc: return {std::cos(s), std::sin(s)};
  }
  return {0, 0};
}

Point Domain::outward_normal(const Point& x) const {
  switch (kind) {
    case DomainKind::UnitSquare: return outward(nearest(square_segments(), x, nullptr));
    case DomainKind::LShape: return outward(nearest(lshape_segments(), x, nullptr));
    case DomainKind::UnitDisc: return x.normalized();
  }
  return {0, 0};
}

double Domain::boundary_distance(const Point& x) const {
  double d = 0.0;
  switch (kind) {
    case DomainKind::UnitSquare: nearest(square_segments(), x, &d); break;
    case DomainKind::LShape: nearest(lshape_segments(), x, &d); break;
    case DomainKind::UnitDisc: d = std::abs(x.norm() - 1.0); break;
  }
  return d;
}

}  // namespace ritz
