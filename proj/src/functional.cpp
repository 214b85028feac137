#include "ritz/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ritz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_component(int comp, int components) {
  if (comp < 0 || comp >= components)
    throw std::invalid_argument("functional component out of range");
}

// Weighted points of the disc mean around x (polar Gauss in r, uniform in angle).
std::vector<std::pair<Point, double>> disc_rule(const Point& x, double radius) {
  const auto radial = gauss_legendre_01(5);
  const int nang = 16;
  std::vector<std::pair<Point, double>> out;
  const double area = std::numbers::pi * radius * radius;
  for (std::size_t i = 0; i < radial.points.size(); ++i) {
    const double r = radius * radial.points[i].x();
    const double wr = radius * radial.weights[i] * r;
    for (int k = 0; k < nang; ++k) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5) / nang;
      out.emplace_back(x + r * Point(std::cos(t), std::sin(t)), wr * 2.0 * std::numbers::pi / nang / area);
    }
  }
  return out;
}

// Break points of [a, b] on y = 0 at cell-edge crossings.
std::vector<double> segment_breaks(const Mesh& mesh, double a, double b) {
  std::vector<double> xs = {a, b};
  const int nv = mesh.vertices_per_cell();
  for (int c = 0; c < int(mesh.num_cells()); ++c)
    for (int e = 0; e < nv; ++e) {
      const Point& p = mesh.node(mesh.cell(c)[std::size_t(e)]);
      const Point& q = mesh.node(mesh.cell(c)[std::size_t((e + 1) % nv)]);
      if (p.y() == 0.0 && q.y() == 0.0) {
        xs.push_back(p.x());
        xs.push_back(q.x());
      } else if (p.y() * q.y() <= 0.0) {
        const double t = p.y() / (p.y() - q.y());
        xs.push_back(p.x() + t * (q.x() - p.x()));
      }
    }
  std::erase_if(xs, [&](double x) { return x < a || x > b; });
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double u, double v) { return v - u < 1e-12; }), xs.end());
  return xs;
}

bool in_box(const Point& x, const BoundaryFlux& j) {
  return (x.array() >= j.lo.array()).all() && (x.array() <= j.hi.array()).all();
}

std::pair<int, Point> locate_or_throw(const Mesh& mesh, const Point& x) {
  const auto loc = mesh.locate(x);
  if (!loc) throw std::invalid_argument("functional support lies outside the mesh");
  return *loc;
}

}  // namespace

std::string describe(const GoalFunctional& j) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PointValue& p) {
                   os << "PointValue(" << p.x.x() << "," << p.x.y() << ")";
                   if (p.radius > 0) os << "[r=" << p.radius << "]";
                 },
                 [&](const DomainAverage&) { os << "DomainAverage"; },
                 [&](const BoundaryFlux&) { os << "BoundaryFlux"; },
                 [&](const LineSegmentY& s) { os << "LineSegmentY[" << s.a << "," << s.b << "]"; },
             },
             j);
  return os.str();
}

Eigen::VectorXd assemble_functional(const Mesh& mesh, const GoalFunctional& j, int components) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(Eigen::Index(mesh.num_nodes()) * components);
  auto add_point = [&](const Point& x, int comp, double w) {
    const auto [c, ref] = locate_or_throw(mesh, x);
    const ShapeEval s = mesh.shape_at(c, ref);
    for (int k = 0; k < s.n; ++k)
      b[mesh.cell(c)[std::size_t(k)] * components + comp] += w * s.phi[std::size_t(k)];
  };

  std::visit(
      overloaded{
          [&](const PointValue& p) {
            check_component(p.component, components);
            if (p.radius <= 0) {
              add_point(p.x, p.component, 1.0);
              return;
            }
            for (const auto& [x, w] : disc_rule(p.x, p.radius)) add_point(x, p.component, w);
          },
          [&](const DomainAverage& d) {
            check_component(d.component, components);
            const auto& rule = assembly_rule(mesh.shape());
            for (int c = 0; c < int(mesh.num_cells()); ++c) {
              const double det = mesh.jacobian_det(c);
              for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const ShapeEval s = mesh.shape_at(c, rule.points[q]);
                for (int k = 0; k < s.n; ++k)
                  b[mesh.cell(c)[std::size_t(k)] * components + d.component] +=
                      rule.weights[q] * det * s.phi[std::size_t(k)];
              }
            }
          },
          [&](const BoundaryFlux& f) {
            check_component(f.component, components);
            for (const auto& e : mesh.boundary_edges()) {
              const Point mid = 0.5 * (mesh.node(e.a) + mesh.node(e.b));
              if (!in_box(mid, f)) continue;
              // Gradients are constant along an edge for P1 and linear for Q1;
              // the midpoint rule is exact for both.
              const ShapeEval s = mesh.shape_at(e.cell, mesh.edge_reference(e, 0.5));
              for (int k = 0; k < s.n; ++k)
                b[mesh.cell(e.cell)[std::size_t(k)] * components + f.component] +=
                    e.length * s.grad[std::size_t(k)].dot(e.normal);
            }
          },
          [&](const LineSegmentY& seg) {
            check_component(seg.component, components);
            const auto line = gauss_legendre_01(2);
            const auto xs = segment_breaks(mesh, seg.a, seg.b);
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
              const double len = xs[i + 1] - xs[i];
              const int c = locate_or_throw(mesh, Point(0.5 * (xs[i] + xs[i + 1]), 0.0)).first;
              for (std::size_t q = 0; q < line.points.size(); ++q) {
                const Point x(xs[i] + len * line.points[q].x(), 0.0);
                const ShapeEval s = mesh.shape_at(c, mesh.to_reference(c, x));
                for (int k = 0; k < s.n; ++k)
                  b[mesh.cell(c)[std::size_t(k)] * components + seg.component] +=
                      len * line.weights[q] * s.phi[std::size_t(k)];
              }
            }
          },
      },
      j);
  return b;
}

double eval_functional(const GoalFunctional& j, const FEFunction& u) {
  return assemble_functional(*u.mesh, j, u.components).dot(u.coeffs);
}

double eval_functional(const GoalFunctional& j, const JetField& u, const Mesh& mesh) {
  auto integrate = [&](const std::vector<std::pair<Point, double>>& pts, int comp) {
    Eigen::Matrix2Xd x(2, Eigen::Index(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) x.col(Eigen::Index(k)) = pts[k].first;
    const JetBatch jb = u.evaluate(x);
    double sum = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) sum += pts[k].second * jb.value(comp, Eigen::Index(k));
    return sum;
  };

  return std::visit(
      overloaded{
          [&](const PointValue& p) {
            check_component(p.component, u.components());
            if (p.radius <= 0) return integrate({{p.x, 1.0}}, p.component);
            return integrate(disc_rule(p.x, p.radius), p.component);
          },
          [&](const DomainAverage& d) {
            check_component(d.component, u.components());
            const auto& rule = accurate_rule(mesh.shape());
            std::vector<std::pair<Point, double>> pts;
            for (int c = 0; c < int(mesh.num_cells()); ++c)
              for (std::size_t q = 0; q < rule.points.size(); ++q)
                pts.emplace_back(mesh.to_physical(c, rule.points[q]), rule.weights[q] * mesh.jacobian_det(c));
            return integrate(pts, d.component);
          },
          [&](const BoundaryFlux& f) {
            check_component(f.component, u.components());
            const auto line = gauss_legendre_01(5);
            std::vector<Point> pts;
            std::vector<double> wts;
            std::vector<Point> normals;
            for (const auto& e : mesh.boundary_edges()) {
              const Point mid = 0.5 * (mesh.node(e.a) + mesh.node(e.b));
              if (!in_box(mid, f)) continue;
              for (std::size_t q = 0; q < line.points.size(); ++q) {
                pts.push_back(mesh.node(e.a) + line.points[q].x() * (mesh.node(e.b) - mesh.node(e.a)));
                wts.push_back(line.weights[q] * e.length);
                normals.push_back(e.normal);
              }
            }
            Eigen::Matrix2Xd x(2, Eigen::Index(pts.size()));
            for (std::size_t k = 0; k < pts.size(); ++k) x.col(Eigen::Index(k)) = pts[k];
            const JetBatch jb = u.evaluate(x);
            double sum = 0.0;
            for (std::size_t k = 0; k < pts.size(); ++k) {
              const auto kk = Eigen::Index(k);
              sum += wts[k] * (jb.grad[0](f.component, kk) * normals[k].x() +
                               jb.grad[1](f.component, kk) * normals[k].y());
            }
            return sum;
          },
          [&](const LineSegmentY& seg) {
            check_component(seg.component, u.components());
            const auto line = gauss_legendre_01(5);
            const int nsub = 64;
            const double len = (seg.b - seg.a) / nsub;
            std::vector<std::pair<Point, double>> pts;
            for (int i = 0; i < nsub; ++i)
              for (std::size_t q = 0; q < line.points.size(); ++q)
                pts.emplace_back(Point(seg.a + len * (i + line.points[q].x()), 0.0), len * line.weights[q]);
            return integrate(pts, seg.component);
          },
      },
      j);
}

}  // namespace ritz
