#include "ritz/fe_function.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ritz {

FEFunction FEFunction::zero(std::shared_ptr<const Mesh> mesh, int components) {
  const auto n = Eigen::Index(mesh->num_nodes()) * components;
  return {std::move(mesh), components, Eigen::VectorXd::Zero(n)};
}

SpatialJet FEFunction::evaluate_in_cell(int cell, const Point& ref) const {
  const ShapeEval s = mesh->shape_at(cell, ref);
  const auto& nodes = mesh->cell(cell);
  SpatialJet jet{Eigen::VectorXd::Zero(components), Eigen::MatrixXd::Zero(components, 2)};
  for (int k = 0; k < s.n; ++k)
    for (int i = 0; i < components; ++i) {
      const double c = at(nodes[std::size_t(k)], i);
      jet.value[i] += c * s.phi[std::size_t(k)];
      jet.grad.row(i) += c * s.grad[std::size_t(k)].transpose();
    }
  return jet;
}

SpatialJet FEFunction::evaluate(const Point& x) const {
  const auto loc = mesh->locate(x);
  if (!loc) throw std::out_of_range("point outside the mesh");
  return evaluate_in_cell(loc->first, loc->second);
}

FEFunction interpolate(std::shared_ptr<const Mesh> mesh, const VectorFunction& f, int components) {
  FEFunction u = FEFunction::zero(mesh, components);
  for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
    const Eigen::VectorXd v = f(mesh->nodes()[i]);
    for (int c = 0; c < components; ++c) u.at(int(i), c) = v[c];
  }
  return u;
}

ErrorNorms error_norms(const FEFunction& u, const JetFunction& exact) {
  const Mesh& m = *u.mesh;
  const auto& rule = accurate_rule(m.shape());
  double l2 = 0.0, h1 = 0.0;
  for (int c = 0; c < int(m.num_cells()); ++c) {
    const double det = m.jacobian_det(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const SpatialJet uh = u.evaluate_in_cell(c, rule.points[q]);
      const SpatialJet ue = exact(m.to_physical(c, rule.points[q]));
      const double w = rule.weights[q] * det;
      l2 += w * (uh.value - ue.value).squaredNorm();
      h1 += w * (uh.grad - ue.grad).squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

Eigen::Vector2d normal_derivative(const FEFunction& u, const BoundaryEdge& edge, int comp) {
  const auto line = gauss_legendre_01(2);
  Eigen::Vector2d out;
  for (int q = 0; q < 2; ++q) {
    const SpatialJet j = u.evaluate_in_cell(edge.cell, u.mesh->edge_reference(edge, line.points[q].x()));
    out[q] = j.grad.row(comp).dot(edge.normal);
  }
  return out;
}

Eigen::Vector2d normal_derivative(const FEFunction& u, int a, int b, int comp) {
  for (const auto& e : u.mesh->boundary_edges())
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return normal_derivative(u, e, comp);
  throw std::invalid_argument("normal_derivative: not a boundary edge");
}

void write_fe_function_csv(std::ostream& os, const FEFunction& u) {
  os << (u.components == 1 ? "node,value\n" : "node,value,value2\n");
  char buf[64];
  for (std::size_t i = 0; i < u.mesh->num_nodes(); ++i) {
    os << i;
    for (int c = 0; c < u.components; ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", u.at(int(i), c));
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace ritz
