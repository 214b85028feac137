#include "ritz/dwr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ritz/mesh.hpp"

namespace ritz {

namespace {

struct CellQuadrature {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;
  std::vector<std::pair<int, Point>> ref;  // (cell, reference point)
};

CellQuadrature cell_quadrature(const Mesh& m) {
  const auto& rule = assembly_rule(m.shape());
  const Eigen::Index nq = Eigen::Index(rule.points.size());
  CellQuadrature cq;
  cq.points.resize(2, Eigen::Index(m.num_cells()) * nq);
  cq.weights.resize(cq.points.cols());
  Eigen::Index k = 0;
  for (int c = 0; c < int(m.num_cells()); ++c)
    for (std::size_t q = 0; q < rule.points.size(); ++q, ++k) {
      cq.points.col(k) = m.to_physical(c, rule.points[q]);
      cq.weights[k] = rule.weights[q] * m.jacobian_det(c);
      cq.ref.emplace_back(c, rule.points[q]);
    }
  return cq;
}

struct EdgeQuadrature {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;
  std::vector<const BoundaryEdge*> edge;
  std::vector<Point> ref;
};

EdgeQuadrature edge_quadrature(const Mesh& m) {
  const auto line = gauss_legendre_01(2);
  EdgeQuadrature eq;
  const Eigen::Index n = 2 * Eigen::Index(m.boundary_edges().size());
  eq.points.resize(2, n);
  eq.weights.resize(n);
  Eigen::Index k = 0;
  for (const auto& e : m.boundary_edges())
    for (int q = 0; q < 2; ++q, ++k) {
      const Point r = m.edge_reference(e, line.points[std::size_t(q)].x());
      eq.points.col(k) = m.to_physical(e.cell, r);
      eq.weights[k] = line.weights[std::size_t(q)] * e.length;
      eq.edge.push_back(&e);
      eq.ref.push_back(r);
    }
  return eq;
}

void require_components(const JetField& u, int c, const char* what) {
  if (u.components() != c) throw std::invalid_argument(std::string(what) + ": wrong number of components");
}

}  // namespace

LaplaceEstimator::LaplaceEstimator(const FEFunction& z, const ScalarFunction& f) {
  if (z.components != 1) throw std::invalid_argument("LaplaceEstimator: scalar adjoint expected");
  const Mesh& m = *z.mesh;
  const CellQuadrature cq = cell_quadrature(m);
  cell_points_ = cq.points;
  weighted_grad_z_.resize(2, cq.points.cols());
  for (Eigen::Index k = 0; k < cq.points.cols(); ++k) {
    const SpatialJet j = z.evaluate_in_cell(cq.ref[std::size_t(k)].first, cq.ref[std::size_t(k)].second);
    weighted_grad_z_.col(k) = cq.weights[k] * j.grad.row(0).transpose();
    if (f) fz_ += cq.weights[k] * f(cq.points.col(k)) * j.value[0];
  }
  const EdgeQuadrature eq = edge_quadrature(m);
  edge_points_ = eq.points;
  weighted_dnz_.resize(eq.points.cols());
  for (Eigen::Index k = 0; k < eq.points.cols(); ++k) {
    const BoundaryEdge& e = *eq.edge[std::size_t(k)];
    const SpatialJet j = z.evaluate_in_cell(e.cell, eq.ref[std::size_t(k)]);
    weighted_dnz_[k] = eq.weights[k] * j.grad.row(0).dot(e.normal);
  }
}

double LaplaceEstimator::operator()(const JetField& u) const {
  require_components(u, 1, "estimate_laplace");
  const JetBatch in = u.evaluate(cell_points_);
  double a = 0.0;
  for (Eigen::Index k = 0; k < cell_points_.cols(); ++k)
    a += in.grad[0](0, k) * weighted_grad_z_(0, k) + in.grad[1](0, k) * weighted_grad_z_(1, k);
  const JetBatch bd = u.evaluate(edge_points_);
  double b = 0.0;
  for (Eigen::Index k = 0; k < edge_points_.cols(); ++k) b += weighted_dnz_[k] * bd.value(0, k);
  return fz_ - a + b;
}

StokesEstimator::StokesEstimator(const FEFunction& z, const FEFunction& q, const VectorFunction& f) {
  if (z.components != 2 || q.components != 1 || z.mesh != q.mesh)
    throw std::invalid_argument("StokesEstimator: adjoint velocity and pressure must share a mesh");
  const Mesh& m = *z.mesh;
  const CellQuadrature cq = cell_quadrature(m);
  cell_points_ = cq.points;
  weighted_grad_z_.resize(4, cq.points.cols());
  weighted_q_.resize(cq.points.cols());
  for (Eigen::Index k = 0; k < cq.points.cols(); ++k) {
    const auto& [c, r] = cq.ref[std::size_t(k)];
    const SpatialJet jz = z.evaluate_in_cell(c, r);
    const SpatialJet jq = q.evaluate_in_cell(c, r);
    const double w = cq.weights[k];
    weighted_grad_z_.col(k) << w * jz.grad(0, 0), w * jz.grad(0, 1), w * jz.grad(1, 0), w * jz.grad(1, 1);
    weighted_q_[k] = w * jq.value[0];
    if (f) fz_ += w * f(cq.points.col(k)).head<2>().dot(jz.value.head<2>());
  }
  const EdgeQuadrature eq = edge_quadrature(m);
  edge_points_ = eq.points;
  weighted_traction_.resize(2, eq.points.cols());
  for (Eigen::Index k = 0; k < eq.points.cols(); ++k) {
    const BoundaryEdge& e = *eq.edge[std::size_t(k)];
    const SpatialJet jz = z.evaluate_in_cell(e.cell, eq.ref[std::size_t(k)]);
    const SpatialJet jq = q.evaluate_in_cell(e.cell, eq.ref[std::size_t(k)]);
    weighted_traction_.col(k) = eq.weights[k] * (jz.grad * e.normal + jq.value[0] * e.normal);
  }
}

double StokesEstimator::operator()(const JetField& v) const {
  require_components(v, 2, "estimate_stokes");
  const JetBatch in = v.evaluate(cell_points_);
  double a = 0.0, d = 0.0;
  for (Eigen::Index k = 0; k < cell_points_.cols(); ++k) {
    const double v0x = in.grad[0](0, k), v0y = in.grad[1](0, k);
    const double v1x = in.grad[0](1, k), v1y = in.grad[1](1, k);
    a += v0x * weighted_grad_z_(0, k) + v0y * weighted_grad_z_(1, k) + v1x * weighted_grad_z_(2, k) +
         v1y * weighted_grad_z_(3, k);
    d += (v0x + v1y) * weighted_q_[k];
  }
  const JetBatch bd = v.evaluate(edge_points_);
  double b = 0.0;
  for (Eigen::Index k = 0; k < edge_points_.cols(); ++k)
    b += weighted_traction_(0, k) * bd.value(0, k) + weighted_traction_(1, k) * bd.value(1, k);
  return fz_ - a - d + b;
}

double estimate_laplace(const JetField& u, const FEFunction& z, const ScalarFunction& f) {
  return LaplaceEstimator(z, f)(u);
}

double estimate_stokes(const JetField& v, const FEFunction& z, const FEFunction& q,
                       const VectorFunction& f) {
  return StokesEstimator(z, q, f)(v);
}

double estimate_mc(const JetField& u, const JetField& z, const SampleSet& s, const ScalarFunction& f) {
  require_components(u, 1, "estimate_mc");
  require_components(z, 1, "estimate_mc");
  const JetBatch ui = u.evaluate(s.interior);
  const JetBatch zi = z.evaluate(s.interior);
  double a = 0.0;
  for (Eigen::Index k = 0; k < s.n_in(); ++k) {
    const double fk = f ? f(s.interior.col(k)) : 0.0;
    a += fk * zi.value(0, k) - (ui.grad[0](0, k) * zi.grad[0](0, k) + ui.grad[1](0, k) * zi.grad[1](0, k));
  }
  const JetBatch ub = u.evaluate(s.boundary);
  const JetBatch zb = z.evaluate(s.boundary);
  double b = 0.0;
  for (Eigen::Index k = 0; k < s.n_bnd(); ++k) {
    const double dnz = zb.grad[0](0, k) * s.boundary_normals(0, k) + zb.grad[1](0, k) * s.boundary_normals(1, k);
    b += dnz * ub.value(0, k);
  }
  return s.area / double(s.n_in()) * a + s.perimeter / double(s.n_bnd()) * b;
}

std::optional<Effectivity> effectivity(double eta, double true_error) {
  if (!std::isfinite(eta) || !std::isfinite(true_error) || std::abs(true_error) < 1e-14 || eta == 0.0)
    return std::nullopt;
  return Effectivity{eta / true_error, true_error / eta};
}

void EstimatorReport::complete() {
  true_error.reset();
  eff_eq.reset();
  eff_table.reset();
  if (!j_ref) return;
  true_error = *j_ref - j_net;
  if (const auto e = effectivity(eta, *true_error)) {
    eff_eq = e->eq;
    eff_table = e->table;
  }
}

std::string csv_row(const EstimatorReport& r) {
  auto num = [](std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return std::string("nan");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return std::string(buf);
  };
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
  return std::to_string(r.epoch) + ',' + num(r.loss) + ',' + num(r.j_net) + ',' + num(r.j_ref) + ',' +
         num(r.true_error) + ',' + num(r.eta) + ',' + num(r.eff_eq) + ',' + num(r.eff_table) + ',' + wall;
}

}  // namespace ritz
