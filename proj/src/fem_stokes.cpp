#include "ritz/fem.hpp"

#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

namespace ritz {

StokesSolution solve_stokes_stabilized(std::shared_ptr<const Mesh> mesh, const StokesRhs& rhs,
                                       bool adjoint) {
  const Mesh& m = *mesh;
  const int n = int(m.num_nodes());

  // Unknowns: velocity (interleaved, interior nodes only) and pressure (all
  // nodes). The pressure is pinned at node 0 and shifted to zero mean after
  // the solve; a mean multiplier would add a dense row and wreck the fill.
  std::vector<int> vel(std::size_t(2 * n), -1);
  int nd = 0;
  for (int i = 0; i < n; ++i)
    if (!m.is_boundary_node(i)) {
      vel[std::size_t(2 * i)] = nd++;
      vel[std::size_t(2 * i + 1)] = nd++;
    }
  const int pbase = nd;
  const int size = pbase + n;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m.num_cells() * 80);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
  auto add = [&t, pbase](int r, int c, double v) {
    if (r >= 0 && c >= 0 && r != pbase) t.emplace_back(r, c, v);
  };
  t.emplace_back(pbase, pbase, 1.0);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);  // integrals of the hat functions

  const double sdiv = adjoint ? -1.0 : 1.0;  // sign of the (div v, xi) block
  const auto* force = std::get_if<VectorFunction>(&rhs);
  const auto& rule = assembly_rule(m.shape());
  for (int c = 0; c < int(m.num_cells()); ++c) {
    const auto& cell = m.cell(c);
    const double det = m.jacobian_det(c);
    const double h2 = m.cell_diameter(c) * m.cell_diameter(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const ShapeEval s = m.shape_at(c, rule.points[q]);
      const double w = rule.weights[q] * det;
      Eigen::Vector2d fq = Eigen::Vector2d::Zero();
      if (force && *force) fq = (*force)(m.to_physical(c, rule.points[q])).head<2>();
      for (int a = 0; a < s.n; ++a) {
        const int na = cell[std::size_t(a)];
        const double pa = s.phi[std::size_t(a)];
        const Point& ga = s.grad[std::size_t(a)];
        for (int i = 0; i < 2; ++i)
          if (vel[std::size_t(2 * na + i)] >= 0) b[vel[std::size_t(2 * na + i)]] += w * fq[i] * pa;
        mass[na] += w * pa;
        for (int bb = 0; bb < s.n; ++bb) {
          const int nb = cell[std::size_t(bb)];
          const double pb = s.phi[std::size_t(bb)];
          const Point& gb = s.grad[std::size_t(bb)];
          const double lap = w * ga.dot(gb);
          for (int i = 0; i < 2; ++i) {
            const int ra = vel[std::size_t(2 * na + i)], cb = vel[std::size_t(2 * nb + i)];
            add(ra, cb, lap);
            // velocity row a, pressure column b: -(p, div phi) resp. +(q, div phi)
            add(ra, pbase + nb, -sdiv * w * pb * ga[i]);
            // pressure row a, velocity column b: +(div v, xi) resp. -(div z, xi)
            add(pbase + na, vel[std::size_t(2 * nb + i)], sdiv * w * gb[i] * pa);
          }
          add(pbase + na, pbase + nb, h2 * lap);
        }
      }
    }
  }

  if (const auto* goal = std::get_if<GoalFunctional>(&rhs)) {
    const Eigen::VectorXd jv = assemble_functional(m, *goal, 2);
    for (int k = 0; k < 2 * n; ++k)
      if (vel[std::size_t(k)] >= 0) b[vel[std::size_t(k)]] += jv[k];
  }

  SparseMatrix A(size, size);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();

  StokesSolution sol{FEFunction::zero(mesh, 2), FEFunction::zero(mesh, 1), 0.0};
  if (b.norm() == 0.0) return sol;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("Stokes factorization failed", 1.0);
  const Eigen::VectorXd x = lu.solve(b);
  sol.residual = (A * x - b).norm() / b.norm();
  if (lu.info() != Eigen::Success || !(sol.residual <= 1e-10))
    throw SolverError("Stokes solve failed", sol.residual);

  for (int k = 0; k < 2 * n; ++k)
    if (vel[std::size_t(k)] >= 0) sol.velocity.coeffs[k] = x[vel[std::size_t(k)]];
  sol.pressure.coeffs = x.segment(pbase, n);
  sol.pressure.coeffs.array() -= mass.dot(sol.pressure.coeffs) / mass.sum();
  return sol;
}

}  // namespace ritz
