#include "ritz/fem.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/IterativeLinearSolvers>

namespace ritz {

namespace {

using Triplet = Eigen::Triplet<double>;

// Free (non-Dirichlet) numbering; -1 marks eliminated nodes.
std::vector<int> free_numbering(const Mesh& mesh, int* nfree) {
  std::vector<int> map(mesh.num_nodes(), -1);
  int n = 0;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    if (!mesh.is_boundary_node(int(i))) map[i] = n++;
  *nfree = n;
  return map;
}

SparseMatrix restrict_matrix(const SparseMatrix& A, const std::vector<int>& map, int n) {
  std::vector<Triplet> t;
  t.reserve(std::size_t(A.nonZeros()));
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int r = map[std::size_t(it.row())], c = map[std::size_t(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SparseMatrix R(n, n);
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const std::vector<int>& map, int n) {
  Eigen::VectorXd r(n);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] >= 0) r[map[i]] = v[Eigen::Index(i)];
  return r;
}

Eigen::VectorXd solve_spd(const SparseMatrix& A, const Eigen::VectorXd& b, SolveInfo* info) {
  constexpr double kTol = 1e-12;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(kTol);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 4 * Eigen::Index(std::sqrt(double(A.rows()))) * 50));
  cg.compute(A);
  const double bn = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  double res = 0.0;
  long iters = 0;
  // The recursive residual drifts from the true one on fine meshes; restart
  // from the current iterate while that still reduces the true residual.
  for (int restart = 0; restart < 6 && bn > 0; ++restart) {
    x = cg.solveWithGuess(b, x);
    iters += long(cg.iterations());
    const double r = (b - A * x).norm() / bn;
    const bool stalled = restart > 0 && r > 0.5 * res;
    res = r;
    if (res <= kTol || stalled) break;
  }
  // Rounding floor of the residual itself: eps * | |A| |x| | / |b|. With a
  // load of size h^2 it exceeds 1e-12 on the finest meshes.
  const double floor =
      bn > 0 ? 8.0 * std::numeric_limits<double>::epsilon() * (A.cwiseAbs() * x.cwiseAbs()).norm() / bn : 0.0;
  if (info) *info = {iters, res};
  if (!(res <= std::max(kTol, floor))) throw SolverError("CG did not converge", res);
  return x;
}

FEFunction solve_dirichlet_system(std::shared_ptr<const Mesh> mesh, const SparseMatrix& K,
                                  const Eigen::VectorXd& rhs, SolveInfo* info) {
  int nfree = 0;
  const auto map = free_numbering(*mesh, &nfree);
  FEFunction u = FEFunction::zero(mesh);
  if (nfree == 0) return u;
  const Eigen::VectorXd x = solve_spd(restrict_matrix(K, map, nfree), restrict_vector(rhs, map, nfree), info);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] >= 0) u.coeffs[Eigen::Index(i)] = x[map[i]];
  return u;
}

}  // namespace

LaplaceSystem assemble_laplace(const Mesh& mesh, const ScalarFunction& f) {
  const auto n = Eigen::Index(mesh.num_nodes());
  const auto& rule = assembly_rule(mesh.shape());
  std::vector<Triplet> t;
  t.reserve(mesh.num_cells() * 16);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < int(mesh.num_cells()); ++c) {
    const auto& cell = mesh.cell(c);
    const double det = mesh.jacobian_det(c);
    Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const ShapeEval s = mesh.shape_at(c, rule.points[q]);
      const double w = rule.weights[q] * det;
      const double fq = f ? f(mesh.to_physical(c, rule.points[q])) : 0.0;
      for (int a = 0; a < s.n; ++a) {
        load[cell[std::size_t(a)]] += w * fq * s.phi[std::size_t(a)];
        for (int b = 0; b < s.n; ++b) ke(a, b) += w * s.grad[std::size_t(a)].dot(s.grad[std::size_t(b)]);
      }
    }
    for (int a = 0; a < mesh.vertices_per_cell(); ++a)
      for (int b = 0; b < mesh.vertices_per_cell(); ++b)
        t.emplace_back(cell[std::size_t(a)], cell[std::size_t(b)], ke(a, b));
  }
  SparseMatrix K(n, n);
  K.setFromTriplets(t.begin(), t.end());
  return {std::move(K), std::move(load)};
}

SparseMatrix assemble_boundary_mass(const Mesh& mesh) {
  const auto n = Eigen::Index(mesh.num_nodes());
  const auto line = gauss_legendre_01(2);
  std::vector<Triplet> t;
  for (const auto& e : mesh.boundary_edges())
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q].x();
      const double pa = 1.0 - s, pb = s;
      const double w = line.weights[q] * e.length;
      t.emplace_back(e.a, e.a, w * pa * pa);
      t.emplace_back(e.a, e.b, w * pa * pb);
      t.emplace_back(e.b, e.a, w * pb * pa);
      t.emplace_back(e.b, e.b, w * pb * pb);
    }
  SparseMatrix M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

FEFunction solve_laplace_dirichlet(std::shared_ptr<const Mesh> mesh, const ScalarFunction& f,
                                   SolveInfo* info) {
  const LaplaceSystem sys = assemble_laplace(*mesh, f);
  return solve_dirichlet_system(std::move(mesh), sys.stiffness, sys.load, info);
}

FEFunction solve_laplace_robin(std::shared_ptr<const Mesh> mesh, const ScalarFunction& f,
                               double lambda, SolveInfo* info) {
  if (!(lambda > 0)) throw std::invalid_argument("Robin penalty must be positive");
  const LaplaceSystem sys = assemble_laplace(*mesh, f);
  const SparseMatrix A = sys.stiffness + lambda * assemble_boundary_mass(*mesh);
  FEFunction u = FEFunction::zero(mesh);
  u.coeffs = solve_spd(A, sys.load, info);
  return u;
}

FEFunction solve_adjoint_laplace(std::shared_ptr<const Mesh> mesh, const GoalFunctional& j,
                                 SolveInfo* info) {
  const LaplaceSystem sys = assemble_laplace(*mesh, nullptr);
  const Eigen::VectorXd rhs = assemble_functional(*mesh, j, 1);
  return solve_dirichlet_system(std::move(mesh), sys.stiffness, rhs, info);
}

}  // namespace ritz
