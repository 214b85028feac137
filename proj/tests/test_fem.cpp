#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ritz/fem.hpp"
#include "ritz/field.hpp"
#include "ritz/problem.hpp"
#include "ritz/studies.hpp"

using namespace ritz;

namespace {

constexpr double kPi = std::numbers::pi;

const Domain kSquare{DomainKind::UnitSquare};
const Domain kL{DomainKind::LShape};
const Domain kDisc{DomainKind::UnitDisc};

ScalarFunction constant(double c) {
  return [c](const Point&) { return c; };
}

int node_at(const Mesh& m, const Point& x) {
  for (int i = 0; i < int(m.num_nodes()); ++i)
    if ((m.node(i) - x).norm() < 1e-12) return i;
  return -1;
}

}  // namespace

TEST_CASE("mesh sizes") {
  const auto l1 = build_mesh(kL, 1);
  CHECK(l1->num_cells() == 12);
  CHECK(l1->max_edge() == doctest::Approx(0.5));
  CHECK(build_mesh(kL, 4)->num_cells() == 768);
  for (int l : {1, 3, 5}) {
    const auto s = build_mesh(kSquare, l);
    CHECK(s->num_cells() == std::size_t(1) << (2 * l));
    CHECK(s->h() == doctest::Approx(std::sqrt(2.0) * std::pow(2.0, -l)));
  }
  const auto d3 = build_mesh(kDisc, 3);
  CHECK(d3->num_cells() == 60u * 64u);
  CHECK(d3->max_edge() < 0.06);
  for (const auto& p : d3->nodes()) CHECK(p.norm() <= 1.0 + 1e-14);
}

TEST_CASE("mesh invariants") {
  for (const auto& mesh : {build_mesh(kL, 2), build_mesh(kDisc, 2)}) {
    double area = 0.0;
    for (int c = 0; c < int(mesh->num_cells()); ++c)
      area += mesh->jacobian_det(c) * (mesh->shape() == CellShape::Quad ? 1.0 : 0.5);
    if (mesh->domain().kind == DomainKind::LShape) CHECK(area == doctest::Approx(3.0));
    double perimeter = 0.0;
    for (const auto& e : mesh->boundary_edges()) {
      perimeter += e.length;
      const Point mid = 0.5 * (mesh->node(e.a) + mesh->node(e.b));
      // The normal points away from the adjacent cell's centre.
      Point centre = Point::Zero();
      for (int k = 0; k < mesh->vertices_per_cell(); ++k) centre += mesh->node(mesh->cell(e.cell)[std::size_t(k)]);
      centre /= mesh->vertices_per_cell();
      CHECK(e.normal.dot(mid - centre) > 0);
      CHECK(mesh->is_boundary_node(e.a));
    }
    if (mesh->domain().kind == DomainKind::LShape) CHECK(perimeter == doctest::Approx(8.0));
    else CHECK(perimeter == doctest::Approx(2 * kPi).epsilon(0.01));
    for (int c = 0; c < int(mesh->num_cells()); c += 7) {
      const Point x = mesh->to_physical(c, Point(0.2, 0.3));
      const auto loc = mesh->locate(x);
      REQUIRE(loc);
      CHECK(loc->first == c);
    }
  }
}

TEST_CASE("mesh dump format") {
  std::ostringstream os;
  write_mesh(os, *build_mesh(kSquare, 0));
  CHECK(os.str().starts_with("$nodes\n0 0 0\n"));
  CHECK(os.str().find("$cells\n0 0 1 2 3\n") != std::string::npos);
  CHECK(os.str().find("$bedges\n0 1 0 -1\n1 2 1 0\n") != std::string::npos);
}

TEST_CASE("stiffness matrix is symmetric and annihilates constants") {
  const auto mesh = build_mesh(kL, 3);
  const LaplaceSystem sys = assemble_laplace(*mesh, constant(1.0));
  const SparseMatrix K = sys.stiffness;
  CHECK(SparseMatrix(K - SparseMatrix(K.transpose())).norm() < 1e-13);
  CHECK((K * Eigen::VectorXd::Ones(K.rows())).norm() < 1e-12);
  CHECK(sys.load.sum() == doctest::Approx(3.0));
  CHECK(assemble_boundary_mass(*mesh).sum() == doctest::Approx(8.0));
}

TEST_CASE("Dirichlet solve") {
  const auto mesh = build_mesh(kL, 3);
  CHECK(solve_laplace_dirichlet(mesh, constant(0.0)).coeffs.norm() == 0.0);
  SolveInfo info;
  const FEFunction u = solve_laplace_dirichlet(mesh, constant(1.0), &info);
  CHECK(info.residual <= 1e-12);
  for (int i = 0; i < int(mesh->num_nodes()); ++i)
    if (mesh->is_boundary_node(i)) CHECK(u.at(i) == 0.0);
  // Reflection symmetry (x, y) -> (y, x).
  const double a = u.evaluate(Point(0.5, -0.5)).value[0], b = u.evaluate(Point(-0.5, 0.5)).value[0];
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("manufactured solution converges at the optimal rates") {
  const auto rows = fem_verify(ProblemKind::LaplaceSquareManufactured, {3, 4, 5, 6});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].l2_rate >= 1.9);
    CHECK(rows[i].h1_rate >= 0.95);
  }
}

TEST_CASE("Laplace reference point value on level 8") {
  const ProblemData d = make_problem(ProblemKind::LaplaceLShape);
  const FEFunction u = solve_laplace_dirichlet(build_mesh(kL, 8), d.scalar_f());
  const double j = eval_functional(d.goal, u);
  CHECK(j >= 0.1004);
  CHECK(j <= 0.1044);
}

TEST_CASE("Robin penalty") {
  const auto mesh = build_mesh(kSquare, 4);
  CHECK(solve_laplace_robin(mesh, constant(0.0), 10.0).coeffs.norm() == 0.0);
  const FEFunction ud = solve_laplace_dirichlet(mesh, constant(1.0));
  const FEFunction ur = solve_laplace_robin(mesh, constant(1.0), 1e12);
  const JetFunction exact = [&ud](const Point& x) { return ud.evaluate(x); };
  CHECK(error_norms(ur, exact).l2 < 1e-6);
  const auto rows = lambda_sweep(ProblemKind::LaplaceSquareManufactured, {100.0, 1000.0}, 5);
  CHECK(rows[1].distance / rows[0].distance <= 0.3);
  CHECK(lambda_sweep(ProblemKind::LaplaceLShape, {50.0}, 3).size() == 1);
  CHECK_THROWS_AS(lambda_sweep(ProblemKind::LaplaceLShape, {100.0, 10.0}, 3), std::invalid_argument);
}

TEST_CASE("adjoint Laplace solves") {
  const auto sq = build_mesh(kSquare, 3);
  const FEFunction z = solve_adjoint_laplace(sq, DomainAverage{});
  const int n = 9;  // nodes per row at level 3
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = z.evaluate(Point(i / 8.0, j / 8.0)).value[0];
      CHECK(v == doctest::Approx(z.evaluate(Point(j / 8.0, i / 8.0)).value[0]).epsilon(1e-10));
      CHECK(v == doctest::Approx(z.evaluate(Point(1.0 - i / 8.0, j / 8.0)).value[0]).epsilon(1e-10));
    }
  for (int l = 1; l <= 4; ++l) {
    const FEFunction zl = solve_adjoint_laplace(build_mesh(kL, l), PointValue{Point(0.5, -0.5)});
    CHECK(zl.coeffs.minCoeff() >= -1e-14);
  }
  CHECK(solve_adjoint_laplace(sq, BoundaryFlux{Point(5, 5), Point(6, 6)}).coeffs.norm() == 0.0);
  CHECK_THROWS_AS(solve_adjoint_laplace(sq, PointValue{Point(2, 2)}), std::invalid_argument);
}

TEST_CASE("Galerkin orthogonality of the primal solution") {
  const auto mesh = build_mesh(kL, 3);
  const LaplaceSystem sys = assemble_laplace(*mesh, constant(1.0));
  const FEFunction u = solve_laplace_dirichlet(mesh, constant(1.0));
  const Eigen::VectorXd r = sys.load - sys.stiffness * u.coeffs;
  double worst = 0.0;
  for (int i = 0; i < int(mesh->num_nodes()); ++i)
    if (!mesh->is_boundary_node(i)) worst = std::max(worst, std::abs(r[i]));
  CHECK(worst < 1e-10 * sys.load.cwiseAbs().maxCoeff());
}

TEST_CASE("functionals") {
  const auto sq = build_mesh(kSquare, 3);
  const FEFunction u = interpolate(sq, [](const Point& x) { return Eigen::VectorXd::Constant(1, x.x() + 2 * x.y()); }, 1);
  CHECK(eval_functional(PointValue{Point(0.25, 0.5)}, u) == doctest::Approx(1.25));
  const FEFunction s = interpolate(build_mesh(kSquare, 7),
                                   [](const Point& x) { return Eigen::VectorXd::Constant(1, manufactured_u(x)); }, 1);
  CHECK(std::abs(eval_functional(DomainAverage{}, s) - 4.0 / (kPi * kPi)) < 1e-3);
  const FunctionField exact(manufactured_jet, 1);
  CHECK(eval_functional(DomainAverage{}, exact, *sq) == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-4));

  // Outward flux of u = x + 2y over the whole square boundary is zero,
  // over the right edge it is 1.
  CHECK(std::abs(eval_functional(BoundaryFlux{}, u)) < 1e-12);
  CHECK(eval_functional(BoundaryFlux{Point(0.99, -1), Point(2, 2)}, u) == doctest::Approx(1.0));

  const FunctionField v(stokes_velocity_jet, 2);
  const auto disc = build_mesh(kDisc, 2);
  CHECK(eval_functional(LineSegmentY{}, v, *disc) == doctest::Approx(-1.0 / kPi).epsilon(1e-12));
  const FEFunction vh = interpolate(build_mesh(kDisc, 5), [](const Point& x) -> Eigen::VectorXd { return stokes_velocity(x); }, 2);
  CHECK(std::abs(eval_functional(LineSegmentY{}, vh) + 1.0 / kPi) < 2e-4);

  // Mollified point value of a linear function equals the point value.
  CHECK(eval_functional(PointValue{Point(0.5, 0.5), 0, 0.1}, u) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("normal derivatives") {
  const auto sq = build_mesh(kSquare, 3);
  const double h = 1.0 / 8;
  const FEFunction x1 = interpolate(sq, [](const Point& x) { return Eigen::VectorXd::Constant(1, x.x()); }, 1);
  const FEFunction x2 = interpolate(sq, [](const Point& x) { return Eigen::VectorXd::Constant(1, x.x() * x.x()); }, 1);
  const int a = node_at(*sq, Point(1, 0.5)), b = node_at(*sq, Point(1, 0.625));
  CHECK(normal_derivative(x1, a, b).isApproxToConstant(1.0));
  CHECK(normal_derivative(x2, a, b).isApproxToConstant(2.0 - h));
  CHECK(normal_derivative(FEFunction::zero(sq), a, b).norm() == 0.0);
  CHECK_THROWS_AS(normal_derivative(x1, node_at(*sq, Point(0.5, 0.5)), node_at(*sq, Point(0.625, 0.5))),
                  std::invalid_argument);
}

TEST_CASE("error norms") {
  const auto sq = build_mesh(kSquare, 3);
  const FEFunction u = interpolate(sq, [](const Point& x) { return Eigen::VectorXd::Constant(1, manufactured_u(x)); }, 1);
  const ErrorNorms zero = error_norms(u, [&u](const Point& x) { return u.evaluate(x); });
  CHECK(zero.l2 < 1e-14);
  CHECK(zero.h1_semi < 1e-14);
  const ErrorNorms shift = error_norms(FEFunction::zero(sq), [](const Point&) {
    return SpatialJet{Eigen::VectorXd::Constant(1, 0.3), Eigen::MatrixXd::Zero(1, 2)};
  });
  CHECK(shift.l2 == doctest::Approx(0.3));
  CHECK(shift.h1_semi == 0.0);
}

TEST_CASE("stabilized Stokes") {
  const auto mesh = build_mesh(kDisc, 2);
  const StokesSolution zero = solve_stokes_stabilized(mesh, VectorFunction([](const Point&) { return Eigen::VectorXd::Zero(2); }), false);
  CHECK(zero.velocity.coeffs.norm() == 0.0);
  CHECK(zero.pressure.coeffs.norm() == 0.0);

  const auto rows = fem_verify(ProblemKind::StokesDisc, {3, 4, 5});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].l2_rate >= 0.9);

  const StokesSolution primal = solve_stokes_stabilized(mesh, make_problem(ProblemKind::StokesDisc).f, false);
  CHECK(primal.residual <= 1e-10);
  // Zero-mean pressure.
  const FEFunction& p = primal.pressure;
  double mean = 0.0;
  for (int c = 0; c < int(mesh->num_cells()); ++c)
    mean += mesh->jacobian_det(c) * 0.5 * p.evaluate_in_cell(c, Point(1.0 / 3, 1.0 / 3)).value[0];
  CHECK(std::abs(mean) < 1e-10);
}

TEST_CASE("Stokes adjoint matrix is the transpose of the primal one") {
  // With A^T y = J and A x = f: J(v_h) = y^T A x = (f, z_h).
  const auto mesh = build_mesh(kDisc, 2);
  const ProblemData d = make_problem(ProblemKind::StokesDisc);
  const StokesSolution primal = solve_stokes_stabilized(mesh, d.f, false);
  const StokesSolution adjoint = solve_stokes_stabilized(mesh, d.goal, true);
  const double j = eval_functional(d.goal, primal.velocity);
  // (f, z_h) by the assembly rule.
  double f_z = 0.0;
  const auto& rule = assembly_rule(mesh->shape());
  for (int c = 0; c < int(mesh->num_cells()); ++c)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = mesh->to_physical(c, rule.points[q]);
      f_z += rule.weights[q] * mesh->jacobian_det(c) *
             d.f(x).head<2>().dot(adjoint.velocity.evaluate_in_cell(c, rule.points[q]).value);
    }
  CHECK(f_z == doctest::Approx(j).epsilon(1e-9));
}

TEST_CASE("FE function CSV") {
  std::ostringstream os;
  write_fe_function_csv(os, FEFunction::zero(build_mesh(kSquare, 0), 2));
  CHECK(os.str().starts_with("node,value,value2\n0,0,0\n"));
}
