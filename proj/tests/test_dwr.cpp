#include <doctest.h>

#include <cmath>

#include "ritz/dwr.hpp"
#include "ritz/fem.hpp"
#include "ritz/problem.hpp"
#include "ritz/studies.hpp"

using namespace ritz;

namespace {

const Domain kL{DomainKind::LShape};

Network zero_net(int c) {
  const Architecture a{ArchKind::ResNet, 2, c, 6, 2, Activation::ELU};
  return {a, Eigen::VectorXd::Zero(Eigen::Index(a.parameter_count()))};
}

// (f, z) by the assembly rule, independent of the estimator code.
double f_dot_z(const FEFunction& z, const VectorFunction& f) {
  const Mesh& m = *z.mesh;
  const auto& rule = assembly_rule(m.shape());
  double s = 0.0;
  for (int c = 0; c < int(m.num_cells()); ++c)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = m.to_physical(c, rule.points[q]);
      const Eigen::VectorXd zq = z.evaluate_in_cell(c, rule.points[q]).value;
      s += rule.weights[q] * m.jacobian_det(c) * f(x).head(z.components).dot(zq);
    }
  return s;
}

// Scales another field.
class Scaled final : public JetField {
 public:
  Scaled(const JetField& f, double a) : f_(f), a_(a) {}
  int components() const override { return f_.components(); }
  JetBatch evaluate(const Eigen::Matrix2Xd& x) const override {
    JetBatch b = f_.evaluate(x);
    b.value *= a_;
    for (auto& g : b.grad) g *= a_;
    return b;
  }

 private:
  const JetField& f_;
  double a_;
};

}  // namespace

TEST_CASE("zero network: eta = (f, z_H)") {
  const ProblemData lap = make_problem(ProblemKind::LaplaceLShape);
  const FEFunction z = solve_adjoint_laplace(build_mesh(kL, 2), lap.goal);
  const Network n0 = zero_net(1);
  CHECK(estimate_laplace(NetworkField(n0), z, lap.scalar_f()) == doctest::Approx(f_dot_z(z, lap.f)).epsilon(1e-14));

  const ProblemData sto = make_problem(ProblemKind::StokesDisc);
  const StokesSolution adj = solve_stokes_stabilized(build_mesh(sto.domain, 2), sto.goal, true);
  const Network v0 = zero_net(2);
  CHECK(estimate_stokes(NetworkField(v0), adj.velocity, adj.pressure, sto.f) ==
        doctest::Approx(f_dot_z(adj.velocity, sto.f)).epsilon(1e-14));
}

TEST_CASE("Galerkin orthogonality: eta(u_h, z_h) vanishes in the same space") {
  const ProblemData lap = make_problem(ProblemKind::LaplaceLShape);
  for (int level : {2, 3}) {
    const auto mesh = build_mesh(kL, level);
    const FEFunction u = solve_laplace_dirichlet(mesh, lap.scalar_f());
    const FEFunction z = solve_adjoint_laplace(mesh, lap.goal);
    const double eta = estimate_laplace(FEField(u), z, lap.scalar_f());
    CHECK(std::abs(eta) < 1e-10 * std::abs(f_dot_z(z, lap.f)));
  }
}

TEST_CASE("eta is affine in the field") {
  const ProblemData lap = make_problem(ProblemKind::LaplaceLShape);
  const FEFunction z = solve_adjoint_laplace(build_mesh(kL, 2), lap.goal);
  const Network net = init_network({ArchKind::ResNet, 2, 1, 8, 2, Activation::ReLUCubed}, 4);
  const NetworkField u(net);
  const double fz = estimate_laplace(NetworkField(zero_net(1)), z, lap.scalar_f());
  const double e1 = estimate_laplace(u, z, lap.scalar_f());
  const double e3 = estimate_laplace(Scaled(u, 3.0), z, lap.scalar_f());
  CHECK(e3 - fz == doctest::Approx(3.0 * (e1 - fz)).epsilon(1e-12));
}

TEST_CASE("Stokes estimator tracks the error of an interpolated exact velocity") {
  const ProblemData sto = make_problem(ProblemKind::StokesDisc);
  const auto fine = build_mesh(sto.domain, 5);
  const FEFunction vh = interpolate(fine, [](const Point& x) -> Eigen::VectorXd { return stokes_velocity(x); }, 2);
  const FEField field(vh);
  const double err = -1.0 / std::numbers::pi - eval_functional(sto.goal, vh);
  double prev = 1e300;
  for (int level : {1, 2, 3}) {
    const StokesSolution adj = solve_stokes_stabilized(build_mesh(sto.domain, level), sto.goal, true);
    const double gap = std::abs(estimate_stokes(field, adj.velocity, adj.pressure, sto.f) - err);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("sample-based estimator") {
  const ProblemData lap = make_problem(ProblemKind::LaplaceLShape);
  const auto mesh = build_mesh(kL, 2);
  const SampleSet s = sample(kL, 2000, 500, 3);

  // Constant integrand: constant adjoint, zero network.
  const FEFunction one = interpolate(mesh, [](const Point&) { return Eigen::VectorXd::Ones(1); }, 1);
  const Network n0 = zero_net(1);
  CHECK(estimate_mc(NetworkField(n0), FEField(one), s, lap.scalar_f()) ==
        doctest::Approx(estimate_laplace(NetworkField(n0), one, lap.scalar_f())).epsilon(1e-13));

  // Zero network, real adjoint: MC estimate of (f, z) within 3 sigma.
  const FEFunction z = solve_adjoint_laplace(mesh, lap.goal);
  const FEField zf(z);
  const JetBatch zb = zf.evaluate(s.interior);
  const double sigma = 3.0 * std::sqrt((zb.value.array() - zb.value.mean()).square().mean() / double(s.n_in()));
  CHECK(std::abs(estimate_mc(NetworkField(n0), zf, s, lap.scalar_f()) - f_dot_z(z, lap.f)) < 3.0 * sigma);
}

TEST_CASE("Monte-Carlo estimator converges at the MC rate") {
  const Network net = init_network({ArchKind::ResNet, 2, 1, 20, 2, Activation::ReLUCubed}, 7);
  const RateStudy st = mc_estimator_convergence(ProblemKind::LaplaceLShape, net, {1000, 10000, 100000}, 20);
  REQUIRE(st.slope);
  CHECK(*st.slope >= -0.65);
  CHECK(*st.slope <= -0.35);
}

TEST_CASE("effectivity conventions") {
  const auto same = effectivity(0.3, 0.3);
  REQUIRE(same);
  CHECK(same->eq == 1.0);
  CHECK(same->table == 1.0);
  CHECK(effectivity(-0.004719, -0.004695)->table == doctest::Approx(0.99).epsilon(0.005));
  CHECK(effectivity(-0.0425343, -0.0442546)->table == doctest::Approx(1.04).epsilon(0.005));
  CHECK_FALSE(effectivity(0.1, 1e-15));
  const auto e = effectivity(0.123, -0.456);
  CHECK(e->eq * e->table == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("estimator report") {
  EstimatorReport r;
  r.epoch = 100;
  r.loss = -0.5;
  r.eta = 0.01;
  r.j_net = 0.09;
  r.j_ref = 0.1;
  r.complete();
  CHECK(*r.true_error == doctest::Approx(0.01));
  CHECK(*r.eff_eq * *r.eff_table == doctest::Approx(1.0));
  CHECK(csv_row(r).starts_with("100,-0.5,0.089999999999999997,0.10000000000000001,"));
  r.j_ref.reset();
  r.complete();
  CHECK_FALSE(r.true_error);
  CHECK(csv_row(r).find(",nan,nan,0.01,nan,nan,") != std::string::npos);
}
