#include "ritz/studies.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

#include "ritz/dwr.hpp"
#include "ritz/fem.hpp"
#include "ritz/field.hpp"
#include "ritz/loss.hpp"
#include "ritz/mesh.hpp"
#include "ritz/sampling.hpp"

namespace ritz {

namespace {

constexpr std::uint64_t kStudySeedBase = 1000;

void require_laplace(const ProblemData& data, const char* what) {
  if (data.is_stokes()) throw std::invalid_argument(std::string(what) + ": Laplace problems only");
}

void require_polygon(const ProblemData& data, const char* what) {
  if (data.domain.kind == DomainKind::UnitDisc)
    throw std::invalid_argument(std::string(what) + ": the disc is not resolved exactly by a mesh");
}

}  // namespace

ReferenceResult reference_value(ProblemKind problem, int lo, int hi) {
  ReferenceResult r;
  switch (problem) {
    case ProblemKind::StokesDisc: r.value = -1.0 / std::numbers::pi; return r;
    case ProblemKind::LaplaceSquareManufactured:
      r.value = 4.0 / (std::numbers::pi * std::numbers::pi);
      return r;
    case ProblemKind::LaplaceLShape: break;
  }
  if (lo < 1 || hi < lo) throw std::invalid_argument("reference_value: bad level range");
  const ProblemData data = make_problem(problem);
  for (int l = lo; l <= hi; ++l) {
    const auto mesh = build_mesh(data.domain, l);
    const FEFunction u = solve_laplace_dirichlet(mesh, data.scalar_f());
    r.levels.push_back(l);
    r.values.push_back(eval_functional(data.goal, u));
  }
  const std::size_t n = r.values.size();
  r.value = r.values.back();
  if (n >= 3) {
    const double d1 = r.values[n - 2] - r.values[n - 3];
    const double d2 = r.values[n - 1] - r.values[n - 2];
    const double ratio = d2 / d1;
    // Geometric extrapolation of the tail when the differences contract.
    if (std::isfinite(ratio) && ratio > 0.0 && ratio < 1.0) r.value += d2 * ratio / (1.0 - ratio);
    r.band = std::abs(r.value - r.values.back()) + std::abs(d2);
  } else if (n == 2) {
    r.band = std::abs(r.values[1] - r.values[0]);
  }
  return r;
}

std::vector<ConvergenceRow> fem_verify(ProblemKind problem, const std::vector<int>& levels) {
  const ProblemData data = make_problem(problem);
  if (!data.exact) throw std::invalid_argument("fem_verify: " + to_string(problem) + " has no closed-form solution");
  std::vector<ConvergenceRow> rows;
  for (int l : levels) {
    const auto mesh = build_mesh(data.domain, l);
    ConvergenceRow row{l, mesh->h(), 0, 0.0, 0.0, std::nan(""), std::nan("")};
    ErrorNorms e;
    if (data.is_stokes()) {
      const StokesSolution s = solve_stokes_stabilized(mesh, data.f, false);
      e = error_norms(s.velocity, data.exact);
      row.dofs = long(s.velocity.coeffs.size() + s.pressure.coeffs.size());
    } else {
      const FEFunction u = solve_laplace_dirichlet(mesh, data.scalar_f());
      e = error_norms(u, data.exact);
      row.dofs = long(u.coeffs.size());
    }
    row.l2 = e.l2;
    row.h1 = e.h1_semi;
    if (!rows.empty()) {
      const auto& p = rows.back();
      const double lh = std::log(p.h / row.h);
      row.l2_rate = std::log(p.l2 / row.l2) / lh;
      row.h1_rate = std::log(p.h1 / row.h1) / lh;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<LambdaRow> lambda_sweep(ProblemKind problem, const std::vector<double>& lambdas, int level) {
  const ProblemData data = make_problem(problem);
  require_laplace(data, "lambda_sweep");
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (!(lambdas[i] > 0) || (i > 0 && !(lambdas[i] > lambdas[i - 1])))
      throw std::invalid_argument("lambda_sweep: lambdas must be positive and increasing");
  const auto mesh = build_mesh(data.domain, level);
  const ScalarFunction f = data.scalar_f();
  const FEFunction ud = solve_laplace_dirichlet(mesh, f);
  const SparseMatrix K = assemble_laplace(*mesh, nullptr).stiffness;
  std::vector<LambdaRow> rows;
  for (double lambda : lambdas) {
    const FEFunction ul = solve_laplace_robin(mesh, f, lambda);
    const Eigen::VectorXd e = ul.coeffs - ud.coeffs;
    rows.push_back({lambda, std::sqrt(std::max(0.0, e.dot(K * e)))});
  }
  return rows;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  if (x.size() < 2) return std::nullopt;
  Eigen::MatrixXd A(Eigen::Index(x.size()), 2);
  Eigen::VectorXd b(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    A(i, 0) = std::log(x[std::size_t(i)]);
    A(i, 1) = 1.0;
    b[i] = std::log(y[std::size_t(i)]);
  }
  return A.colPivHouseholderQr().solve(b)[0];
}

double energy_by_quadrature(ProblemKind problem, const Network& net, int level, double lambda,
                            double /*alpha*/) {
  const ProblemData data = make_problem(problem);
  require_laplace(data, "energy_by_quadrature");
  require_polygon(data, "energy_by_quadrature");
  const auto mesh = build_mesh(data.domain, level);
  const auto& rule = accurate_rule(mesh->shape());
  const Eigen::Index nq = Eigen::Index(rule.points.size());
  Eigen::Matrix2Xd x(2, Eigen::Index(mesh->num_cells()) * nq);
  Eigen::VectorXd w(x.cols());
  for (int c = 0; c < int(mesh->num_cells()); ++c)
    for (Eigen::Index q = 0; q < nq; ++q) {
      x.col(c * nq + q) = mesh->to_physical(c, rule.points[std::size_t(q)]);
      w[c * nq + q] = rule.weights[std::size_t(q)] * mesh->jacobian_det(c);
    }
  const JetBatch in = eval_batch(net, x, true);
  double vol = 0.0;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double gx = in.grad[0](0, k), gy = in.grad[1](0, k);
    vol += w[k] * (0.5 * (gx * gx + gy * gy) - data.f(x.col(k))[0] * in.value(0, k));
  }
  const auto line = gauss_legendre_01(5);
  double sur = 0.0;
  for (const auto& e : mesh->boundary_edges()) {
    Eigen::Matrix2Xd xe(2, Eigen::Index(line.points.size()));
    for (std::size_t q = 0; q < line.points.size(); ++q)
      xe.col(Eigen::Index(q)) = mesh->node(e.a) + line.points[q].x() * (mesh->node(e.b) - mesh->node(e.a));
    const JetBatch b = eval_batch(net, xe, false);
    for (std::size_t q = 0; q < line.points.size(); ++q)
      sur += line.weights[q] * e.length * b.value(0, Eigen::Index(q)) * b.value(0, Eigen::Index(q));
  }
  return vol + 0.5 * lambda * sur;
}

RateStudy mc_convergence(ProblemKind problem, const Network& net, const std::vector<long>& n_list,
                         int seeds, double lambda, double alpha) {
  const ProblemData data = make_problem(problem);
  if (seeds < 1) throw std::invalid_argument("mc_convergence: need at least one seed");
  RateStudy st;
  st.reference = energy_by_quadrature(problem, net, 7, lambda, alpha);
  const PenaltyParams p{lambda, alpha};
  std::vector<double> xs, ys;
  for (long n : n_list) {
    double dev = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const SampleSet set = sample(data.domain, n, std::max(1L, n / 4), kStudySeedBase + std::uint64_t(s));
      dev += std::abs(Loss::laplace_energy(set, data, p).value(net) - st.reference);
    }
    st.rows.push_back({n, dev / seeds});
    xs.push_back(double(n));
    ys.push_back(dev / seeds);
  }
  st.slope = loglog_slope(xs, ys);
  return st;
}

RateStudy mc_estimator_convergence(ProblemKind problem, const Network& net,
                                   const std::vector<long>& n_list, int seeds, int adjoint_level) {
  const ProblemData data = make_problem(problem);
  require_laplace(data, "mc_estimator_convergence");
  require_polygon(data, "mc_estimator_convergence");
  if (seeds < 1) throw std::invalid_argument("mc_estimator_convergence: need at least one seed");
  const auto mesh = build_mesh(data.domain, adjoint_level);
  const FEFunction z = solve_adjoint_laplace(mesh, data.goal);
  const ScalarFunction f = data.scalar_f();
  const NetworkField u(net);
  const FEField zf(z);
  RateStudy st;
  st.reference = estimate_laplace(u, z, f);
  std::vector<double> xs, ys;
  for (long n : n_list) {
    double dev = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const SampleSet set = sample(data.domain, n, std::max(1L, n / 4), kStudySeedBase + std::uint64_t(s));
      dev += std::abs(estimate_mc(u, zf, set, f) - st.reference);
    }
    st.rows.push_back({n, dev / seeds});
    xs.push_back(double(n));
    ys.push_back(dev / seeds);
  }
  st.slope = loglog_slope(xs, ys);
  return st;
}

}  // namespace ritz
