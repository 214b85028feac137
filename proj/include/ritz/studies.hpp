#ifndef RITZ_STUDIES_HPP
#define RITZ_STUDIES_HPP

#include <optional>
#include <vector>

#include "ritz/network.hpp"
#include "ritz/problem.hpp"

namespace ritz {

struct ReferenceResult {
  double value = 0.0;
  double band = 0.0;            // half width of the reported interval
  std::vector<int> levels;
  std::vector<double> values;   // J(u_h) per level
};

/// LaplaceLShape: FE point values on levels `lo..hi` with Richardson
/// extrapolation from the last three; StokesDisc: -1/pi; manufactured
/// square: 4/pi^2.
ReferenceResult reference_value(ProblemKind problem, int lo = 6, int hi = 9);

struct ConvergenceRow {
  int level;
  double h;
  long dofs;
  double l2;
  double h1;
  double l2_rate;  // NaN on the first row
  double h1_rate;
};

/// FE solves against the closed-form solution (manufactured square, or the
/// Stokes velocity on the disc) over the given levels.
std::vector<ConvergenceRow> fem_verify(ProblemKind problem, const std::vector<int>& levels);

struct LambdaRow {
  double lambda;
  double distance;  // |u_lambda - u_D|_{H1}
};

/// Robin-penalized FE solutions against the Dirichlet one on a fixed mesh.
std::vector<LambdaRow> lambda_sweep(ProblemKind problem, const std::vector<double>& lambdas,
                                    int level = 5);

/// Least-squares slope of log(y) against log(x); nullopt with fewer than two points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RateRow {
  long n;
  double mean_abs_dev;
};

struct RateStudy {
  std::vector<RateRow> rows;
  std::optional<double> slope;
  double reference = 0.0;  // quadrature value
};

/// Deep Ritz loss of a fixed network: Monte-Carlo value against mesh
/// quadrature, mean absolute deviation over `seeds` sample sets per N.
RateStudy mc_convergence(ProblemKind problem, const Network& net, const std::vector<long>& n_list,
                         int seeds, double lambda = 500.0, double alpha = 100.0);

/// |estimate_mc - estimate_laplace| for a fixed network and the level
/// `adjoint_level` adjoint, mean over seeds per N.
RateStudy mc_estimator_convergence(ProblemKind problem, const Network& net,
                                   const std::vector<long>& n_list, int seeds, int adjoint_level = 2);

/// Energy of the network by mesh quadrature (3x3 Gauss or the six-point rule on the
/// given level, five-point Gauss per boundary edge). Polygonal domains only.
double energy_by_quadrature(ProblemKind problem, const Network& net, int level, double lambda,
                            double alpha);

}  // namespace ritz

#endif  // RITZ_STUDIES_HPP
