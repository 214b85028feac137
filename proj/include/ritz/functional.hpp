#ifndef RITZ_FUNCTIONAL_HPP
#define RITZ_FUNCTIONAL_HPP

#include <limits>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "ritz/fe_function.hpp"
#include "ritz/field.hpp"
#include "ritz/mesh.hpp"

namespace ritz {

/// u_comp(x). With radius > 0 the value is replaced by the mean over the
/// disc of that radius around x.
struct PointValue {
  Point x{0, 0};
  int component = 0;
  double radius = 0.0;
};

/// Integral of u_comp over the domain.
struct DomainAverage {
  int component = 0;
};

/// Integral of the outward normal derivative of u_comp over the boundary
/// edges whose midpoints lie in the box [lo, hi].
struct BoundaryFlux {
  Point lo = Point::Constant(-std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(std::numeric_limits<double>::infinity());
  int component = 0;
};

/// Integral of u_comp(x, 0) for x in [a, b].
struct LineSegmentY {
  double a = 0.0;
  double b = 1.0;
  int component = 1;
};

using GoalFunctional = std::variant<PointValue, DomainAverage, BoundaryFlux, LineSegmentY>;

std::string describe(const GoalFunctional& j);

/// Vector of J(phi_i) over all nodal basis functions (interleaved components).
/// Throws std::invalid_argument if the functional's support leaves the mesh.
Eigen::VectorXd assemble_functional(const Mesh& mesh, const GoalFunctional& j, int components);

/// J(u) for a finite element function; exact for (bi)linear u.
double eval_functional(const GoalFunctional& j, const FEFunction& u);

/// J(u) for a general field. Cell and edge integrals use `mesh` with
/// higher-order rules; segment integrals use composite Gauss on [a, b].
double eval_functional(const GoalFunctional& j, const JetField& u, const Mesh& mesh);

}  // namespace ritz

#endif  // RITZ_FUNCTIONAL_HPP
