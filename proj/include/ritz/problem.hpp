#ifndef RITZ_PROBLEM_HPP
#define RITZ_PROBLEM_HPP

#include <optional>
#include <string>

#include "ritz/domain.hpp"
#include "ritz/fe_function.hpp"
#include "ritz/functional.hpp"

namespace ritz {

enum class ProblemKind { LaplaceLShape, StokesDisc, LaplaceSquareManufactured };

std::string to_string(ProblemKind kind);
ProblemKind parse_problem(const std::string& s);

/// Right-hand side, geometry and goal functional of one test problem.
struct ProblemData {
  ProblemKind kind;
  Domain domain;
  int components = 1;
  VectorFunction f;
  JetFunction exact;  // empty when no closed form is known
  GoalFunctional goal;

  bool is_stokes() const { return components == 2; }
  ScalarFunction scalar_f() const;
};

ProblemData make_problem(ProblemKind kind);

// Manufactured Laplace solution sin(pi x) sin(pi y) on the unit square.
double manufactured_u(const Point& x);
SpatialJet manufactured_jet(const Point& x);
double manufactured_f(const Point& x);

// Rotating Stokes flow on the unit disc: v = cos(pi r^2 / 2) (y, -x) with
// pressure 4 cos(pi r^2 / 2); the forcing is -Laplace v + grad p.
Eigen::Vector2d stokes_velocity(const Point& x);
SpatialJet stokes_velocity_jet(const Point& x);
double stokes_pressure(const Point& x);
Eigen::Vector2d stokes_forcing(const Point& x);

}  // namespace ritz

#endif  // RITZ_PROBLEM_HPP
