#include "ritz/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ritz {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LaplaceLShape: return "LaplaceLShape";
    case ProblemKind::StokesDisc: return "StokesDisc";
    case ProblemKind::LaplaceSquareManufactured: return "LaplaceSquareManufactured";
  }
  return "?";
}

ProblemKind parse_problem(const std::string& s) {
  if (s == "LaplaceLShape") return ProblemKind::LaplaceLShape;
  if (s == "StokesDisc") return ProblemKind::StokesDisc;
  if (s == "LaplaceSquareManufactured") return ProblemKind::LaplaceSquareManufactured;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

ScalarFunction ProblemData::scalar_f() const {
  auto fn = f;
  return [fn](const Point& x) { return fn(x)[0]; };
}

double manufactured_u(const Point& x) { return std::sin(kPi * x.x()) * std::sin(kPi * x.y()); }

SpatialJet manufactured_jet(const Point& x) {
  const double sx = std::sin(kPi * x.x()), cx = std::cos(kPi * x.x());
  const double sy = std::sin(kPi * x.y()), cy = std::cos(kPi * x.y());
  SpatialJet j{Eigen::VectorXd::Constant(1, sx * sy), Eigen::MatrixXd(1, 2)};
  j.grad << kPi * cx * sy, kPi * sx * cy;
  return j;
}

double manufactured_f(const Point& x) { return 2.0 * kPi * kPi * manufactured_u(x); }

Eigen::Vector2d stokes_velocity(const Point& x) {
  const double g = std::cos(0.5 * kPi * x.squaredNorm());
  return {g * x.y(), -g * x.x()};
}

SpatialJet stokes_velocity_jet(const Point& x) {
  const double s = x.squaredNorm();
  const double g = std::cos(0.5 * kPi * s);
  const double dg = -kPi * std::sin(0.5 * kPi * s);  // d g / d s * 2
  SpatialJet j{Eigen::VectorXd(2), Eigen::MatrixXd(2, 2)};
  j.value << g * x.y(), -g * x.x();
  // d/dx_k g = dg * x_k
  j.grad << dg * x.x() * x.y(), g + dg * x.y() * x.y(),
      -g - dg * x.x() * x.x(), -dg * x.x() * x.y();
  return j;
}

double stokes_pressure(const Point& x) { return 4.0 * std::cos(0.5 * kPi * x.squaredNorm()); }

Eigen::Vector2d stokes_forcing(const Point& x) {
  // pi cos(.) [ y r^2 pi + 4 (y - x) tan(.) , -x r^2 pi - 4 (x + y) tan(.) ],
  // written with sin instead of cos * tan so that it stays finite at r = 1.
  const double s = x.squaredNorm();
  const double c = std::cos(0.5 * kPi * s), sn = std::sin(0.5 * kPi * s);
  return {kPi * (kPi * c * x.y() * s + 4.0 * (x.y() - x.x()) * sn),
          kPi * (-kPi * c * x.x() * s - 4.0 * (x.x() + x.y()) * sn)};
}

ProblemData make_problem(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LaplaceLShape:
      return {kind, Domain{DomainKind::LShape}, 1,
              [](const Point&) { return Eigen::VectorXd::Constant(1, 1.0); }, nullptr,
              PointValue{Point(0.5, -0.5)}};
    case ProblemKind::StokesDisc:
      return {kind, Domain{DomainKind::UnitDisc}, 2,
              [](const Point& x) { return Eigen::VectorXd(stokes_forcing(x)); }, stokes_velocity_jet,
              LineSegmentY{0.0, 1.0, 1}};
    case ProblemKind::LaplaceSquareManufactured:
      return {kind, Domain{DomainKind::UnitSquare}, 1,
              [](const Point& x) { return Eigen::VectorXd::Constant(1, manufactured_f(x)); },
              manufactured_jet, DomainAverage{}};
  }
  throw std::invalid_argument("unknown problem");
}

}  // namespace ritz
