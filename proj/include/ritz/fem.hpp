#ifndef RITZ_FEM_HPP
#define RITZ_FEM_HPP

#include <memory>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/SparseCore>

#include "ritz/fe_function.hpp"
#include "ritz/functional.hpp"
#include "ritz/mesh.hpp"

namespace ritz {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (relative residual " + format(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  static std::string format(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", r);
    return buf;
  }
  double residual_;
};

struct SolveInfo {
  long iterations = 0;
  double residual = 0.0;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Full (no boundary conditions) Laplace stiffness matrix and load vector.
struct LaplaceSystem {
  SparseMatrix stiffness;
  Eigen::VectorXd load;
};

LaplaceSystem assemble_laplace(const Mesh& mesh, const ScalarFunction& f);

/// Boundary mass matrix <u, v> over the boundary edges (2-point Gauss).
SparseMatrix assemble_boundary_mass(const Mesh& mesh);

/// (grad u, grad v) = (f, v) with u = 0 on the boundary. CG with a diagonal
/// preconditioner to relative residual 1e-12.
FEFunction solve_laplace_dirichlet(std::shared_ptr<const Mesh> mesh, const ScalarFunction& f,
                                   SolveInfo* info = nullptr);

/// (grad u, grad v) + lambda <u, v> = (f, v) over the full space.
FEFunction solve_laplace_robin(std::shared_ptr<const Mesh> mesh, const ScalarFunction& f,
                               double lambda, SolveInfo* info = nullptr);

/// (grad v, grad z) = J(v) for all v with zero boundary values.
FEFunction solve_adjoint_laplace(std::shared_ptr<const Mesh> mesh, const GoalFunctional& j,
                                 SolveInfo* info = nullptr);

struct StokesSolution {
  FEFunction velocity;  // 2 components
  FEFunction pressure;  // zero mean
  double residual = 0.0;
};

using StokesRhs = std::variant<VectorFunction, GoalFunctional>;

/// Equal-order P1/P1 (or Q1/Q1) Stokes with pressure stabilization h_T^2 (grad p, grad xi),
/// homogeneous Dirichlet velocity and zero-mean pressure (Lagrange multiplier).
///
///   primal:   (grad v, grad phi) - (p, div phi) + (div v, xi) + h^2 (grad p, grad xi) = (f, phi)
///   adjoint:  (grad z, grad phi) + (q, div phi) - (div z, xi) + h^2 (grad q, grad xi) = J(phi)
///
/// The adjoint matrix is the transpose of the primal one. Solved by sparse LU.
StokesSolution solve_stokes_stabilized(std::shared_ptr<const Mesh> mesh, const StokesRhs& rhs,
                                       bool adjoint);

}  // namespace ritz

#endif  // RITZ_FEM_HPP
