#ifndef RITZ_FE_FUNCTION_HPP
#define RITZ_FE_FUNCTION_HPP

#include <functional>
#include <iosfwd>
#include <memory>

#include <Eigen/Core>

#include "ritz/mesh.hpp"
#include "ritz/network.hpp"

namespace ritz {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Eigen::VectorXd(const Point&)>;
using JetFunction = std::function<SpatialJet(const Point&)>;

/// Nodal (Q1 or P1) finite element function; vector-valued functions store
/// their components interleaved per node.
struct FEFunction {
  std::shared_ptr<const Mesh> mesh;
  int components = 1;
  Eigen::VectorXd coeffs;

  static FEFunction zero(std::shared_ptr<const Mesh> mesh, int components = 1);

  double& at(int node, int comp = 0) { return coeffs[node * components + comp]; }
  double at(int node, int comp = 0) const { return coeffs[node * components + comp]; }

  SpatialJet evaluate_in_cell(int cell, const Point& ref) const;
  /// Throws std::out_of_range if x is not in the mesh.
  SpatialJet evaluate(const Point& x) const;
};

FEFunction interpolate(std::shared_ptr<const Mesh> mesh, const VectorFunction& f, int components);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// L2 norm and H1 seminorm of (u - exact), by the higher-order cell rule.
ErrorNorms error_norms(const FEFunction& u, const JetFunction& exact);

/// n . grad u_comp at the two Gauss points of a boundary edge, using the
/// gradient of the adjacent cell.
Eigen::Vector2d normal_derivative(const FEFunction& u, const BoundaryEdge& edge, int comp = 0);
/// Same, with the edge given by its end nodes; throws if it is not a boundary edge.
Eigen::Vector2d normal_derivative(const FEFunction& u, int a, int b, int comp = 0);

/// CSV `node,value[,value2]`.
void write_fe_function_csv(std::ostream& os, const FEFunction& u);

}  // namespace ritz

#endif  // RITZ_FE_FUNCTION_HPP
