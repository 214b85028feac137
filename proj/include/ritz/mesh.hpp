#ifndef RITZ_MESH_HPP
#define RITZ_MESH_HPP

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ritz/domain.hpp"

namespace ritz {

enum class CellShape { Quad, Triangle };

struct BoundaryEdge {
  int a, b;      // node ids, counter-clockwise with respect to `cell`
  int cell;      // adjacent cell
  Point normal;  // outward unit normal
  double length;
};

/// Shape functions of one cell at one reference point.
struct ShapeEval {
  int n = 0;
  std::array<double, 4> phi{};
  std::array<Point, 4> grad{};  // physical gradients
};

/// Reference-cell quadrature: points in reference coordinates, weights sum to
/// the reference measure (1 for the unit square, 1/2 for the unit triangle).
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// 2x2 Gauss (quads) or the 3-point edge-midpoint-interior rule (triangles);
/// exact for the products of (bi)linear shape functions used in assembly.
const QuadratureRule& assembly_rule(CellShape shape);
/// Higher-order rule for error norms and field functionals.
const QuadratureRule& accurate_rule(CellShape shape);
/// Gauss-Legendre on [0, 1].
QuadratureRule gauss_legendre_01(int npts);

class CellLocator;

/// Conforming mesh of quadrilaterals (parallelograms) or triangles. Cells are
/// affine images of the reference cell, so Jacobians are constant per cell.
class Mesh {
 public:
  Mesh(Domain domain, CellShape shape, int level, std::vector<Point> nodes,
       std::vector<std::array<int, 4>> cells);
  ~Mesh();
  Mesh(Mesh&&) noexcept;
  Mesh& operator=(Mesh&&) noexcept;

  const Domain& domain() const { return domain_; }
  CellShape shape() const { return shape_; }
  int level() const { return level_; }
  int vertices_per_cell() const { return shape_ == CellShape::Quad ? 4 : 3; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(int i) const { return nodes_[std::size_t(i)]; }
  const std::array<int, 4>& cell(int c) const { return cells_[std::size_t(c)]; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  bool is_boundary_node(int i) const { return boundary_node_[std::size_t(i)] != 0; }

  /// Largest cell diameter.
  double h() const { return h_; }
  /// Largest edge length (the side length on structured quad meshes).
  double max_edge() const { return max_edge_; }
  double cell_diameter(int c) const { return diameter_[std::size_t(c)]; }

  /// |det J| of the reference-to-physical map.
  double jacobian_det(int c) const;
  Point to_physical(int c, const Point& ref) const;
  Point to_reference(int c, const Point& x) const;
  ShapeEval shape_at(int c, const Point& ref) const;
  bool reference_inside(const Point& ref, double tol) const;

  /// Cell containing x (closed cells, tolerance tol in reference coordinates).
  std::optional<std::pair<int, Point>> locate(const Point& x, double tol = 1e-10) const;

  /// Reference coordinates of a point on a boundary edge.
  Point edge_reference(const BoundaryEdge& e, double t) const;

 private:
  void finalize();

  Domain domain_;
  CellShape shape_;
  int level_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<char> boundary_node_;
  std::vector<double> diameter_;
  std::vector<Eigen::Matrix2d> jac_;
  std::vector<Eigen::Matrix2d> jac_inv_t_;
  double h_ = 0.0;
  double max_edge_ = 0.0;
  std::unique_ptr<CellLocator> locator_;
};

/// LShape and UnitSquare: structured Q1 meshes of side 2^-level (LShape has
/// 3 * 4^level cells). UnitDisc: a 24-gon triangulation refined `level`
/// times by midpoint subdivision, new boundary nodes projected onto the circle.
std::shared_ptr<const Mesh> build_mesh(const Domain& domain, int level);

/// `$nodes / id x y / $cells / id n1 n2 n3 [n4] / $bedges / n1 n2 nx ny`
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace ritz

#endif  // RITZ_MESH_HPP
