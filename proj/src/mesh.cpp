#include "ritz/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/LU>

namespace ritz {

// Uniform bin grid over the mesh bounding box; each bin lists the cells
// whose bounding boxes overlap it.
class CellLocator {
 public:
  explicit CellLocator(const Mesh& mesh) {
    lo_ = mesh.nodes().front();
    hi_ = lo_;
    for (const auto& p : mesh.nodes()) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
    const Point pad = Point::Constant(1e-9 + 1e-9 * (hi_ - lo_).maxCoeff());
    lo_ -= pad;
    hi_ += pad;
    nb_ = std::max(1, int(std::ceil(std::sqrt(double(mesh.num_cells())))));
    bins_.resize(std::size_t(nb_ * nb_));
    for (int c = 0; c < int(mesh.num_cells()); ++c) {
      Point clo = mesh.node(mesh.cell(c)[0]), chi = clo;
      for (int k = 1; k < mesh.vertices_per_cell(); ++k) {
        clo = clo.cwiseMin(mesh.node(mesh.cell(c)[k]));
        chi = chi.cwiseMax(mesh.node(mesh.cell(c)[k]));
      }
      const auto [i0, j0] = bin(clo - pad);
      const auto [i1, j1] = bin(chi + pad);
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) bins_[std::size_t(i * nb_ + j)].push_back(c);
    }
  }

  const std::vector<int>* candidates(const Point& x) const {
    if ((x.array() < lo_.array()).any() || (x.array() > hi_.array()).any()) return nullptr;
    const auto [i, j] = bin(x);
    return &bins_[std::size_t(i * nb_ + j)];
  }

 private:
  std::pair<int, int> bin(const Point& x) const {
    const Point t = (x - lo_).cwiseQuotient(hi_ - lo_) * double(nb_);
    auto clampi = [this](double v) { return std::clamp(int(std::floor(v)), 0, nb_ - 1); };
    return {clampi(t.x()), clampi(t.y())};
  }

  Point lo_, hi_;
  int nb_ = 1;
  std::vector<std::vector<int>> bins_;
};

namespace {

const std::array<Point, 4> kQuadRef = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
const std::array<Point, 3> kTriRef = {Point(0, 0), Point(1, 0), Point(0, 1)};

QuadratureRule tensor_rule(const QuadratureRule& line) {
  QuadratureRule r;
  for (std::size_t i = 0; i < line.points.size(); ++i)
    for (std::size_t j = 0; j < line.points.size(); ++j) {
      r.points.emplace_back(line.points[i].x(), line.points[j].x());
      r.weights.push_back(line.weights[i] * line.weights[j]);
    }
  return r;
}

QuadratureRule triangle_rule_3() {
  QuadratureRule r;
  r.points = {Point(1.0 / 6, 1.0 / 6), Point(2.0 / 3, 1.0 / 6), Point(1.0 / 6, 2.0 / 3)};
  r.weights = {1.0 / 6, 1.0 / 6, 1.0 / 6};
  return r;
}

// Degree-4 six-point rule.
QuadratureRule triangle_rule_6() {
  const double a = 0.445948490915965, b = 0.091576213509771;
  const double wa = 0.223381589678011 / 2, wb = 0.109951743655322 / 2;
  QuadratureRule r;
  r.points = {Point(a, a), Point(1 - 2 * a, a), Point(a, 1 - 2 * a),
              Point(b, b), Point(1 - 2 * b, b), Point(b, 1 - 2 * b)};
  r.weights = {wa, wa, wa, wb, wb, wb};
  return r;
}

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::shared_ptr<const Mesh> structured_quads(const Domain& domain, int level) {
  const bool lshape = domain.kind == DomainKind::LShape;
  const int n = lshape ? (1 << (level + 1)) : (1 << level);
  const Point lo = domain.lower();
  const double step = (domain.upper().x() - lo.x()) / n;

  std::vector<int> id(std::size_t((n + 1) * (n + 1)), -1);
  std::vector<Point> nodes;
  std::vector<std::array<int, 4>> cells;
  auto node = [&](int i, int j) {
    int& k = id[std::size_t(j * (n + 1) + i)];
    if (k < 0) {
      k = int(nodes.size());
      nodes.emplace_back(lo.x() + i * step, lo.y() + j * step);
    }
    return k;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x0 = lo.x() + i * step, y0 = lo.y() + j * step;
      if (lshape && x0 >= -1e-14 && y0 >= -1e-14) continue;
      cells.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  return std::make_shared<Mesh>(domain, CellShape::Quad, level, std::move(nodes), std::move(cells));
}

std::shared_ptr<const Mesh> disc_mesh(const Domain& domain, int level) {
  // Coarse mesh: centre plus rings of 6, 12 and 24 nodes.
  const std::array<int, 3> counts = {6, 12, 24};
  const std::array<double, 3> radii = {0.38, 2.0 / 3.0, 1.0};
  std::vector<Point> nodes = {Point(0, 0)};
  std::array<int, 3> first{};
  for (int r = 0; r < 3; ++r) {
    first[r] = int(nodes.size());
    for (int k = 0; k < counts[r]; ++k) {
      const double t = 2.0 * std::numbers::pi * k / counts[r];
      nodes.emplace_back(radii[r] * std::cos(t), radii[r] * std::sin(t));
    }
  }
  std::vector<std::array<int, 4>> tris;
  auto ring = [&](int r, int k) { return first[r] + (k % counts[r]); };
  for (int k = 0; k < counts[0]; ++k) tris.push_back({0, ring(0, k), ring(0, k + 1), -1});
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < counts[r]; ++k) {
      const int a0 = ring(r, k), a1 = ring(r, k + 1);
      const int b0 = ring(r + 1, 2 * k), b1 = ring(r + 1, 2 * k + 1), b2 = ring(r + 1, 2 * k + 2);
      tris.push_back({a0, b0, b1, -1});
      tris.push_back({a0, b1, a1, -1});
      tris.push_back({a1, b1, b2, -1});
    }

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : tris)
      for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = edge_key(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      Point m = 0.5 * (nodes[std::size_t(a)] + nodes[std::size_t(b)]);
      if (count[key] == 1) m.normalize();
      nodes.push_back(m);
      return mid[key] = int(nodes.size()) - 1;
    };
    std::vector<std::array<int, 4>> fine;
    fine.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
      fine.push_back({t[0], ab, ca, -1});
      fine.push_back({ab, t[1], bc, -1});
      fine.push_back({ca, bc, t[2], -1});
      fine.push_back({ab, bc, ca, -1});
    }
    tris = std::move(fine);
  }
  return std::make_shared<Mesh>(domain, CellShape::Triangle, level, std::move(nodes), std::move(tris));
}

}  // namespace

const QuadratureRule& assembly_rule(CellShape shape) {
  static const QuadratureRule quad = tensor_rule(gauss_legendre_01(2));
  static const QuadratureRule tri = triangle_rule_3();
  return shape == CellShape::Quad ? quad : tri;
}

const QuadratureRule& accurate_rule(CellShape shape) {
  static const QuadratureRule quad = tensor_rule(gauss_legendre_01(3));
  static const QuadratureRule tri = triangle_rule_6();
  return shape == CellShape::Quad ? quad : tri;
}

QuadratureRule gauss_legendre_01(int npts) {
  QuadratureRule r;
  auto add = [&r](double x, double w) {
    r.points.emplace_back(0.5 * (1.0 + x), 0.0);
    r.weights.push_back(0.5 * w);
  };
  switch (npts) {
    case 1: add(0.0, 2.0); break;
    case 2: {
      const double x = 1.0 / std::sqrt(3.0);
      add(-x, 1.0);
      add(x, 1.0);
      break;
    }
    case 3: {
      const double x = std::sqrt(0.6);
      add(-x, 5.0 / 9);
      add(0.0, 8.0 / 9);
      add(x, 5.0 / 9);
      break;
    }
    case 5: {
      const double x1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double x2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      add(-x2, w2);
      add(-x1, w1);
      add(0.0, 128.0 / 225.0);
      add(x1, w1);
      add(x2, w2);
      break;
    }
    default: throw std::invalid_argument("gauss_legendre_01: unsupported point count");
  }
  return r;
}

Mesh::Mesh(Domain domain, CellShape shape, int level, std::vector<Point> nodes,
           std::vector<std::array<int, 4>> cells)
    : domain_(domain), shape_(shape), level_(level), nodes_(std::move(nodes)),
      cells_(std::move(cells)) {
  finalize();
}

Mesh::~Mesh() = default;
Mesh::Mesh(Mesh&&) noexcept = default;
Mesh& Mesh::operator=(Mesh&&) noexcept = default;

void Mesh::finalize() {
  const int nv = vertices_per_cell();
  jac_.resize(cells_.size());
  jac_inv_t_.resize(cells_.size());
  diameter_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cell = cells_[c];
    const Point p0 = nodes_[std::size_t(cell[0])];
    Eigen::Matrix2d J;
    J.col(0) = nodes_[std::size_t(cell[1])] - p0;
    J.col(1) = nodes_[std::size_t(cell[nv == 4 ? 3 : 2])] - p0;
    if (J.determinant() <= 0) {
      if (nv == 4) throw std::invalid_argument("quadrilateral cells must be counter-clockwise");
      std::swap(cell[1], cell[2]);
      J.col(0) = nodes_[std::size_t(cell[1])] - p0;
      J.col(1) = nodes_[std::size_t(cell[2])] - p0;
    }
    jac_[c] = J;
    jac_inv_t_[c] = J.inverse().transpose();
    double diam = 0.0;
    for (int a = 0; a < nv; ++a)
      for (int b = a + 1; b < nv; ++b)
        diam = std::max(diam, (nodes_[std::size_t(cell[a])] - nodes_[std::size_t(cell[b])]).norm());
    diameter_[c] = diam;
    h_ = std::max(h_, diam);
  }

  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // key -> (count, cell)
  for (std::size_t c = 0; c < cells_.size(); ++c)
    for (int e = 0; e < nv; ++e) {
      const int a = cells_[c][e], b = cells_[c][(e + 1) % nv];
      max_edge_ = std::max(max_edge_, (nodes_[std::size_t(a)] - nodes_[std::size_t(b)]).norm());
      auto& entry = edges[edge_key(a, b)];
      ++entry.first;
      entry.second = int(c);
    }
  boundary_node_.assign(nodes_.size(), 0);
  for (std::size_t c = 0; c < cells_.size(); ++c)
    for (int e = 0; e < nv; ++e) {
      const int a = cells_[c][e], b = cells_[c][(e + 1) % nv];
      if (edges[edge_key(a, b)].first != 1) continue;
      const Point d = nodes_[std::size_t(b)] - nodes_[std::size_t(a)];
      boundary_edges_.push_back({a, b, int(c), Point(d.y(), -d.x()).normalized(), d.norm()});
      boundary_node_[std::size_t(a)] = boundary_node_[std::size_t(b)] = 1;
    }
  locator_ = std::make_unique<CellLocator>(*this);
}

double Mesh::jacobian_det(int c) const { return std::abs(jac_[std::size_t(c)].determinant()); }

Point Mesh::to_physical(int c, const Point& ref) const {
  return node(cells_[std::size_t(c)][0]) + jac_[std::size_t(c)] * ref;
}

Point Mesh::to_reference(int c, const Point& x) const {
  return jac_inv_t_[std::size_t(c)].transpose() * (x - node(cells_[std::size_t(c)][0]));
}

bool Mesh::reference_inside(const Point& r, double tol) const {
  if (shape_ == CellShape::Quad)
    return r.x() >= -tol && r.y() >= -tol && r.x() <= 1 + tol && r.y() <= 1 + tol;
  return r.x() >= -tol && r.y() >= -tol && r.x() + r.y() <= 1 + tol;
}

ShapeEval Mesh::shape_at(int c, const Point& r) const {
  ShapeEval s;
  std::array<Point, 4> gref;
  if (shape_ == CellShape::Quad) {
    const double x = r.x(), y = r.y();
    s.n = 4;
    s.phi = {(1 - x) * (1 - y), x * (1 - y), x * y, (1 - x) * y};
    gref = {Point(-(1 - y), -(1 - x)), Point(1 - y, -x), Point(y, x), Point(-y, 1 - x)};
  } else {
    s.n = 3;
    s.phi = {1 - r.x() - r.y(), r.x(), r.y(), 0.0};
    gref = {Point(-1, -1), Point(1, 0), Point(0, 1), Point(0, 0)};
  }
  const Eigen::Matrix2d& JiT = jac_inv_t_[std::size_t(c)];
  for (int k = 0; k < s.n; ++k) s.grad[std::size_t(k)] = JiT * gref[std::size_t(k)];
  return s;
}

std::optional<std::pair<int, Point>> Mesh::locate(const Point& x, double tol) const {
  const auto* cand = locator_->candidates(x);
  if (!cand) return std::nullopt;
  for (int c : *cand) {
    const Point r = to_reference(c, x);
    if (reference_inside(r, tol)) return std::make_pair(c, r);
  }
  return std::nullopt;
}

Point Mesh::edge_reference(const BoundaryEdge& e, double t) const {
  const auto& cell = cells_[std::size_t(e.cell)];
  Point ra, rb;
  for (int k = 0; k < vertices_per_cell(); ++k) {
    const Point ref = shape_ == CellShape::Quad ? kQuadRef[std::size_t(k)] : kTriRef[std::size_t(k)];
    if (cell[std::size_t(k)] == e.a) ra = ref;
    if (cell[std::size_t(k)] == e.b) rb = ref;
  }
  return ra + t * (rb - ra);
}

std::shared_ptr<const Mesh> build_mesh(const Domain& domain, int level) {
  if (level < 0) throw std::invalid_argument("mesh level must be >= 0");
  if (domain.kind == DomainKind::UnitDisc) return disc_mesh(domain, level);
  return structured_quads(domain, level);
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << "$nodes\n";
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    os << i << ' ' << mesh.nodes()[i].x() << ' ' << mesh.nodes()[i].y() << '\n';
  os << "$cells\n";
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    os << c;
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) os << ' ' << mesh.cell(int(c))[std::size_t(k)];
    os << '\n';
  }
  os << "$bedges\n";
  for (const auto& e : mesh.boundary_edges())
    os << e.a << ' ' << e.b << ' ' << e.normal.x() + 0.0 << ' ' << e.normal.y() + 0.0 << '\n';
}

}  // namespace ritz
