#include "ritz/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ritz/rng.hpp"

namespace ritz {

SampleSet sample(const Domain& domain, Eigen::Index n_in, Eigen::Index n_bnd, std::uint64_t seed) {
  if (n_in < 1 || n_bnd < 1) throw std::invalid_argument("sample counts must be >= 1");
  SampleSet s{domain, Eigen::Matrix2Xd(2, n_in), Eigen::Matrix2Xd(2, n_bnd),
              Eigen::Matrix2Xd(2, n_bnd), domain.area(), domain.perimeter(), seed};

  CounterRng in_rng(seed, streams::kInterior);
  const Point lo = domain.lower(), hi = domain.upper();
  for (Eigen::Index k = 0; k < n_in; ++k) {
    if (domain.kind == DomainKind::UnitDisc) {
      const double r = std::sqrt(in_rng.uniform());
      const double t = 2.0 * std::numbers::pi * in_rng.uniform();
      s.interior.col(k) = Point(r * std::cos(t), r * std::sin(t));
      // r = sqrt(U) < 1 always, but guard the rounding edge anyway.
      if (!domain.contains(s.interior.col(k))) --k;
      continue;
    }
    Point x;
    do {
      x = {in_rng.uniform(lo.x(), hi.x()), in_rng.uniform(lo.y(), hi.y())};
    } while (!domain.contains(x));
    s.interior.col(k) = x;
  }

  CounterRng bnd_rng(seed, streams::kBoundary);
  const double per = domain.perimeter();
  for (Eigen::Index k = 0; k < n_bnd; ++k) {
    const Point x = domain.boundary_point(per * bnd_rng.uniform());
    s.boundary.col(k) = x;
    s.boundary_normals.col(k) = domain.outward_normal(x);
  }
  return s;
}

double mc_integrate(const Eigen::Matrix2Xd& points, double measure,
                    const std::function<double(const Point&)>& integrand) {
  if (points.cols() == 0) throw std::invalid_argument("mc_integrate: no points");
  if (!(measure > 0)) throw std::invalid_argument("mc_integrate: measure must be positive");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < points.cols(); ++k) sum += integrand(points.col(k));
  return measure / double(points.cols()) * sum;
}

void write_samples_csv(std::ostream& os, const SampleSet& s) {
  os << "x,y,tag\n";
  char buf[96];
  for (Eigen::Index k = 0; k < s.n_in(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,in\n", s.interior(0, k), s.interior(1, k));
    os << buf;
  }
  for (Eigen::Index k = 0; k < s.n_bnd(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,bnd\n", s.boundary(0, k), s.boundary(1, k));
    os << buf;
  }
}

}  // namespace ritz
