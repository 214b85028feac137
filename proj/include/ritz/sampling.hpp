#ifndef RITZ_SAMPLING_HPP
#define RITZ_SAMPLING_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>

#include <Eigen/Core>

#include "ritz/domain.hpp"

namespace ritz {

/// Monte-Carlo quadrature nodes. Points are stored one per column.
struct SampleSet {
  Domain domain;
  Eigen::Matrix2Xd interior;
  Eigen::Matrix2Xd boundary;
  Eigen::Matrix2Xd boundary_normals;  // outward unit normal at each boundary node
  double area = 0.0;
  double perimeter = 0.0;
  std::uint64_t seed = 0;

  Eigen::Index n_in() const { return interior.cols(); }
  Eigen::Index n_bnd() const { return boundary.cols(); }
};

/// Interior nodes i.i.d. uniform on the domain, boundary nodes i.i.d. uniform
/// in arc length. Interior and boundary draws come from separate streams.
SampleSet sample(const Domain& domain, Eigen::Index n_in, Eigen::Index n_bnd, std::uint64_t seed);

/// (measure / N) * sum_i f(x_i), reduced in index order.
double mc_integrate(const Eigen::Matrix2Xd& points, double measure,
                    const std::function<double(const Point&)>& integrand);

/// CSV `x,y,tag` with tag in {in, bnd}.
void write_samples_csv(std::ostream& os, const SampleSet& s);

}  // namespace ritz

#endif  // RITZ_SAMPLING_HPP
