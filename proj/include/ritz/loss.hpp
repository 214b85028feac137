#ifndef RITZ_LOSS_HPP
#define RITZ_LOSS_HPP

#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ritz/network.hpp"
#include "ritz/param_gradient.hpp"
#include "ritz/problem.hpp"
#include "ritz/sampling.hpp"

namespace ritz {

struct PenaltyParams {
  double lambda = 500.0;  // boundary penalty
  double alpha = 100.0;   // divergence penalty (Stokes only)
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LossKind { DeepRitz, StrongForm };

/// Step of the five-point Laplacian in the strong-form loss.
inline constexpr double kStencilStep = 1e-4;

/// Penalized Dirichlet energy by Monte-Carlo quadrature:
///   |Omega|/N_in  sum (|grad u|^2 / 2 - f u)  +  |dOmega|/N_bnd  sum lambda/2 u^2
struct LaplaceEnergyObjective {
  std::vector<double> f_in;
  double area, perimeter, lambda;

  template <class T>
  T operator()(const std::vector<JetSet<T>>& g) const {
    const auto& in = g[0];
    const auto& bnd = g[1];
    T vol(0.0);
    for (Eigen::Index k = 0; k < in.size(); ++k) {
      const T& u = in.value(k);
      const T& ux = in.grad(k, 0, 0);
      const T& uy = in.grad(k, 0, 1);
      vol = vol + (0.5 * (ux * ux + uy * uy) - f_in[std::size_t(k)] * u);
    }
    T sur(0.0);
    for (Eigen::Index k = 0; k < bnd.size(); ++k) sur = sur + bnd.value(k) * bnd.value(k);
    return (area / double(in.size())) * vol +
           (perimeter / double(bnd.size())) * (0.5 * lambda) * sur;
  }
};

/// Penalized Stokes energy; divergence from the trace of the Jacobian.
///   1/2 |grad v|^2 - f.v + alpha/2 (div v)^2 in the interior, lambda/2 |v|^2 on the boundary
struct StokesEnergyObjective {
  std::vector<Eigen::Vector2d> f_in;
  double area, perimeter, lambda, alpha;

  template <class T>
  T operator()(const std::vector<JetSet<T>>& g) const {
    const auto& in = g[0];
    const auto& bnd = g[1];
    T vol(0.0);
    for (Eigen::Index k = 0; k < in.size(); ++k) {
      T grad2(0.0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) grad2 = grad2 + in.grad(k, i, j) * in.grad(k, i, j);
      const T div = in.grad(k, 0, 0) + in.grad(k, 1, 1);
      const auto& f = f_in[std::size_t(k)];
      vol = vol + (0.5 * grad2 - (f.x() * in.value(k, 0) + f.y() * in.value(k, 1)) +
                   0.5 * alpha * div * div);
    }
    T sur(0.0);
    for (Eigen::Index k = 0; k < bnd.size(); ++k)
      sur = sur + bnd.value(k, 0) * bnd.value(k, 0) + bnd.value(k, 1) * bnd.value(k, 1);
    return (area / double(in.size())) * vol +
           (perimeter / double(bnd.size())) * (0.5 * lambda) * sur;
  }
};

/// Collocation loss 1/N_in sum |-Lap u - f|^2 + lambda/N_bnd sum u^2, with the
/// Laplacian from the five-point stencil. Group 0 holds five points per
/// interior node (centre, +x, -x, +y, -y).
struct StrongResidualObjective {
  std::vector<double> f_center;
  double step, lambda;

  template <class T>
  T operator()(const std::vector<JetSet<T>>& g) const {
    const auto& st = g[0];
    const auto& bnd = g[1];
    const Eigen::Index n = st.size() / 5;
    const double inv_h2 = 1.0 / (step * step);
    T vol(0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
      const T lap = ((st.value(5 * k + 1) + st.value(5 * k + 2)) +
                     (st.value(5 * k + 3) + st.value(5 * k + 4)) - 4.0 * st.value(5 * k)) *
                    inv_h2;
      const T r = -lap - f_center[std::size_t(k)];
      vol = vol + r * r;
    }
    T sur(0.0);
    for (Eigen::Index k = 0; k < bnd.size(); ++k) sur = sur + bnd.value(k) * bnd.value(k);
    return vol * (1.0 / double(n)) + sur * (lambda / double(bnd.size()));
  }
};

/// Five stencil points per interior sample. A stencil that would leave the
/// domain has its centre moved inward by whole steps until it fits.
Eigen::Matrix2Xd stencil_points(const SampleSet& s, double step);

/// A loss bound to its sample points and right-hand side values.
class Loss {
 public:
  using Objective = std::variant<LaplaceEnergyObjective, StokesEnergyObjective, StrongResidualObjective>;

  static Loss laplace_energy(const SampleSet& s, const ProblemData& data, const PenaltyParams& p);
  static Loss stokes_energy(const SampleSet& s, const ProblemData& data, const PenaltyParams& p);
  static Loss strong_residual(const SampleSet& s, const ProblemData& data, const PenaltyParams& p,
                              double step = kStencilStep);
  static Loss make(LossKind kind, const SampleSet& s, const ProblemData& data, const PenaltyParams& p);

  double value(const Network& net) const;
  /// Loss value; `grad` receives the exact parameter gradient.
  double value_and_gradient(const Network& net, Eigen::VectorXd& grad) const;
  Eigen::VectorXd finite_diff_gradient(const Network& net, double step) const;

  const std::vector<PointGroup>& groups() const { return groups_; }

 private:
  Loss(std::vector<PointGroup> groups, Objective obj) : groups_(std::move(groups)), obj_(std::move(obj)) {}

  std::vector<PointGroup> groups_;
  Objective obj_;
};

double laplace_energy_loss(const Network& net, const SampleSet& s, const ProblemData& data,
                           const PenaltyParams& p);
double stokes_energy_loss(const Network& net, const SampleSet& s, const ProblemData& data,
                          const PenaltyParams& p);
double strong_residual_loss(const Network& net, const SampleSet& s, const ProblemData& data,
                            const PenaltyParams& p);

}  // namespace ritz

#endif  // RITZ_LOSS_HPP
