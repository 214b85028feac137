#ifndef RITZ_DWR_HPP
#define RITZ_DWR_HPP

#include <optional>
#include <string>

#include <Eigen/Core>

#include "ritz/fe_function.hpp"
#include "ritz/field.hpp"
#include "ritz/sampling.hpp"

namespace ritz {

/// Laplace estimator for a fixed adjoint z_H:
///   eta = (f, z_H) - (grad u, grad z_H) + <d_n z_H, u>
/// The field is sampled at the adjoint mesh's assembly Gauss points and at
/// two Gauss points per boundary edge; everything depending on z_H and f is
/// precomputed, so one estimate costs one batched evaluation.
class LaplaceEstimator {
 public:
  LaplaceEstimator(const FEFunction& z, const ScalarFunction& f);
  double operator()(const JetField& u) const;

 private:
  Eigen::Matrix2Xd cell_points_;
  Eigen::Matrix2Xd weighted_grad_z_;  // w_q grad z_H(x_q)
  Eigen::Matrix2Xd edge_points_;
  Eigen::VectorXd weighted_dnz_;      // w_q d_n z_H(x_q)
  double fz_ = 0.0;                    // (f, z_H)
};

/// Stokes estimator for a fixed adjoint pair (z_H, q_H):
///   eta = (f, z_H) - (grad v, grad z_H) - (div v, q_H) + <d_n z_H + q_H n, v>
class StokesEstimator {
 public:
  StokesEstimator(const FEFunction& z, const FEFunction& q, const VectorFunction& f);
  double operator()(const JetField& v) const;

 private:
  Eigen::Matrix2Xd cell_points_;
  Eigen::Matrix4Xd weighted_grad_z_;  // w_q (dz0/dx, dz0/dy, dz1/dx, dz1/dy)
  Eigen::VectorXd weighted_q_;
  Eigen::Matrix2Xd edge_points_;
  Eigen::Matrix2Xd weighted_traction_;  // w_q (d_n z_H + q_H n)
  double fz_ = 0.0;
};

double estimate_laplace(const JetField& u, const FEFunction& z, const ScalarFunction& f);
double estimate_stokes(const JetField& v, const FEFunction& z, const FEFunction& q,
                       const VectorFunction& f);

/// Sample-based estimator
///   |Omega|/N_in sum (f z - grad u . grad z) + |dOmega|/N_bnd sum d_n z u
/// with the normals stored in the sample set. z must be evaluable at every sample.
double estimate_mc(const JetField& u, const JetField& z, const SampleSet& s, const ScalarFunction& f);

struct Effectivity {
  double eq;     // eta / error
  double table;  // error / eta
};

/// Both effectivity conventions; nullopt when |error| < 1e-14 or eta == 0.
std::optional<Effectivity> effectivity(double eta, double true_error);

struct EstimatorReport {
  long epoch = 0;
  double loss = 0.0;
  double eta = 0.0;
  double j_net = 0.0;
  std::optional<double> j_ref;
  std::optional<double> true_error;
  std::optional<double> eff_eq;
  std::optional<double> eff_table;
  int adjoint_level = 0;
  double wall_ms = 0.0;

  /// Fills true_error and the effectivities from j_ref.
  void complete();
};

inline constexpr const char* kReportHeader =
    "epoch,loss,J_net,J_ref,true_error,eta,eff_eq,eff_table,wall_ms";

/// One CSV row in kReportHeader order; undefined entries are written as `nan`.
std::string csv_row(const EstimatorReport& r);

}  // namespace ritz

#endif  // RITZ_DWR_HPP
