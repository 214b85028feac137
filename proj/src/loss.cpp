#include "ritz/loss.hpp"

namespace ritz {

namespace {

void require_output_dim(const Network& net, int c, const char* what) {
  if (net.arch.output_dim != c || net.arch.input_dim != 2)
    throw ConfigError(std::string(what) + ": network has the wrong input/output dimension");
}

}  // namespace

Eigen::Matrix2Xd stencil_points(const SampleSet& s, double step) {
  const Domain& dom = s.domain;
  Eigen::Matrix2Xd out(2, 5 * s.n_in());
  const std::array<Point, 4> dirs = {Point(1, 0), Point(-1, 0), Point(0, 1), Point(0, -1)};
  for (Eigen::Index k = 0; k < s.n_in(); ++k) {
    Point c = s.interior.col(k);
    for (int iter = 0; iter < 8; ++iter) {
      bool moved = false;
      for (const auto& d : dirs)
        if (!dom.contains(c + step * d)) {
          c -= step * d;
          moved = true;
        }
      if (!moved) break;
    }
    out.col(5 * k) = c;
    for (int j = 0; j < 4; ++j) out.col(5 * k + 1 + j) = c + step * dirs[std::size_t(j)];
  }
  return out;
}

Loss Loss::laplace_energy(const SampleSet& s, const ProblemData& data, const PenaltyParams& p) {
  if (!(p.lambda > 0)) throw ConfigError("lambda must be positive");
  if (data.components != 1) throw ConfigError("laplace_energy_loss needs a scalar problem");
  LaplaceEnergyObjective obj{{}, s.area, s.perimeter, p.lambda};
  obj.f_in.reserve(std::size_t(s.n_in()));
  for (Eigen::Index k = 0; k < s.n_in(); ++k) obj.f_in.push_back(data.f(s.interior.col(k))[0]);
  return Loss({{s.interior, true}, {s.boundary, false}}, std::move(obj));
}

Loss Loss::stokes_energy(const SampleSet& s, const ProblemData& data, const PenaltyParams& p) {
  if (!(p.lambda > 0) || !(p.alpha > 0)) throw ConfigError("lambda and alpha must be positive");
  if (data.components != 2) throw ConfigError("stokes_energy_loss needs a vector problem");
  StokesEnergyObjective obj{{}, s.area, s.perimeter, p.lambda, p.alpha};
  obj.f_in.reserve(std::size_t(s.n_in()));
  for (Eigen::Index k = 0; k < s.n_in(); ++k) obj.f_in.push_back(data.f(s.interior.col(k)).head<2>());
  return Loss({{s.interior, true}, {s.boundary, false}}, std::move(obj));
}

Loss Loss::strong_residual(const SampleSet& s, const ProblemData& data, const PenaltyParams& p,
                           double step) {
  if (!(p.lambda > 0)) throw ConfigError("lambda must be positive");
  if (data.components != 1) throw ConfigError("strong_residual_loss needs a scalar problem");
  Eigen::Matrix2Xd st = stencil_points(s, step);
  StrongResidualObjective obj{{}, step, p.lambda};
  obj.f_center.reserve(std::size_t(s.n_in()));
  for (Eigen::Index k = 0; k < s.n_in(); ++k) obj.f_center.push_back(data.f(st.col(5 * k))[0]);
  return Loss({{std::move(st), false}, {s.boundary, false}}, std::move(obj));
}

Loss Loss::make(LossKind kind, const SampleSet& s, const ProblemData& data, const PenaltyParams& p) {
  if (kind == LossKind::StrongForm) return strong_residual(s, data, p);
  return data.is_stokes() ? stokes_energy(s, data, p) : laplace_energy(s, data, p);
}

double Loss::value(const Network& net) const {
  return std::visit(
      [&](const auto& obj) {
        using O = std::decay_t<decltype(obj)>;
        require_output_dim(net, std::is_same_v<O, StokesEnergyObjective> ? 2 : 1, "loss");
        return evaluate_objective(net, groups_, obj);
      },
      obj_);
}

double Loss::value_and_gradient(const Network& net, Eigen::VectorXd& grad) const {
  return std::visit(
      [&](const auto& obj) {
        using O = std::decay_t<decltype(obj)>;
        require_output_dim(net, std::is_same_v<O, StokesEnergyObjective> ? 2 : 1, "loss");
        return param_gradient(net, groups_, obj, grad);
      },
      obj_);
}

Eigen::VectorXd Loss::finite_diff_gradient(const Network& net, double step) const {
  return std::visit([&](const auto& obj) { return finite_diff_param_gradient(net, groups_, obj, step); },
                    obj_);
}

double laplace_energy_loss(const Network& net, const SampleSet& s, const ProblemData& data,
                           const PenaltyParams& p) {
  require_output_dim(net, 1, "laplace_energy_loss");
  return Loss::laplace_energy(s, data, p).value(net);
}

double stokes_energy_loss(const Network& net, const SampleSet& s, const ProblemData& data,
                          const PenaltyParams& p) {
  require_output_dim(net, 2, "stokes_energy_loss");
  return Loss::stokes_energy(s, data, p).value(net);
}

double strong_residual_loss(const Network& net, const SampleSet& s, const ProblemData& data,
                            const PenaltyParams& p) {
  require_output_dim(net, 1, "strong_residual_loss");
  return Loss::strong_residual(s, data, p).value(net);
}

}  // namespace ritz
