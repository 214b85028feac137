#ifndef RITZ_ADAM_HPP
#define RITZ_ADAM_HPP

#include <Eigen/Core>

namespace ritz {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Step decay lr * gamma^(t / every); off when every == 0.
  double decay_gamma = 1.0;
  long decay_every = 0;

  void validate() const;
  double rate_at(long t) const;
};

struct AdamState {
  AdamOptions options;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;

  AdamState() = default;
  AdamState(Eigen::Index n, AdamOptions opt)
      : options(opt), m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

/// One bias-corrected Adam update of `params` in place. Throws
/// std::invalid_argument on a length mismatch.
void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad);

}  // namespace ritz

#endif  // RITZ_ADAM_HPP
