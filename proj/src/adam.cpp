#include "ritz/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace ritz {

void AdamOptions::validate() const {
  if (!(lr > 0) || !(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1) || !(eps > 0))
    throw std::invalid_argument("invalid Adam hyperparameters");
  if (!(decay_gamma > 0) || decay_every < 0) throw std::invalid_argument("invalid learning-rate decay");
}

double AdamOptions::rate_at(long t) const {
  if (decay_every <= 0) return lr;
  return lr * std::pow(decay_gamma, double(t / decay_every));
}

void adam_step(AdamState& s, Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad) {
  if (params.size() != grad.size() || s.m.size() != grad.size() || s.v.size() != grad.size())
    throw std::invalid_argument("adam_step: length mismatch");
  const AdamOptions& o = s.options;
  const double lr = o.rate_at(s.t);
  ++s.t;
  s.m = o.beta1 * s.m + (1.0 - o.beta1) * grad;
  s.v = o.beta2 * s.v + (1.0 - o.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(o.beta1, double(s.t));
  const double c2 = 1.0 - std::pow(o.beta2, double(s.t));
  params.array() -= lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + o.eps);
}

}  // namespace ritz
