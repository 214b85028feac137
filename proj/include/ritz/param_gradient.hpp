#ifndef RITZ_PARAM_GRADIENT_HPP
#define RITZ_PARAM_GRADIENT_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "ritz/autodiff.hpp"
#include "ritz/network.hpp"

namespace ritz {

/// A batch of evaluation points (one per column) and whether the objective
/// reads spatial gradients there.
struct PointGroup {
  Eigen::MatrixXd x;
  bool with_gradient = true;
};

/// Network jets over one PointGroup in a scalar type chosen by the caller
/// (double for plain evaluation, ad::Var while recording).
template <class T>
class JetSet {
 public:
  JetSet(int c, int d, Eigen::Index n, bool with_gradient)
      : c_(c), d_(with_gradient ? d : 0), n_(n), value_(std::size_t(c * n)),
        grad_(std::size_t(c * n * d_)) {}

  Eigen::Index size() const { return n_; }
  int components() const { return c_; }
  bool has_gradient() const { return d_ > 0; }

  const T& value(Eigen::Index k, int i = 0) const { return value_[vi(k, i)]; }
  const T& grad(Eigen::Index k, int i, int j) const { return grad_[gi(k, i, j)]; }
  T& value(Eigen::Index k, int i = 0) { return value_[vi(k, i)]; }
  T& grad(Eigen::Index k, int i, int j) { return grad_[gi(k, i, j)]; }

 private:
  std::size_t vi(Eigen::Index k, int i) const { return std::size_t(k * c_ + i); }
  std::size_t gi(Eigen::Index k, int i, int j) const {
    return std::size_t((k * c_ + i) * d_ + j);
  }

  int c_, d_;
  Eigen::Index n_;
  std::vector<T> value_;
  std::vector<T> grad_;
};

namespace detail {

template <class T, class Leaf>
JetSet<T> to_jetset(const JetBatch& jb, Leaf&& leaf) {
  const int c = int(jb.value.rows());
  const int d = int(jb.grad.size());
  JetSet<T> js(c, d, jb.size(), d > 0);
  for (Eigen::Index k = 0; k < jb.size(); ++k)
    for (int i = 0; i < c; ++i) {
      js.value(k, i) = leaf(jb.value(i, k));
      for (int j = 0; j < d; ++j) js.grad(k, i, j) = leaf(jb.grad[j](i, k));
    }
  return js;
}

}  // namespace detail

/// Objective value at the current parameters. `objective` is a generic
/// callable `T(const std::vector<JetSet<T>>&)` over the groups in order.
template <class Objective>
double evaluate_objective(const Network& net, std::span<const PointGroup> groups,
                          const Objective& objective) {
  std::vector<JetSet<double>> jets;
  jets.reserve(groups.size());
  for (const auto& g : groups)
    jets.push_back(detail::to_jetset<double>(eval_batch(net, g.x, g.with_gradient),
                                             [](double v) { return v; }));
  return objective(jets);
}

/// Exact gradient of the objective with respect to the network parameters.
///
/// The objective's algebra on top of the network outputs is recorded on a
/// reverse tape whose leaves are the output values and spatial gradients; the
/// leaf adjoints are then pulled back through each ForwardPass. Groups are
/// accumulated in index order so the result is reproducible bit for bit.
template <class Objective>
double param_gradient(const Network& net, std::span<const PointGroup> groups,
                      const Objective& objective, Eigen::VectorXd& grad) {
  std::vector<ForwardPass> passes;
  passes.reserve(groups.size());
  for (const auto& g : groups) passes.emplace_back(net, g.x, g.with_gradient);

  ad::Tape tape;
  std::vector<JetSet<ad::Var>> jets;
  jets.reserve(groups.size());
  for (const auto& p : passes)
    jets.push_back(detail::to_jetset<ad::Var>(p.output(),
                                              [&tape](double v) { return tape.variable(v); }));

  const ad::Var out = objective(jets);
  const std::vector<double> adj = tape.gradient(out);
  auto adjoint_of = [&adj](const ad::Var& v) { return v.index() >= 0 ? adj[v.index()] : 0.0; };

  grad = Eigen::VectorXd::Zero(Eigen::Index(net.arch.parameter_count()));
  for (std::size_t gidx = 0; gidx < passes.size(); ++gidx) {
    const JetBatch& o = passes[gidx].output();
    const auto& js = jets[gidx];
    JetBatch cot;
    cot.value.resizeLike(o.value);
    cot.grad.resize(o.grad.size());
    for (auto& g : cot.grad) g.resizeLike(o.value);
    for (Eigen::Index k = 0; k < o.size(); ++k)
      for (int i = 0; i < js.components(); ++i) {
        cot.value(i, k) = adjoint_of(js.value(k, i));
        for (std::size_t j = 0; j < cot.grad.size(); ++j)
          cot.grad[j](i, k) = adjoint_of(js.grad(k, i, int(j)));
      }
    passes[gidx].pullback(cot, grad);
  }
  return out.value();
}

/// Central differences, one parameter at a time.
template <class Objective>
Eigen::VectorXd finite_diff_param_gradient(const Network& net,
                                           std::span<const PointGroup> groups,
                                           const Objective& objective, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  Network probe = net;
  Eigen::VectorXd g(net.params.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double p0 = net.params[i];
    probe.params[i] = p0 + step;
    const double up = evaluate_objective(probe, groups, objective);
    probe.params[i] = p0 - step;
    const double down = evaluate_objective(probe, groups, objective);
    probe.params[i] = p0;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

}  // namespace ritz

#endif  // RITZ_PARAM_GRADIENT_HPP
