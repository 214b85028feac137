#ifndef RITZ_FIELD_HPP
#define RITZ_FIELD_HPP

#include <Eigen/Core>

#include "ritz/fe_function.hpp"
#include "ritz/network.hpp"

namespace ritz {

/// Anything that yields values and spatial gradients at a batch of points.
/// Estimators and functionals accept a JetField so that networks, finite
/// element functions and analytic fields are interchangeable.
class JetField {
 public:
  virtual ~JetField() = default;
  virtual int components() const = 0;
  virtual JetBatch evaluate(const Eigen::Matrix2Xd& x) const = 0;
};

class NetworkField final : public JetField {
 public:
  explicit NetworkField(const Network& net) : net_(net) {}
  int components() const override { return net_.arch.output_dim; }
  JetBatch evaluate(const Eigen::Matrix2Xd& x) const override { return eval_batch(net_, x, true); }

 private:
  const Network& net_;
};

class FunctionField final : public JetField {
 public:
  FunctionField(JetFunction f, int components) : f_(std::move(f)), components_(components) {}
  int components() const override { return components_; }
  JetBatch evaluate(const Eigen::Matrix2Xd& x) const override;

 private:
  JetFunction f_;
  int components_;
};

/// Point-locating evaluation of a finite element function.
class FEField final : public JetField {
 public:
  explicit FEField(const FEFunction& u) : u_(u) {}
  int components() const override { return u_.components; }
  JetBatch evaluate(const Eigen::Matrix2Xd& x) const override;

 private:
  const FEFunction& u_;
};

JetBatch collect_jets(const std::vector<SpatialJet>& jets, int components);

}  // namespace ritz

#endif  // RITZ_FIELD_HPP
