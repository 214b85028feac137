#include "ritz/field.hpp"

namespace ritz {

JetBatch collect_jets(const std::vector<SpatialJet>& jets, int components) {
  const auto n = Eigen::Index(jets.size());
  JetBatch out{Eigen::MatrixXd(components, n), {Eigen::MatrixXd(components, n), Eigen::MatrixXd(components, n)}};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.value.col(k) = jets[std::size_t(k)].value;
    out.grad[0].col(k) = jets[std::size_t(k)].grad.col(0);
    out.grad[1].col(k) = jets[std::size_t(k)].grad.col(1);
  }
  return out;
}

JetBatch FunctionField::evaluate(const Eigen::Matrix2Xd& x) const {
  std::vector<SpatialJet> jets;
  jets.reserve(std::size_t(x.cols()));
  for (Eigen::Index k = 0; k < x.cols(); ++k) jets.push_back(f_(x.col(k)));
  return collect_jets(jets, components_);
}

JetBatch FEField::evaluate(const Eigen::Matrix2Xd& x) const {
  std::vector<SpatialJet> jets;
  jets.reserve(std::size_t(x.cols()));
  for (Eigen::Index k = 0; k < x.cols(); ++k) jets.push_back(u_.evaluate(x.col(k)));
  return collect_jets(jets, u_.components);
}

}  // namespace ritz
