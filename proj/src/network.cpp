#include "ritz/network.hpp"

#include <stdexcept>

#include "ritz/rng.hpp"

namespace ritz {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> weights(const Eigen::VectorXd& p, const LayerSlice& s) {
  return {p.data() + s.offset, s.rows, s.cols};
}

Eigen::Map<const Eigen::VectorXd> bias(const Eigen::VectorXd& p, const LayerSlice& s) {
  return {p.data() + s.bias_offset(), s.rows};
}

// Applies the activation to a stacked block [v | t_1 | ... | t_k].
Eigen::MatrixXd activate_stacked(Activation act, const Eigen::MatrixXd& z,
                                 Eigen::Index n, int ntan) {
  Eigen::MatrixXd a(z.rows(), z.cols());
  const Eigen::MatrixXd zv = z.leftCols(n);
  a.leftCols(n) = zv.unaryExpr([act](double x) { return activate(act, x); });
  if (ntan > 0) {
    const Eigen::ArrayXXd d1 =
        zv.unaryExpr([act](double x) { return activate_d1(act, x); }).array();
    for (int j = 0; j < ntan; ++j)
      a.middleCols((j + 1) * n, n) = (d1 * z.middleCols((j + 1) * n, n).array()).matrix();
  }
  return a;
}

// Reverse of activate_stacked: cotangent of the activation output -> of its input.
Eigen::MatrixXd activate_stacked_adjoint(Activation act, const Eigen::MatrixXd& z,
                                         const Eigen::MatrixXd& abar, Eigen::Index n,
                                         int ntan) {
  Eigen::MatrixXd zbar(z.rows(), z.cols());
  const Eigen::MatrixXd zv = z.leftCols(n);
  const Eigen::ArrayXXd d1 =
      zv.unaryExpr([act](double x) { return activate_d1(act, x); }).array();
  zbar.leftCols(n) = (d1 * abar.leftCols(n).array()).matrix();
  if (ntan > 0) {
    const Eigen::ArrayXXd d2 =
        zv.unaryExpr([act](double x) { return activate_d2(act, x); }).array();
    for (int j = 0; j < ntan; ++j) {
      const auto zt = z.middleCols((j + 1) * n, n).array();
      const auto at = abar.middleCols((j + 1) * n, n).array();
      zbar.leftCols(n).array() += d2 * zt * at;
      zbar.middleCols((j + 1) * n, n) = (d1 * at).matrix();
    }
  }
  return zbar;
}

}  // namespace

std::string to_string(ArchKind kind) { return kind == ArchKind::FFNet ? "FFNet" : "ResNet"; }

std::string to_string(Activation act) {
  return act == Activation::ELU ? "ELU" : "ReLUCubed";
}

ArchKind parse_arch_kind(const std::string& s) {
  if (s == "FFNet") return ArchKind::FFNet;
  if (s == "ResNet") return ArchKind::ResNet;
  throw std::invalid_argument("unknown architecture kind '" + s + "'");
}

Activation parse_activation(const std::string& s) {
  if (s == "ELU") return Activation::ELU;
  if (s == "ReLUCubed") return Activation::ReLUCubed;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

void Architecture::validate() const {
  if (input_dim < 1 || output_dim < 1 || hidden_width < 1 || depth < 1)
    throw std::invalid_argument("architecture dimensions must be positive");
  if (kind == ArchKind::ResNet && depth % 2 != 0)
    throw std::invalid_argument("ResNet depth must be even");
}

std::vector<LayerSlice> layer_layout(const Architecture& arch) {
  arch.validate();
  std::vector<LayerSlice> out;
  std::size_t offset = 0;
  auto push = [&](int rows, int cols) {
    out.push_back({offset, rows, cols});
    offset = out.back().end();
  };
  const int H = arch.hidden_width;
  push(H, arch.input_dim);  // first hidden layer (FFNet) or lift (ResNet)
  const int inner = arch.kind == ArchKind::FFNet ? arch.depth - 1 : arch.depth;
  for (int l = 0; l < inner; ++l) push(H, H);
  push(arch.output_dim, H);
  return out;
}

std::size_t Architecture::parameter_count() const { return layer_layout(*this).back().end(); }

Network init_network(const Architecture& arch, std::uint64_t seed) {
  Network net{arch, Eigen::VectorXd::Zero(Eigen::Index(arch.parameter_count()))};
  CounterRng rng(seed, streams::kInit);
  for (const auto& s : layer_layout(arch)) {
    const double a = std::sqrt(6.0 / double(s.rows + s.cols));
    for (std::size_t i = 0; i < s.weight_size(); ++i)
      net.params[Eigen::Index(s.offset + i)] = rng.uniform(-a, a);
  }
  return net;
}

Eigen::VectorXd eval(const Network& net, const Eigen::VectorXd& x) {
  return evaluate<double>(net, x);
}

SpatialJet JetBatch::at(Eigen::Index k) const {
  SpatialJet jet;
  jet.value = value.col(k);
  jet.grad.resize(value.rows(), Eigen::Index(grad.size()));
  for (std::size_t j = 0; j < grad.size(); ++j) jet.grad.col(Eigen::Index(j)) = grad[j].col(k);
  return jet;
}

ForwardPass::ForwardPass(const Network& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         bool with_gradient)
    : net_(net),
      layers_(layer_layout(net.arch)),
      npts_(x.cols()),
      ntan_(with_gradient ? net.arch.input_dim : 0) {
  const auto& arch = net.arch;
  if (x.rows() != arch.input_dim) throw std::invalid_argument("point dimension mismatch");
  const Eigen::Index n = npts_;
  const Eigen::Index width = n * (1 + ntan_);
  const Activation act = arch.activation;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(arch.input_dim, width);
  a.leftCols(n) = x;
  for (int j = 0; j < ntan_; ++j) a.row(j).segment((j + 1) * n, n).setOnes();

  records_.reserve(layers_.size());
  auto affine = [&](std::size_t l, Eigen::MatrixXd in) -> const Eigen::MatrixXd& {
    const auto& s = layers_[l];
    Eigen::MatrixXd z = weights(net.params, s) * in;
    z.leftCols(n).colwise() += bias(net.params, s);
    records_.push_back({std::move(in), std::move(z)});
    return records_.back().pre;
  };

  if (arch.kind == ArchKind::FFNet) {
    for (int l = 0; l < arch.depth; ++l) a = activate_stacked(act, affine(l, std::move(a)), n, ntan_);
  } else {
    a = affine(0, std::move(a));
    for (int l = 0; l < arch.depth; l += 2) {
      Eigen::MatrixXd inner = activate_stacked(act, affine(1 + l, a), n, ntan_);
      a += activate_stacked(act, affine(2 + l, std::move(inner)), n, ntan_);
    }
  }
  const Eigen::MatrixXd& y = affine(layers_.size() - 1, std::move(a));

  output_.value = y.leftCols(n);
  output_.grad.resize(ntan_);
  for (int j = 0; j < ntan_; ++j) output_.grad[j] = y.middleCols((j + 1) * n, n);
}

void ForwardPass::pullback(const JetBatch& cotangent, Eigen::Ref<Eigen::VectorXd> grad) const {
  const auto& arch = net_.arch;
  const Eigen::Index n = npts_;
  const Activation act = arch.activation;
  if (cotangent.value.rows() != arch.output_dim || cotangent.value.cols() != n)
    throw std::invalid_argument("cotangent shape mismatch");
  if (grad.size() != Eigen::Index(arch.parameter_count()))
    throw std::invalid_argument("gradient length mismatch");

  Eigen::MatrixXd bar(arch.output_dim, n * (1 + ntan_));
  bar.leftCols(n) = cotangent.value;
  for (int j = 0; j < ntan_; ++j) {
    if (cotangent.grad.empty())
      bar.middleCols((j + 1) * n, n).setZero();
    else
      bar.middleCols((j + 1) * n, n) = cotangent.grad[j];
  }

  // Cotangent of an affine map's output -> parameter gradient and input cotangent.
  auto affine_adjoint = [&](std::size_t l, const Eigen::MatrixXd& zbar) {
    const auto& s = layers_[l];
    const auto& rec = records_[l];
    Eigen::Map<RowMat> gW(grad.data() + s.offset, s.rows, s.cols);
    gW.noalias() += zbar * rec.input.transpose();
    grad.segment(Eigen::Index(s.bias_offset()), s.rows) += zbar.leftCols(n).rowwise().sum();
    return Eigen::MatrixXd(weights(net_.params, s).transpose() * zbar);
  };

  const std::size_t last = layers_.size() - 1;
  bar = affine_adjoint(last, bar);
  if (arch.kind == ArchKind::FFNet) {
    for (int l = arch.depth - 1; l >= 0; --l)
      bar = affine_adjoint(l, activate_stacked_adjoint(act, records_[l].pre, bar, n, ntan_));
  } else {
    for (int l = arch.depth - 2; l >= 0; l -= 2) {
      // v_out = v_in + sigma(z2), z2 = W2 sigma(z1) + b2, z1 = W1 v_in + b1
      Eigen::MatrixXd inner_bar =
          affine_adjoint(2 + l, activate_stacked_adjoint(act, records_[2 + l].pre, bar, n, ntan_));
      bar += affine_adjoint(1 + l,
                            activate_stacked_adjoint(act, records_[1 + l].pre, inner_bar, n, ntan_));
    }
    affine_adjoint(0, bar);
  }
}

JetBatch eval_batch(const Network& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                    bool with_gradient) {
  return ForwardPass(net, x, with_gradient).output();
}

SpatialJet eval_jet(const Network& net, const Eigen::VectorXd& x) {
  return eval_batch(net, x, true).at(0);
}

}  // namespace ritz
