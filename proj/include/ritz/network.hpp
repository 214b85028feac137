#ifndef RITZ_NETWORK_HPP
#define RITZ_NETWORK_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ritz {

enum class ArchKind { FFNet, ResNet };
enum class Activation { ELU, ReLUCubed };

std::string to_string(ArchKind kind);
std::string to_string(Activation act);
ArchKind parse_arch_kind(const std::string& s);
Activation parse_activation(const std::string& s);

/// Network topology. For FFNet `depth` is the number of hidden layers; for
/// ResNet it is the number of block layers and must be even (two per block).
struct Architecture {
  ArchKind kind = ArchKind::FFNet;
  int input_dim = 2;
  int output_dim = 1;
  int hidden_width = 20;
  int depth = 2;
  Activation activation = Activation::ELU;

  /// Throws std::invalid_argument on an inconsistent descriptor.
  void validate() const;
  std::size_t parameter_count() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// One affine map inside the flat parameter vector. The weight matrix is
/// stored row-major (rows = fan_out) at `offset`, the bias follows it.
struct LayerSlice {
  std::size_t offset;
  int rows;
  int cols;

  std::size_t weight_size() const { return std::size_t(rows) * cols; }
  std::size_t bias_offset() const { return offset + weight_size(); }
  std::size_t end() const { return bias_offset() + rows; }
};

/// Layer-major parameter layout:
///   FFNet:  hidden_1 .. hidden_L, output
///   ResNet: lift (d -> H, affine only), block layers 1 .. L, output
std::vector<LayerSlice> layer_layout(const Architecture& arch);

struct Network {
  Architecture arch;
  Eigen::VectorXd params;
};

/// Glorot-uniform weights, zero biases.
Network init_network(const Architecture& arch, std::uint64_t seed);

// Activation and its first two derivatives. max(x^3, 0) has zero first and
// second derivative at the origin; ELU'' is taken from the left at 0.
template <class T>
T activate(Activation act, const T& x) {
  using std::exp;
  if (act == Activation::ELU) return x >= 0 ? x : T(exp(x) - 1.0);
  return x > 0 ? T(x * x * x) : T(0.0 * x);
}

inline double activate_d1(Activation act, double x) {
  if (act == Activation::ELU) return x >= 0 ? 1.0 : std::exp(x);
  return x > 0 ? 3.0 * x * x : 0.0;
}

inline double activate_d2(Activation act, double x) {
  if (act == Activation::ELU) return x >= 0 ? 0.0 : std::exp(x);
  return x > 0 ? 6.0 * x : 0.0;
}

/// Pointwise evaluation, generic in the scalar so that forward-mode types
/// (e.g. Eigen::AutoDiffScalar) can be pushed through the same recurrence.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> evaluate(
    const Network& net, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto& arch = net.arch;
  const auto layers = layer_layout(arch);

  auto affine = [&](const LayerSlice& s, const Vec& in) {
    Eigen::Map<const RowMat> W(net.params.data() + s.offset, s.rows, s.cols);
    Vec out(s.rows);
    for (int i = 0; i < s.rows; ++i) {
      Scalar acc = Scalar(net.params[s.bias_offset() + i]);
      for (int j = 0; j < s.cols; ++j) acc += W(i, j) * in[j];
      out[i] = acc;
    }
    return out;
  };
  auto sigma = [&](Vec v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = activate(arch.activation, v[i]);
    return v;
  };

  Vec v;
  if (arch.kind == ArchKind::FFNet) {
    v = x;
    for (int l = 0; l < arch.depth; ++l) v = sigma(affine(layers[l], v));
  } else {
    v = affine(layers[0], x);
    for (int l = 0; l < arch.depth; l += 2) {
      Vec inner = sigma(affine(layers[1 + l], v));
      v = v + sigma(affine(layers[2 + l], inner));
    }
  }
  return affine(layers.back(), v);
}

Eigen::VectorXd eval(const Network& net, const Eigen::VectorXd& x);

/// Value and spatial Jacobian at one point.
struct SpatialJet {
  Eigen::VectorXd value;  // c
  Eigen::MatrixXd grad;   // c x d, grad(i, j) = d u_i / d x_j
};

/// Values and spatial Jacobians at a batch of points (one point per column).
struct JetBatch {
  Eigen::MatrixXd value;              // c x N
  std::vector<Eigen::MatrixXd> grad;  // d entries of c x N; empty if not requested

  Eigen::Index size() const { return value.cols(); }
  SpatialJet at(Eigen::Index k) const;
};

/// Batched forward pass that keeps what the reverse sweep needs.
///
/// Value and the d spatial tangents are propagated together as one stacked
/// matrix [v | t_1 | ... | t_d] per layer, so every affine map is a single
/// product. `pullback` runs the reverse sweep over that stacked computation,
/// i.e. reverse-over-forward differentiation with respect to the parameters.
class ForwardPass {
 public:
  ForwardPass(const Network& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
              bool with_gradient);

  const JetBatch& output() const { return output_; }

  /// Accumulates d/dparams of <cotangent, output> into `grad`. The cotangent
  /// must have the shape of output(); its grad part may be empty only if the
  /// pass was run without gradients.
  void pullback(const JetBatch& cotangent, Eigen::Ref<Eigen::VectorXd> grad) const;

 private:
  struct Record {
    Eigen::MatrixXd input;  // stacked input of the affine map
    Eigen::MatrixXd pre;    // stacked output of the affine map
  };

  const Network& net_;
  std::vector<LayerSlice> layers_;
  Eigen::Index npts_;
  int ntan_;
  std::vector<Record> records_;  // one per affine map, in layout order
  JetBatch output_;
};

JetBatch eval_batch(const Network& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                    bool with_gradient = true);

SpatialJet eval_jet(const Network& net, const Eigen::VectorXd& x);

}  // namespace ritz

#endif  // RITZ_NETWORK_HPP
