#ifndef RITZ_AUTODIFF_HPP
#define RITZ_AUTODIFF_HPP

#include <cmath>
#include <vector>

namespace ritz::ad {

class Tape;

/// Scalar recorded on a Tape. Values created from plain doubles are constants
/// and never enter the tape.
class Var {
 public:
  Var() = default;
  Var(double v) : value_(v) {}  // NOLINT: implicit constants are the point

  double value() const { return value_; }
  int index() const { return index_; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  Var(double v, int idx, Tape* t) : value_(v), index_(idx), tape_(t) {}

  double value_ = 0.0;
  int index_ = -1;
  Tape* tape_ = nullptr;
};

/// Wengert list for reverse accumulation; every node has at most two parents.
class Tape {
 public:
  Var variable(double v) { return push(v, -1, 0.0, -1, 0.0); }

  Var push(double v, int a, double da, int b, double db) {
    nodes_.push_back({a, da, b, db});
    return {v, int(nodes_.size()) - 1, this};
  }

  /// Adjoints of every node with respect to `out`.
  std::vector<double> gradient(const Var& out) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (out.index() < 0) return adj;
    adj[out.index()] = 1.0;
    for (int i = out.index(); i >= 0; --i) {
      const Node& n = nodes_[i];
      if (adj[i] == 0.0) continue;
      if (n.a >= 0) adj[n.a] += n.da * adj[i];
      if (n.b >= 0) adj[n.b] += n.db * adj[i];
    }
    return adj;
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    int a;
    double da;
    int b;
    double db;
  };
  std::vector<Node> nodes_;
};

namespace detail {
inline Tape* tape_of(const Var& x, const Var& y) { return x.tape() ? x.tape() : y.tape(); }

inline Var binary(double v, const Var& x, double dx, const Var& y, double dy) {
  Tape* t = tape_of(x, y);
  if (!t) return Var(v);
  return t->push(v, x.index(), dx, y.index(), dy);
}

inline Var unary(double v, const Var& x, double dx) {
  if (!x.tape()) return Var(v);
  return x.tape()->push(v, x.index(), dx, -1, 0.0);
}
}  // namespace detail

inline Var operator+(const Var& x, const Var& y) {
  return detail::binary(x.value() + y.value(), x, 1.0, y, 1.0);
}
inline Var operator-(const Var& x, const Var& y) {
  return detail::binary(x.value() - y.value(), x, 1.0, y, -1.0);
}
inline Var operator*(const Var& x, const Var& y) {
  return detail::binary(x.value() * y.value(), x, y.value(), y, x.value());
}
inline Var operator/(const Var& x, const Var& y) {
  const double q = x.value() / y.value();
  return detail::binary(q, x, 1.0 / y.value(), y, -q / y.value());
}
inline Var operator-(const Var& x) { return detail::unary(-x.value(), x, -1.0); }

inline Var& operator+=(Var& x, const Var& y) { return x = x + y; }
inline Var& operator-=(Var& x, const Var& y) { return x = x - y; }
inline Var& operator*=(Var& x, const Var& y) { return x = x * y; }

inline Var sqrt(const Var& x) {
  const double s = std::sqrt(x.value());
  return detail::unary(s, x, 0.5 / s);
}
inline Var exp(const Var& x) {
  const double e = std::exp(x.value());
  return detail::unary(e, x, e);
}

}  // namespace ritz::ad

#endif  // RITZ_AUTODIFF_HPP
