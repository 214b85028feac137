#include <doctest.h>

#include "ritz/adam.hpp"

using namespace ritz;

TEST_CASE("zero gradient leaves parameters unchanged") {
  AdamState s(3, {});
  Eigen::VectorXd p(3);
  p << 1, -2, 3;
  const Eigen::VectorXd p0 = p;
  adam_step(s, p, Eigen::VectorXd::Zero(3));
  CHECK(p == p0);
  CHECK(s.t == 1);
}

TEST_CASE("first step with unit gradient") {
  AdamState s(1, {});
  Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
  adam_step(s, p, Eigen::VectorXd::Ones(1));
  CHECK(p[0] == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-14));
}

TEST_CASE("constant gradients: step size tends to lr and is scale free") {
  for (double scale : {1e-3, 1.0, 1e3}) {
    AdamState s(1, {});
    Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
    double last = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const double before = p[0];
      adam_step(s, p, Eigen::VectorXd::Constant(1, scale));
      last = before - p[0];
    }
    CHECK(last == doctest::Approx(1e-3).epsilon(1e-4));
    CHECK((s.v.array() >= 0).all());
  }
}

TEST_CASE("direction is invariant under gradient scaling") {
  AdamState a(2, {}), b(2, {});
  Eigen::VectorXd pa = Eigen::VectorXd::Zero(2), pb = pa;
  const Eigen::Vector2d g(0.3, -1.1);
  adam_step(a, pa, g);
  adam_step(b, pb, 1000.0 * g);
  CHECK((pa - pb).norm() < 1e-9);
}

TEST_CASE("length mismatch and bad options") {
  AdamState s(2, {});
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(adam_step(s, p, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  AdamOptions o;
  o.beta1 = 1.0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
}

TEST_CASE("step decay") {
  AdamOptions o;
  o.decay_gamma = 0.5;
  o.decay_every = 10;
  CHECK(o.rate_at(0) == 1e-3);
  CHECK(o.rate_at(9) == 1e-3);
  CHECK(o.rate_at(10) == 5e-4);
  CHECK(o.rate_at(25) == 2.5e-4);
}
