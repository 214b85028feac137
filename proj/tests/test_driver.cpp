#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ritz/checkpoint.hpp"
#include "ritz/config.hpp"
#include "ritz/studies.hpp"
#include "ritz/train.hpp"

using namespace ritz;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

RunConfig small_laplace() {
  return parse(
      "problem = LaplaceLShape\n"
      "H = 6  # narrow net\n"
      "n_in = 256\nn_bnd = 64\nepochs_max = 30\nestimate_every = 10\n"
      "j_ref = 0.10236\n");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// log.csv without the trailing wall-time column.
std::string strip_wall(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  while (std::getline(is, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const RunConfig s = parse("problem = StokesDisc\n");
  CHECK(s.arch.kind == ArchKind::FFNet);
  CHECK(s.arch.output_dim == 2);
  CHECK(s.adjoint_level == 3);
  CHECK(s.penalty.alpha == 100.0);
  const RunConfig l = parse("# comment only\nlambda = 250  \nstop_tol = 0.02\n");
  CHECK(l.problem == ProblemKind::LaplaceLShape);
  CHECK(l.penalty.lambda == 250.0);
  CHECK(*l.stop_tol == 0.02);
  CHECK(l.arch.parameter_count() == 921);
  CHECK(l.n_in == 4096);
  CHECK(l.estimate_every == 100);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("learning_rate = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("lr = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("lr = 1e-3\nlr = 1e-3\n"), ConfigError);
  CHECK_THROWS_AS(parse("estimate_every = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("epochs_max = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem = StokesDisc\nc = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem = Poisson\n"), ConfigError);
  CHECK_THROWS_AS(parse("just a line\n"), ConfigError);
}

TEST_CASE("config round trip") {
  const RunConfig a = small_laplace();
  std::ostringstream os;
  write_config(os, a);
  const RunConfig b = parse(os.str());
  std::ostringstream os2;
  write_config(os2, b);
  CHECK(os.str() == os2.str());
}

TEST_CASE("single epoch run") {
  RunConfig cfg = small_laplace();
  cfg.epochs_max = 1;
  const TrainingLog log = train(cfg);
  CHECK(log.rows.size() == 1);
  CHECK(log.rows[0].epoch == 0);
  CHECK(log.stop_reason == StopReason::MaxEpochs);
  CHECK(log.adjoint_solves == 1);
}

TEST_CASE("training is reproducible and writes its outputs") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ritz_driver_test";
  fs::remove_all(dir);
  RunConfig cfg = small_laplace();
  cfg.output_dir = (dir / "a").string();
  const TrainingLog a = train(cfg);
  cfg.output_dir = (dir / "b").string();
  const TrainingLog b = train(cfg);
  CHECK(a.rows.size() == 3);
  CHECK(a.adjoint_solves == 1);
  CHECK(strip_wall(slurp(dir / "a" / "log.csv")) == strip_wall(slurp(dir / "b" / "log.csv")));
  CHECK(slurp(dir / "a" / "checkpoint.dat") == slurp(dir / "b" / "checkpoint.dat"));
  CHECK(slurp(dir / "a" / "log.csv").starts_with("epoch,loss,J_net,J_ref,true_error,eta,eff_eq,eff_table,wall_ms\n"));
  CHECK(slurp(dir / "a" / "summary.txt").find("stop_reason = MaxEpochs") != std::string::npos);
  for (std::size_t i = 1; i < a.rows.size(); ++i) CHECK(a.rows[i].epoch > a.rows[i - 1].epoch);

  // The saved network reproduces the final certification exactly.
  const Network saved = load_checkpoint((dir / "a" / "checkpoint.dat").string());
  const EstimatorReport r = estimate_checkpoint(saved, cfg);
  CHECK(r.eta == a.final.eta);
  CHECK(r.j_net == a.final.j_net);
  fs::remove_all(dir);
}

TEST_CASE("estimator stopping") {
  RunConfig cfg = small_laplace();
  cfg.stop_tol = 1e6;  // any estimate is below this
  const TrainingLog log = train(cfg);
  CHECK(log.stop_reason == StopReason::EstimatorBelowTol);
  CHECK(log.stop_epoch == 0);
  CHECK(log.rows.size() == 1);
  CHECK(log.final.eta == log.rows.back().eta);
}

TEST_CASE("strong-form and resampled runs") {
  RunConfig cfg = small_laplace();
  cfg.loss_kind = LossKind::StrongForm;
  cfg.resample_every = 5;
  cfg.epochs_max = 40;
  const TrainingLog log = train(cfg);
  CHECK(log.rows.back().loss < log.rows.front().loss);
}

TEST_CASE("non-finite loss aborts") {
  RunConfig cfg = small_laplace();
  cfg.adam.lr = 1e300;
  cfg.epochs_max = 5;
  CHECK_THROWS_AS(train(cfg), TrainingError);
}

TEST_CASE("architecture mismatch in post-hoc estimation") {
  const RunConfig cfg = small_laplace();
  const Network other = init_network({ArchKind::FFNet, 2, 1, 3, 2, Activation::ELU}, 1);
  CHECK_THROWS_AS(estimate_checkpoint(other, cfg), ConfigError);
}

TEST_CASE("reference values") {
  CHECK(reference_value(ProblemKind::StokesDisc).value == doctest::Approx(-0.3183098861837907).epsilon(1e-15));
  CHECK(reference_value(ProblemKind::LaplaceSquareManufactured).value ==
        doctest::Approx(4.0 / (std::numbers::pi * std::numbers::pi)));
  const ReferenceResult r = reference_value(ProblemKind::LaplaceLShape, 4, 7);
  CHECK(r.values.size() == 4);
  CHECK(r.value >= 0.1004);
  CHECK(r.value <= 0.1044);
}

TEST_CASE("Monte-Carlo study plumbing") {
  const Architecture a{ArchKind::ResNet, 2, 1, 8, 2, Activation::ELU};
  Network c{a, Eigen::VectorXd::Zero(Eigen::Index(a.parameter_count()))};
  c.params[c.params.size() - 1] = 0.2;  // constant network: MC is exact
  const RateStudy st = mc_convergence(ProblemKind::LaplaceLShape, c, {10, 100}, 3);
  for (const auto& r : st.rows) CHECK(r.mean_abs_dev < 1e-10);
  CHECK_FALSE(mc_convergence(ProblemKind::LaplaceLShape, c, {50}, 2).slope);
  CHECK(*loglog_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(mc_convergence(ProblemKind::StokesDisc, c, {10}, 1), std::invalid_argument);
}
