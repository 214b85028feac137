// Command line front end: training, certification and the FE/MC studies.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ritz/checkpoint.hpp"
#include "ritz/config.hpp"
#include "ritz/studies.hpp"
#include "ritz/train.hpp"

namespace {

using namespace ritz;

std::vector<int> parse_levels(const std::string& s) {
  // "3..6" or "3,4,5,6"
  std::vector<int> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
    for (int l = a; l <= b; ++l) out.push_back(l);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void print_rate_study(const RateStudy& st, const char* label) {
  std::printf("# reference %s = %.12g\n", label, st.reference);
  std::printf("N,mean_abs_dev\n");
  for (const auto& r : st.rows) std::printf("%ld,%.6e\n", r.n, r.mean_abs_dev);
  if (st.slope) std::printf("slope = %.4f\n", *st.slope);
  else std::printf("slope = undefined\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep Ritz training with goal-oriented error certification"};
  app.require_subcommand(1);

  std::string config_path;
  auto* train_cmd = app.add_subcommand("train", "train a network from a config file");
  train_cmd->add_option("config", config_path, "config file")->required();

  std::string problem_name;
  int ref_lo = 6, ref_hi = 9;
  auto* ref_cmd = app.add_subcommand("reference", "reference value of the goal functional");
  ref_cmd->add_option("problem", problem_name, "LaplaceLShape | StokesDisc | LaplaceSquareManufactured")->required();
  ref_cmd->add_option("--lo", ref_lo, "coarsest FE level");
  ref_cmd->add_option("--hi", ref_hi, "finest FE level");

  std::string levels_arg;
  auto* fem_cmd = app.add_subcommand("fem-verify", "FE convergence against the closed-form solution");
  fem_cmd->add_option("problem", problem_name)->required();
  fem_cmd->add_option("levels", levels_arg, "e.g. 3..6 or 3,4,5")->required();

  std::string sweep_problem = "LaplaceLShape";
  std::vector<double> lambdas = {10, 100, 1000, 10000};
  int sweep_level = 5;
  auto* sweep_cmd = app.add_subcommand("lambda-sweep", "H1 distance of Robin-penalized to Dirichlet FE solutions");
  sweep_cmd->add_option("--problem", sweep_problem);
  sweep_cmd->add_option("--lambdas", lambdas)->delimiter(',');
  sweep_cmd->add_option("--level", sweep_level);

  std::string mc_problem = "LaplaceLShape";
  std::vector<long> n_list = {100, 1000, 10000, 100000};
  int seeds = 20;
  std::uint64_t net_seed = 7;
  bool estimator = false;
  auto* mc_cmd = app.add_subcommand("mc-rate", "Monte-Carlo convergence of the loss of a fixed random network");
  mc_cmd->add_option("--problem", mc_problem);
  mc_cmd->add_option("--n", n_list)->delimiter(',');
  mc_cmd->add_option("--seeds", seeds);
  mc_cmd->add_option("--net-seed", net_seed);
  mc_cmd->add_flag("--estimator", estimator, "compare estimate_mc with the mesh-quadrature estimator instead");

  std::string checkpoint_path;
  auto* est_cmd = app.add_subcommand("estimate", "certify a saved network");
  est_cmd->add_option("checkpoint", checkpoint_path)->required();
  est_cmd->add_option("config", config_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      const RunConfig cfg = load_config(config_path);
      const TrainingLog log = train(cfg);
      write_summary(std::cout, log);
    } else if (*ref_cmd) {
      const ReferenceResult r = reference_value(parse_problem(problem_name), ref_lo, ref_hi);
      for (std::size_t i = 0; i < r.levels.size(); ++i)
        std::printf("level %d: %.12f\n", r.levels[i], r.values[i]);
      std::printf("J_ref = %.12f +- %.2e\n", r.value, r.band);
    } else if (*fem_cmd) {
      const auto rows = fem_verify(parse_problem(problem_name), parse_levels(levels_arg));
      std::printf("level,h,dofs,l2,h1,l2_rate,h1_rate\n");
      for (const auto& r : rows)
        std::printf("%d,%.6e,%ld,%.6e,%.6e,%.4f,%.4f\n", r.level, r.h, r.dofs, r.l2, r.h1, r.l2_rate, r.h1_rate);
    } else if (*sweep_cmd) {
      const auto rows = lambda_sweep(parse_problem(sweep_problem), lambdas, sweep_level);
      std::printf("lambda,h1_distance,ratio\n");
      for (std::size_t i = 0; i < rows.size(); ++i)
        std::printf("%g,%.6e,%.4f\n", rows[i].lambda, rows[i].distance,
                    i ? rows[i].distance / rows[i - 1].distance : std::nan(""));
    } else if (*mc_cmd) {
      const ProblemKind kind = parse_problem(mc_problem);
      const Network net = init_network(default_config(kind).arch, net_seed);
      if (estimator) print_rate_study(mc_estimator_convergence(kind, net, n_list, seeds), "eta");
      else print_rate_study(mc_convergence(kind, net, n_list, seeds), "loss");
    } else if (*est_cmd) {
      const RunConfig cfg = load_config(config_path);
      const Network net = load_checkpoint(checkpoint_path);
      const EstimatorReport r = estimate_checkpoint(net, cfg);
      std::cout << kReportHeader << '\n' << csv_row(r) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
