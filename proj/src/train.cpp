#include "ritz/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "ritz/checkpoint.hpp"
#include "ritz/field.hpp"
#include "ritz/mesh.hpp"
#include "ritz/sampling.hpp"
#include "ritz/studies.hpp"

namespace ritz {

std::string to_string(StopReason r) {
  return r == StopReason::MaxEpochs ? "MaxEpochs" : "EstimatorBelowTol";
}

Certifier::Certifier(const RunConfig& cfg) : cfg_(cfg), data_(make_problem(cfg.problem)) {
  mesh_ = build_mesh(data_.domain, cfg.adjoint_level);
  try {
    if (data_.is_stokes()) {
      StokesSolution adj = solve_stokes_stabilized(mesh_, data_.goal, true);
      z_ = std::make_unique<FEFunction>(std::move(adj.velocity));
      q_ = std::make_unique<FEFunction>(std::move(adj.pressure));
      est_.emplace<StokesEstimator>(*z_, *q_, data_.f);
    } else {
      z_ = std::make_unique<FEFunction>(solve_adjoint_laplace(mesh_, data_.goal));
      est_.emplace<LaplaceEstimator>(*z_, data_.scalar_f());
    }
  } catch (const SolverError& e) {
    throw TrainingError(std::string("adjoint solve failed: ") + e.what());
  }
  ++adjoint_solves_;
  const bool cell_goal = std::holds_alternative<DomainAverage>(data_.goal) ||
                         std::holds_alternative<BoundaryFlux>(data_.goal);
  fmesh_ = cell_goal ? build_mesh(data_.domain, std::max(cfg.adjoint_level, 6)) : mesh_;
  j_ref_ = cfg.j_ref ? cfg.j_ref : std::optional<double>(reference_value(cfg.problem).value);
}

EstimatorReport Certifier::operator()(const Network& net, long epoch, double loss) const {
  const NetworkField field(net);
  EstimatorReport r;
  r.epoch = epoch;
  r.loss = loss;
  r.adjoint_level = cfg_.adjoint_level;
  r.j_net = eval_functional(data_.goal, field, *fmesh_);
  if (const auto* e = std::get_if<LaplaceEstimator>(&est_)) r.eta = (*e)(field);
  else r.eta = std::get<StokesEstimator>(est_)(field);
  r.j_ref = j_ref_;
  r.complete();
  return r;
}

namespace {

SampleSet draw(const RunConfig& cfg, const Domain& dom, long epoch) {
  // Resampled sets use seeds derived from the run seed and the epoch.
  const std::uint64_t seed = epoch == 0 ? cfg.seed : cfg.seed ^ (0x9E3779B97F4A7C15ull * std::uint64_t(epoch));
  return sample(dom, cfg.n_in, cfg.n_bnd, seed);
}

void write_outputs(const RunConfig& cfg, const TrainingLog& log) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "log.csv");
    write_log_csv(os, log);
  }
  save_checkpoint((dir / "checkpoint.dat").string(), log.network);
  {
    std::ofstream os(dir / "summary.txt");
    write_summary(os, log);
  }
  std::ofstream os(dir / "config.txt");
  write_config(os, cfg);
  if (!os) throw std::runtime_error("cannot write outputs to '" + cfg.output_dir + "'");
}

}  // namespace

TrainingLog train(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };

  const Certifier certify(cfg);
  const ProblemData& data = certify.problem();
  Network net = init_network(cfg.arch, cfg.seed);
  SampleSet samples = draw(cfg, data.domain, 0);
  Loss loss = Loss::make(cfg.loss_kind, samples, data, cfg.penalty);
  AdamState adam(net.params.size(), cfg.adam);

  TrainingLog log;
  Eigen::VectorXd grad;
  double last_loss = 0.0;
  for (long epoch = 0; epoch < cfg.epochs_max; ++epoch) {
    if (cfg.resample_every > 0 && epoch > 0 && epoch % cfg.resample_every == 0) {
      samples = draw(cfg, data.domain, epoch);
      loss = Loss::make(cfg.loss_kind, samples, data, cfg.penalty);
    }
    last_loss = loss.value_and_gradient(net, grad);
    if (!std::isfinite(last_loss) || !grad.allFinite())
      throw TrainingError("non-finite loss or gradient at epoch " + std::to_string(epoch) +
                          " (loss " + std::to_string(last_loss) + ")");

    if (epoch % cfg.estimate_every == 0) {
      EstimatorReport r = certify(net, epoch, last_loss);
      r.wall_ms = elapsed_ms();
      log.rows.push_back(r);
      if (cfg.stop_tol && std::abs(r.eta) < *cfg.stop_tol) {
        log.stop_reason = StopReason::EstimatorBelowTol;
        log.stop_epoch = epoch;
        log.final = r;
        break;
      }
    }
    adam_step(adam, net.params, grad);
    log.stop_epoch = epoch + 1;
  }
  if (log.stop_reason == StopReason::MaxEpochs) {
    log.final = certify(net, log.stop_epoch, loss.value(net));
    log.final.wall_ms = elapsed_ms();
  }
  log.network = std::move(net);
  log.adjoint_solves = certify.adjoint_solves();
  if (!cfg.output_dir.empty()) write_outputs(cfg, log);
  return log;
}

EstimatorReport estimate_checkpoint(const Network& net, const RunConfig& cfg) {
  if (!(net.arch == cfg.arch)) throw ConfigError("checkpoint architecture differs from the config");
  const Certifier certify(cfg);
  const SampleSet samples = draw(cfg, certify.problem().domain, 0);
  const Loss loss = Loss::make(cfg.loss_kind, samples, certify.problem(), cfg.penalty);
  return certify(net, 0, loss.value(net));
}

void write_log_csv(std::ostream& os, const TrainingLog& log) {
  os << kReportHeader << '\n';
  for (const auto& r : log.rows) os << csv_row(r) << '\n';
}

void write_summary(std::ostream& os, const TrainingLog& log) {
  auto num = [](std::optional<double> v) {
    if (!v) return std::string("undefined");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return std::string(buf);
  };
  const EstimatorReport& f = log.final;
  os << "stop_reason = " << to_string(log.stop_reason) << '\n'
     << "stop_epoch = " << log.stop_epoch << '\n'
     << "checkpoints = " << log.rows.size() << '\n'
     << "adjoint_solves = " << log.adjoint_solves << '\n'
     << "adjoint_level = " << f.adjoint_level << '\n'
     << "loss = " << num(f.loss) << '\n'
     << "J_net = " << num(f.j_net) << '\n'
     << "J_ref = " << num(f.j_ref) << '\n'
     << "true_error = " << num(f.true_error) << '\n'
     << "eta = " << num(f.eta) << '\n'
     << "eff_eq = " << num(f.eff_eq) << '\n'
     << "eff_table = " << num(f.eff_table) << '\n'
     << "wall_ms = " << num(f.wall_ms) << '\n';
}

}  // namespace ritz
