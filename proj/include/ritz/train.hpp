#ifndef RITZ_TRAIN_HPP
#define RITZ_TRAIN_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ritz/config.hpp"
#include "ritz/dwr.hpp"
#include "ritz/fem.hpp"

namespace ritz {

enum class StopReason { MaxEpochs, EstimatorBelowTol };
std::string to_string(StopReason r);

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Goal-oriented certification of networks for one run configuration: the
/// adjoint is solved once in the constructor, every call evaluates J(net),
/// the DWR estimate and, if a reference value is known, the effectivities.
class Certifier {
 public:
  explicit Certifier(const RunConfig& cfg);

  EstimatorReport operator()(const Network& net, long epoch, double loss) const;

  const ProblemData& problem() const { return data_; }
  std::optional<double> j_ref() const { return j_ref_; }
  int adjoint_solves() const { return adjoint_solves_; }
  const FEFunction& adjoint() const { return *z_; }

 private:
  RunConfig cfg_;
  ProblemData data_;
  std::shared_ptr<const Mesh> mesh_;      // adjoint mesh
  std::shared_ptr<const Mesh> fmesh_;     // mesh for goal functionals needing cell quadrature
  std::unique_ptr<FEFunction> z_;
  std::unique_ptr<FEFunction> q_;
  std::variant<std::monostate, LaplaceEstimator, StokesEstimator> est_;
  std::optional<double> j_ref_;
  int adjoint_solves_ = 0;
};

struct TrainingLog {
  std::vector<EstimatorReport> rows;
  StopReason stop_reason = StopReason::MaxEpochs;
  long stop_epoch = 0;         // epoch of the parameters in `network`
  EstimatorReport final;       // certification of `network`
  Network network;
  int adjoint_solves = 0;
};

/// Adam on the fixed-seed loss; estimates every `estimate_every` epochs (the
/// estimate of epoch k uses the parameters before update k). Stops when
/// |eta| < stop_tol, or after epochs_max updates. With a non-empty
/// output_dir, writes log.csv, checkpoint.dat, summary.txt and config.txt.
/// Throws TrainingError on a non-finite loss.
TrainingLog train(const RunConfig& cfg);

/// Certification of a saved network, as `train` reports it.
EstimatorReport estimate_checkpoint(const Network& net, const RunConfig& cfg);

void write_log_csv(std::ostream& os, const TrainingLog& log);
void write_summary(std::ostream& os, const TrainingLog& log);

}  // namespace ritz

#endif  // RITZ_TRAIN_HPP
