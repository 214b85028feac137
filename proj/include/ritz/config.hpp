#ifndef RITZ_CONFIG_HPP
#define RITZ_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ritz/adam.hpp"
#include "ritz/loss.hpp"
#include "ritz/network.hpp"
#include "ritz/problem.hpp"

namespace ritz {

struct RunConfig {
  ProblemKind problem = ProblemKind::LaplaceLShape;
  Architecture arch;
  PenaltyParams penalty;
  long n_in = 4096;
  long n_bnd = 1024;
  std::uint64_t seed = 1;
  long epochs_max = 8000;
  long estimate_every = 100;
  int adjoint_level = 2;
  std::optional<double> stop_tol;
  LossKind loss_kind = LossKind::DeepRitz;
  AdamOptions adam;
  long resample_every = 0;        // 0: one sample set for the whole run
  std::optional<double> j_ref;    // skips the reference computation when set
  std::string output_dir;         // empty: nothing written

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Problem-dependent defaults: ResNet H=20 L=2 ReLUCubed and adjoint level 2
/// for the Laplace problems, FFNet H=10 L=20 ELU and level 3 for Stokes.
RunConfig default_config(ProblemKind problem);

/// `key = value` lines, `#` starts a comment. The `problem` key selects the
/// defaults, every other key overrides one field. Unknown or repeated keys,
/// and values that do not parse, raise ConfigError naming the line.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// Every key with its effective value, in parse_config syntax.
void write_config(std::ostream& os, const RunConfig& cfg);

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& s);

}  // namespace ritz

#endif  // RITZ_CONFIG_HPP
