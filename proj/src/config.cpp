#include "ritz/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

namespace ritz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T parse_number(const std::string& s) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("not a number: '" + s + "'");
  return v;
}

// from_chars for double is missing in older libstdc++ builds.
template <>
double parse_number<double>(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s == "none") return std::nullopt;
  return parse_number<double>(s);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "none"; }

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

template <class E>
E wrap(const std::function<E(const std::string&)>& parse, const std::string& v) {
  try {
    return parse(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> table = {
      {"problem", {[](RunConfig&, const std::string&) {}, [](const RunConfig& c) { return to_string(c.problem); }}},
      {"arch",
       {[](RunConfig& c, const std::string& v) { c.arch.kind = wrap<ArchKind>(parse_arch_kind, v); },
        [](const RunConfig& c) { return to_string(c.arch.kind); }}},
      {"d", {[](RunConfig& c, const std::string& v) { c.arch.input_dim = parse_number<int>(v); },
             [](const RunConfig& c) { return std::to_string(c.arch.input_dim); }}},
      {"c", {[](RunConfig& c, const std::string& v) { c.arch.output_dim = parse_number<int>(v); },
             [](const RunConfig& c) { return std::to_string(c.arch.output_dim); }}},
      {"H", {[](RunConfig& c, const std::string& v) { c.arch.hidden_width = parse_number<int>(v); },
             [](const RunConfig& c) { return std::to_string(c.arch.hidden_width); }}},
      {"L", {[](RunConfig& c, const std::string& v) { c.arch.depth = parse_number<int>(v); },
             [](const RunConfig& c) { return std::to_string(c.arch.depth); }}},
      {"activation",
       {[](RunConfig& c, const std::string& v) { c.arch.activation = wrap<Activation>(parse_activation, v); },
        [](const RunConfig& c) { return to_string(c.arch.activation); }}},
      {"lambda", {[](RunConfig& c, const std::string& v) { c.penalty.lambda = parse_number<double>(v); },
                  [](const RunConfig& c) { return fmt(c.penalty.lambda); }}},
      {"alpha", {[](RunConfig& c, const std::string& v) { c.penalty.alpha = parse_number<double>(v); },
                 [](const RunConfig& c) { return fmt(c.penalty.alpha); }}},
      {"n_in", {[](RunConfig& c, const std::string& v) { c.n_in = parse_number<long>(v); },
                [](const RunConfig& c) { return std::to_string(c.n_in); }}},
      {"n_bnd", {[](RunConfig& c, const std::string& v) { c.n_bnd = parse_number<long>(v); },
                 [](const RunConfig& c) { return std::to_string(c.n_bnd); }}},
      {"seed", {[](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>(v); },
                [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"epochs_max", {[](RunConfig& c, const std::string& v) { c.epochs_max = parse_number<long>(v); },
                      [](const RunConfig& c) { return std::to_string(c.epochs_max); }}},
      {"estimate_every", {[](RunConfig& c, const std::string& v) { c.estimate_every = parse_number<long>(v); },
                          [](const RunConfig& c) { return std::to_string(c.estimate_every); }}},
      {"adjoint_level", {[](RunConfig& c, const std::string& v) { c.adjoint_level = parse_number<int>(v); },
                         [](const RunConfig& c) { return std::to_string(c.adjoint_level); }}},
      {"stop_tol", {[](RunConfig& c, const std::string& v) { c.stop_tol = parse_optional(v); },
                    [](const RunConfig& c) { return fmt(c.stop_tol); }}},
      {"loss_kind",
       {[](RunConfig& c, const std::string& v) { c.loss_kind = wrap<LossKind>(parse_loss_kind, v); },
        [](const RunConfig& c) { return to_string(c.loss_kind); }}},
      {"lr", {[](RunConfig& c, const std::string& v) { c.adam.lr = parse_number<double>(v); },
              [](const RunConfig& c) { return fmt(c.adam.lr); }}},
      {"beta1", {[](RunConfig& c, const std::string& v) { c.adam.beta1 = parse_number<double>(v); },
                 [](const RunConfig& c) { return fmt(c.adam.beta1); }}},
      {"beta2", {[](RunConfig& c, const std::string& v) { c.adam.beta2 = parse_number<double>(v); },
                 [](const RunConfig& c) { return fmt(c.adam.beta2); }}},
      {"eps", {[](RunConfig& c, const std::string& v) { c.adam.eps = parse_number<double>(v); },
               [](const RunConfig& c) { return fmt(c.adam.eps); }}},
      {"lr_decay_gamma", {[](RunConfig& c, const std::string& v) { c.adam.decay_gamma = parse_number<double>(v); },
                          [](const RunConfig& c) { return fmt(c.adam.decay_gamma); }}},
      {"lr_decay_every", {[](RunConfig& c, const std::string& v) { c.adam.decay_every = parse_number<long>(v); },
                          [](const RunConfig& c) { return std::to_string(c.adam.decay_every); }}},
      {"resample_every", {[](RunConfig& c, const std::string& v) { c.resample_every = parse_number<long>(v); },
                          [](const RunConfig& c) { return std::to_string(c.resample_every); }}},
      {"j_ref", {[](RunConfig& c, const std::string& v) { c.j_ref = parse_optional(v); },
                 [](const RunConfig& c) { return fmt(c.j_ref); }}},
      {"output_dir", {[](RunConfig& c, const std::string& v) { c.output_dir = v; },
                      [](const RunConfig& c) { return c.output_dir.empty() ? std::string("none") : c.output_dir; }}},
  };
  return table;
}

}  // namespace

std::string to_string(LossKind kind) { return kind == LossKind::DeepRitz ? "DeepRitz" : "StrongForm"; }

LossKind parse_loss_kind(const std::string& s) {
  if (s == "DeepRitz") return LossKind::DeepRitz;
  if (s == "StrongForm") return LossKind::StrongForm;
  throw std::invalid_argument("unknown loss kind '" + s + "'");
}

void RunConfig::validate() const {
  try {
    arch.validate();
    adam.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const ProblemData data = make_problem(problem);
  if (arch.input_dim != 2) throw ConfigError("d must be 2");
  if (arch.output_dim != data.components)
    throw ConfigError("c must be " + std::to_string(data.components) + " for " + to_string(problem));
  if (loss_kind == LossKind::StrongForm && data.is_stokes())
    throw ConfigError("the strong-form loss is only available for Laplace problems");
  if (!(penalty.lambda > 0)) throw ConfigError("lambda must be positive");
  if (data.is_stokes() && !(penalty.alpha > 0)) throw ConfigError("alpha must be positive for Stokes");
  if (n_in < 1 || n_bnd < 1) throw ConfigError("n_in and n_bnd must be positive");
  if (epochs_max < 1) throw ConfigError("epochs_max must be >= 1");
  if (estimate_every < 1) throw ConfigError("estimate_every must be >= 1");
  if (adjoint_level < 0 || adjoint_level > 10) throw ConfigError("adjoint_level must be in [0, 10]");
  if (stop_tol && !(*stop_tol > 0)) throw ConfigError("stop_tol must be positive");
  if (resample_every < 0) throw ConfigError("resample_every must be >= 0");
}

RunConfig default_config(ProblemKind problem) {
  RunConfig c;
  c.problem = problem;
  if (problem == ProblemKind::StokesDisc) {
    c.arch = {ArchKind::FFNet, 2, 2, 10, 20, Activation::ELU};
    c.penalty = {500.0, 100.0};
    c.adjoint_level = 3;
    c.epochs_max = 10000;
  } else {
    c.arch = {ArchKind::ResNet, 2, 1, 20, 2, Activation::ReLUCubed};
    c.penalty = {500.0, 0.0};
    c.adjoint_level = 2;
    c.epochs_max = 8000;
  }
  return c;
}

RunConfig parse_config(std::istream& is) {
  std::vector<std::tuple<int, std::string, std::string>> entries;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  std::optional<ProblemKind> problem;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    const auto& table = keys();
    if (std::none_of(table.begin(), table.end(), [&](const auto& k) { return k.first == key; }))
      throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "repeated key '" + key + "'");
    if (key == "problem") {
      try {
        problem = parse_problem(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(where + e.what());
      }
    }
    entries.emplace_back(lineno, key, value);
  }
  RunConfig cfg = default_config(problem.value_or(ProblemKind::LaplaceLShape));
  for (const auto& [ln, key, value] : entries) {
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& k) { return k.first == key; });
    try {
      it->second.set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(ln) + ": " + key + ": " + e.what());
    }
  }
  if (cfg.output_dir == "none") cfg.output_dir.clear();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  for (const auto& [key, k] : keys()) os << key << " = " << k.get(cfg) << '\n';
}

}  // namespace ritz
