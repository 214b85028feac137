#include "ritz/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ritz {

std::string checkpoint_header(const Architecture& arch) {
  std::ostringstream os;
  os << "arch=" << to_string(arch.kind) << ",d=" << arch.input_dim << ",c=" << arch.output_dim
     << ",H=" << arch.hidden_width << ",L=" << arch.depth << ",act=" << to_string(arch.activation)
     << ",count=" << arch.parameter_count();
  return os.str();
}

void write_checkpoint(std::ostream& os, const Network& net) {
  os << checkpoint_header(net.arch) << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < net.params.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", net.params[i]);
    os << buf << '\n';
  }
}

Network read_checkpoint(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("checkpoint: missing header");
  std::map<std::string, std::string> kv;
  std::istringstream hs(header);
  for (std::string item; std::getline(hs, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("checkpoint: bad header field '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto get = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(std::string("checkpoint: header lacks ") + key);
    return it->second;
  };
  Architecture arch;
  arch.kind = parse_arch_kind(get("arch"));
  arch.input_dim = std::stoi(get("d"));
  arch.output_dim = std::stoi(get("c"));
  arch.hidden_width = std::stoi(get("H"));
  arch.depth = std::stoi(get("L"));
  arch.activation = parse_activation(get("act"));
  const std::size_t count = std::stoul(get("count"));
  if (count != arch.parameter_count())
    throw std::runtime_error("checkpoint: count does not match architecture");

  Network net{arch, Eigen::VectorXd(Eigen::Index(count))};
  for (std::size_t i = 0; i < count; ++i) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("checkpoint: truncated parameter list");
    net.params[Eigen::Index(i)] = std::strtod(line.c_str(), nullptr);
  }
  return net;
}

void save_checkpoint(const std::string& path, const Network& net) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_checkpoint(os, net);
}

Network load_checkpoint(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_checkpoint(is);
}

}  // namespace ritz
