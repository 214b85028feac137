#ifndef RITZ_CHECKPOINT_HPP
#define RITZ_CHECKPOINT_HPP

#include <iosfwd>
#include <string>

#include "ritz/network.hpp"

namespace ritz {

// Header line `arch=ResNet,d=2,c=1,H=20,L=2,act=ReLUCubed,count=921`, then
// one parameter per line in layout order, printed with 17 significant digits
// so a save/load cycle reproduces the parameters exactly.
std::string checkpoint_header(const Architecture& arch);

void write_checkpoint(std::ostream& os, const Network& net);
Network read_checkpoint(std::istream& is);

void save_checkpoint(const std::string& path, const Network& net);
Network load_checkpoint(const std::string& path);

}  // namespace ritz

#endif  // RITZ_CHECKPOINT_HPP
