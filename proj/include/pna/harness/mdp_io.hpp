#pragma once

#include <iosfwd>
#include <string>

#include "pna/apps/cmdp.hpp"

namespace pna::harness {

// Line-oriented MDP description:
//   # comment
//   layer <state-count>          one line per layer, in order
//   actions <A>
//   dims <d>
//   trans <x> <a> <x'> <prob>
//   loss <x> <a> <i> <v>
//   thresh <i> <v>
//   eps0 <v>       (optional)
//   eps1 <v>       (optional)
// States are numbered globally in layer order. Unlisted transition and loss
// entries default to 0. The result is validated before being returned.
apps::LayeredMdp parseMdp(std::istream& input);
apps::LayeredMdp loadMdp(const std::string& path);
std::string formatMdp(const apps::LayeredMdp& mdp);

}  // namespace pna::harness
