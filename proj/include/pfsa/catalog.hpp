#pragma once

// Built-in model catalog over the binary alphabet {0, 1}:
//   e1    — two-state example used throughout the analytics tests
//   m2    — depth-2 suffix machine (every length-2 history is a state)
//   s1    — parity machine; both symbols permute the states, so no word
//           synchronizes it and finite-context estimation cannot pin it down
//   white — single-state uniform machine, the group identity

#include <string>
#include <vector>

#include "pfsa/pfsa.hpp"

namespace pfsa {
namespace catalog {

Alphabet binary_alphabet();

Pfsa e1();
Pfsa m2();
Pfsa s1();
Pfsa white();

// Lookup by id; throws std::out_of_range for unknown ids.
Pfsa by_id(const std::string& id);

std::vector<std::string> ids();

}  // namespace catalog
}  // namespace pfsa
