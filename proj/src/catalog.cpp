#include "pfsa/catalog.hpp"

namespace pfsa {
namespace catalog {

Alphabet binary_alphabet() { return Alphabet({"0", "1"}); }

Pfsa e1() {
  RawModel raw;
  raw.alphabet = {"0", "1"};
  raw.states = {"A", "B"};
  raw.start = "A";
  raw.delta = {{"A", "B"}, {"A", "B"}};
  raw.morph = {{0.2, 0.8}, {0.4, 0.6}};
  raw.metadata["name"] = "e1";
  return Pfsa::validate(raw);
}

Pfsa m2() {
  RawModel raw;
  raw.alphabet = {"0", "1"};
  raw.states = {"s00", "s01", "s10", "s11"};
  raw.start = "s00";
  // delta(s_ab, c) = s_bc: the state is always the last two symbols seen.
  raw.delta = {{"s00", "s01"}, {"s10", "s11"}, {"s00", "s01"}, {"s10", "s11"}};
  raw.morph = {{0.7, 0.3}, {0.2, 0.8}, {0.9, 0.1}, {0.1, 0.9}};
  raw.metadata["name"] = "m2";
  return Pfsa::validate(raw);
}

Pfsa s1() {
  RawModel raw;
  raw.alphabet = {"0", "1"};
  raw.states = {"e", "o"};
  raw.start = "e";
  // Both symbols act as permutations of {e, o}; no synchronizing word exists.
  raw.delta = {{"e", "o"}, {"o", "e"}};
  raw.morph = {{0.6, 0.4}, {0.15, 0.85}};
  raw.metadata["name"] = "s1";
  return Pfsa::validate(raw);
}

Pfsa white() { return white_noise_pfsa(binary_alphabet()); }

Pfsa by_id(const std::string& id) {
  if (id == "e1") return e1();
  if (id == "m2") return m2();
  if (id == "s1") return s1();
  if (id == "white") return white();
  throw std::out_of_range("unknown catalog id: " + id);
}

std::vector<std::string> ids() { return {"e1", "m2", "s1", "white"}; }

}  // namespace catalog
}  // namespace pfsa
