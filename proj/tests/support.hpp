#pragma once

// Shared helpers for the test suites: deterministic random-machine generation
// and small numeric utilities.

#include <random>
#include <string>
#include <vector>

#include "pfsa/pfsa.hpp"

namespace pfsa::testing {

inline Alphabet make_alphabet(int size) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) labels.emplace_back(1, static_cast<char>('0' + i));
  return Alphabet(std::move(labels));
}

// Random irreducible machine: rejection-sample a total delta until strongly
// connected (a full cycle on symbol 0 as fallback guarantees termination),
// rows drawn positive with a floor away from zero.
inline Pfsa random_machine(std::mt19937_64& rng, int max_states = 4, int max_symbols = 3,
                           double row_floor = 0.05, int exact_symbols = 0) {
  std::uniform_int_distribution<int> state_dist(1, max_states);
  std::uniform_int_distribution<int> symbol_dist(2, max_symbols);
  const int n = state_dist(rng);
  const int k = exact_symbols > 0 ? exact_symbols : symbol_dist(rng);
  std::uniform_int_distribution<int> target(0, n - 1);

  std::vector<std::vector<int>> delta(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(k)));
  for (int attempt = 0;; ++attempt) {
    for (auto& row : delta) {
      for (int& t : row) t = target(rng);
    }
    if (attempt >= 50) {
      for (int q = 0; q < n; ++q) delta[static_cast<size_t>(q)][0] = (q + 1) % n;
    }
    if (strongly_connected(delta)) break;
  }

  std::uniform_real_distribution<double> mass(row_floor, 1.0);
  std::vector<std::vector<double>> morph;
  morph.reserve(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    std::vector<double> row(static_cast<size_t>(k));
    double sum = 0.0;
    for (double& v : row) {
      v = mass(rng);
      sum += v;
    }
    for (double& v : row) v /= sum;
    morph.push_back(std::move(row));
  }

  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) labels.push_back("q" + std::to_string(q));
  return Pfsa::trusted(make_alphabet(k), std::move(labels), 0, std::move(delta), std::move(morph));
}

// Same-alphabet pair for binary-op properties.
inline std::pair<Pfsa, Pfsa> random_pair(std::mt19937_64& rng, int max_states = 4,
                                         int max_symbols = 3) {
  Pfsa g1 = random_machine(rng, max_states, max_symbols);
  Pfsa g2 = random_machine(rng, max_states, max_symbols, 0.05, g1.alphabet().size());
  return {std::move(g1), std::move(g2)};
}

}  // namespace pfsa::testing
