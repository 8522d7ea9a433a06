#pragma once

// Seedable stream generation: cumulative morph rows, bisection sampling of
// categorical symbols, whole-stream generation and the Plus-machine simulator.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pfsa/pfsa.hpp"

namespace pfsa {

// Deterministic uniform source over [0, 1). Same seed, same sequence.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_raw() { return engine_(); }

  // Derives an independent child seed; used to fan one bank seed out to
  // per-component sources.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

class CumulativeMorphMatrix {
 public:
  explicit CumulativeMorphMatrix(const Pfsa& g);

  std::span<const double> row(int state) const { return rows_[static_cast<size_t>(state)]; }
  int alphabet_size() const { return rows_.empty() ? 0 : static_cast<int>(rows_[0].size()); }

 private:
  std::vector<std::vector<double>> rows_;
};

struct SymbolStream {
  std::vector<int> symbols;
  std::string model_id;
  std::uint64_t seed = 0;

  size_t size() const { return symbols.size(); }
};

// Counters for the acceptance bound on bisection work. Reset at will; the
// acceptance suite checks max_excess <= 0 (no call exceeded ceil(log2 |Sigma|)).
struct BisectionStats {
  std::uint64_t calls = 0;
  long long max_excess = -1;  // iterations minus ceil(log2 n), worst case seen
};

BisectionStats& bisection_stats();

int ceil_log2(int n);

// Least index j with key <= row[j], found by bisection on a cumulative row.
int sample_symbol(std::span<const double> cumulative_row, double key);

SymbolStream generate_stream(const Pfsa& g, size_t length, std::uint64_t seed);

struct PlusMachineRun {
  SymbolStream emitted;
  std::uint64_t attempts = 0;
};

// Two structurally equal machines generate independently from a shared
// current state; a symbol is emitted (and both transition) only on a match.
PlusMachineRun plus_machine_run(const Pfsa& g1, const Pfsa& g2, std::uint64_t attempts,
                                std::uint64_t seed);

}  // namespace pfsa
