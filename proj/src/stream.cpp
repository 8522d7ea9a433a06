#include "pfsa/stream.hpp"

#include "pfsa/algebra.hpp"

namespace pfsa {

std::uint64_t RandomSource::derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CumulativeMorphMatrix::CumulativeMorphMatrix(const Pfsa& g) {
  rows_.reserve(static_cast<size_t>(g.state_count()));
  for (int q = 0; q < g.state_count(); ++q) {
    std::vector<double> row(g.row(q).begin(), g.row(q).end());
    for (size_t j = 1; j < row.size(); ++j) row[j] += row[j - 1];
    // Pin the final entry so every key in [0, 1) lands inside the row even
    // when the float prefix sum falls slightly short of 1.
    row.back() = 1.0;
    rows_.push_back(std::move(row));
  }
}

BisectionStats& bisection_stats() {
  static BisectionStats stats;
  return stats;
}

int ceil_log2(int n) {
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  return bits;
}

int sample_symbol(std::span<const double> cumulative_row, double key) {
  int lower = 0;
  int upper = static_cast<int>(cumulative_row.size()) - 1;
  long long iterations = 0;
  while (lower < upper) {
    const int mid = (lower + upper) / 2;
    if (key <= cumulative_row[static_cast<size_t>(mid)]) {
      upper = mid;
    } else {
      lower = mid + 1;
    }
    ++iterations;
  }
  auto& stats = bisection_stats();
  ++stats.calls;
  const long long excess = iterations - ceil_log2(static_cast<int>(cumulative_row.size()));
  if (excess > stats.max_excess) stats.max_excess = excess;
  return lower;
}

SymbolStream generate_stream(const Pfsa& g, size_t length, std::uint64_t seed) {
  RandomSource rng(seed);
  const CumulativeMorphMatrix cum(g);
  SymbolStream out;
  out.seed = seed;
  out.symbols.reserve(length);
  int q = g.start();
  for (size_t i = 0; i < length; ++i) {
    const int s = sample_symbol(cum.row(q), rng.next_uniform());
    out.symbols.push_back(s);
    q = g.next(q, s);
  }
  return out;
}

PlusMachineRun plus_machine_run(const Pfsa& g1, const Pfsa& g2, std::uint64_t attempts,
                                std::uint64_t seed) {
  if (!structurally_equal(g1, g2)) throw StructureMismatch();
  RandomSource rng1(RandomSource::derive_seed(seed, 0));
  RandomSource rng2(RandomSource::derive_seed(seed, 1));
  const CumulativeMorphMatrix cum1(g1);
  const CumulativeMorphMatrix cum2(g2);
  PlusMachineRun out;
  out.emitted.seed = seed;
  int q = g1.start();
  for (std::uint64_t i = 0; i < attempts; ++i) {
    const int s1 = sample_symbol(cum1.row(q), rng1.next_uniform());
    const int s2 = sample_symbol(cum2.row(q), rng2.next_uniform());
    ++out.attempts;
    if (s1 == s2) {
      out.emitted.symbols.push_back(s1);
      q = g1.next(q, s1);
    }
  }
  return out;
}

}  // namespace pfsa
