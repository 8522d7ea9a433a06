#pragma once

// Direct-compression baseline: d-Markov estimation with an optional state
// merging pass, the depth-weighted conditional distance between machines,
// and the white-noise detector built on both.

#include <cstdint>
#include <optional>
#include <vector>

#include "pfsa/pfsa.hpp"
#include "pfsa/stream.hpp"

namespace pfsa {

struct StreamTooShort : std::runtime_error {
  explicit StreamTooShort(const std::string& what) : std::runtime_error(what) {}
};

struct DMarkovConfig {
  int depth = 2;
  double merge_tol = 0.0;        // 0 disables the merging pass
  std::uint64_t min_count = 20;  // contexts below this are flagged undersampled
  double smoothing = 0.5;        // additive smoothing keeps rows positive
  size_t context_budget = size_t{1} << 20;
};

struct EstimatedModel {
  Pfsa model;                          // context states, de Bruijn delta
  std::vector<std::uint64_t> counts;   // observations per state
  std::vector<int> undersampled;       // states with counts below min_count
  int depth;
};

// Counts next-symbol frequencies over all |Sigma|^depth contexts. The start
// state is the context formed by the first `depth` symbols. Hard floor:
// stream length >= 10 * |Sigma|^depth.
EstimatedModel estimate_dmarkov(const SymbolStream& stream, const Alphabet& alphabet,
                                const DMarkovConfig& cfg);

// Depth-weighted mean conditional distance: words up to length `depth` are
// walked from both start states; each depth contributes the mean halved L1
// distance between next-symbol conditionals, weighted 2^-(d+1) and
// renormalized so the result lies in [0, 1]. Symmetric pseudo-metric.
double theta_distance(const Pfsa& g1, const Pfsa& g2, int depth);

// Same walk, but contributions where g1 sits in a masked-out state are
// dropped from that depth's average (used to exclude undersampled contexts).
double theta_distance_masked(const Pfsa& g1, const Pfsa& g2, int depth,
                             const std::vector<char>* include_g1_state);

struct WhiteNoiseConfig {
  int estimator_depth = 3;
  int theta_depth = 3;
  std::uint64_t min_count = 20;
  double smoothing = 0.5;
};

struct WhiteNoiseScore {
  double score = 1.0;
  std::uint64_t length_used = 0;
  int contexts_scored = 0;
  int contexts_excluded = 0;
};

WhiteNoiseScore white_noise_score(const SymbolStream& stream, const Alphabet& alphabet,
                                  const WhiteNoiseConfig& cfg = {});

// 99th-percentile white-noise score of genuinely white streams of comparable
// length; Monte Carlo, cached per (alphabet size, length bucket, depth).
double calibrate_tau(const Alphabet& alphabet, std::uint64_t emitted_length, int trials,
                     std::uint64_t seed, const WhiteNoiseConfig& cfg = {});

}  // namespace pfsa
