#include "pfsa/estimation.hpp"

#include "pfsa/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace pfsa {

namespace {

size_t int_pow(size_t base, int exp) {
  size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

std::string context_label(const Alphabet& alphabet, size_t context, int depth) {
  const bool compact = alphabet.all_single_char();
  std::string label;
  std::vector<int> digits(static_cast<size_t>(depth));
  for (int i = depth - 1; i >= 0; --i) {
    digits[static_cast<size_t>(i)] = static_cast<int>(context % static_cast<size_t>(alphabet.size()));
    context /= static_cast<size_t>(alphabet.size());
  }
  for (int i = 0; i < depth; ++i) {
    if (!compact && i > 0) label += ".";
    label += alphabet.label(digits[static_cast<size_t>(i)]);
  }
  return label;
}

struct MergeResult {
  std::vector<int> block_of;  // state -> block
  int block_count;
};

// Greedy row clustering followed by Moore refinement so that the quotient
// delta is well defined.
MergeResult merge_states(const std::vector<std::vector<double>>& rows,
                         const std::vector<std::vector<int>>& delta, double tol) {
  const int n = static_cast<int>(rows.size());
  const int k = static_cast<int>(rows[0].size());
  std::vector<int> block_of(static_cast<size_t>(n), -1);
  std::vector<int> representative;
  for (int q = 0; q < n; ++q) {
    for (size_t b = 0; b < representative.size(); ++b) {
      double diff = 0.0;
      for (int s = 0; s < k; ++s) {
        diff = std::max(diff, std::abs(rows[static_cast<size_t>(q)][static_cast<size_t>(s)] -
                                       rows[static_cast<size_t>(representative[b])][static_cast<size_t>(s)]));
      }
      if (diff < tol) {
        block_of[static_cast<size_t>(q)] = static_cast<int>(b);
        break;
      }
    }
    if (block_of[static_cast<size_t>(q)] < 0) {
      block_of[static_cast<size_t>(q)] = static_cast<int>(representative.size());
      representative.push_back(q);
    }
  }
  int block_count = static_cast<int>(representative.size());

  // Split blocks until every member agrees on the block of each successor.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, std::vector<int>>, int> signature_block;
    std::vector<int> refined(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) {
      std::vector<int> signature(static_cast<size_t>(k));
      for (int s = 0; s < k; ++s) {
        signature[static_cast<size_t>(s)] = block_of[static_cast<size_t>(delta[static_cast<size_t>(q)][static_cast<size_t>(s)])];
      }
      auto key = std::make_pair(block_of[static_cast<size_t>(q)], std::move(signature));
      auto [it, fresh] = signature_block.try_emplace(key, static_cast<int>(signature_block.size()));
      refined[static_cast<size_t>(q)] = it->second;
      (void)fresh;
    }
    const int refined_count = static_cast<int>(signature_block.size());
    if (refined_count != block_count) {
      block_of = std::move(refined);
      block_count = refined_count;
      changed = true;
    }
  }
  return {std::move(block_of), block_count};
}

}  // namespace

EstimatedModel estimate_dmarkov(const SymbolStream& stream, const Alphabet& alphabet,
                                const DMarkovConfig& cfg) {
  if (cfg.depth < 1) throw std::invalid_argument("d-Markov depth must be >= 1");
  const size_t k = static_cast<size_t>(alphabet.size());
  const size_t contexts = int_pow(k, cfg.depth);
  if (contexts > cfg.context_budget) throw std::invalid_argument("context table exceeds budget");
  if (stream.size() < 10 * contexts) {
    throw StreamTooShort("stream length " + std::to_string(stream.size()) +
                         " below floor " + std::to_string(10 * contexts));
  }

  std::vector<std::vector<std::uint64_t>> counts(contexts, std::vector<std::uint64_t>(k, 0));
  size_t ctx = 0;
  for (size_t i = 0; i < stream.size(); ++i) {
    const size_t s = static_cast<size_t>(stream.symbols[i]);
    if (i >= static_cast<size_t>(cfg.depth)) counts[ctx][s] += 1;
    ctx = (ctx * k) % contexts + s;
  }
  size_t start_ctx = 0;
  for (int i = 0; i < cfg.depth; ++i) {
    start_ctx = start_ctx * k + static_cast<size_t>(stream.symbols[static_cast<size_t>(i)]);
  }

  // De Bruijn shift on suffix contexts keeps delta total and the graph
  // strongly connected even when some contexts were never observed.
  std::vector<std::vector<int>> delta(contexts, std::vector<int>(k));
  std::vector<std::vector<double>> rows(contexts, std::vector<double>(k));
  std::vector<std::uint64_t> totals(contexts, 0);
  for (size_t c = 0; c < contexts; ++c) {
    for (size_t s = 0; s < k; ++s) delta[c][s] = static_cast<int>((c * k) % contexts + s);
    const std::uint64_t total = std::accumulate(counts[c].begin(), counts[c].end(), std::uint64_t{0});
    totals[c] = total;
    for (size_t s = 0; s < k; ++s) {
      rows[c][s] = (static_cast<double>(counts[c][s]) + cfg.smoothing) /
                   (static_cast<double>(total) + cfg.smoothing * static_cast<double>(k));
    }
  }

  std::vector<int> state_map(contexts);
  std::iota(state_map.begin(), state_map.end(), 0);
  int state_count = static_cast<int>(contexts);
  if (cfg.merge_tol > 0.0) {
    auto merged = merge_states(rows, delta, cfg.merge_tol);
    state_map = std::move(merged.block_of);
    state_count = merged.block_count;
  }

  std::vector<std::string> labels(static_cast<size_t>(state_count));
  std::vector<std::vector<int>> out_delta(static_cast<size_t>(state_count), std::vector<int>(k));
  std::vector<std::vector<std::uint64_t>> out_counts(static_cast<size_t>(state_count),
                                                     std::vector<std::uint64_t>(k, 0));
  for (size_t c = 0; c < contexts; ++c) {
    const size_t b = static_cast<size_t>(state_map[c]);
    if (labels[b].empty()) {
      labels[b] = context_label(alphabet, c, cfg.depth);
      for (size_t s = 0; s < k; ++s) out_delta[b][s] = state_map[static_cast<size_t>(delta[c][s])];
    }
    for (size_t s = 0; s < k; ++s) out_counts[b][s] += counts[c][s];
  }

  std::vector<std::vector<double>> out_rows(static_cast<size_t>(state_count), std::vector<double>(k));
  std::vector<std::uint64_t> out_totals(static_cast<size_t>(state_count), 0);
  std::vector<int> undersampled;
  for (int b = 0; b < state_count; ++b) {
    const std::uint64_t total = std::accumulate(out_counts[static_cast<size_t>(b)].begin(),
                                                out_counts[static_cast<size_t>(b)].end(), std::uint64_t{0});
    out_totals[static_cast<size_t>(b)] = total;
    if (total < cfg.min_count) undersampled.push_back(b);
    for (size_t s = 0; s < k; ++s) {
      out_rows[static_cast<size_t>(b)][s] = (static_cast<double>(out_counts[static_cast<size_t>(b)][s]) + cfg.smoothing) /
                                            (static_cast<double>(total) + cfg.smoothing * static_cast<double>(k));
    }
  }

  Pfsa model = Pfsa::trusted(alphabet, std::move(labels), state_map[start_ctx], std::move(out_delta),
                             std::move(out_rows));
  return {std::move(model), std::move(out_totals), std::move(undersampled), cfg.depth};
}

double theta_distance_masked(const Pfsa& g1, const Pfsa& g2, int depth,
                             const std::vector<char>* include_g1_state) {
  if (g1.alphabet() != g2.alphabet()) throw AlphabetMismatch();
  const int k = g1.alphabet().size();
  // Words mapping to the same state pair contribute identically; walk the
  // pair graph with word multiplicities instead of enumerating words.
  std::map<std::pair<int, int>, double> frontier{{{g1.start(), g2.start()}, 1.0}};
  double total = 0.0;
  double weight_sum = 0.0;
  for (int d = 0; d <= depth; ++d) {
    double level_sum = 0.0;
    double level_count = 0.0;
    for (const auto& [pair, count] : frontier) {
      const auto [q1, q2] = pair;
      if (include_g1_state && !(*include_g1_state)[static_cast<size_t>(q1)]) continue;
      double l1 = 0.0;
      for (int s = 0; s < k; ++s) l1 += std::abs(g1.morph(q1, s) - g2.morph(q2, s));
      level_sum += 0.5 * l1 * count;
      level_count += count;
    }
    const double weight = std::pow(2.0, -(d + 1));
    if (level_count > 0.0) {
      total += weight * level_sum / level_count;
      weight_sum += weight;
    }
    if (d == depth) break;
    std::map<std::pair<int, int>, double> next;
    for (const auto& [pair, count] : frontier) {
      const auto [q1, q2] = pair;
      for (int s = 0; s < k; ++s) next[{g1.next(q1, s), g2.next(q2, s)}] += count;
    }
    frontier = std::move(next);
  }
  return weight_sum > 0.0 ? total / weight_sum : 1.0;
}

double theta_distance(const Pfsa& g1, const Pfsa& g2, int depth) {
  return theta_distance_masked(g1, g2, depth, nullptr);
}

WhiteNoiseScore white_noise_score(const SymbolStream& stream, const Alphabet& alphabet,
                                  const WhiteNoiseConfig& cfg) {
  DMarkovConfig est_cfg;
  est_cfg.depth = cfg.estimator_depth;
  est_cfg.min_count = cfg.min_count;
  est_cfg.smoothing = cfg.smoothing;
  EstimatedModel est = estimate_dmarkov(stream, alphabet, est_cfg);

  std::vector<char> include(static_cast<size_t>(est.model.state_count()), 1);
  int excluded = 0;
  for (int b : est.undersampled) {
    include[static_cast<size_t>(b)] = 0;
    ++excluded;
  }
  const Pfsa white = white_noise_pfsa(alphabet);
  WhiteNoiseScore out;
  out.score = theta_distance_masked(est.model, white, cfg.theta_depth, &include);
  out.length_used = stream.size();
  out.contexts_scored = est.model.state_count() - excluded;
  out.contexts_excluded = excluded;
  return out;
}

double calibrate_tau(const Alphabet& alphabet, std::uint64_t emitted_length, int trials,
                     std::uint64_t seed, const WhiteNoiseConfig& cfg) {
  // Bucket by powers of two so repeated queries share one calibration run.
  std::uint64_t bucket = 1;
  while (bucket < emitted_length) bucket <<= 1;

  struct Key {
    int k;
    std::uint64_t bucket;
    int depth;
    auto operator<=>(const Key&) const = default;
  };
  static std::map<Key, double> cache;
  static std::mutex mutex;
  const Key key{alphabet.size(), bucket, cfg.estimator_depth};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const Pfsa white = white_noise_pfsa(alphabet);
  std::vector<double> scores;
  scores.reserve(static_cast<size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const auto stream = generate_stream(white, bucket, RandomSource::derive_seed(seed, static_cast<std::uint64_t>(t)));
    scores.push_back(white_noise_score(stream, alphabet, cfg).score);
  }
  std::sort(scores.begin(), scores.end());
  const size_t idx = std::min(scores.size() - 1, static_cast<size_t>(0.99 * static_cast<double>(scores.size())));
  const double tau = scores[idx];
  std::lock_guard lock(mutex);
  cache[key] = tau;
  return tau;
}

}  // namespace pfsa
