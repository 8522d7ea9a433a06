#include "pfsa/bench.hpp"

#include <ostream>

#include "pfsa/stream.hpp"

namespace pfsa {

namespace {

std::vector<BenchRecord> run(const Pfsa& truth, const Pfsa& pattern, const std::string& pattern_id,
                             std::uint64_t seed, const BenchConfig& cfg) {
  const Alphabet& alphabet = truth.alphabet();
  const size_t k = static_cast<size_t>(alphabet.size());
  const SymbolStream full = generate_stream(truth, cfg.max_ticks, seed);
  AnnihilatorBank bank = build_bank(pattern, RandomSource::derive_seed(seed, 0x62616e6b), pattern_id);

  size_t context_count = 1;
  for (int i = 0; i < cfg.direct_depth; ++i) context_count *= k;

  std::vector<BenchRecord> records;
  SymbolStream prefix;
  prefix.symbols.reserve(full.size());
  int true_state = truth.start();
  for (std::uint64_t tick = 1; tick <= full.size(); ++tick) {
    const int symbol = full.symbols[static_cast<size_t>(tick - 1)];
    prefix.symbols.push_back(symbol);
    bank.feed_symbol(symbol);
    true_state = truth.next(true_state, symbol);
    if (tick % cfg.check_interval != 0) continue;

    // Direct leg: estimate from the prefix and compare forward-going
    // conditionals, so both machines are started at "now" — the estimate at
    // the context of the last direct_depth symbols, the truth at its current
    // state.
    double direct_score = 1.0;
    if (prefix.size() >= 10 * context_count) {
      DMarkovConfig est_cfg;
      est_cfg.depth = cfg.direct_depth;
      EstimatedModel est = estimate_dmarkov(prefix, alphabet, est_cfg);
      size_t context = 0;
      for (std::uint64_t i = tick - static_cast<std::uint64_t>(cfg.direct_depth); i < tick; ++i) {
        context = context * k + static_cast<size_t>(full.symbols[static_cast<size_t>(i)]);
      }
      direct_score = theta_distance(est.model.with_start(static_cast<int>(context)),
                                    truth.with_start(true_state), cfg.theta_depth);
    }
    records.push_back({tick, "direct", direct_score, pattern_id, seed});

    double best = 1.0;
    for (int j = 0; j < bank.component_count(); ++j) {
      const auto& component = bank.component(j);
      if (component.emitted_count() < cfg.min_emitted) continue;
      try {
        best = std::min(best, white_noise_score(component.emitted(), alphabet, cfg.detector).score);
      } catch (const StreamTooShort&) {
      }
    }
    records.push_back({tick, "annihilator", best, pattern_id, seed});
  }
  return records;
}

}  // namespace

std::vector<BenchRecord> run_bench(const Pfsa& truth, const std::string& pattern_id,
                                   std::uint64_t seed, const BenchConfig& cfg) {
  return run(truth, truth, pattern_id, seed, cfg);
}

std::vector<BenchRecord> run_bench_against(const Pfsa& truth, const Pfsa& pattern,
                                           const std::string& pattern_id, std::uint64_t seed,
                                           const BenchConfig& cfg) {
  return run(truth, pattern, pattern_id, seed, cfg);
}

std::uint64_t first_crossing(const std::vector<BenchRecord>& records, const std::string& method,
                             double threshold) {
  for (const auto& r : records) {
    if (r.method == method && r.score <= threshold) return r.tick;
  }
  return 0;
}

double tail_mean(const std::vector<BenchRecord>& records, const std::string& method,
                 std::uint64_t from, std::uint64_t to) {
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& r : records) {
    if (r.method == method && r.tick >= from && r.tick <= to) {
      sum += r.score;
      ++count;
    }
  }
  return count > 0 ? sum / static_cast<double>(count) : 1.0;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out, bool header) {
  if (header) out << "tick,method,score,pattern,seed\n";
  for (const auto& r : records) {
    out << r.tick << ',' << r.method << ',' << r.score << ',' << r.pattern << ',' << r.seed << '\n';
  }
}

}  // namespace pfsa
