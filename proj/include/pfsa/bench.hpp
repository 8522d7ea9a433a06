#pragma once

// Convergence benchmark: races direct estimation against annihilation on one
// generated stream, recording both score series at fixed tick intervals.
//
// At each check interval the bench records
//   direct      — theta distance between the running context-model estimate
//                 and the true generator (start states aligned to the current
//                 position, so the comparison is of conditionals going forward)
//   annihilator — minimum component white-noise score of the pattern's bank
// CSV columns: tick,method,score,pattern,seed.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pfsa/annihilator.hpp"
#include "pfsa/estimation.hpp"
#include "pfsa/pfsa.hpp"

namespace pfsa {

struct BenchRecord {
  std::uint64_t tick;
  std::string method;  // "direct" or "annihilator"
  double score;
  std::string pattern;
  std::uint64_t seed;
};

struct BenchConfig {
  std::uint64_t max_ticks = 20000;
  std::uint64_t check_interval = 500;
  int direct_depth = 2;
  int theta_depth = 4;
  WhiteNoiseConfig detector;
  std::uint64_t min_emitted = 2000;
};

// One seed: generate max_ticks symbols from `truth`, feed the annihilator
// bank for `pattern` incrementally, and score both methods per interval.
std::vector<BenchRecord> run_bench(const Pfsa& truth, const std::string& pattern_id,
                                   std::uint64_t seed, const BenchConfig& cfg = {});

// Same but annihilating against an explicit (possibly wrong) pattern.
std::vector<BenchRecord> run_bench_against(const Pfsa& truth, const Pfsa& pattern,
                                           const std::string& pattern_id, std::uint64_t seed,
                                           const BenchConfig& cfg = {});

// First tick at which the given method's score drops to `threshold` or below;
// 0 when it never does.
std::uint64_t first_crossing(const std::vector<BenchRecord>& records, const std::string& method,
                             double threshold);

// Mean of a method's scores over ticks in [from, to] (plateau estimate).
double tail_mean(const std::vector<BenchRecord>& records, const std::string& method,
                 std::uint64_t from, std::uint64_t to);

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out,
               bool header = true);

}  // namespace pfsa
