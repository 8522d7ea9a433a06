#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pfsa/algebra.hpp"
#include "pfsa/analysis.hpp"
#include "pfsa/catalog.hpp"
#include "pfsa/stream.hpp"
#include "support.hpp"

using namespace pfsa;

namespace {

// Per-state emitted-symbol conditionals: emission-synchronized transitions
// mean the shared state path can be replayed from the emitted stream alone.
std::vector<std::vector<double>> replay_conditionals(const Pfsa& g, const SymbolStream& emitted) {
  std::vector<std::vector<double>> counts(static_cast<size_t>(g.state_count()),
                                          std::vector<double>(static_cast<size_t>(g.alphabet().size()), 0.0));
  int q = g.start();
  for (int s : emitted.symbols) {
    counts[static_cast<size_t>(q)][static_cast<size_t>(s)] += 1.0;
    q = g.next(q, s);
  }
  for (auto& row : counts) {
    double total = 0.0;
    for (double v : row) total += v;
    if (total > 0.0) {
      for (double& v : row) v /= total;
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("cumulative morph rows are prefix sums with a pinned tail") {
  const CumulativeMorphMatrix cum_e1(catalog::e1());
  CHECK(cum_e1.row(0)[0] == doctest::Approx(0.2));
  CHECK(cum_e1.row(0)[1] == 1.0);

  const Pfsa four = Pfsa::trusted(pfsa::testing::make_alphabet(4), {"q0"}, 0, {{0, 0, 0, 0}},
                                  {{0.1, 0.2, 0.3, 0.4}});
  const CumulativeMorphMatrix cum(four);
  CHECK(cum.row(0)[0] == doctest::Approx(0.1));
  CHECK(cum.row(0)[1] == doctest::Approx(0.3));
  CHECK(cum.row(0)[2] == doctest::Approx(0.6));
  CHECK(cum.row(0)[3] == 1.0);

  const Pfsa uniform4 = Pfsa::trusted(pfsa::testing::make_alphabet(4), {"q0"}, 0, {{0, 0, 0, 0}},
                                      {{0.25, 0.25, 0.25, 0.25}});
  const CumulativeMorphMatrix cum_u(uniform4);
  CHECK(cum_u.row(0)[0] == doctest::Approx(0.25));
  CHECK(cum_u.row(0)[2] == doctest::Approx(0.75));
  CHECK(cum_u.row(0)[3] == 1.0);
}

TEST_CASE("sample_symbol inverts the cumulative row by bisection") {
  const std::vector<double> two{0.2, 1.0};
  CHECK(sample_symbol(two, 0.15) == 0);
  CHECK(sample_symbol(two, 0.2) == 0);   // boundary belongs to the lower cell
  CHECK(sample_symbol(two, 0.95) == 1);

  const std::vector<double> four{0.1, 0.3, 0.6, 1.0};
  const std::uint64_t calls_before = bisection_stats().calls;
  CHECK(sample_symbol(four, 0.45) == 2);
  CHECK(bisection_stats().calls == calls_before + 1);
  CHECK(bisection_stats().max_excess <= 0);  // never more than ceil(log2 n) steps
}

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
}

TEST_CASE("generate_stream basics") {
  CHECK(generate_stream(catalog::e1(), 0, 1).symbols.empty());

  const SymbolStream a = generate_stream(catalog::m2(), 1000, 42);
  const SymbolStream b = generate_stream(catalog::m2(), 1000, 42);
  CHECK(a.symbols == b.symbols);

  const SymbolStream c = generate_stream(catalog::m2(), 64, 43);
  bool differs = false;
  for (size_t i = 0; i < 64; ++i) differs = differs || a.symbols[i] != c.symbols[i];
  CHECK(differs);

  for (int s : a.symbols) CHECK((s == 0 || s == 1));
}

TEST_CASE("white-noise stream frequencies are uniform") {
  const SymbolStream stream = generate_stream(catalog::white(), 100000, 5);
  double ones = 0.0;
  for (int s : stream.symbols) ones += s;
  CHECK(ones / 100000.0 == doctest::Approx(0.5).epsilon(0.012));  // +-0.006 absolute
}

TEST_CASE("stream symbol frequencies match the stationary emission mix") {
  // Expected symbol-1 frequency for the two-state example:
  // (1/3)(0.8) + (2/3)(0.6) = 2/3.
  const SymbolStream stream = generate_stream(catalog::e1(), 100000, 6);
  double ones = 0.0;
  for (int s : stream.symbols) ones += s;
  CHECK(ones / 100000.0 == doctest::Approx(2.0 / 3.0).epsilon(0.0075));  // +-0.005 absolute
}

TEST_CASE("plus machine requires structural equality") {
  CHECK_THROWS_AS(plus_machine_run(catalog::e1(), catalog::s1(), 10, 1), StructureMismatch);
}

TEST_CASE("plus machine against a uniform copy reproduces the machine itself") {
  const Pfsa g = catalog::e1();
  const Pfsa uniform_lifted = g.with_morph({{0.5, 0.5}, {0.5, 0.5}});
  const PlusMachineRun run = plus_machine_run(g, uniform_lifted, 200000, 9);
  CHECK(run.attempts == 200000);
  const Pfsa expected = add_same_structure(g, uniform_lifted);  // == g's rows
  const auto conditionals = replay_conditionals(g, run.emitted);
  for (int q = 0; q < g.state_count(); ++q) {
    for (int s = 0; s < 2; ++s) {
      CHECK(std::abs(conditionals[static_cast<size_t>(q)][static_cast<size_t>(s)] -
                     expected.morph(q, s)) < 0.02);
      CHECK(std::abs(expected.morph(q, s) - g.morph(q, s)) < 1e-12);
    }
  }
  // Match probability is exactly 1/|Sigma| per state for a uniform partner.
  const double fraction = static_cast<double>(run.emitted.size()) / static_cast<double>(run.attempts);
  CHECK(fraction == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("plus machine reproduces the worked two-state sum") {
  const Pfsa g1 = catalog::e1();  // rows (0.2,0.8), (0.4,0.6)
  const Pfsa g2 = g1.with_morph({{0.1, 0.9}, {0.6, 0.4}});
  const PlusMachineRun run = plus_machine_run(g1, g2, 200000, 10);
  const auto conditionals = replay_conditionals(g1, run.emitted);
  const std::vector<std::vector<double>> expected{{0.027, 0.973}, {0.5, 0.5}};
  for (int q = 0; q < 2; ++q) {
    for (int s = 0; s < 2; ++s) {
      CHECK(std::abs(conditionals[static_cast<size_t>(q)][static_cast<size_t>(s)] -
                     expected[static_cast<size_t>(q)][static_cast<size_t>(s)]) < 0.02);
    }
  }
}

TEST_CASE("plus machine against the inverse whitens and thins as predicted") {
  const Pfsa g = catalog::e1();
  const PlusMachineRun run = plus_machine_run(g, invert(g), 500000, 11);
  const auto conditionals = replay_conditionals(g, run.emitted);
  for (int q = 0; q < 2; ++q) {
    for (int s = 0; s < 2; ++s) {
      CHECK(std::abs(conditionals[static_cast<size_t>(q)][static_cast<size_t>(s)] - 0.5) < 0.02);
    }
  }
  // Attempt-weighted emitted fraction: the shared state advances on emissions,
  // which are uniform for an inverse partner, so the visit chain is the
  // uniform-driven walk and each visit costs 1/H_i attempts on average.
  const StationaryDistribution visits =
      stationary_distribution(g.with_morph({{0.5, 0.5}, {0.5, 0.5}}));
  const std::vector<double> harmonic = harmonic_means(g);
  double attempts_per_emission = 0.0;
  for (int q = 0; q < 2; ++q) {
    attempts_per_emission += visits.probabilities[static_cast<size_t>(q)] / harmonic[static_cast<size_t>(q)];
  }
  const double expected_fraction = 1.0 / attempts_per_emission;
  const double fraction = static_cast<double>(run.emitted.size()) / static_cast<double>(run.attempts);
  CHECK(fraction == doctest::Approx(expected_fraction).epsilon(0.02));
}

TEST_CASE("derived seeds decorrelate child sources") {
  CHECK(RandomSource::derive_seed(1, 0) != RandomSource::derive_seed(1, 1));
  CHECK(RandomSource::derive_seed(1, 0) != RandomSource::derive_seed(2, 0));
  RandomSource a(RandomSource::derive_seed(1, 0));
  RandomSource b(RandomSource::derive_seed(1, 1));
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += a.next_raw() == b.next_raw();
  CHECK(equal == 0);
}

TEST_CASE("uniformity of the random source") {
  // One-sample K-S statistic against the uniform CDF.
  RandomSource rng(12345);
  const int n = 100000;
  std::vector<double> values(n);
  for (double& v : values) v = rng.next_uniform();
  std::sort(values.begin(), values.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = values[static_cast<size_t>(i)];
    ks = std::max(ks, std::abs(u - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - u));
  }
  CHECK(ks < 0.01);
}
