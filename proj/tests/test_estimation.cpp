#include <doctest.h>

#include <cmath>
#include <random>

#include "pfsa/catalog.hpp"
#include "pfsa/estimation.hpp"
#include "pfsa/stream.hpp"
#include "support.hpp"

using namespace pfsa;

TEST_CASE("estimator rejects too-short streams and bad depths") {
  const Alphabet ab = catalog::binary_alphabet();
  SymbolStream tiny;
  tiny.symbols = {0, 1, 0, 1};
  DMarkovConfig cfg;
  cfg.depth = 2;
  CHECK_THROWS_AS(estimate_dmarkov(tiny, ab, cfg), StreamTooShort);
  cfg.depth = 0;
  CHECK_THROWS_AS(estimate_dmarkov(tiny, ab, cfg), std::invalid_argument);
}

TEST_CASE("estimated context model has suffix-shift structure") {
  const SymbolStream stream = generate_stream(catalog::m2(), 5000, 1);
  DMarkovConfig cfg;
  cfg.depth = 2;
  const EstimatedModel est = estimate_dmarkov(stream, catalog::binary_alphabet(), cfg);
  CHECK(est.model.state_count() == 4);
  // Contexts in rank order: 00, 01, 10, 11; delta("01", '1') = "11".
  CHECK(est.model.state_labels() == std::vector<std::string>{"00", "01", "10", "11"});
  CHECK(est.model.next(1, 1) == 3);
  CHECK(est.model.next(2, 0) == 0);
  CHECK(strongly_connected(est.model.delta()));
  // Start context is the first two symbols of the stream.
  const int expected_start = stream.symbols[0] * 2 + stream.symbols[1];
  CHECK(est.model.start() == expected_start);
  // Rows are positive and stochastic by construction.
  for (int q = 0; q < 4; ++q) {
    CHECK(est.model.morph(q, 0) + est.model.morph(q, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.model.morph(q, 0) > 0.0);
  }
}

TEST_CASE("white stream estimates are near-uniform") {
  const SymbolStream stream = generate_stream(catalog::white(), 100000, 2);
  DMarkovConfig cfg;
  cfg.depth = 2;
  const EstimatedModel est = estimate_dmarkov(stream, catalog::binary_alphabet(), cfg);
  for (int q = 0; q < est.model.state_count(); ++q) {
    CHECK(std::abs(est.model.morph(q, 0) - 0.5) < 0.01);
  }
  CHECK(est.undersampled.empty());
}

TEST_CASE("depth-2 Markov source is recovered exactly in structure and closely in rows") {
  const SymbolStream stream = generate_stream(catalog::m2(), 100000, 3);
  DMarkovConfig cfg;
  cfg.depth = 2;
  const EstimatedModel est = estimate_dmarkov(stream, catalog::binary_alphabet(), cfg);
  const Pfsa truth = catalog::m2();
  // Context "ab" in the estimate corresponds to state s_ab of the source.
  for (int q = 0; q < 4; ++q) {
    CHECK(std::abs(est.model.morph(q, 0) - truth.morph(q, 0)) < 0.02);
  }
  CHECK(theta_distance(est.model.with_start(0), truth.with_start(0), 4) < 0.02);
}

TEST_CASE("parity-style source stays out of reach of finite contexts") {
  // No synchronizing word exists, so every fixed-length context sees a
  // mixture of the two states and the estimate cannot converge to the truth.
  const SymbolStream stream = generate_stream(catalog::s1(), 100000, 4);
  for (int depth = 1; depth <= 4; ++depth) {
    DMarkovConfig cfg;
    cfg.depth = depth;
    const EstimatedModel est = estimate_dmarkov(stream, catalog::binary_alphabet(), cfg);
    CHECK(theta_distance(est.model, catalog::s1(), 3) > 0.02);
  }
}

TEST_CASE("undersampled contexts are reported") {
  // A strongly biased source rarely visits the 00 context.
  RawModel raw;
  raw.alphabet = {"0", "1"};
  raw.states = {"u"};
  raw.start = "u";
  raw.delta = {{"u", "u"}};
  raw.morph = {{0.01, 0.99}};
  const Pfsa biased = Pfsa::validate(raw);
  const SymbolStream stream = generate_stream(biased, 2000, 5);
  DMarkovConfig cfg;
  cfg.depth = 3;
  cfg.min_count = 20;
  const EstimatedModel est = estimate_dmarkov(stream, catalog::binary_alphabet(), cfg);
  CHECK(!est.undersampled.empty());
  CHECK(est.undersampled[0] == 0);  // context 000
}

TEST_CASE("merge pass collapses equivalent contexts without breaking delta") {
  // A depth-1 source estimated at depth 2 has 4 contexts but only 2 distinct
  // rows (those sharing a last symbol agree).
  const SymbolStream stream = generate_stream(catalog::e1(), 100000, 6);
  DMarkovConfig cfg;
  cfg.depth = 2;
  cfg.merge_tol = 0.05;
  const EstimatedModel est = estimate_dmarkov(stream, catalog::binary_alphabet(), cfg);
  CHECK(est.model.state_count() == 2);
  // Align starts for the comparison: the block labeled by context "00" plays
  // the role of state A (last symbol 0).
  int block_00 = 0;
  for (int q = 0; q < est.model.state_count(); ++q) {
    if (est.model.state_labels()[static_cast<size_t>(q)] == "00") block_00 = q;
  }
  CHECK(theta_distance(est.model.with_start(block_00), catalog::e1().with_start(0), 4) < 0.02);
  // Never merges contexts whose rows genuinely differ: the same pass on the
  // depth-2 source keeps all four states.
  const SymbolStream m2_stream = generate_stream(catalog::m2(), 100000, 6);
  const EstimatedModel m2_est = estimate_dmarkov(m2_stream, catalog::binary_alphabet(), cfg);
  CHECK(m2_est.model.state_count() == 4);
}

TEST_CASE("theta distance: identity, symmetry, frozen value") {
  CHECK(theta_distance(catalog::m2(), catalog::m2(), 6) == doctest::Approx(0.0));
  // Frozen by enumeration: depth-0 term 0.3, depth-1 term mean(0.3, 0.1),
  // weights 1/2 and 1/4 renormalized by 3/4.
  CHECK(theta_distance(catalog::white(), catalog::e1(), 1) ==
        doctest::Approx(0.26666666666666666).epsilon(1e-12));
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto [g1, g2] = pfsa::testing::random_pair(rng);
    const double ab = theta_distance(g1, g2, 4);
    const double ba = theta_distance(g2, g1, 4);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("theta satisfies the triangle inequality on random triples") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Pfsa a = pfsa::testing::random_machine(rng, 4, 2);
    const Pfsa b = pfsa::testing::random_machine(rng, 4, 2);
    const Pfsa c = pfsa::testing::random_machine(rng, 4, 2);
    const double ab = theta_distance(a, b, 4);
    const double bc = theta_distance(b, c, 4);
    const double ac = theta_distance(a, c, 4);
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("masked theta drops excluded contexts from the average") {
  const Pfsa g = catalog::e1();
  const Pfsa w = catalog::white();
  // Masking state B leaves only state A's conditionals in every level.
  std::vector<char> only_a{1, 0};
  const double masked = theta_distance_masked(g, w, 3, &only_a);
  CHECK(masked == doctest::Approx(0.3).epsilon(1e-12));  // half L1 of (0.2,0.8) vs uniform
  std::vector<char> none{0, 0};
  CHECK(theta_distance_masked(g, w, 3, &none) == doctest::Approx(1.0));
}

TEST_CASE("white noise detector separates white from patterned streams") {
  const SymbolStream white_stream = generate_stream(catalog::white(), 20000, 7);
  const WhiteNoiseScore ws = white_noise_score(white_stream, catalog::binary_alphabet());
  CHECK(ws.score < 0.02);
  CHECK(ws.length_used == 20000);
  CHECK(ws.contexts_excluded == 0);

  const SymbolStream m2_stream = generate_stream(catalog::m2(), 20000, 7);
  CHECK(white_noise_score(m2_stream, catalog::binary_alphabet()).score > 0.1);

  // Degenerate constant stream: every sampled context is a point mass.
  SymbolStream constant;
  constant.symbols.assign(20000, 1);
  CHECK(white_noise_score(constant, catalog::binary_alphabet()).score > 0.4);
}

TEST_CASE("detector score ranks mixed streams above pure white on average") {
  // 90% white with 10-symbol patterned bursts; individual seeds are noisy at
  // this dilution, so the ordering is asserted on the 20-seed means.
  double white_total = 0.0, mixed_total = 0.0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const SymbolStream white_stream = generate_stream(catalog::white(), 20000, seed);
    const SymbolStream pattern = generate_stream(catalog::m2(), 2000, seed + 1);
    SymbolStream mixed;
    mixed.symbols.reserve(20000);
    size_t wi = 0, pi = 0;
    while (mixed.size() < 20000) {
      for (int i = 0; i < 90 && wi < white_stream.size(); ++i) {
        mixed.symbols.push_back(white_stream.symbols[wi++]);
      }
      for (int i = 0; i < 10; ++i) mixed.symbols.push_back(pattern.symbols[pi++ % pattern.size()]);
    }
    white_total += white_noise_score(white_stream, catalog::binary_alphabet()).score;
    mixed_total += white_noise_score(mixed, catalog::binary_alphabet()).score;
  }
  CHECK(white_total < mixed_total);
}

TEST_CASE("tau calibration is cached and sits above typical white scores") {
  const Alphabet ab = catalog::binary_alphabet();
  const double tau = calibrate_tau(ab, 20000, 100, 1234);
  CHECK(tau > 0.0);
  CHECK(tau < 0.05);
  CHECK(calibrate_tau(ab, 20000, 100, 1234) == tau);  // cache hit
  // Most white streams score below the calibrated 99th percentile.
  int below = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SymbolStream stream = generate_stream(catalog::white(), 20000, 9000 + seed);
    below += white_noise_score(stream, ab).score <= tau;
  }
  CHECK(below >= 18);
}
