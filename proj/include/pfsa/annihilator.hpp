#pragma once

// Online semantic annihilation: per-pattern banks of inverse-model copies,
// one per state, that selectively erase sensed symbols their own random
// emission happens to match. A correctly synchronized component reduces a
// stream of its pattern to symbolic white noise.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfsa/algebra.hpp"
#include "pfsa/estimation.hpp"
#include "pfsa/pfsa.hpp"
#include "pfsa/stream.hpp"

namespace pfsa {

struct EmptyLibrary : std::runtime_error {
  EmptyLibrary() : std::runtime_error("classification library is empty") {}
};

// Emits the sensed symbol when it matches the generated one, nothing otherwise.
std::optional<int> erase(int sensed, int generated);

class AnnihilatorComponent {
 public:
  AnnihilatorComponent(std::shared_ptr<const Pfsa> inverse,
                       std::shared_ptr<const CumulativeMorphMatrix> cumulative, int initial_state,
                       std::uint64_t seed);

  // Generates a symbol from the current state, erases against the sensed
  // symbol, then follows the sensed symbol's transition unconditionally.
  std::optional<int> step(int sensed);

  int state() const { return state_; }
  std::uint64_t sensed_count() const { return sensed_count_; }
  std::uint64_t emitted_count() const { return static_cast<std::uint64_t>(emitted_.symbols.size()); }
  const SymbolStream& emitted() const { return emitted_; }

 private:
  std::shared_ptr<const Pfsa> inverse_;
  std::shared_ptr<const CumulativeMorphMatrix> cumulative_;
  int state_;
  RandomSource rng_;
  SymbolStream emitted_;
  std::uint64_t sensed_count_ = 0;
};

std::optional<int> component_step(AnnihilatorComponent& c, int sensed);

class AnnihilatorBank {
 public:
  AnnihilatorBank(std::string pattern_id, const Pfsa& pattern, std::uint64_t seed);

  const std::string& pattern_id() const { return pattern_id_; }
  const Pfsa& inverse() const { return *inverse_; }
  const Pfsa& pattern() const { return pattern_; }
  int component_count() const { return static_cast<int>(components_.size()); }
  AnnihilatorComponent& component(int j) { return components_[static_cast<size_t>(j)]; }
  const AnnihilatorComponent& component(int j) const { return components_[static_cast<size_t>(j)]; }

  // Broadcasts one sensed symbol to every component.
  void feed_symbol(int sensed);

 private:
  std::string pattern_id_;
  Pfsa pattern_;
  std::shared_ptr<const Pfsa> inverse_;
  std::shared_ptr<const CumulativeMorphMatrix> cumulative_;
  std::vector<AnnihilatorComponent> components_;
};

AnnihilatorBank build_bank(const Pfsa& pattern, std::uint64_t seed,
                           std::string pattern_id = "pattern");

struct BankFeedResult {
  std::vector<SymbolStream> emitted;   // one per component
  std::uint64_t sensed = 0;
};

BankFeedResult bank_feed(AnnihilatorBank& bank, const SymbolStream& stream);

struct ClassifyConfig {
  double tau = 0.05;
  std::uint64_t min_emitted = 2000;
  std::uint64_t check_interval = 500;
  WhiteNoiseConfig detector;
};

struct ClassificationReport {
  std::string pattern_id;
  std::vector<double> component_scores;        // 1.0 when a component is unscorable
  std::vector<std::uint64_t> emitted_lengths;
  int best_component = -1;
  double best_score = 1.0;
  bool verdict = false;
  std::uint64_t sensed_length = 0;
  double tau = 0.05;
};

struct LibraryEntry {
  std::string id;
  Pfsa model;
};

// Incremental classifier: feed symbols as they arrive, poll reports at check
// intervals. A positive verdict requires the best component score <= tau with
// enough emitted symbols, plus a cross-check that the sensed stream itself is
// not white noise (unless the pattern is): a white input stream whitens every
// component's output regardless of pattern.
class ClassifySession {
 public:
  ClassifySession(const std::vector<LibraryEntry>& library, const Alphabet& alphabet,
                  std::uint64_t seed, ClassifyConfig config = {});

  void feed(int symbol);
  void feed(const SymbolStream& stream);
  std::uint64_t sensed() const { return sensed_; }

  // Scores every bank now; reports come back sorted by best score ascending.
  std::vector<ClassificationReport> report();

  // True when sensed() has just crossed a check-interval boundary.
  bool at_check_interval() const {
    return sensed_ > 0 && sensed_ % config_.check_interval == 0;
  }

 private:
  Alphabet alphabet_;
  ClassifyConfig config_;
  std::vector<AnnihilatorBank> banks_;
  std::vector<char> pattern_is_white_;
  std::vector<int> sensed_symbols_;
  std::uint64_t sensed_ = 0;
};

std::vector<ClassificationReport> classify_stream(const std::vector<LibraryEntry>& library,
                                                  const SymbolStream& stream,
                                                  const Alphabet& alphabet, std::uint64_t seed,
                                                  const ClassifyConfig& config = {});

}  // namespace pfsa
