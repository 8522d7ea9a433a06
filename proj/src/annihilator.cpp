#include "pfsa/annihilator.hpp"

#include <algorithm>

namespace pfsa {

std::optional<int> erase(int sensed, int generated) {
  if (sensed == generated) return sensed;
  return std::nullopt;
}

AnnihilatorComponent::AnnihilatorComponent(std::shared_ptr<const Pfsa> inverse,
                                           std::shared_ptr<const CumulativeMorphMatrix> cumulative,
                                           int initial_state, std::uint64_t seed)
    : inverse_(std::move(inverse)),
      cumulative_(std::move(cumulative)),
      state_(initial_state),
      rng_(seed) {}

std::optional<int> AnnihilatorComponent::step(int sensed) {
  const int generated = sample_symbol(cumulative_->row(state_), rng_.next_uniform());
  const std::optional<int> out = erase(sensed, generated);
  if (out) emitted_.symbols.push_back(*out);
  // The state tracks the sensed stream, never the generated one; this is what
  // keeps all components synchronized to the source up to initial state.
  state_ = inverse_->next(state_, sensed);
  ++sensed_count_;
  return out;
}

std::optional<int> component_step(AnnihilatorComponent& c, int sensed) { return c.step(sensed); }

AnnihilatorBank::AnnihilatorBank(std::string pattern_id, const Pfsa& pattern, std::uint64_t seed)
    : pattern_id_(std::move(pattern_id)),
      pattern_(pattern),
      inverse_(std::make_shared<const Pfsa>(invert(pattern))),
      cumulative_(std::make_shared<const CumulativeMorphMatrix>(*inverse_)) {
  components_.reserve(static_cast<size_t>(inverse_->state_count()));
  for (int j = 0; j < inverse_->state_count(); ++j) {
    components_.emplace_back(inverse_, cumulative_, j,
                             RandomSource::derive_seed(seed, static_cast<std::uint64_t>(j)));
  }
}

void AnnihilatorBank::feed_symbol(int sensed) {
  for (auto& c : components_) c.step(sensed);
}

AnnihilatorBank build_bank(const Pfsa& pattern, std::uint64_t seed, std::string pattern_id) {
  return AnnihilatorBank(std::move(pattern_id), pattern, seed);
}

BankFeedResult bank_feed(AnnihilatorBank& bank, const SymbolStream& stream) {
  for (int s : stream.symbols) {
    if (s < 0 || s >= bank.inverse().alphabet().size()) throw AlphabetMismatch();
    bank.feed_symbol(s);
  }
  BankFeedResult out;
  out.sensed = stream.size();
  out.emitted.reserve(static_cast<size_t>(bank.component_count()));
  for (int j = 0; j < bank.component_count(); ++j) {
    out.emitted.push_back(bank.component(j).emitted());
  }
  return out;
}

ClassifySession::ClassifySession(const std::vector<LibraryEntry>& library, const Alphabet& alphabet,
                                 std::uint64_t seed, ClassifyConfig config)
    : alphabet_(alphabet), config_(config) {
  if (library.empty()) throw EmptyLibrary();
  banks_.reserve(library.size());
  for (size_t i = 0; i < library.size(); ++i) {
    const auto& entry = library[i];
    if (entry.model.alphabet() != alphabet_) throw AlphabetMismatch();
    banks_.emplace_back(entry.id, entry.model, RandomSource::derive_seed(seed, i));
    pattern_is_white_.push_back(is_white_noise(entry.model) ? 1 : 0);
  }
}

void ClassifySession::feed(int symbol) {
  if (symbol < 0 || symbol >= alphabet_.size()) throw AlphabetMismatch();
  sensed_symbols_.push_back(symbol);
  for (auto& bank : banks_) bank.feed_symbol(symbol);
  ++sensed_;
}

void ClassifySession::feed(const SymbolStream& stream) {
  for (int s : stream.symbols) feed(s);
}

std::vector<ClassificationReport> ClassifySession::report() {
  // The cross-check needs to know whether the sensed stream itself is white;
  // computed once per report call, lazily and only when some bank could pass.
  std::optional<bool> sensed_is_white;
  auto sensed_white = [&]() {
    if (!sensed_is_white) {
      SymbolStream sensed_stream;
      sensed_stream.symbols = sensed_symbols_;
      try {
        sensed_is_white =
            white_noise_score(sensed_stream, alphabet_, config_.detector).score <= config_.tau;
      } catch (const StreamTooShort&) {
        sensed_is_white = true;  // too little evidence to rule white noise out
      }
    }
    return *sensed_is_white;
  };

  std::vector<ClassificationReport> reports;
  reports.reserve(banks_.size());
  for (size_t i = 0; i < banks_.size(); ++i) {
    auto& bank = banks_[i];
    ClassificationReport r;
    r.pattern_id = bank.pattern_id();
    r.sensed_length = sensed_;
    r.tau = config_.tau;
    for (int j = 0; j < bank.component_count(); ++j) {
      const auto& c = bank.component(j);
      r.emitted_lengths.push_back(c.emitted_count());
      double score = 1.0;
      if (c.emitted_count() >= config_.min_emitted) {
        try {
          score = white_noise_score(c.emitted(), alphabet_, config_.detector).score;
        } catch (const StreamTooShort&) {
          score = 1.0;
        }
      }
      r.component_scores.push_back(score);
      if (score < r.best_score || r.best_component < 0) {
        r.best_score = score;
        r.best_component = j;
      }
    }
    const bool enough = r.best_component >= 0 &&
                        r.emitted_lengths[static_cast<size_t>(r.best_component)] >= config_.min_emitted;
    r.verdict = enough && r.best_score <= config_.tau &&
                (pattern_is_white_[i] || !sensed_white());
    reports.push_back(std::move(r));
  }
  std::sort(reports.begin(), reports.end(),
            [](const ClassificationReport& a, const ClassificationReport& b) {
              return a.best_score < b.best_score;
            });
  return reports;
}

std::vector<ClassificationReport> classify_stream(const std::vector<LibraryEntry>& library,
                                                  const SymbolStream& stream,
                                                  const Alphabet& alphabet, std::uint64_t seed,
                                                  const ClassifyConfig& config) {
  ClassifySession session(library, alphabet, seed, config);
  session.feed(stream);
  return session.report();
}

}  // namespace pfsa
