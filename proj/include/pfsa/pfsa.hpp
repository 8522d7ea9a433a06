#pragma once

// Core PFSA model type: a deterministic transition structure over a finite
// alphabet with state-conditioned symbol emission probabilities (the morph
// matrix). Machines in the restricted class handled here have strictly
// positive morph entries and, when fully validated, a strongly connected
// transition graph.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfsa {

inline constexpr double kRowSumTol = 1e-9;        // user-input slack
inline constexpr double kInternalTol = 1e-12;     // algebraic identities
inline constexpr double kStationaryResidual = 1e-12;

class Alphabet {
 public:
  // Throws std::invalid_argument on duplicates or size < 2.
  explicit Alphabet(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index(std::string_view label) const;
  bool all_single_char() const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> labels_;
};

// Untrusted model description, as read from a file or assembled by a caller.
// Delta entries are state labels; everything is checked by Pfsa::validate.
struct RawModel {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::string start;
  std::vector<std::vector<std::string>> delta;   // [state][symbol] -> state label
  std::vector<std::vector<double>> morph;        // [state][symbol]
  std::map<std::string, std::string> metadata;
};

enum class ViolationKind {
  DuplicateLabel,
  BadShape,
  BadStart,
  PartialDelta,
  ZeroMorphEntry,
  NonStochasticRow,
  NotStronglyConnected,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct UnknownSymbolError : std::runtime_error {
  explicit UnknownSymbolError(const std::string& what) : std::runtime_error(what) {}
};

class Pfsa {
 public:
  // Full validation of untrusted input; throws ValidationError listing every
  // violated invariant.
  static Pfsa validate(const RawModel& raw);

  // Collects all violations without throwing.
  static std::vector<Violation> check(const RawModel& raw);

  // For internally constructed machines (algebra outputs, estimators).
  // Checks shape, positivity and row stochasticity but not strong
  // connectivity: a synchronous composite of two irreducible machines can
  // have transient states reachable only from its start.
  static Pfsa trusted(Alphabet alphabet, std::vector<std::string> states, int start,
                      std::vector<std::vector<int>> delta,
                      std::vector<std::vector<double>> morph);

  const Alphabet& alphabet() const { return alphabet_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& state_labels() const { return states_; }
  int start() const { return start_; }

  int next(int state, int symbol) const {
    return delta_[static_cast<size_t>(state)][static_cast<size_t>(symbol)];
  }
  double morph(int state, int symbol) const {
    return morph_[static_cast<size_t>(state)][static_cast<size_t>(symbol)];
  }
  std::span<const double> row(int state) const { return morph_[static_cast<size_t>(state)]; }
  const std::vector<std::vector<int>>& delta() const { return delta_; }
  const std::vector<std::vector<double>>& morph_rows() const { return morph_; }

  // Same structure, different start state.
  Pfsa with_start(int state) const;

  // Same structure, replaced morph rows.
  Pfsa with_morph(std::vector<std::vector<double>> morph) const;

 private:
  Pfsa(Alphabet alphabet, std::vector<std::string> states, int start,
       std::vector<std::vector<int>> delta, std::vector<std::vector<double>> morph);

  Alphabet alphabet_;
  std::vector<std::string> states_;
  int start_;
  std::vector<std::vector<int>> delta_;
  std::vector<std::vector<double>> morph_;
};

struct TransitionMatrix {
  std::vector<std::vector<double>> rows;  // |Q| x |Q|, row stochastic
};

struct StationaryDistribution {
  std::vector<double> probabilities;
  double min_entry;  // over all states
};

struct ConvergenceFailure : std::runtime_error {
  explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

// Pi[i][j] = sum of morph mass of symbols taking state i to state j.
TransitionMatrix transition_matrix(const Pfsa& g);

// Extended transition function: runs `word` from `from`.
int delta_star(const Pfsa& g, int from, std::span<const int> word);

// Prefix-measure probability of `word` along the unique path from the start
// state; 1 for the empty word.
double string_probability(const Pfsa& g, std::span<const int> word);

// Unique sum-normalized left eigenvector of the transition matrix. Power
// iteration with a dense linear-solve fallback for periodic chains.
StationaryDistribution stationary_distribution(const Pfsa& g);

// Single uniform self-loop state; the identity element of the PFSA group.
Pfsa white_noise_pfsa(const Alphabet& alphabet);

bool is_white_noise(const Pfsa& g, double tol = kInternalTol);

// Same alphabet, state count, start index and delta table; morph ignored.
bool structurally_equal(const Pfsa& g1, const Pfsa& g2);

bool strongly_connected(const std::vector<std::vector<int>>& delta);

}  // namespace pfsa
