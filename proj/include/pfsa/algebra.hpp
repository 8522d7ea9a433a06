#pragma once

// The abelian group of PFSA: synchronous composition, rowwise addition,
// inversion, and finite-depth measure tables used as the independent oracle
// for the machine-level operations.

#include <span>
#include <vector>

#include "pfsa/pfsa.hpp"

namespace pfsa {

struct AlphabetMismatch : std::runtime_error {
  AlphabetMismatch() : std::runtime_error("operands have different alphabets") {}
};

struct StructureMismatch : std::runtime_error {
  StructureMismatch() : std::runtime_error("operands are not structurally equal") {}
};

struct TableTooLarge : std::runtime_error {
  TableTooLarge() : std::runtime_error("measure table would exceed the size budget") {}
};

struct DepthMismatch : std::runtime_error {
  DepthMismatch() : std::runtime_error("measure tables have different depth or alphabet") {}
};

// Product machine on reachable state pairs; emissions copy the first operand,
// so the result is measure-equivalent to g1. Non-commutative.
Pfsa synchronous_compose(const Pfsa& g1, const Pfsa& g2);

// Rowwise entrywise product, renormalized. Requires structurally equal inputs.
Pfsa add_same_structure(const Pfsa& g1, const Pfsa& g2);

// Group sum for arbitrary same-alphabet machines: both operands are lifted to
// the common reachable-pair structure and added rowwise.
Pfsa add_general(const Pfsa& g1, const Pfsa& g2);

// Rowwise reciprocal, renormalized: add_general(g, invert(g)) is measure
// equivalent to white noise.
Pfsa invert(const Pfsa& g);

// All string probabilities up to a fixed depth, indexed by word rank.
class MeasureTable {
 public:
  MeasureTable(int alphabet_size, int depth, std::vector<double> values);

  int alphabet_size() const { return alphabet_size_; }
  int depth() const { return depth_; }
  double at(std::span<const int> word) const;
  const std::vector<double>& values() const { return values_; }

  static size_t entry_count(int alphabet_size, int depth);
  size_t rank(std::span<const int> word) const;

 private:
  int alphabet_size_;
  int depth_;
  std::vector<double> values_;       // rank-indexed, rank 0 = empty word
  std::vector<size_t> offsets_;      // offsets_[l] = rank of first word of length l
};

MeasureTable measure_table(const Pfsa& g, int depth);

// Conditional-product sum of two measures; the independent oracle for
// add_general.
MeasureTable measure_add(const MeasureTable& t1, const MeasureTable& t2);

MeasureTable white_noise_table(int alphabet_size, int depth);

struct MeasureComparison {
  bool equivalent;
  double max_deviation;
  std::vector<int> argmax_word;
};

// Finite-depth surrogate for PFSA equivalence: compares string probabilities
// of every word up to `depth`.
MeasureComparison measure_equivalent(const Pfsa& g1, const Pfsa& g2, int depth, double tol);

}  // namespace pfsa
