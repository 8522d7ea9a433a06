#include "pfsa/algebra.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace pfsa {

namespace {

std::vector<double> normalize(std::vector<double> row) {
  double sum = 0.0;
  for (double v : row) sum += v;
  if (sum < 1e-300) throw std::logic_error("row sum underflow during renormalization");
  for (double& v : row) v /= sum;
  return row;
}

struct PairProduct {
  std::vector<std::pair<int, int>> pairs;     // discovery order from (start1, start2)
  std::vector<std::vector<int>> delta;        // over pair indices
  std::vector<std::string> labels;
};

PairProduct reachable_pairs(const Pfsa& g1, const Pfsa& g2) {
  const int k = g1.alphabet().size();
  PairProduct out;
  std::map<std::pair<int, int>, int> index;
  auto intern = [&](int a, int b) {
    auto [it, fresh] = index.try_emplace({a, b}, static_cast<int>(out.pairs.size()));
    if (fresh) {
      out.pairs.emplace_back(a, b);
      out.labels.push_back("(" + g1.state_labels()[static_cast<size_t>(a)] + "," +
                           g2.state_labels()[static_cast<size_t>(b)] + ")");
    }
    return it->second;
  };
  intern(g1.start(), g2.start());
  for (size_t i = 0; i < out.pairs.size(); ++i) {
    auto [a, b] = out.pairs[i];
    std::vector<int> row;
    row.reserve(static_cast<size_t>(k));
    for (int s = 0; s < k; ++s) row.push_back(intern(g1.next(a, s), g2.next(b, s)));
    out.delta.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Pfsa synchronous_compose(const Pfsa& g1, const Pfsa& g2) {
  if (g1.alphabet() != g2.alphabet()) throw AlphabetMismatch();
  PairProduct product = reachable_pairs(g1, g2);
  std::vector<std::vector<double>> morph;
  morph.reserve(product.pairs.size());
  for (auto [a, b] : product.pairs) {
    (void)b;
    morph.push_back(g1.morph_rows()[static_cast<size_t>(a)]);
  }
  return Pfsa::trusted(g1.alphabet(), std::move(product.labels), 0, std::move(product.delta),
                       std::move(morph));
}

Pfsa add_same_structure(const Pfsa& g1, const Pfsa& g2) {
  if (!structurally_equal(g1, g2)) throw StructureMismatch();
  std::vector<std::vector<double>> morph;
  morph.reserve(static_cast<size_t>(g1.state_count()));
  for (int q = 0; q < g1.state_count(); ++q) {
    std::vector<double> row(static_cast<size_t>(g1.alphabet().size()));
    for (int s = 0; s < g1.alphabet().size(); ++s) row[static_cast<size_t>(s)] = g1.morph(q, s) * g2.morph(q, s);
    morph.push_back(normalize(std::move(row)));
  }
  return g1.with_morph(std::move(morph));
}

Pfsa add_general(const Pfsa& g1, const Pfsa& g2) {
  if (g1.alphabet() != g2.alphabet()) throw AlphabetMismatch();
  // One pair walk yields both composites already index-aligned: the pair
  // (q_i, q_j) carries g1's row for g1 (x) g2 and g2's row for g2 (x) g1.
  PairProduct product = reachable_pairs(g1, g2);
  std::vector<std::vector<double>> morph;
  morph.reserve(product.pairs.size());
  for (auto [a, b] : product.pairs) {
    std::vector<double> row(static_cast<size_t>(g1.alphabet().size()));
    for (int s = 0; s < g1.alphabet().size(); ++s) {
      row[static_cast<size_t>(s)] = g1.morph(a, s) * g2.morph(b, s);
    }
    morph.push_back(normalize(std::move(row)));
  }
  return Pfsa::trusted(g1.alphabet(), std::move(product.labels), 0, std::move(product.delta),
                       std::move(morph));
}

Pfsa invert(const Pfsa& g) {
  std::vector<std::vector<double>> morph;
  morph.reserve(static_cast<size_t>(g.state_count()));
  for (int q = 0; q < g.state_count(); ++q) {
    std::vector<double> row(static_cast<size_t>(g.alphabet().size()));
    for (int s = 0; s < g.alphabet().size(); ++s) row[static_cast<size_t>(s)] = 1.0 / g.morph(q, s);
    morph.push_back(normalize(std::move(row)));
  }
  return g.with_morph(std::move(morph));
}

size_t MeasureTable::entry_count(int alphabet_size, int depth) {
  size_t total = 0;
  size_t level = 1;
  for (int l = 0; l <= depth; ++l) {
    total += level;
    level *= static_cast<size_t>(alphabet_size);
  }
  return total;
}

MeasureTable::MeasureTable(int alphabet_size, int depth, std::vector<double> values)
    : alphabet_size_(alphabet_size), depth_(depth), values_(std::move(values)) {
  offsets_.resize(static_cast<size_t>(depth) + 2);
  size_t level = 1;
  offsets_[0] = 0;
  for (int l = 0; l <= depth; ++l) {
    offsets_[static_cast<size_t>(l) + 1] = offsets_[static_cast<size_t>(l)] + level;
    level *= static_cast<size_t>(alphabet_size);
  }
  if (values_.size() != offsets_.back()) throw std::invalid_argument("measure table size mismatch");
}

size_t MeasureTable::rank(std::span<const int> word) const {
  size_t value = 0;
  for (int s : word) value = value * static_cast<size_t>(alphabet_size_) + static_cast<size_t>(s);
  return offsets_[word.size()] + value;
}

double MeasureTable::at(std::span<const int> word) const {
  if (word.size() > static_cast<size_t>(depth_)) throw std::out_of_range("word longer than table depth");
  return values_[rank(word)];
}

namespace {

constexpr size_t kTableBudget = size_t{1} << 25;

}  // namespace

MeasureTable measure_table(const Pfsa& g, int depth) {
  const int k = g.alphabet().size();
  if (MeasureTable::entry_count(k, depth) > kTableBudget) throw TableTooLarge();
  std::vector<double> values;
  values.reserve(MeasureTable::entry_count(k, depth));
  // Breadth-first in word rank order; each level extends the previous one.
  struct Node {
    int state;
    double p;
  };
  std::vector<Node> level{{g.start(), 1.0}};
  values.push_back(1.0);
  for (int l = 1; l <= depth; ++l) {
    std::vector<Node> next;
    next.reserve(level.size() * static_cast<size_t>(k));
    for (const auto& node : level) {
      for (int s = 0; s < k; ++s) {
        next.push_back({g.next(node.state, s), node.p * g.morph(node.state, s)});
        values.push_back(next.back().p);
      }
    }
    level = std::move(next);
  }
  return MeasureTable(k, depth, std::move(values));
}

MeasureTable measure_add(const MeasureTable& t1, const MeasureTable& t2) {
  if (t1.alphabet_size() != t2.alphabet_size() || t1.depth() != t2.depth()) throw DepthMismatch();
  const int k = t1.alphabet_size();
  const int depth = t1.depth();
  std::vector<double> values(t1.values().size());
  values[0] = 1.0;
  // p3(x tau) = p3(x) * p1(x tau) p2(x tau) / sum_alpha p1(x alpha) p2(x alpha)
  size_t parent_begin = 0;
  size_t parent_count = 1;
  size_t child_begin = 1;
  for (int l = 0; l < depth; ++l) {
    for (size_t p = 0; p < parent_count; ++p) {
      const size_t parent = parent_begin + p;
      const size_t base = child_begin + p * static_cast<size_t>(k);
      double denom = 0.0;
      for (int s = 0; s < k; ++s) denom += t1.values()[base + static_cast<size_t>(s)] *
                                           t2.values()[base + static_cast<size_t>(s)];
      for (int s = 0; s < k; ++s) {
        const size_t c = base + static_cast<size_t>(s);
        values[c] = values[parent] * t1.values()[c] * t2.values()[c] / denom;
      }
    }
    parent_begin = child_begin;
    parent_count *= static_cast<size_t>(k);
    child_begin += parent_count;
  }
  return MeasureTable(k, depth, std::move(values));
}

MeasureTable white_noise_table(int alphabet_size, int depth) {
  if (MeasureTable::entry_count(alphabet_size, depth) > kTableBudget) throw TableTooLarge();
  std::vector<double> values;
  values.reserve(MeasureTable::entry_count(alphabet_size, depth));
  double p = 1.0;
  size_t level = 1;
  for (int l = 0; l <= depth; ++l) {
    for (size_t i = 0; i < level; ++i) values.push_back(p);
    p /= static_cast<double>(alphabet_size);
    level *= static_cast<size_t>(alphabet_size);
  }
  return MeasureTable(alphabet_size, depth, std::move(values));
}

namespace {

void compare_walk(const Pfsa& g1, const Pfsa& g2, int q1, int q2, double p1, double p2,
                  std::vector<int>& word, int depth, MeasureComparison& out) {
  const double dev = std::abs(p1 - p2);
  if (dev > out.max_deviation) {
    out.max_deviation = dev;
    out.argmax_word = word;
  }
  if (depth == 0) return;
  for (int s = 0; s < g1.alphabet().size(); ++s) {
    word.push_back(s);
    compare_walk(g1, g2, g1.next(q1, s), g2.next(q2, s), p1 * g1.morph(q1, s), p2 * g2.morph(q2, s),
                 word, depth - 1, out);
    word.pop_back();
  }
}

}  // namespace

MeasureComparison measure_equivalent(const Pfsa& g1, const Pfsa& g2, int depth, double tol) {
  if (g1.alphabet() != g2.alphabet()) throw AlphabetMismatch();
  MeasureComparison out{true, 0.0, {}};
  std::vector<int> word;
  compare_walk(g1, g2, g1.start(), g2.start(), 1.0, 1.0, word, depth, out);
  out.equivalent = out.max_deviation <= tol;
  return out;
}

}  // namespace pfsa
