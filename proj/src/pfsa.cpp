#include "pfsa/pfsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace pfsa {

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw std::invalid_argument("alphabet must have at least two symbols");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("duplicate alphabet label: " + l);
    }
  }
}

std::optional<int> Alphabet::index(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool Alphabet::all_single_char() const {
  return std::all_of(labels_.begin(), labels_.end(),
                     [](const std::string& l) { return l.size() == 1; });
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateLabel: return "DuplicateLabel";
    case ViolationKind::BadShape: return "BadShape";
    case ViolationKind::BadStart: return "BadStart";
    case ViolationKind::PartialDelta: return "PartialDelta";
    case ViolationKind::ZeroMorphEntry: return "ZeroMorphEntry";
    case ViolationKind::NonStochasticRow: return "NonStochasticRow";
    case ViolationKind::NotStronglyConnected: return "NotStronglyConnected";
  }
  return "Unknown";
}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid PFSA:";
  for (const auto& v : violations) {
    os << "\n  [" << to_string(v.kind) << "] " << v.detail;
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

bool strongly_connected(const std::vector<std::vector<int>>& delta) {
  const size_t n = delta.size();
  if (n == 0) return false;
  auto reach_all = [n](auto&& neighbors) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    size_t count = 1;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int r : neighbors(q)) {
        if (!seen[static_cast<size_t>(r)]) {
          seen[static_cast<size_t>(r)] = 1;
          ++count;
          stack.push_back(r);
        }
      }
    }
    return count == n;
  };
  std::vector<std::vector<int>> reverse(n);
  for (size_t q = 0; q < n; ++q) {
    for (int r : delta[q]) reverse[static_cast<size_t>(r)].push_back(static_cast<int>(q));
  }
  return reach_all([&](int q) -> const std::vector<int>& { return delta[static_cast<size_t>(q)]; }) &&
         reach_all([&](int q) -> const std::vector<int>& { return reverse[static_cast<size_t>(q)]; });
}

std::vector<Violation> Pfsa::check(const RawModel& raw) {
  std::vector<Violation> out;
  auto add = [&out](ViolationKind kind, std::string detail) {
    out.push_back({kind, std::move(detail)});
  };

  std::set<std::string> seen;
  for (const auto& l : raw.alphabet) {
    if (!seen.insert(l).second) add(ViolationKind::DuplicateLabel, "alphabet label '" + l + "'");
  }
  seen.clear();
  for (const auto& s : raw.states) {
    if (!seen.insert(s).second) add(ViolationKind::DuplicateLabel, "state id '" + s + "'");
  }
  if (raw.alphabet.size() < 2) add(ViolationKind::BadShape, "alphabet must have at least 2 symbols");
  if (raw.states.empty()) add(ViolationKind::BadShape, "no states");

  const size_t q = raw.states.size();
  const size_t k = raw.alphabet.size();

  auto state_index = [&raw](const std::string& id) -> std::optional<size_t> {
    for (size_t i = 0; i < raw.states.size(); ++i) {
      if (raw.states[i] == id) return i;
    }
    return std::nullopt;
  };

  if (!state_index(raw.start)) add(ViolationKind::BadStart, "start state '" + raw.start + "' unknown");

  bool delta_ok = raw.delta.size() == q;
  if (raw.delta.size() != q) {
    add(ViolationKind::PartialDelta, "delta has " + std::to_string(raw.delta.size()) +
                                         " rows, expected " + std::to_string(q));
  }
  std::vector<std::vector<int>> delta_idx;
  for (size_t i = 0; i < raw.delta.size() && i < q; ++i) {
    std::vector<int> row;
    if (raw.delta[i].size() != k) {
      add(ViolationKind::PartialDelta,
          "delta row for state '" + raw.states[i] + "' has " + std::to_string(raw.delta[i].size()) +
              " entries, expected " + std::to_string(k));
      delta_ok = false;
      continue;
    }
    for (size_t j = 0; j < k; ++j) {
      auto target = state_index(raw.delta[i][j]);
      if (!target) {
        add(ViolationKind::PartialDelta, "delta(" + raw.states[i] + ", " + raw.alphabet[j] +
                                             ") -> unknown state '" + raw.delta[i][j] + "'");
        delta_ok = false;
      } else {
        row.push_back(static_cast<int>(*target));
      }
    }
    if (row.size() == k) delta_idx.push_back(std::move(row));
  }

  if (raw.morph.size() != q) {
    add(ViolationKind::BadShape, "morph has " + std::to_string(raw.morph.size()) +
                                     " rows, expected " + std::to_string(q));
  }
  for (size_t i = 0; i < raw.morph.size() && i < q; ++i) {
    if (raw.morph[i].size() != k) {
      add(ViolationKind::BadShape, "morph row for state '" + raw.states[i] + "' has " +
                                       std::to_string(raw.morph[i].size()) + " entries, expected " +
                                       std::to_string(k));
      continue;
    }
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) {
      if (raw.morph[i][j] <= 0.0) {
        add(ViolationKind::ZeroMorphEntry, "morph(" + raw.states[i] + ", " + raw.alphabet[j] +
                                               ") = " + std::to_string(raw.morph[i][j]));
      }
      sum += raw.morph[i][j];
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      add(ViolationKind::NonStochasticRow,
          "morph row for state '" + raw.states[i] + "' sums to " + std::to_string(sum));
    }
  }

  if (delta_ok && delta_idx.size() == q && q > 0 && !strongly_connected(delta_idx)) {
    add(ViolationKind::NotStronglyConnected, "transition graph is not strongly connected");
  }
  return out;
}

Pfsa Pfsa::validate(const RawModel& raw) {
  auto violations = check(raw);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  Alphabet alphabet(raw.alphabet);
  const size_t k = raw.alphabet.size();
  std::vector<std::vector<int>> delta;
  delta.reserve(raw.states.size());
  auto state_index = [&raw](const std::string& id) {
    return static_cast<int>(std::find(raw.states.begin(), raw.states.end(), id) - raw.states.begin());
  };
  for (const auto& raw_row : raw.delta) {
    std::vector<int> row;
    row.reserve(k);
    for (const auto& target : raw_row) row.push_back(state_index(target));
    delta.push_back(std::move(row));
  }
  return Pfsa(std::move(alphabet), raw.states, state_index(raw.start), std::move(delta), raw.morph);
}

Pfsa Pfsa::trusted(Alphabet alphabet, std::vector<std::string> states, int start,
                   std::vector<std::vector<int>> delta, std::vector<std::vector<double>> morph) {
  const size_t q = states.size();
  const size_t k = static_cast<size_t>(alphabet.size());
  if (q == 0 || delta.size() != q || morph.size() != q || start < 0 ||
      static_cast<size_t>(start) >= q) {
    throw std::invalid_argument("malformed machine");
  }
  for (size_t i = 0; i < q; ++i) {
    if (delta[i].size() != k || morph[i].size() != k) {
      throw std::invalid_argument("malformed machine row");
    }
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) {
      if (delta[i][j] < 0 || static_cast<size_t>(delta[i][j]) >= q) {
        throw std::invalid_argument("delta target out of range");
      }
      if (morph[i][j] <= 0.0) throw std::invalid_argument("non-positive morph entry");
      sum += morph[i][j];
    }
    if (std::abs(sum - 1.0) > kRowSumTol) throw std::invalid_argument("non-stochastic morph row");
  }
  return Pfsa(std::move(alphabet), std::move(states), start, std::move(delta), std::move(morph));
}

Pfsa::Pfsa(Alphabet alphabet, std::vector<std::string> states, int start,
           std::vector<std::vector<int>> delta, std::vector<std::vector<double>> morph)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      start_(start),
      delta_(std::move(delta)),
      morph_(std::move(morph)) {}

Pfsa Pfsa::with_start(int state) const {
  if (state < 0 || state >= state_count()) throw std::invalid_argument("start out of range");
  Pfsa copy = *this;
  copy.start_ = state;
  return copy;
}

Pfsa Pfsa::with_morph(std::vector<std::vector<double>> morph) const {
  return trusted(alphabet_, states_, start_, delta_, std::move(morph));
}

TransitionMatrix transition_matrix(const Pfsa& g) {
  const int q = g.state_count();
  const int k = g.alphabet().size();
  TransitionMatrix out;
  out.rows.assign(static_cast<size_t>(q), std::vector<double>(static_cast<size_t>(q), 0.0));
  for (int i = 0; i < q; ++i) {
    for (int s = 0; s < k; ++s) {
      out.rows[static_cast<size_t>(i)][static_cast<size_t>(g.next(i, s))] += g.morph(i, s);
    }
  }
  return out;
}

int delta_star(const Pfsa& g, int from, std::span<const int> word) {
  int q = from;
  for (int s : word) {
    if (s < 0 || s >= g.alphabet().size()) {
      throw UnknownSymbolError("symbol index " + std::to_string(s) + " outside alphabet");
    }
    q = g.next(q, s);
  }
  return q;
}

double string_probability(const Pfsa& g, std::span<const int> word) {
  int q = g.start();
  double p = 1.0;
  for (int s : word) {
    if (s < 0 || s >= g.alphabet().size()) {
      throw UnknownSymbolError("symbol index " + std::to_string(s) + " outside alphabet");
    }
    p *= g.morph(q, s);
    q = g.next(q, s);
  }
  return p;
}

namespace {

// Solves p = p Pi, sum(p) = 1 by Gaussian elimination on (Pi^T - I) p = 0
// with the normalization equation replacing the last row.
std::vector<double> stationary_linear_solve(const TransitionMatrix& pi) {
  const size_t n = pi.rows.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = pi.rows[j][i];
    a[i][i] -= 1.0;
  }
  for (size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;

  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    if (std::abs(a[col][col]) < 1e-300) {
      throw ConvergenceFailure("singular system in stationary solve");
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> p(n);
  for (size_t i = 0; i < n; ++i) p[i] = a[i][n] / a[i][i];
  return p;
}

double stationary_residual(const std::vector<double>& p, const TransitionMatrix& pi) {
  const size_t n = p.size();
  double worst = 0.0;
  for (size_t j = 0; j < n; ++j) {
    double v = 0.0;
    for (size_t i = 0; i < n; ++i) v += p[i] * pi.rows[i][j];
    worst = std::max(worst, std::abs(v - p[j]));
  }
  return worst;
}

}  // namespace

StationaryDistribution stationary_distribution(const Pfsa& g) {
  const auto pi = transition_matrix(g);
  const size_t n = pi.rows.size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));

  constexpr int kMaxIterations = 100000;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::vector<double> next(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) next[j] += p[i] * pi.rows[i][j];
    }
    double diff = 0.0;
    for (size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(next[j] - p[j]));
    p = std::move(next);
    if (diff < kStationaryResidual) {
      converged = true;
      break;
    }
  }
  // Periodic chains oscillate under power iteration; solve directly instead.
  if (!converged) {
    if (n > 64) throw ConvergenceFailure("power iteration did not converge and |Q| > 64");
    p = stationary_linear_solve(pi);
    if (stationary_residual(p, pi) > 1e-8) {
      throw ConvergenceFailure("stationary linear solve residual too large");
    }
  }
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  double min_entry = 1.0;
  for (auto& v : p) {
    v /= sum;
    min_entry = std::min(min_entry, v);
  }
  return {std::move(p), min_entry};
}

Pfsa white_noise_pfsa(const Alphabet& alphabet) {
  const size_t k = static_cast<size_t>(alphabet.size());
  std::vector<std::vector<int>> delta{std::vector<int>(k, 0)};
  std::vector<std::vector<double>> morph{std::vector<double>(k, 1.0 / static_cast<double>(k))};
  return Pfsa::trusted(alphabet, {"w"}, 0, std::move(delta), std::move(morph));
}

bool is_white_noise(const Pfsa& g, double tol) {
  const double uniform = 1.0 / g.alphabet().size();
  for (int q = 0; q < g.state_count(); ++q) {
    for (int s = 0; s < g.alphabet().size(); ++s) {
      if (std::abs(g.morph(q, s) - uniform) > tol) return false;
    }
  }
  return true;
}

bool structurally_equal(const Pfsa& g1, const Pfsa& g2) {
  return g1.alphabet() == g2.alphabet() && g1.state_count() == g2.state_count() &&
         g1.start() == g2.start() && g1.delta() == g2.delta();
}

}  // namespace pfsa
