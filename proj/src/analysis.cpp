#include "pfsa/analysis.hpp"

#include <cmath>

namespace pfsa {

std::vector<double> harmonic_means(const Pfsa& g) {
  const int k = g.alphabet().size();
  std::vector<double> out(static_cast<size_t>(g.state_count()));
  for (int q = 0; q < g.state_count(); ++q) {
    double reciprocal_sum = 0.0;
    for (int s = 0; s < k; ++s) reciprocal_sum += 1.0 / g.morph(q, s);
    out[static_cast<size_t>(q)] = static_cast<double>(k) / reciprocal_sum;
  }
  return out;
}

AuxiliaryPfsa auxiliary_pfsa(const Pfsa& g) {
  const int k = g.alphabet().size();
  const std::vector<double> harmonic = harmonic_means(g);
  AuxiliaryPfsa aux;
  aux.alphabet.reserve(static_cast<size_t>(2 * k));
  for (int s = 0; s < k; ++s) aux.alphabet.push_back(g.alphabet().label(s));
  for (int s = 0; s < k; ++s) aux.alphabet.push_back(g.alphabet().label(s) + "'");
  aux.states = g.state_labels();
  aux.start = g.start();
  aux.delta.reserve(static_cast<size_t>(g.state_count()));
  aux.morph.reserve(static_cast<size_t>(g.state_count()));
  for (int q = 0; q < g.state_count(); ++q) {
    std::vector<int> drow(static_cast<size_t>(2 * k));
    std::vector<double> mrow(static_cast<size_t>(2 * k));
    const double base = harmonic[static_cast<size_t>(q)] / static_cast<double>(k);
    for (int s = 0; s < k; ++s) {
      drow[static_cast<size_t>(s)] = g.next(q, s);
      drow[static_cast<size_t>(k + s)] = g.next(q, s);
      mrow[static_cast<size_t>(s)] = base;
      // Harmonic <= min row entry guarantees this is >= 0; it is exactly 0
      // for uniform rows, which is why this type stays outside the algebra.
      mrow[static_cast<size_t>(k + s)] = g.morph(q, s) - base;
    }
    aux.delta.push_back(std::move(drow));
    aux.morph.push_back(std::move(mrow));
  }
  return aux;
}

StationaryDistribution auxiliary_stationary(const AuxiliaryPfsa& aux) {
  // The auxiliary state chain collapses primed and unprimed mass onto the
  // same successor, so its transition matrix equals the original machine's.
  const int n = static_cast<int>(aux.states.size());
  const int k2 = static_cast<int>(aux.alphabet.size());
  std::vector<std::vector<double>> morph(static_cast<size_t>(n),
                                         std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int q = 0; q < n; ++q) {
    for (int s = 0; s < k2; ++s) {
      morph[static_cast<size_t>(q)][static_cast<size_t>(aux.delta[static_cast<size_t>(q)][static_cast<size_t>(s)])] +=
          aux.morph[static_cast<size_t>(q)][static_cast<size_t>(s)];
    }
  }
  if (n == 1) return {{1.0}, 1.0};
  // Zero entries are possible here; solve directly by power iteration on the
  // dense matrix rather than requiring a positive-morph Pfsa.
  std::vector<double> p(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
  std::vector<double> next(static_cast<size_t>(n));
  for (int iter = 0; iter < 200000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        next[static_cast<size_t>(j)] += p[static_cast<size_t>(i)] * morph[static_cast<size_t>(i)][static_cast<size_t>(j)];
      }
    }
    // Cesaro damping handles periodic chains.
    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
      next[static_cast<size_t>(j)] = 0.5 * next[static_cast<size_t>(j)] + 0.5 * p[static_cast<size_t>(j)];
      residual += std::abs(next[static_cast<size_t>(j)] - p[static_cast<size_t>(j)]);
    }
    p.swap(next);
    if (residual < kStationaryResidual) break;
  }
  double min_entry = p[0];
  for (double v : p) min_entry = std::min(min_entry, v);
  return {std::move(p), min_entry};
}

double expected_observable_fraction(const Pfsa& g) {
  const std::vector<double> harmonic = harmonic_means(g);
  const StationaryDistribution stat = stationary_distribution(g);
  double lambda = 0.0;
  for (int q = 0; q < g.state_count(); ++q) {
    lambda += stat.probabilities[static_cast<size_t>(q)] * harmonic[static_cast<size_t>(q)];
  }
  return lambda;
}

BetaBounds beta_bounds(const Pfsa& g) {
  const int k = g.alphabet().size();
  const int n = g.state_count();
  const std::vector<double> harmonic = harmonic_means(g);
  const StationaryDistribution stat = stationary_distribution(g);
  double lambda = 0.0;
  double reciprocal_sum = 0.0;
  for (int q = 0; q < n; ++q) {
    lambda += stat.probabilities[static_cast<size_t>(q)] * harmonic[static_cast<size_t>(q)];
    reciprocal_sum += 1.0 / harmonic[static_cast<size_t>(q)];
  }
  BetaBounds out;
  out.beta1 = static_cast<double>(k) * static_cast<double>(n) * stat.min_entry /
              (lambda * reciprocal_sum);
  out.coarse = static_cast<double>(k) / static_cast<double>(n);
  out.white_noise_boundary = is_white_noise(g);
  return out;
}

double measured_beta(double annihilator_length, double direct_length, double lambda) {
  if (annihilator_length <= 0.0 || direct_length <= 0.0 || lambda <= 0.0) {
    throw std::invalid_argument("measured_beta requires positive lengths and lambda");
  }
  return annihilator_length / (direct_length * lambda);
}

AnnihilationProfile annihilation_profile(const Pfsa& g) {
  AnnihilationProfile out;
  out.harmonic = harmonic_means(g);
  const StationaryDistribution stat = stationary_distribution(g);
  out.stationary = stat.probabilities;
  out.min_stationary = stat.min_entry;
  out.lambda = 0.0;
  for (int q = 0; q < g.state_count(); ++q) {
    out.lambda += out.stationary[static_cast<size_t>(q)] * out.harmonic[static_cast<size_t>(q)];
  }
  const BetaBounds bounds = beta_bounds(g);
  out.beta1 = bounds.beta1;
  out.coarse_bound = bounds.coarse;
  out.white_noise_boundary = bounds.white_noise_boundary;
  return out;
}

}  // namespace pfsa
