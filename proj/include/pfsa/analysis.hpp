#pragma once

// Annihilation performance analytics: per-state harmonic means, the auxiliary
// automaton over the doubled alphabet, the expected observable fraction
// lambda, and the annihilation-advantage coefficient beta with its bounds.

#include <vector>

#include "pfsa/pfsa.hpp"

namespace pfsa {

struct WhiteNoiseInput : std::runtime_error {
  WhiteNoiseInput()
      : std::runtime_error("bound is vacuous for a white-noise machine (all rows uniform)") {}
};

// H_i = |Sigma| / sum_j (1 / morph(i, j)); harmonic mean of each morph row.
std::vector<double> harmonic_means(const Pfsa& g);

// Analysis-only model over Sigma plus primed copies. Primed entries can be
// zero (exactly for uniform rows), so this deliberately lives outside the
// positive-morph class and is not fed back into the algebra.
struct AuxiliaryPfsa {
  std::vector<std::string> alphabet;             // unprimed labels then primed
  std::vector<std::string> states;
  int start;
  std::vector<std::vector<int>> delta;           // primed symbol acts like its unprimed twin
  std::vector<std::vector<double>> morph;        // [state][unprimed..., primed...]
};

AuxiliaryPfsa auxiliary_pfsa(const Pfsa& g);

// Stationary distribution of the auxiliary model's state chain.
StationaryDistribution auxiliary_stationary(const AuxiliaryPfsa& aux);

// lambda = sum_i stationary_i * H_i; the asymptotic emitted/sensed ratio of a
// correctly synchronized annihilator component.
double expected_observable_fraction(const Pfsa& g);

struct BetaBounds {
  double beta1;        // |Sigma| |Q| p_star / (lambda * sum_j 1/H_j)
  double coarse;       // |Sigma| / |Q|
  bool white_noise_boundary;  // true when g is white noise and beta1 sits on the bound
};

// Throws WhiteNoiseInput only via the flag policy: a single-state uniform
// machine returns the boundary value with white_noise_boundary set instead of
// throwing, so callers can still read the (tight) bound.
BetaBounds beta_bounds(const Pfsa& g);

// beta = L_w / (L_d * lambda): detection-length ratio between whitening-based
// and direct identification, discounted by the annihilation thinning.
double measured_beta(double annihilator_length, double direct_length, double lambda);

struct AnnihilationProfile {
  std::vector<double> harmonic;   // H_i per state
  std::vector<double> stationary;
  double min_stationary;
  double lambda;
  double beta1;
  double coarse_bound;            // |Sigma| / |Q|
  bool white_noise_boundary;
};

AnnihilationProfile annihilation_profile(const Pfsa& g);

}  // namespace pfsa
