#pragma once

// Expected limiting rank distributions of a Bayesian game over its prior:
// exact for finite priors, Monte-Carlo otherwise.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arc/alpha_rank.hpp"
#include "arc/game_model.hpp"

namespace arc {

/// Which alpha produced the distribution of one support point or sample.
struct AlphaRecord {
  std::size_t index = 0;
  double alpha = 0.0;
  bool retried = false;
  bool skipped = false;
};

struct Collection {
  std::vector<double> probabilities;
  std::vector<double> standard_errors;  // zeros in exact mode
  std::size_t n_samples = 0;            // support size (exact) or draws (MC)
  bool exact = false;
  std::size_t skipped = 0;
  std::string alpha_policy;
  std::vector<AlphaRecord> alphas;
};

Collection exact_collection(const BayesianGame& bg, std::size_t m, const SweepConfig& sweep);

struct MonteCarloOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  std::size_t m = kDefaultPopulation;
  SweepConfig sweep = SweepConfig::fixed(6.71, 0.1);
  std::size_t threads = 1;
  double max_skip_fraction = 0.1;
};

/// Mean of per-sample sweep distributions, reduced in sample order. A
/// sample whose sweep fails is retried once with a doubling sweep from a
/// smaller alpha, then skipped. Throws ExcessiveSkips when more than
/// max_skip_fraction of the samples are skipped.
Collection monte_carlo_collection(const BayesianGame& bg, const MonteCarloOptions& opts);

/// (p^2, (1 - p^2)/2, (1 - p^2)/2, 0) over (HH, HD, DH, DD).
std::array<double, 4> hawk_dove_closed_form(double p);

/// table[g][s]: mass on strategy s, averaged over the marginals of the
/// players in group g.
using MarginalTable = std::vector<std::vector<double>>;

MarginalTable group_marginals(std::span<const double> distribution,
                              const std::vector<std::vector<std::size_t>>& groups,
                              std::span<const std::size_t> strategy_counts);

}  // namespace arc
