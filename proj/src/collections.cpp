#include "arc/collections.hpp"

#include <cmath>
#include <optional>

#include "arc/errors.hpp"
#include "arc/parallel.hpp"

namespace arc {

Collection exact_collection(const BayesianGame& bg, std::size_t m, const SweepConfig& sweep) {
  const auto& support = bg.prior().support();
  const std::size_t n = num_profiles(bg.strategy_counts());
  Collection c;
  c.exact = true;
  c.n_samples = support.types.size();
  c.alpha_policy = sweep.describe();
  c.probabilities.assign(n, 0.0);
  c.standard_errors.assign(n, 0.0);

  for (std::size_t k = 0; k < support.types.size(); ++k) {
    const double weight = support.probabilities[k];
    if (weight == 0.0) continue;
    SweepResult r;
    try {
      r = alpha_sweep(realize(bg, support.types[k]), m, sweep);
    } catch (const Error& e) {
      throw SweepError("support point " + std::to_string(k) + ": " + e.what());
    }
    c.alphas.push_back({k, r.alpha_pre, false, false});
    for (std::size_t j = 0; j < n; ++j) c.probabilities[j] += weight * r.dist.probabilities[j];
  }
  return c;
}

namespace {

struct SampleOutcome {
  std::vector<double> distribution;
  double alpha = 0.0;
  bool retried = false;
};

SweepConfig retry_config(const SweepConfig& primary) {
  SweepConfig retry = primary;
  retry.mode = SweepMode::doubling;
  retry.factor = 2.0;
  retry.alpha0 = primary.mode == SweepMode::doubling ? primary.alpha0 / 1024.0 : 1e-5;
  return retry;
}

std::optional<SampleOutcome> evaluate_sample(const BayesianGame& bg, const MonteCarloOptions& opts,
                                             std::size_t index) {
  RngStream rng(opts.seed, index);
  const TypeVector v = sample_type(bg.prior(), rng);
  const NormalFormGame game = realize(bg, v);
  const GameGraph graph(game);
  try {
    auto r = alpha_sweep(graph, game.strategy_counts(), opts.m, opts.sweep);
    return SampleOutcome{std::move(r.dist.probabilities), r.alpha_pre, false};
  } catch (const SweepError&) {
  }
  try {
    auto r = alpha_sweep(graph, game.strategy_counts(), opts.m, retry_config(opts.sweep));
    return SampleOutcome{std::move(r.dist.probabilities), r.alpha_pre, true};
  } catch (const SweepError&) {
  }
  return std::nullopt;
}

}  // namespace

Collection monte_carlo_collection(const BayesianGame& bg, const MonteCarloOptions& opts) {
  if (opts.n_samples < 1) throw DomainError("n_samples must be at least 1");
  const std::size_t n = num_profiles(bg.strategy_counts());

  std::vector<std::optional<SampleOutcome>> outcomes(opts.n_samples);
  parallel_for(opts.n_samples, opts.threads,
               [&](std::size_t i) { outcomes[i] = evaluate_sample(bg, opts, i); });

  Collection c;
  c.exact = false;
  c.n_samples = opts.n_samples;
  c.alpha_policy = opts.sweep.describe();
  c.probabilities.assign(n, 0.0);
  c.standard_errors.assign(n, 0.0);

  std::size_t used = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i]) {
      ++c.skipped;
      c.alphas.push_back({i, 0.0, true, true});
      continue;
    }
    c.alphas.push_back({i, outcomes[i]->alpha, outcomes[i]->retried, false});
    ++used;
  }
  if (static_cast<double>(c.skipped) > opts.max_skip_fraction * static_cast<double>(opts.n_samples) ||
      used == 0)
    throw ExcessiveSkips(std::to_string(c.skipped) + " of " + std::to_string(opts.n_samples) +
                             " samples skipped",
                         c.skipped);

  // Two passes in sample order: mean, then spread around it.
  for (const auto& o : outcomes)
    if (o)
      for (std::size_t j = 0; j < n; ++j) c.probabilities[j] += o->distribution[j];
  for (double& p : c.probabilities) p /= static_cast<double>(used);

  if (used > 1) {
    for (const auto& o : outcomes)
      if (o)
        for (std::size_t j = 0; j < n; ++j) {
          const double d = o->distribution[j] - c.probabilities[j];
          c.standard_errors[j] += d * d;
        }
    const double un = static_cast<double>(used);
    for (double& s : c.standard_errors) s = std::sqrt(s / (un - 1.0)) / std::sqrt(un);
  }
  return c;
}

std::array<double, 4> hawk_dove_closed_form(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  const double rest = (1.0 - p * p) / 2.0;
  return {p * p, rest, rest, 0.0};
}

MarginalTable group_marginals(std::span<const double> distribution,
                              const std::vector<std::vector<std::size_t>>& groups,
                              std::span<const std::size_t> strategy_counts) {
  const std::size_t players = strategy_counts.size();
  if (distribution.size() != num_profiles(strategy_counts))
    throw DomainError("distribution does not match the game shape");

  std::vector<int> seen(players, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw DomainError("empty group");
    for (std::size_t p : g) {
      if (p >= players) throw DomainError("group member out of range");
      if (seen[p]++) throw DomainError("player appears in more than one group");
      if (strategy_counts[p] != strategy_counts[g.front()])
        throw DomainError("players in a group must share a strategy count");
    }
  }
  for (int s : seen)
    if (!s) throw DomainError("groups must cover every player");

  // Per-player marginals in one pass over the profiles.
  std::vector<std::vector<double>> marginal(players);
  for (std::size_t p = 0; p < players; ++p) marginal[p].assign(strategy_counts[p], 0.0);
  std::vector<std::size_t> coords(players, 0);
  for (std::size_t k = 0; k < distribution.size(); ++k) {
    for (std::size_t p = 0; p < players; ++p) marginal[p][coords[p]] += distribution[k];
    for (std::size_t p = players; p-- > 0;) {
      if (++coords[p] < strategy_counts[p]) break;
      coords[p] = 0;
    }
  }

  MarginalTable table;
  for (const auto& g : groups) {
    std::vector<double> row(strategy_counts[g.front()], 0.0);
    for (std::size_t p : g)
      for (std::size_t s = 0; s < row.size(); ++s) row[s] += marginal[p][s];
    for (double& x : row) x /= static_cast<double>(g.size());
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace arc
