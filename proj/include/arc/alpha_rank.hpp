#pragma once

// Finite-population selection/mutation chain over joint profiles, its
// stationary distribution, and the sweep that pushes the selection
// intensity alpha as high as the chain allows.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arc/game_model.hpp"
#include "arc/response_graph.hpp"

namespace arc {

inline constexpr std::size_t kDefaultPopulation = 50;

/// (1 - e^{-x}) / (1 - e^{-m x}), continuously extended by 1/m at x = 0.
/// Evaluated without overflow for any finite x.
double fixation_probability(double x, std::size_t m);

/// (sum_k (|S_k| - 1))^{-1}.
double mutation_rate(std::span<const std::size_t> strategy_counts);

/// Row-stochastic transition matrix; only single-deviation entries are
/// stored off the diagonal.
class TransitionMatrix {
 public:
  TransitionMatrix(const GameGraph& graph, double eta, double alpha, std::size_t m);

  /// Build from explicit dense rows (used for hand-made chains).
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  double alpha() const { return alpha_; }
  std::size_t population() const { return m_; }
  double eta() const { return eta_; }
  std::size_t size() const { return diagonal_.size(); }

  struct Entry {
    std::size_t column;
    double value;
  };
  std::span<const Entry> off_diagonal(std::size_t row) const {
    return std::span<const Entry>(entries_).subspan(offsets_[row],
                                                     offsets_[row + 1] - offsets_[row]);
  }
  double diagonal(std::size_t row) const { return diagonal_[row]; }
  /// Total off-diagonal probability of a row, i.e. 1 - diagonal(row).
  double outflow(std::size_t row) const { return outflow_[row]; }
  double entry(std::size_t row, std::size_t column) const;
  std::size_t num_off_diagonal() const { return entries_.size(); }

 private:
  TransitionMatrix() = default;
  void finish_row();

  double alpha_ = 0.0;
  std::size_t m_ = 0;
  double eta_ = 0.0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Entry> entries_;
  std::vector<double> diagonal_;
  std::vector<double> outflow_;
};

TransitionMatrix transition_matrix(const NormalFormGame& game, double alpha,
                                   std::size_t m = kDefaultPopulation);
TransitionMatrix transition_matrix(const GameGraph& graph, std::span<const std::size_t> counts,
                                   double alpha, std::size_t m = kDefaultPopulation);

struct RankDistribution {
  std::vector<double> probabilities;
  double alpha_used = 0.0;
  double residual = 0.0;  // max_j |(pi C - pi)_j|
  bool converged = false;  // produced by a completed sweep
};

struct SolverOptions {
  double tol = 1e-10;
  /// Off-diagonal entries at or below this count as absent when deciding
  /// whether a unique stationary distribution exists.
  double connectivity_eps = 1e-15;
};

/// Unique stationary distribution via a direct dense solve on the chain's
/// closed communicating class.
/// Throws NotIrreducible when the thresholded chain has more than one closed
/// class, SolverFailure when the residual exceeds opts.tol.
RankDistribution stationary_distribution(const TransitionMatrix& tm,
                                         const SolverOptions& opts = {});

/// Grassmann-Taylor-Heyman elimination on the closed class of the chain
/// (no threshold). Entrywise accurate even when transition rates differ by
/// hundreds of orders of magnitude; O(n^3) without blocking, so meant for
/// small chains.
RankDistribution stationary_distribution_gth(const TransitionMatrix& tm);

/// Power iteration pi <- pi C from the uniform vector. Secondary backend
/// and test oracle.
RankDistribution stationary_distribution_power(const TransitionMatrix& tm,
                                               std::size_t max_steps = 1000000,
                                               double tol = 1e-15);

/// max_j |(pi C - pi)_j|
double stationary_residual(const TransitionMatrix& tm, std::span<const double> pi);

enum class SweepMode { doubling, fixed_with_decrement };

struct SweepConfig {
  SweepMode mode = SweepMode::doubling;
  double alpha0 = 1e-5;
  double factor = 2.0;
  std::size_t max_doublings = 60;
  /// Doubling stops early once successive distributions differ by at most
  /// this much in max norm. Zero disables the check.
  double convergence_tol = 1e-12;
  double alpha_fixed = 6.71;
  double step = 0.1;
  SolverOptions solver;

  static SweepConfig doubling(double alpha0 = 1e-5, double factor = 2.0);
  static SweepConfig fixed(double alpha_fixed, double step = 0.1);
  std::string describe() const;
};

struct SweepPoint {
  double alpha;
  bool exists;
};

struct SweepResult {
  double alpha_pre = 0.0;
  RankDistribution dist;
  std::vector<SweepPoint> trajectory;
};

/// Approximates the limiting distribution by the distribution at the
/// largest alpha for which it still exists.
SweepResult alpha_sweep(const NormalFormGame& game, std::size_t m, const SweepConfig& config);
SweepResult alpha_sweep(const GameGraph& graph, std::span<const std::size_t> counts,
                        std::size_t m, const SweepConfig& config);

}  // namespace arc
