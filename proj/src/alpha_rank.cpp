#include "arc/alpha_rank.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "arc/errors.hpp"

namespace arc {

double fixation_probability(double x, std::size_t m) {
  if (m < 2) throw DomainError("population size must be at least 2");
  const double md = static_cast<double>(m);
  if (x == 0.0) return 1.0 / md;
  if (!std::isfinite(x)) throw NumericError("non-finite selection argument");
  if (x > 0.0) return std::expm1(-x) / std::expm1(-md * x);
  // x < 0: (e^{y} - 1)/(e^{m y} - 1) with y = -x, rewritten with only
  // decaying exponentials.
  const double y = -x;
  return std::exp(-(md - 1.0) * y) * (std::expm1(-y) / std::expm1(-md * y));
}

double mutation_rate(std::span<const std::size_t> strategy_counts) {
  std::size_t total = 0;
  for (std::size_t c : strategy_counts) total += c - 1;
  return total > 0 ? 1.0 / static_cast<double>(total) : 1.0;
}

TransitionMatrix::TransitionMatrix(const GameGraph& graph, double eta, double alpha,
                                   std::size_t m)
    : alpha_(alpha), m_(m), eta_(eta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  if (m < 2) throw DomainError("population size must be at least 2");
  const std::size_t n = graph.num_nodes();
  entries_.reserve(graph.num_edges());
  offsets_.reserve(n + 1);
  diagonal_.reserve(n);
  outflow_.reserve(n);
  const double neutral = eta / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& e : graph.out_edges(k)) {
      const double value =
          e.delta == 0.0 ? neutral : eta * fixation_probability(alpha * e.delta, m);
      entries_.push_back({e.target, value});
    }
    finish_row();
  }
}

void TransitionMatrix::finish_row() {
  double out = 0.0;
  for (std::size_t e = offsets_.back(); e < entries_.size(); ++e) out += entries_[e].value;
  offsets_.push_back(entries_.size());
  outflow_.push_back(out);
  diagonal_.push_back(1.0 - out);
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  TransitionMatrix tm;
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DomainError("transition matrix must be square");
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = rows[i][j];
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("transition entries must lie in [0, 1]");
      sum += p;
      if (j != i && p > 0.0) tm.entries_.push_back({j, p});
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("transition rows must sum to 1");
    tm.finish_row();
  }
  return tm;
}

double TransitionMatrix::entry(std::size_t row, std::size_t column) const {
  if (row >= size() || column >= size()) throw DomainError("transition index out of range");
  if (row == column) return diagonal_[row];
  for (const auto& e : off_diagonal(row))
    if (e.column == column) return e.value;
  return 0.0;
}

TransitionMatrix transition_matrix(const GameGraph& graph, std::span<const std::size_t> counts,
                                   double alpha, std::size_t m) {
  return TransitionMatrix(graph, mutation_rate(counts), alpha, m);
}

TransitionMatrix transition_matrix(const NormalFormGame& game, double alpha, std::size_t m) {
  return transition_matrix(GameGraph(game), game.strategy_counts(), alpha, m);
}

double stationary_residual(const TransitionMatrix& tm, std::span<const double> pi) {
  const std::size_t n = tm.size();
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (pi[i] == 0.0) continue;
    r[i] -= pi[i] * tm.outflow(i);
    for (const auto& e : tm.off_diagonal(i)) r[e.column] += pi[i] * e.value;
  }
  double worst = 0.0;
  for (double x : r) {
    if (!std::isfinite(x)) return x;
    worst = std::max(worst, std::abs(x));
  }
  return worst;
}

namespace {

void clamp_and_normalize(std::vector<double>& pi) {
  double total = 0.0;
  for (double& p : pi) {
    if (!std::isfinite(p)) throw SolverFailure("stationary solve produced a non-finite entry");
    if (p < -1e-14) throw SolverFailure("stationary solve produced a negative entry");
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (!(total > 0.0)) throw SolverFailure("stationary solve produced a zero vector");
  for (double& p : pi) p /= total;
}

}  // namespace

namespace {

/// The unique closed class of the chain with entries <= eps removed.
std::vector<std::size_t> unique_closed_class(const TransitionMatrix& tm, double eps) {
  const std::size_t n = tm.size();
  if (n == 0) throw DomainError("empty transition matrix");
  Digraph kept;
  kept.offsets.reserve(n + 1);
  kept.offsets.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : tm.off_diagonal(i))
      if (e.value > eps) kept.targets.push_back(e.column);
    kept.offsets.push_back(kept.targets.size());
  }
  auto classes = closed_classes(kept);
  if (classes.size() != 1)
    throw NotIrreducible("chain has " + std::to_string(classes.size()) +
                             " closed communicating classes at alpha " +
                             std::to_string(tm.alpha()),
                         classes.size());
  return std::move(classes.front());
}

}  // namespace

RankDistribution stationary_distribution(const TransitionMatrix& tm, const SolverOptions& opts) {
  const std::size_t n = tm.size();
  const auto members = unique_closed_class(tm, opts.connectivity_eps);

  // Mass outside the closed class is zero; solve the balance equations on
  // the class with its first equation replaced by sum(pi) = 1.
  const std::size_t k = members.size();
  std::vector<std::size_t> local(n, n);
  for (std::size_t a = 0; a < k; ++a) local[members[a]] = a;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                            static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    double out = 0.0;
    for (const auto& e : tm.off_diagonal(members[a])) {
      if (e.value <= opts.connectivity_eps) continue;
      const std::size_t b = local[e.column];
      A(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += e.value;
      out += e.value;
    }
    A(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) -= out;
  }
  A.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(A);
  const Eigen::VectorXd x = lu.solve(rhs);

  RankDistribution dist;
  dist.probabilities.assign(n, 0.0);
  for (std::size_t a = 0; a < k; ++a) dist.probabilities[members[a]] = x(static_cast<Eigen::Index>(a));
  clamp_and_normalize(dist.probabilities);
  dist.alpha_used = tm.alpha();
  dist.residual = stationary_residual(tm, dist.probabilities);
  if (!(dist.residual <= opts.tol))
    throw SolverFailure("stationary residual " + std::to_string(dist.residual) +
                        " exceeds tolerance");
  return dist;
}

RankDistribution stationary_distribution_gth(const TransitionMatrix& tm) {
  const std::size_t n = tm.size();
  const auto members = unique_closed_class(tm, 0.0);
  const std::size_t k = members.size();
  std::vector<std::size_t> local(n, n);
  for (std::size_t a = 0; a < k; ++a) local[members[a]] = a;

  std::vector<double> p(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (const auto& e : tm.off_diagonal(members[a]))
      if (e.value > 0.0) p[a * k + local[e.column]] = e.value;

  // Eliminate states from the last one down, without subtractions.
  std::vector<double> s(k, 0.0);
  for (std::size_t l = k; l-- > 1;) {
    double sum = 0.0;
    for (std::size_t j = 0; j < l; ++j) sum += p[l * k + j];
    s[l] = sum;
    for (std::size_t i = 0; i < l; ++i) {
      const double f = p[i * k + l] / sum;
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < l; ++j) p[i * k + j] += f * p[l * k + j];
    }
  }
  std::vector<double> x(k, 0.0);
  x[0] = 1.0;
  for (std::size_t l = 1; l < k; ++l) {
    double acc = 0.0;
    for (std::size_t i = 0; i < l; ++i) acc += x[i] * p[i * k + l];
    x[l] = acc / s[l];
  }

  RankDistribution dist;
  dist.probabilities.assign(n, 0.0);
  for (std::size_t a = 0; a < k; ++a) dist.probabilities[members[a]] = x[a];
  clamp_and_normalize(dist.probabilities);
  dist.alpha_used = tm.alpha();
  dist.residual = stationary_residual(tm, dist.probabilities);
  return dist;
}

RankDistribution stationary_distribution_power(const TransitionMatrix& tm, std::size_t max_steps,
                                               double tol) {
  const std::size_t n = tm.size();
  if (n == 0) throw DomainError("empty transition matrix");
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t step = 0; step < max_steps; ++step) {
    for (std::size_t j = 0; j < n; ++j) next[j] = pi[j] * tm.diagonal(j);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : tm.off_diagonal(i)) next[e.column] += pi[i] * e.value;
    double change = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      change = std::max(change, std::abs(next[j] - pi[j]));
      total += next[j];
    }
    for (std::size_t j = 0; j < n; ++j) pi[j] = next[j] / total;
    if (change <= tol) break;
  }
  RankDistribution dist;
  dist.probabilities = std::move(pi);
  dist.alpha_used = tm.alpha();
  dist.residual = stationary_residual(tm, dist.probabilities);
  return dist;
}

SweepConfig SweepConfig::doubling(double alpha0, double factor) {
  SweepConfig c;
  c.mode = SweepMode::doubling;
  c.alpha0 = alpha0;
  c.factor = factor;
  return c;
}

SweepConfig SweepConfig::fixed(double alpha_fixed, double step) {
  SweepConfig c;
  c.mode = SweepMode::fixed_with_decrement;
  c.alpha_fixed = alpha_fixed;
  c.step = step;
  return c;
}

std::string SweepConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (mode == SweepMode::doubling)
    os << "doubling(alpha0=" << alpha0 << ", factor=" << factor << ")";
  else
    os << "fixed(alpha=" << alpha_fixed << ", step=" << step << ")";
  return os.str();
}

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Round alpha values from the decrement grid onto 12 decimals so that
// 6.71 - 3 * 0.1 reports as 6.41.
double snap(double alpha) { return std::round(alpha * 1e12) / 1e12; }

}  // namespace

SweepResult alpha_sweep(const GameGraph& graph, std::span<const std::size_t> counts,
                        std::size_t m, const SweepConfig& config) {
  const double eta = mutation_rate(counts);
  SweepResult result;
  auto attempt = [&](double alpha) -> bool {
    try {
      RankDistribution d =
          stationary_distribution(TransitionMatrix(graph, eta, alpha, m), config.solver);
      result.trajectory.push_back({alpha, true});
      result.alpha_pre = alpha;
      result.dist = std::move(d);
      return true;
    } catch (const NotIrreducible&) {
    } catch (const NumericError&) {
    }
    result.trajectory.push_back({alpha, false});
    return false;
  };

  if (config.mode == SweepMode::doubling) {
    if (!(config.alpha0 > 0.0)) throw DomainError("alpha0 must be positive");
    if (!(config.factor > 1.0)) throw DomainError("sweep factor must exceed 1");
    double alpha = config.alpha0;
    if (!attempt(alpha))
      throw SweepError("no stationary distribution even at alpha0 = " + std::to_string(alpha));
    for (std::size_t i = 0; i < config.max_doublings; ++i) {
      std::vector<double> previous = result.dist.probabilities;
      alpha *= config.factor;
      if (!attempt(alpha)) {
        result.dist.converged = true;
        return result;
      }
      if (config.convergence_tol > 0.0 &&
          max_abs_diff(previous, result.dist.probabilities) <= config.convergence_tol) {
        result.dist.converged = true;
        return result;
      }
    }
    throw SweepError("alpha sweep hit the cap of " + std::to_string(config.max_doublings) +
                     " doublings");
  }

  if (!(config.alpha_fixed > 0.0)) throw DomainError("alpha_fixed must be positive");
  if (!(config.step > 0.0)) throw DomainError("decrement step must be positive");
  for (std::size_t k = 0;; ++k) {
    const double alpha = snap(config.alpha_fixed - static_cast<double>(k) * config.step);
    if (!(alpha > 0.0)) break;
    if (attempt(alpha)) {
      result.dist.converged = true;
      return result;
    }
  }
  throw SweepError("no stationary distribution for any alpha in (0, " +
                   std::to_string(config.alpha_fixed) + "]");
}

SweepResult alpha_sweep(const NormalFormGame& game, std::size_t m, const SweepConfig& config) {
  return alpha_sweep(GameGraph(game), game.strategy_counts(), m, config);
}

}  // namespace arc
