#include "arc/game_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "arc/errors.hpp"

namespace arc {

namespace {

void check_counts(std::span<const std::size_t> counts) {
  if (counts.empty()) throw DomainError("game needs at least one player");
  for (std::size_t c : counts)
    if (c == 0) throw DomainError("every player needs at least one strategy");
}

void check_type(const TypeVector& v, std::span<const std::size_t> dims) {
  if (v.num_players() != dims.size())
    throw DomainError("type vector has " + std::to_string(v.num_players()) +
                      " players, expected " + std::to_string(dims.size()));
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (v.values[i].size() != dims[i])
      throw DomainError("type dimension mismatch for player " + std::to_string(i));
}

}  // namespace

std::size_t num_profiles(std::span<const std::size_t> strategy_counts) {
  return std::accumulate(strategy_counts.begin(), strategy_counts.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> profile_strides(std::span<const std::size_t> strategy_counts) {
  std::vector<std::size_t> strides(strategy_counts.size());
  std::size_t stride = 1;
  for (std::size_t i = strategy_counts.size(); i-- > 0;) {
    strides[i] = stride;
    stride *= strategy_counts[i];
  }
  return strides;
}

std::size_t profile_index(std::span<const std::size_t> coords,
                          std::span<const std::size_t> strategy_counts) {
  if (coords.size() != strategy_counts.size())
    throw DomainError("profile has " + std::to_string(coords.size()) + " coordinates, expected " +
                      std::to_string(strategy_counts.size()));
  std::size_t index = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= strategy_counts[i])
      throw DomainError("strategy " + std::to_string(coords[i]) + " out of range for player " +
                        std::to_string(i));
    index = index * strategy_counts[i] + coords[i];
  }
  return index;
}

std::vector<std::size_t> profile_coords(std::size_t index,
                                        std::span<const std::size_t> strategy_counts) {
  if (index >= num_profiles(strategy_counts))
    throw DomainError("profile index " + std::to_string(index) + " out of range");
  std::vector<std::size_t> coords(strategy_counts.size());
  for (std::size_t i = strategy_counts.size(); i-- > 0;) {
    coords[i] = index % strategy_counts[i];
    index /= strategy_counts[i];
  }
  return coords;
}

NormalFormGame::NormalFormGame(std::vector<std::size_t> strategy_counts,
                               std::vector<std::vector<double>> payoffs)
    : counts_(std::move(strategy_counts)) {
  check_counts(counts_);
  n_profiles_ = arc::num_profiles(counts_);
  if (payoffs.size() != counts_.size())
    throw DomainError("payoff tensor has " + std::to_string(payoffs.size()) +
                      " player rows, expected " + std::to_string(counts_.size()));
  payoffs_.reserve(counts_.size() * n_profiles_);
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (payoffs[i].size() != n_profiles_)
      throw DomainError("player " + std::to_string(i) + " has " +
                        std::to_string(payoffs[i].size()) + " payoffs, expected " +
                        std::to_string(n_profiles_));
    for (double u : payoffs[i]) {
      if (!std::isfinite(u)) throw NumericError("non-finite payoff");
      payoffs_.push_back(u);
    }
  }
}

std::size_t NormalFormGame::strategy_count(std::size_t player) const {
  if (player >= counts_.size()) throw DomainError("player out of range");
  return counts_[player];
}

double NormalFormGame::utility(std::size_t player, std::size_t profile) const {
  if (player >= counts_.size()) throw DomainError("player out of range");
  if (profile >= n_profiles_) throw DomainError("profile index out of range");
  return payoffs_[player * n_profiles_ + profile];
}

double NormalFormGame::utility(std::size_t player, const JointProfile& profile) const {
  return utility(player, profile.index);
}

std::span<const double> NormalFormGame::payoffs(std::size_t player) const {
  if (player >= counts_.size()) throw DomainError("player out of range");
  return std::span<const double>(payoffs_).subspan(player * n_profiles_, n_profiles_);
}

std::size_t NormalFormGame::profile_index(std::span<const std::size_t> coords) const {
  return arc::profile_index(coords, counts_);
}

std::vector<std::size_t> NormalFormGame::profile_coords(std::size_t index) const {
  return arc::profile_coords(index, counts_);
}

JointProfile NormalFormGame::profile(std::size_t index) const {
  return {index, profile_coords(index)};
}

std::vector<std::size_t> TypeVector::dims() const {
  std::vector<std::size_t> d;
  d.reserve(values.size());
  for (const auto& v : values) d.push_back(v.size());
  return d;
}

TypeVector TypeVector::affine(double a, double b) const {
  TypeVector out = *this;
  for (auto& row : out.values)
    for (double& x : row) x = a * x + b;
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  engine_.seed(seq);
}

CoordinateLaw CoordinateLaw::normal(double mean, double stddev) {
  if (!(stddev > 0.0) || !std::isfinite(stddev) || !std::isfinite(mean))
    throw DomainError("normal coordinate needs finite mean and stddev > 0");
  return {mean, stddev};
}

Prior Prior::finite(std::vector<TypeVector> types, std::vector<double> probabilities) {
  if (types.empty()) throw DomainError("finite prior needs at least one support point");
  if (types.size() != probabilities.size())
    throw DomainError("finite prior: types and probabilities differ in length");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw DomainError("finite prior: probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("finite prior: probabilities must sum to 1");
  const auto dims = types.front().dims();
  for (const auto& t : types)
    if (t.dims() != dims) throw DomainError("finite prior: support points differ in shape");
  Prior p;
  p.data_ = FiniteSupport{std::move(types), std::move(probabilities)};
  return p;
}

Prior Prior::point(TypeVector type) { return finite({std::move(type)}, {1.0}); }

Prior Prior::gaussian(std::vector<std::vector<CoordinateLaw>> laws, TypePredicate valid,
                      std::size_t max_rejections) {
  if (laws.empty()) throw DomainError("gaussian prior needs at least one player");
  if (max_rejections < 1) throw DomainError("max_rejections must be at least 1");
  for (const auto& player : laws)
    for (const auto& law : player)
      if (!(law.stddev >= 0.0) || !std::isfinite(law.stddev) || !std::isfinite(law.mean))
        throw DomainError("gaussian prior: invalid coordinate law");
  Prior p;
  p.data_ = GaussianLaws{std::move(laws), std::move(valid), max_rejections};
  return p;
}

const FiniteSupport& Prior::support() const {
  if (!is_finite()) throw DomainError("prior is not finite");
  return std::get<FiniteSupport>(data_);
}

const GaussianLaws& Prior::gaussian_laws() const {
  if (is_finite()) throw DomainError("prior is not gaussian");
  return std::get<GaussianLaws>(data_);
}

std::vector<std::size_t> Prior::type_dims() const {
  if (is_finite()) return support().types.front().dims();
  std::vector<std::size_t> dims;
  for (const auto& player : gaussian_laws().laws) dims.push_back(player.size());
  return dims;
}

TypeVector sample_type(const Prior& prior, RngStream& rng) {
  auto& engine = rng.engine();
  if (prior.is_finite()) {
    const auto& s = prior.support();
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < s.types.size(); ++k) {
      cumulative += s.probabilities[k];
      if (u < cumulative) return s.types[k];
    }
    // u landed in the rounding gap above the last cumulative sum.
    for (std::size_t k = s.types.size(); k-- > 0;)
      if (s.probabilities[k] > 0.0) return s.types[k];
    return s.types.back();
  }

  const auto& g = prior.gaussian_laws();
  std::normal_distribution<double> normal(0.0, 1.0);
  TypeVector v;
  v.values.resize(g.laws.size());
  for (std::size_t attempt = 1; attempt <= g.max_rejections; ++attempt) {
    for (std::size_t i = 0; i < g.laws.size(); ++i) {
      v.values[i].resize(g.laws[i].size());
      for (std::size_t j = 0; j < g.laws[i].size(); ++j) {
        const auto& law = g.laws[i][j];
        v.values[i][j] = law.is_fixed() ? law.mean : law.mean + law.stddev * normal(engine);
      }
    }
    if (!g.valid || g.valid(v)) return v;
  }
  throw SamplingError("no valid type after " + std::to_string(g.max_rejections) + " attempts",
                      g.max_rejections);
}

BayesianGame::BayesianGame(std::vector<std::size_t> strategy_counts,
                           std::vector<std::size_t> type_dims, Prior prior, UtilityFn utility,
                           bool private_values)
    : counts_(std::move(strategy_counts)),
      type_dims_(std::move(type_dims)),
      prior_(std::move(prior)),
      utility_(std::move(utility)),
      private_values_(private_values) {
  check_counts(counts_);
  if (type_dims_.size() != counts_.size())
    throw DomainError("type_dims must have one entry per player");
  if (prior_.type_dims() != type_dims_) throw DomainError("prior shape does not match type_dims");
  if (!utility_) throw DomainError("Bayesian game needs a utility evaluator");
}

double BayesianGame::utility(std::size_t player, std::size_t profile, const TypeVector& v) const {
  return utility_(player, profile, v);
}

NormalFormGame realize(const BayesianGame& bg, const TypeVector& v) {
  check_type(v, bg.type_dims());
  const std::size_t n = num_profiles(bg.strategy_counts());
  std::vector<std::vector<double>> payoffs(bg.num_players(), std::vector<double>(n));
  for (std::size_t i = 0; i < bg.num_players(); ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double u = bg.utility(i, k, v);
      if (!std::isfinite(u))
        throw NumericError("utility evaluator returned a non-finite value for player " +
                           std::to_string(i) + " at profile " + std::to_string(k));
      payoffs[i][k] = u;
    }
  return NormalFormGame({bg.strategy_counts().begin(), bg.strategy_counts().end()},
                        std::move(payoffs));
}

}  // namespace arc
