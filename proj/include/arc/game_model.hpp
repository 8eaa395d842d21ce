#pragma once

// Games, joint-profile indexing, type spaces and priors.
//
// Joint profiles are mixed-radix integers with player 0 as the most
// significant digit, so for a 2x2 game the profile order is
// (0,0), (0,1), (1,0), (1,1).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace arc {

std::size_t num_profiles(std::span<const std::size_t> strategy_counts);

/// Mixed-radix encoding of per-player strategy indices.
std::size_t profile_index(std::span<const std::size_t> coords,
                          std::span<const std::size_t> strategy_counts);

/// Inverse of profile_index.
std::vector<std::size_t> profile_coords(std::size_t index,
                                        std::span<const std::size_t> strategy_counts);

/// Place value of each player's digit in the profile index.
std::vector<std::size_t> profile_strides(std::span<const std::size_t> strategy_counts);

struct JointProfile {
  std::size_t index = 0;
  std::vector<std::size_t> coordinates;
};

class NormalFormGame {
 public:
  /// payoffs[i][k] is player i's utility at profile index k.
  NormalFormGame(std::vector<std::size_t> strategy_counts,
                 std::vector<std::vector<double>> payoffs);

  std::size_t num_players() const { return counts_.size(); }
  std::size_t num_profiles() const { return n_profiles_; }
  std::span<const std::size_t> strategy_counts() const { return counts_; }
  std::size_t strategy_count(std::size_t player) const;

  double utility(std::size_t player, std::size_t profile) const;
  double utility(std::size_t player, const JointProfile& profile) const;
  std::span<const double> payoffs(std::size_t player) const;

  std::size_t profile_index(std::span<const std::size_t> coords) const;
  std::vector<std::size_t> profile_coords(std::size_t index) const;
  JointProfile profile(std::size_t index) const;

 private:
  std::vector<std::size_t> counts_;
  std::size_t n_profiles_ = 0;
  std::vector<double> payoffs_;  // player-major
};

/// Per-player real type vectors, e.g. (v_G, v_S, v_B, v_U) per student.
struct TypeVector {
  std::vector<std::vector<double>> values;

  std::size_t num_players() const { return values.size(); }
  std::span<const double> player(std::size_t i) const { return values.at(i); }
  std::vector<std::size_t> dims() const;
  /// Entrywise a*v + b.
  TypeVector affine(double a, double b) const;
};

/// Deterministic per-task random stream. Streams for different indices of
/// the same master seed are independent of evaluation order.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Distribution of one type coordinate. stddev == 0 marks a fixed value.
struct CoordinateLaw {
  double mean = 0.0;
  double stddev = 0.0;

  static CoordinateLaw normal(double mean, double stddev);
  static CoordinateLaw fixed(double value) { return {value, 0.0}; }
  bool is_fixed() const { return stddev == 0.0; }
};

struct FiniteSupport {
  std::vector<TypeVector> types;
  std::vector<double> probabilities;
};

using TypePredicate = std::function<bool(const TypeVector&)>;

struct GaussianLaws {
  std::vector<std::vector<CoordinateLaw>> laws;  // per player, per coordinate
  TypePredicate valid;                           // empty means "always valid"
  std::size_t max_rejections = 10000;
};

class Prior {
 public:
  static Prior finite(std::vector<TypeVector> types, std::vector<double> probabilities);
  static Prior point(TypeVector type);
  static Prior gaussian(std::vector<std::vector<CoordinateLaw>> laws, TypePredicate valid,
                        std::size_t max_rejections = 10000);

  bool is_finite() const { return std::holds_alternative<FiniteSupport>(data_); }
  const FiniteSupport& support() const;
  const GaussianLaws& gaussian_laws() const;
  std::vector<std::size_t> type_dims() const;

 private:
  std::variant<FiniteSupport, GaussianLaws> data_;
};

TypeVector sample_type(const Prior& prior, RngStream& rng);

using UtilityFn =
    std::function<double(std::size_t player, std::size_t profile, const TypeVector& v)>;

class BayesianGame {
 public:
  BayesianGame(std::vector<std::size_t> strategy_counts, std::vector<std::size_t> type_dims,
               Prior prior, UtilityFn utility, bool private_values = true);

  std::size_t num_players() const { return counts_.size(); }
  std::span<const std::size_t> strategy_counts() const { return counts_; }
  std::span<const std::size_t> type_dims() const { return type_dims_; }
  const Prior& prior() const { return prior_; }
  bool private_values() const { return private_values_; }
  double utility(std::size_t player, std::size_t profile, const TypeVector& v) const;

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> type_dims_;
  Prior prior_;
  UtilityFn utility_;
  bool private_values_;
};

/// The normal-form game induced by a concrete type vector.
NormalFormGame realize(const BayesianGame& bg, const TypeVector& v);

}  // namespace arc
