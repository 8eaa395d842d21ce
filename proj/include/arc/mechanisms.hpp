#pragma once

// Game generators: the two-type Hawk-Dove Bayesian game and the aligned
// school-choice environment (3 Tops, 2 Averages; Gold x2, Silver x1,
// Bronze x1) under deferred acceptance and the Boston mechanism.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arc/game_model.hpp"
#include "arc/rational.hpp"

namespace arc {

namespace hawk_dove {

inline constexpr std::size_t kHawk = 0;
inline constexpr std::size_t kDove = 1;

/// vNM values of the resource, of getting nothing, and of losing a fight.
struct Valuation {
  double resource;
  double nothing;
  double cost;
};

inline constexpr Valuation kPrisonersDilemma{4.0, 0.0, -2.0};
inline constexpr Valuation kAntiCoordination{2.0, 0.0, -4.0};

/// Expected utility of `own` against `other` under the 50/50 fight and
/// share lotteries.
double payoff(const Valuation& v, std::size_t own, std::size_t other);

NormalFormGame game(const Valuation& player1, const Valuation& player2);

TypeVector types(const Valuation& player1, const Valuation& player2);

/// Each player is independently PD with probability p, otherwise AC.
BayesianGame bayesian_game(double p);

}  // namespace hawk_dove

namespace matching {

enum class Mechanism { deferred_acceptance, boston };

Mechanism parse_mechanism(std::string_view name);
std::string_view mechanism_name(Mechanism m);

enum Outcome : std::uint8_t { kGold = 0, kSilver = 1, kBronze = 2, kUnmatched = 3 };

inline constexpr std::size_t kStudents = 5;
inline constexpr std::size_t kTops = 3;
inline constexpr std::size_t kSchools = 3;
inline constexpr std::size_t kOutcomes = 4;
inline constexpr std::size_t kStrategies = 6;
inline constexpr std::size_t kTieBreaks = 12;
inline constexpr std::size_t kProfiles = 7776;
inline constexpr std::array<std::size_t, kSchools> kCapacity{2, 1, 1};

/// Students 0..2 are Tops, 3..4 Averages.
inline constexpr bool is_top(std::size_t student) { return student < kTops; }

/// One of the six full rankings of (Gold, Silver, Bronze), in the order
/// GSB, GBS, SGB, SBG, BGS, BSG.
struct PreferenceOrder {
  std::uint8_t index = 0;

  static constexpr std::array<std::array<std::uint8_t, kSchools>, kStrategies> kRankings{{
      {kGold, kSilver, kBronze},
      {kGold, kBronze, kSilver},
      {kSilver, kGold, kBronze},
      {kSilver, kBronze, kGold},
      {kBronze, kGold, kSilver},
      {kBronze, kSilver, kGold},
  }};

  std::uint8_t choice(std::size_t rank) const { return kRankings[index][rank]; }
  std::string label() const;
};

inline constexpr PreferenceOrder kTruthful{0};

using Profile = std::array<PreferenceOrder, kStudents>;
using Matching = std::array<Outcome, kStudents>;

/// Strict priority order over students: a permutation of the Tops followed
/// by a permutation of the Averages.
struct TieBreakOrder {
  std::array<std::uint8_t, kStudents> order{};
};

const std::array<TieBreakOrder, kTieBreaks>& all_tie_breaks();

Profile profile_from_index(std::size_t index);
std::size_t profile_to_index(const Profile& profile);

Matching run_da(const Profile& profile, const TieBreakOrder& tb);
Matching run_boston(const Profile& profile, const TieBreakOrder& tb);
Matching run(Mechanism mechanism, const Profile& profile, const TieBreakOrder& tb);

/// Probabilities over (G, S, B, U).
using OutcomeLottery = std::array<Rational, kOutcomes>;

/// Exact per-student lotteries, averaged over all 12 tie-break orders.
std::array<OutcomeLottery, kStudents> outcome_lottery(Mechanism mechanism, const Profile& profile);

/// Lotteries for every profile, as counts out of 12 tie-breaks.
class LotteryTable {
 public:
  explicit LotteryTable(Mechanism mechanism);
  std::uint8_t count(std::size_t profile, std::size_t student, std::size_t outcome) const {
    return counts_[(profile * kStudents + student) * kOutcomes + outcome];
  }
  OutcomeLottery lottery(std::size_t profile, std::size_t student) const;
  /// Expected utility of `student` at `profile` for values v (G, S, B, U).
  double expected_utility(std::size_t profile, std::size_t student,
                          std::span<const double> v) const;

 private:
  std::vector<std::uint8_t> counts_;
};

/// Process-wide table, built on first use.
const LotteryTable& lottery_table(Mechanism mechanism);

/// Every student has the type (v_G, v_S, v_B, 0).
TypeVector uniform_type(double v_gold, double v_silver, double v_bronze);

NormalFormGame build_game(Mechanism mechanism, const TypeVector& v);

/// v_G > v_S > v_B > v_U for every student.
bool strictly_ordinal(const TypeVector& v);

/// Per-student independent normals on (v_G, v_S, v_B), v_U fixed at 0,
/// resampled until strictly ordinal.
Prior gaussian_prior(double mean_gold = 100.0, double sd_gold = 6.0, double mean_silver = 70.0,
                     double sd_silver = 3.0, double mean_bronze = 25.0, double sd_bronze = 2.0,
                     std::size_t max_rejections = 10000);

BayesianGame bayesian_game(Mechanism mechanism, Prior prior);

/// NE_DA: Tops truthful, Averages arbitrary (36 profiles).
/// NE_Bo: Tops rank (G, B, S), Averages rank Silver first (4 profiles).
std::vector<std::size_t> named_profile_set(Mechanism mechanism);

/// (2/3) v_G + (1/3) v_B - v_S; NE_Bo stops being an equilibrium once this
/// turns negative for some Top.
double boston_margin(std::span<const double> v);

/// {Tops}, {Averages}
inline const std::vector<std::vector<std::size_t>> kGroups{{0, 1, 2}, {3, 4}};

/// Expected (G, S, B, U) outcome per group under a distribution over
/// profiles, averaged over the group's students.
std::vector<std::array<double, kOutcomes>> group_outcomes(std::span<const double> distribution,
                                                          Mechanism mechanism);

}  // namespace matching

}  // namespace arc
