#include "arc/mechanisms.hpp"

#include <algorithm>
#include <cmath>

#include "arc/errors.hpp"

namespace arc {

namespace hawk_dove {

double payoff(const Valuation& v, std::size_t own, std::size_t other) {
  if (own > kDove || other > kDove) throw DomainError("Hawk-Dove strategy out of range");
  if (own == kHawk) return other == kHawk ? 0.5 * v.resource + 0.5 * v.cost : v.resource;
  return other == kHawk ? v.nothing : 0.5 * v.resource + 0.5 * v.nothing;
}

namespace {

Valuation valuation_of(std::span<const double> t) {
  if (t.size() != 3) throw DomainError("Hawk-Dove type needs 3 coordinates (V, N, C)");
  return {t[0], t[1], t[2]};
}

double utility(std::size_t player, std::size_t profile, const TypeVector& v) {
  if (player > 1 || profile > 3) throw DomainError("Hawk-Dove index out of range");
  const std::size_t s1 = profile / 2, s2 = profile % 2;
  const auto val = valuation_of(v.player(player));
  return player == 0 ? payoff(val, s1, s2) : payoff(val, s2, s1);
}

}  // namespace

TypeVector types(const Valuation& player1, const Valuation& player2) {
  return TypeVector{{{player1.resource, player1.nothing, player1.cost},
                     {player2.resource, player2.nothing, player2.cost}}};
}

NormalFormGame game(const Valuation& player1, const Valuation& player2) {
  const TypeVector v = types(player1, player2);
  std::vector<std::vector<double>> payoffs(2, std::vector<double>(4));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 4; ++k) payoffs[i][k] = utility(i, k, v);
  return NormalFormGame({2, 2}, std::move(payoffs));
}

BayesianGame bayesian_game(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("PD probability must lie in [0, 1]");
  const double q = 1.0 - p;
  Prior prior = Prior::finite({types(kPrisonersDilemma, kPrisonersDilemma),
                               types(kPrisonersDilemma, kAntiCoordination),
                               types(kAntiCoordination, kPrisonersDilemma),
                               types(kAntiCoordination, kAntiCoordination)},
                              {p * p, p * q, q * p, q * q});
  return BayesianGame({2, 2}, {3, 3}, std::move(prior), utility, true);
}

}  // namespace hawk_dove

namespace matching {

Mechanism parse_mechanism(std::string_view name) {
  if (name == "da" || name == "DA" || name == "deferred_acceptance")
    return Mechanism::deferred_acceptance;
  if (name == "boston" || name == "Boston" || name == "bo") return Mechanism::boston;
  throw DomainError("unknown mechanism '" + std::string(name) + "'");
}

std::string_view mechanism_name(Mechanism m) {
  return m == Mechanism::boston ? "boston" : "da";
}

std::string PreferenceOrder::label() const {
  static constexpr char kLetters[] = {'G', 'S', 'B'};
  std::string s = "(";
  for (std::size_t r = 0; r < kSchools; ++r) {
    if (r) s += ",";
    s += kLetters[choice(r)];
  }
  return s + ")";
}

const std::array<TieBreakOrder, kTieBreaks>& all_tie_breaks() {
  static const auto orders = [] {
    std::array<TieBreakOrder, kTieBreaks> out{};
    std::array<std::uint8_t, 3> tops{0, 1, 2};
    std::size_t k = 0;
    do {
      std::array<std::uint8_t, 2> avgs{3, 4};
      do {
        out[k++].order = {tops[0], tops[1], tops[2], avgs[0], avgs[1]};
      } while (std::next_permutation(avgs.begin(), avgs.end()));
    } while (std::next_permutation(tops.begin(), tops.end()));
    return out;
  }();
  return orders;
}

Profile profile_from_index(std::size_t index) {
  if (index >= kProfiles) throw DomainError("matching profile index out of range");
  Profile p{};
  for (std::size_t i = kStudents; i-- > 0;) {
    p[i].index = static_cast<std::uint8_t>(index % kStrategies);
    index /= kStrategies;
  }
  return p;
}

std::size_t profile_to_index(const Profile& profile) {
  std::size_t index = 0;
  for (const auto& s : profile) {
    if (s.index >= kStrategies) throw DomainError("preference order out of range");
    index = index * kStrategies + s.index;
  }
  return index;
}

namespace {

std::array<std::uint8_t, kStudents> ranks_of(const TieBreakOrder& tb) {
  std::array<std::uint8_t, kStudents> rank{};
  for (std::uint8_t r = 0; r < kStudents; ++r) rank[tb.order[r]] = r;
  return rank;
}

}  // namespace

Matching run_da(const Profile& profile, const TieBreakOrder& tb) {
  const auto rank = ranks_of(tb);
  std::array<std::size_t, kStudents> next_choice{};
  std::array<std::vector<std::uint8_t>, kSchools> held;
  std::vector<std::uint8_t> free{0, 1, 2, 3, 4};

  while (!free.empty()) {
    const std::uint8_t s = free.back();
    free.pop_back();
    if (next_choice[s] >= kSchools) continue;  // exhausted its list
    const std::uint8_t school = profile[s].choice(next_choice[s]++);
    auto& h = held[school];
    h.push_back(s);
    if (h.size() > kCapacity[school]) {
      auto worst = std::max_element(h.begin(), h.end(),
                                    [&](std::uint8_t a, std::uint8_t b) { return rank[a] < rank[b]; });
      free.push_back(*worst);
      h.erase(worst);
    }
  }

  Matching m;
  m.fill(kUnmatched);
  for (std::size_t school = 0; school < kSchools; ++school)
    for (std::uint8_t s : held[school]) m[s] = static_cast<Outcome>(school);
  return m;
}

Matching run_boston(const Profile& profile, const TieBreakOrder& tb) {
  Matching m;
  m.fill(kUnmatched);
  auto remaining = kCapacity;
  for (std::size_t round = 0; round < kSchools; ++round) {
    // tb.order is already the priority order, so admit applicants in it
    for (std::uint8_t s : tb.order) {
      if (m[s] != kUnmatched) continue;
      const std::uint8_t school = profile[s].choice(round);
      if (remaining[school] > 0) {
        --remaining[school];
        m[s] = static_cast<Outcome>(school);
      }
    }
  }
  return m;
}

Matching run(Mechanism mechanism, const Profile& profile, const TieBreakOrder& tb) {
  return mechanism == Mechanism::boston ? run_boston(profile, tb) : run_da(profile, tb);
}

std::array<OutcomeLottery, kStudents> outcome_lottery(Mechanism mechanism, const Profile& profile) {
  std::array<std::array<std::int64_t, kOutcomes>, kStudents> counts{};
  for (const auto& tb : all_tie_breaks()) {
    const Matching m = run(mechanism, profile, tb);
    for (std::size_t s = 0; s < kStudents; ++s) ++counts[s][m[s]];
  }
  std::array<OutcomeLottery, kStudents> out;
  for (std::size_t s = 0; s < kStudents; ++s)
    for (std::size_t o = 0; o < kOutcomes; ++o)
      out[s][o] = Rational(counts[s][o], static_cast<std::int64_t>(kTieBreaks));
  return out;
}

LotteryTable::LotteryTable(Mechanism mechanism) : counts_(kProfiles * kStudents * kOutcomes, 0) {
  for (std::size_t k = 0; k < kProfiles; ++k) {
    const Profile p = profile_from_index(k);
    for (const auto& tb : all_tie_breaks()) {
      const Matching m = run(mechanism, p, tb);
      for (std::size_t s = 0; s < kStudents; ++s) ++counts_[(k * kStudents + s) * kOutcomes + m[s]];
    }
  }
}

OutcomeLottery LotteryTable::lottery(std::size_t profile, std::size_t student) const {
  OutcomeLottery l;
  for (std::size_t o = 0; o < kOutcomes; ++o)
    l[o] = Rational(count(profile, student, o), static_cast<std::int64_t>(kTieBreaks));
  return l;
}

double LotteryTable::expected_utility(std::size_t profile, std::size_t student,
                                      std::span<const double> v) const {
  double total = 0.0;
  for (std::size_t o = 0; o < kOutcomes; ++o) total += count(profile, student, o) * v[o];
  return total / static_cast<double>(kTieBreaks);
}

const LotteryTable& lottery_table(Mechanism mechanism) {
  static const LotteryTable da(Mechanism::deferred_acceptance);
  static const LotteryTable boston(Mechanism::boston);
  return mechanism == Mechanism::boston ? boston : da;
}

TypeVector uniform_type(double v_gold, double v_silver, double v_bronze) {
  TypeVector v;
  v.values.assign(kStudents, {v_gold, v_silver, v_bronze, 0.0});
  return v;
}

namespace {

void check_matching_type(const TypeVector& v) {
  if (v.num_players() != kStudents) throw DomainError("matching type needs 5 students");
  for (const auto& row : v.values) {
    if (row.size() != kOutcomes) throw DomainError("matching type needs (v_G, v_S, v_B, v_U)");
    for (double x : row)
      if (!std::isfinite(x)) throw DomainError("matching type values must be finite");
  }
}

}  // namespace

NormalFormGame build_game(Mechanism mechanism, const TypeVector& v) {
  check_matching_type(v);
  const auto& table = lottery_table(mechanism);
  std::vector<std::vector<double>> payoffs(kStudents, std::vector<double>(kProfiles));
  for (std::size_t s = 0; s < kStudents; ++s)
    for (std::size_t k = 0; k < kProfiles; ++k)
      payoffs[s][k] = table.expected_utility(k, s, v.player(s));
  return NormalFormGame(std::vector<std::size_t>(kStudents, kStrategies), std::move(payoffs));
}

bool strictly_ordinal(const TypeVector& v) {
  for (const auto& row : v.values) {
    if (row.size() != kOutcomes) return false;
    if (!(row[0] > row[1] && row[1] > row[2] && row[2] > row[3])) return false;
  }
  return true;
}

Prior gaussian_prior(double mean_gold, double sd_gold, double mean_silver, double sd_silver,
                     double mean_bronze, double sd_bronze, std::size_t max_rejections) {
  const std::vector<CoordinateLaw> student{
      CoordinateLaw::normal(mean_gold, sd_gold), CoordinateLaw::normal(mean_silver, sd_silver),
      CoordinateLaw::normal(mean_bronze, sd_bronze), CoordinateLaw::fixed(0.0)};
  return Prior::gaussian(std::vector<std::vector<CoordinateLaw>>(kStudents, student),
                         strictly_ordinal, max_rejections);
}

BayesianGame bayesian_game(Mechanism mechanism, Prior prior) {
  const LotteryTable* table = &lottery_table(mechanism);
  UtilityFn u = [table](std::size_t player, std::size_t profile, const TypeVector& v) {
    return table->expected_utility(profile, player, v.player(player));
  };
  return BayesianGame(std::vector<std::size_t>(kStudents, kStrategies),
                      std::vector<std::size_t>(kStudents, kOutcomes), std::move(prior),
                      std::move(u), true);
}

std::vector<std::size_t> named_profile_set(Mechanism mechanism) {
  std::vector<std::size_t> out;
  if (mechanism == Mechanism::deferred_acceptance) {
    for (std::uint8_t a1 = 0; a1 < kStrategies; ++a1)
      for (std::uint8_t a2 = 0; a2 < kStrategies; ++a2)
        out.push_back(profile_to_index({kTruthful, kTruthful, kTruthful, {a1}, {a2}}));
  } else {
    constexpr PreferenceOrder gbs{1};
    for (std::uint8_t a1 : {2, 3})
      for (std::uint8_t a2 : {2, 3}) out.push_back(profile_to_index({gbs, gbs, gbs, {a1}, {a2}}));
  }
  return out;
}

std::vector<std::array<double, kOutcomes>> group_outcomes(std::span<const double> distribution,
                                                          Mechanism mechanism) {
  if (distribution.size() != kProfiles) throw DomainError("distribution must cover 7776 profiles");
  const auto& table = lottery_table(mechanism);
  std::vector<std::array<double, kOutcomes>> out;
  for (const auto& group : kGroups) {
    std::array<double, kOutcomes> row{};
    for (std::size_t k = 0; k < kProfiles; ++k) {
      if (distribution[k] == 0.0) continue;
      for (std::size_t s : group)
        for (std::size_t o = 0; o < kOutcomes; ++o)
          row[o] += distribution[k] * table.count(k, s, o);
    }
    for (double& x : row) x /= static_cast<double>(kTieBreaks * group.size());
    out.push_back(row);
  }
  return out;
}

double boston_margin(std::span<const double> v) {
  if (v.size() < 3) throw DomainError("boston_margin needs (v_G, v_S, v_B)");
  return 2.0 / 3.0 * v[0] + 1.0 / 3.0 * v[2] - v[1];
}

}  // namespace matching

}  // namespace arc
