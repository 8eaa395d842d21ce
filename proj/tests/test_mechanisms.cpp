#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "arc/errors.hpp"
#include "arc/mechanisms.hpp"

using namespace arc;
using namespace arc::matching;

namespace {

constexpr std::uint8_t kGSB = 0, kGBS = 1, kSGB = 2, kSBG = 3, kBGS = 4;

Profile make_profile(std::array<std::uint8_t, kStudents> idx) {
  Profile p{};
  for (std::size_t i = 0; i < kStudents; ++i) p[i].index = idx[i];
  return p;
}

TieBreakOrder identity_tb() { return TieBreakOrder{{0, 1, 2, 3, 4}}; }

std::array<std::size_t, kStudents> rank_of(const TieBreakOrder& tb) {
  std::array<std::size_t, kStudents> r{};
  for (std::size_t i = 0; i < kStudents; ++i) r[tb.order[i]] = i;
  return r;
}

// Reference immediate-acceptance: round r, every unassigned student applies
// to their r-th choice; seats go by priority and are final.
Matching ref_boston(const Profile& p, const TieBreakOrder& tb) {
  Matching out{};
  out.fill(kUnmatched);
  std::array<std::size_t, kSchools> left{kCapacity};
  for (std::size_t round = 0; round < kSchools; ++round)
    for (std::uint8_t s : tb.order) {
      if (out[s] != kUnmatched) continue;
      const std::uint8_t c = p[s].choice(round);
      if (left[c] > 0) {
        --left[c];
        out[s] = static_cast<Outcome>(c);
      }
    }
  return out;
}

// Reference student-proposing deferred acceptance with tentative holds.
Matching ref_da(const Profile& p, const TieBreakOrder& tb) {
  const auto rank = rank_of(tb);
  std::array<std::size_t, kStudents> next{};
  std::array<std::vector<std::size_t>, kSchools> held;
  std::vector<std::size_t> free{0, 1, 2, 3, 4};
  while (!free.empty()) {
    const std::size_t s = free.back();
    free.pop_back();
    if (next[s] == kSchools) continue;
    const std::uint8_t c = p[s].choice(next[s]++);
    held[c].push_back(s);
    std::sort(held[c].begin(), held[c].end(),
              [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    if (held[c].size() > kCapacity[c]) {
      free.push_back(held[c].back());
      held[c].pop_back();
    }
  }
  Matching out{};
  out.fill(kUnmatched);
  for (std::size_t c = 0; c < kSchools; ++c)
    for (std::size_t s : held[c]) out[s] = static_cast<Outcome>(c);
  return out;
}

std::size_t position(const PreferenceOrder& p, Outcome o) {
  if (o == kUnmatched) return kSchools;
  for (std::size_t r = 0; r < kSchools; ++r)
    if (p.choice(r) == o) return r;
  return kSchools;
}

bool stable(const Profile& p, const TieBreakOrder& tb, const Matching& m) {
  const auto rank = rank_of(tb);
  for (std::size_t s = 0; s < kStudents; ++s)
    for (std::size_t r = 0; r < position(p[s], m[s]); ++r) {
      const std::uint8_t c = p[s].choice(r);
      std::size_t seated = 0;
      bool displaces = false;
      for (std::size_t t = 0; t < kStudents; ++t)
        if (m[t] == c) {
          ++seated;
          displaces = displaces || rank[s] < rank[t];
        }
      if (seated < kCapacity[c] || displaces) return false;
    }
  return true;
}

std::int64_t utility_units(const LotteryTable& t, std::size_t k, std::size_t s,
                           const std::array<std::int64_t, kOutcomes>& v) {
  std::int64_t acc = 0;
  for (std::size_t o = 0; o < kOutcomes; ++o) acc += t.count(k, s, o) * v[o];
  return acc;
}

std::size_t with_strategy(std::size_t k, std::size_t s, std::uint8_t strategy) {
  Profile p = profile_from_index(k);
  p[s].index = strategy;
  return profile_to_index(p);
}

}  // namespace

TEST_CASE("tie-break orders") {
  const auto& tbs = all_tie_breaks();
  std::set<std::array<std::uint8_t, kStudents>> seen;
  for (const auto& tb : tbs) {
    seen.insert(tb.order);
    std::set<std::uint8_t> tops(tb.order.begin(), tb.order.begin() + 3);
    std::set<std::uint8_t> avgs(tb.order.begin() + 3, tb.order.end());
    CHECK(tops == std::set<std::uint8_t>{0, 1, 2});
    CHECK(avgs == std::set<std::uint8_t>{3, 4});
  }
  CHECK(seen.size() == kTieBreaks);
}

TEST_CASE("hand-run matchings under the identity tie-break") {
  const Profile truthful = make_profile({kGSB, kGSB, kGSB, kGSB, kGSB});
  const Matching expected{kGold, kGold, kSilver, kBronze, kUnmatched};
  CHECK(run_da(truthful, identity_tb()) == expected);
  CHECK(run_boston(truthful, identity_tb()) == expected);

  // Averages go S-first and B-first: Boston gives them the seats the third
  // Top would fall back on; DA does not.
  const Profile split = make_profile({kGSB, kGSB, kGSB, kSGB, kBGS});
  CHECK(run_boston(split, identity_tb()) == Matching{kGold, kGold, kUnmatched, kSilver, kBronze});
  CHECK(run_da(split, identity_tb()) == Matching{kGold, kGold, kSilver, kBronze, kUnmatched});
  CHECK(run(Mechanism::boston, split, identity_tb()) == run_boston(split, identity_tb()));
}

TEST_CASE("exact lotteries") {
  const Rational third(1, 3), two_thirds(2, 3), half(1, 2);
  const auto da = outcome_lottery(Mechanism::deferred_acceptance, make_profile({0, 0, 0, 0, 0}));
  for (std::size_t s = 0; s < 3; ++s)
    CHECK(da[s] == OutcomeLottery{two_thirds, third, Rational(0), Rational(0)});
  for (std::size_t s = 3; s < 5; ++s)
    CHECK(da[s] == OutcomeLottery{Rational(0), Rational(0), half, half});

  const auto bo = outcome_lottery(Mechanism::boston, make_profile({0, 0, 0, 0, 0}));
  for (std::size_t s = 3; s < 5; ++s)
    CHECK(bo[s] == OutcomeLottery{Rational(0), Rational(0), half, half});

  const Profile split = make_profile({kGSB, kGSB, kGSB, kSGB, kBGS});
  const auto bo_split = outcome_lottery(Mechanism::boston, split);
  const auto da_split = outcome_lottery(Mechanism::deferred_acceptance, split);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(bo_split[s] == OutcomeLottery{two_thirds, Rational(0), Rational(0), third});
    CHECK(da_split[s] == OutcomeLottery{two_thirds, third, Rational(0), Rational(0)});
  }
}

TEST_CASE("exhaustive agreement with reference mechanisms") {
  for (std::size_t k = 0; k < kProfiles; ++k) {
    const Profile p = profile_from_index(k);
    REQUIRE(profile_to_index(p) == k);
    for (const auto& tb : all_tie_breaks()) {
      const Matching da = run_da(p, tb);
      const Matching bo = run_boston(p, tb);
      REQUIRE(da == ref_da(p, tb));
      REQUIRE(bo == ref_boston(p, tb));
      REQUIRE(stable(p, tb, da));
      for (const Matching& m : {da, bo}) {
        std::array<std::size_t, kOutcomes> filled{};
        for (Outcome o : m) ++filled[o];
        REQUIRE(filled[kGold] == 2);
        REQUIRE(filled[kSilver] == 1);
        REQUIRE(filled[kBronze] == 1);
        REQUIRE(filled[kUnmatched] == 1);
      }
    }
  }
}

TEST_CASE("lottery tables sum to one in twelfths") {
  for (Mechanism mech : {Mechanism::deferred_acceptance, Mechanism::boston}) {
    const auto& t = lottery_table(mech);
    for (std::size_t k = 0; k < kProfiles; k += 13)
      for (std::size_t s = 0; s < kStudents; ++s) {
        Rational sum(0);
        for (const Rational& q : t.lottery(k, s)) {
          REQUIRE(12 % q.den() == 0);
          sum += q;
        }
        REQUIRE(sum == Rational(1));
      }
  }
}

TEST_CASE("deferred acceptance is strategy-proof") {
  const auto& t = lottery_table(Mechanism::deferred_acceptance);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pick(0, kProfiles - 1);
  std::uniform_int_distribution<std::int64_t> val(1, 200);
  for (int draw = 0; draw < 10; ++draw) {
    std::array<std::int64_t, 3> x{val(rng), val(rng), val(rng)};
    std::sort(x.begin(), x.end());
    if (x[0] == x[1] || x[1] == x[2]) {
      --draw;
      continue;
    }
    const std::array<std::int64_t, kOutcomes> v{x[2], x[1], x[0], 0};
    for (int i = 0; i < 500; ++i) {
      const std::size_t k = pick(rng);
      for (std::size_t s = 0; s < kStudents; ++s) {
        const std::int64_t truth = utility_units(t, with_strategy(k, s, 0), s, v);
        for (std::uint8_t d = 1; d < kStrategies; ++d)
          REQUIRE(truth >= utility_units(t, with_strategy(k, s, d), s, v));
      }
    }
  }
}

TEST_CASE("Boston rewards a Silver-first Top when the margin is negative") {
  const auto& t = lottery_table(Mechanism::boston);
  const std::vector<double> v{100, 80, 25, 0};
  const std::size_t base = profile_to_index(make_profile({kGBS, kGBS, kGBS, kSBG, kSBG}));
  const std::size_t dev = with_strategy(base, 0, kSGB);
  CHECK(t.expected_utility(base, 0, v) == doctest::Approx(75.0));
  CHECK(t.expected_utility(dev, 0, v) == doctest::Approx(80.0));
  CHECK(boston_margin(v) == doctest::Approx(-5.0));
  CHECK(boston_margin(std::vector<double>{100, 70, 25}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(boston_margin(std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("matching game utilities") {
  const auto g = build_game(Mechanism::deferred_acceptance, uniform_type(100, 70, 25));
  CHECK(g.utility(0, 0) == doctest::Approx(90.0));
  CHECK(g.utility(3, 0) == doctest::Approx(12.5));
  const auto zero = build_game(Mechanism::boston, uniform_type(0, 0, 0));
  for (std::size_t s = 0; s < kStudents; ++s)
    for (std::size_t k = 0; k < kProfiles; k += 11) REQUIRE(zero.utility(s, k) == 0.0);
  CHECK(strictly_ordinal(uniform_type(100, 70, 25)));
  CHECK_FALSE(strictly_ordinal(uniform_type(100, 100, 25)));
  CHECK_FALSE(strictly_ordinal(uniform_type(100, 70, -1)));
}

TEST_CASE("lotteries are symmetric within groups") {
  const auto& t = lottery_table(Mechanism::boston);
  const std::array<std::array<std::size_t, 2>, 3> swaps{{{0, 1}, {1, 2}, {3, 4}}};
  for (std::size_t k = 0; k < kProfiles; ++k)
    for (const auto& [a, b] : swaps) {
      Profile p = profile_from_index(k);
      std::swap(p[a], p[b]);
      const std::size_t j = profile_to_index(p);
      for (std::size_t o = 0; o < kOutcomes; ++o) REQUIRE(t.count(j, a, o) == t.count(k, b, o));
    }
}

TEST_CASE("named equilibrium sets") {
  const auto da = named_profile_set(Mechanism::deferred_acceptance);
  const auto bo = named_profile_set(Mechanism::boston);
  CHECK(da.size() == 36);
  CHECK(bo.size() == 4);
  for (std::size_t k : da)
    for (std::size_t s = 0; s < kTops; ++s) CHECK(profile_from_index(k)[s].index == kGSB);
  for (std::size_t k : bo) {
    const Profile p = profile_from_index(k);
    for (std::size_t s = 0; s < kTops; ++s) CHECK(p[s].index == kGBS);
    for (std::size_t s = kTops; s < kStudents; ++s) CHECK(p[s].choice(0) == kSilver);
  }

  // Both sets are pure equilibria at the prior means.
  const std::vector<double> v{100, 70, 25, 0};
  for (Mechanism mech : {Mechanism::deferred_acceptance, Mechanism::boston}) {
    const auto& t = lottery_table(mech);
    for (std::size_t k : named_profile_set(mech))
      for (std::size_t s = 0; s < kStudents; ++s)
        for (std::uint8_t d = 0; d < kStrategies; ++d)
          REQUIRE(t.expected_utility(with_strategy(k, s, d), s, v) <=
                  t.expected_utility(k, s, v) + 1e-12);
  }
}

TEST_CASE("group outcomes of a point mass") {
  std::vector<double> dist(kProfiles, 0.0);
  dist[0] = 1.0;
  const auto rows = group_outcomes(dist, Mechanism::deferred_acceptance);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][kGold] == doctest::Approx(2.0 / 3.0));
  CHECK(rows[0][kSilver] == doctest::Approx(1.0 / 3.0));
  CHECK(rows[1][kBronze] == doctest::Approx(0.5));
  CHECK(rows[1][kUnmatched] == doctest::Approx(0.5));
  CHECK_THROWS_AS(group_outcomes(std::vector<double>(10, 0.1), Mechanism::boston), DomainError);
}

TEST_CASE("mechanism names") {
  CHECK(parse_mechanism("da") == Mechanism::deferred_acceptance);
  CHECK(parse_mechanism("boston") == Mechanism::boston);
  CHECK(parse_mechanism(mechanism_name(Mechanism::boston)) == Mechanism::boston);
  CHECK_THROWS_AS(parse_mechanism("serial"), DomainError);
  CHECK(PreferenceOrder{kGBS}.label() == "(G,B,S)");
}
