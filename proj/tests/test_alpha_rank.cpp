#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "arc/alpha_rank.hpp"
#include "arc/errors.hpp"
#include "arc/mechanisms.hpp"
#include "oracles.hpp"

using namespace arc;

namespace {

NormalFormGame pd() {
  return hawk_dove::game(hawk_dove::kPrisonersDilemma, hawk_dove::kPrisonersDilemma);
}
NormalFormGame ac() {
  return hawk_dove::game(hawk_dove::kAntiCoordination, hawk_dove::kAntiCoordination);
}
NormalFormGame mixed() {
  return hawk_dove::game(hawk_dove::kPrisonersDilemma, hawk_dove::kAntiCoordination);
}

NormalFormGame random_game(const std::vector<std::size_t>& counts, std::mt19937_64& rng,
                           double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  const std::size_t n = num_profiles(counts);
  std::vector<std::vector<double>> pay(counts.size(), std::vector<double>(n));
  for (auto& row : pay)
    for (double& x : row) x = u(rng);
  return NormalFormGame(counts, pay);
}

using oracle::max_diff;
using oracle::naive_entry;

}  // namespace

TEST_CASE("mutation rate") {
  CHECK(mutation_rate(std::vector<std::size_t>{2, 2}) == 0.5);
  CHECK(mutation_rate(std::vector<std::size_t>(5, 6)) == doctest::Approx(1.0 / 25));
  CHECK(mutation_rate(std::vector<std::size_t>{3}) == 0.5);
}

TEST_CASE("fixation probability is stable and continuous") {
  CHECK(fixation_probability(0.0, 50) == 1.0 / 50);
  for (double x : {-1e4, -800.0, -50.0, -1.0, -1e-3, 1e-3, 1.0, 50.0, 800.0, 1e4}) {
    const double f = fixation_probability(x, 50);
    CHECK(std::isfinite(f));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  for (double x : {-5.0, -1.0, -0.01, 0.01, 0.5, 3.0})
    CHECK(fixation_probability(x, 50) ==
          doctest::Approx(static_cast<double>(naive_entry(1.0L, x, 50))).epsilon(1e-12));
  const double eta = 0.5;
  CHECK(std::abs(eta * fixation_probability(1e-9, 50) - eta / 50) <= 1e-6 * eta);
  CHECK(std::abs(eta * fixation_probability(-1e-9, 50) - eta / 50) <= 1e-6 * eta);
  CHECK(fixation_probability(1e4, 50) == 1.0);
  CHECK(fixation_probability(-1e4, 50) == 0.0);
  CHECK_THROWS_AS(fixation_probability(1.0, 1), DomainError);
}

TEST_CASE("transition entries on the 2x2 instances") {
  const NormalFormGame flat({2, 2}, {{3, 3, 3, 3}, {3, 3, 3, 3}});
  const auto tf = transition_matrix(flat, 1.0, 50);
  CHECK(tf.eta() == 0.5);
  CHECK(tf.entry(0, 1) == 0.01);
  CHECK(tf.entry(0, 3) == 0.0);
  CHECK(tf.diagonal(0) == doctest::Approx(0.98));

  // (Dove,Dove) -> (Hawk,Dove): delta = +2
  const auto t10 = transition_matrix(pd(), 10.0, 50);
  CHECK(t10.entry(3, 1) == doctest::Approx(-0.5 * std::expm1(-20.0)).epsilon(1e-15));
  CHECK(t10.entry(3, 1) == doctest::Approx(0.4999999990).epsilon(1e-9));
  // (Hawk,Hawk) -> (Dove,Hawk): delta = -1, underflows to zero
  const auto t50 = transition_matrix(pd(), 50.0, 50);
  CHECK(t50.entry(0, 2) < 1e-300);
  CHECK(t50.entry(0, 2) >= 0.0);

  CHECK_THROWS_AS(transition_matrix(pd(), 0.0, 50), DomainError);
  CHECK_THROWS_AS(transition_matrix(pd(), -1.0, 50), DomainError);
  CHECK_THROWS_AS(transition_matrix(pd(), 1.0, 1), DomainError);
}

TEST_CASE("rows are stochastic and bounded by eta") {
  std::mt19937_64 rng(2024);
  const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {3, 2}, {2, 2, 2}, {4, 3}, {5}, {3, 3, 3}};
  for (int t = 0; t < 120; ++t) {
    const auto& shape = shapes[t % shapes.size()];
    const auto g = random_game(shape, rng, -20, 20);
    const double alpha = std::pow(10.0, -3 + 6 * (t % 13) / 12.0);
    const auto tm = transition_matrix(g, alpha, 2 + t % 60);
    for (std::size_t r = 0; r < tm.size(); ++r) {
      double sum = tm.diagonal(r);
      for (const auto& e : tm.off_diagonal(r)) {
        REQUIRE(e.value >= 0.0);
        REQUIRE(e.value <= tm.eta() + 1e-15);
        sum += e.value;
      }
      REQUIRE(tm.diagonal(r) >= 0.0);
      REQUIRE(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("two-state chains") {
  auto d = stationary_distribution(TransitionMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  CHECK(d.probabilities[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.probabilities[1] == doctest::Approx(0.5).epsilon(1e-14));
  d = stationary_distribution(TransitionMatrix::from_rows({{0.9, 0.1}, {0.3, 0.7}}));
  CHECK(d.probabilities[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(d.probabilities[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d.residual <= 1e-15);

  // one transient state, one absorbing
  d = stationary_distribution(TransitionMatrix::from_rows({{0.5, 0.5}, {0.0, 1.0}}));
  CHECK(d.probabilities[0] == 0.0);
  CHECK(d.probabilities[1] == 1.0);

  try {
    stationary_distribution(TransitionMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
    FAIL("expected NotIrreducible");
  } catch (const NotIrreducible& e) {
    CHECK(e.closed_classes() == 2);
  }
  CHECK_THROWS_AS(TransitionMatrix::from_rows({{0.5, 0.6}, {0.5, 0.5}}), DomainError);
}

TEST_CASE("Prisoner's Dilemma chain against a hand-built dense solve") {
  for (double alpha : {0.05, 0.5, 1.0, 3.0}) {
    const std::size_t m = 50;
    const long double eta = 0.5L;
    // rows/cols: HH, HD, DH, DD with u1 = (1,4,0,2), u2 = (1,0,4,2)
    const long double u1[4] = {1, 4, 0, 2}, u2[4] = {1, 0, 4, 2};
    std::vector<std::vector<long double>> c(4, std::vector<long double>(4, 0.0L));
    auto edge = [&](int s, int t, const long double* u) {
      c[s][t] = naive_entry(eta, alpha * (u[t] - u[s]), m);
    };
    edge(0, 2, u1);  // player 1 switches H -> D
    edge(1, 3, u1);
    edge(2, 0, u1);
    edge(3, 1, u1);
    edge(0, 1, u2);  // player 2 switches
    edge(1, 0, u2);
    edge(2, 3, u2);
    edge(3, 2, u2);
    for (int s = 0; s < 4; ++s) {
      long double out = 0.0L;
      for (int t = 0; t < 4; ++t) out += c[s][t];
      c[s][s] = 1.0L - out;
    }
    const auto expected = oracle::dense_stationary(c);
    const auto tm = transition_matrix(pd(), alpha, m);
    for (int s = 0; s < 4; ++s)
      for (int t = 0; t < 4; ++t)
        CHECK(tm.entry(s, t) == doctest::Approx(static_cast<double>(c[s][t])).epsilon(1e-13));
    const auto d = stationary_distribution(tm);
    CHECK(max_diff(d.probabilities, expected) <= 1e-12);
    CHECK(d.residual <= 1e-10);
  }
}

TEST_CASE("linear solve agrees with power iteration on small random games") {
  std::mt19937_64 rng(77);
  const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {3, 2}, {2, 2, 2}, {3, 4}, {2, 6},
                                                     {12}, {2, 3, 2}, {4, 3}, {2, 2, 3}, {11}};
  std::uniform_real_distribution<double> a(0.01, 1.0);
  for (int t = 0; t < 60; ++t) {
    const auto g = random_game(shapes[t % shapes.size()], rng);
    const auto tm = transition_matrix(g, a(rng), 50);
    const auto direct = stationary_distribution(tm);
    REQUIRE(direct.residual <= 1e-10);
    REQUIRE(stationary_residual(tm, direct.probabilities) <= 1e-10);
    REQUIRE(max_diff(direct.probabilities, oracle::power_by_squaring(tm)) <= 1e-8);
    double sum = 0.0;
    for (double p : direct.probabilities) {
      REQUIRE(p >= 0.0);
      sum += p;
    }
    REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("step-wise power backend on fast-mixing chains") {
  std::mt19937_64 rng(78);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_game({3, 3}, rng);
    const auto tm = transition_matrix(g, 0.05, 50);
    const auto power = stationary_distribution_power(tm);
    CHECK(max_diff(stationary_distribution(tm).probabilities, power.probabilities) <= 1e-8);
    CHECK(power.residual <= 1e-12);
  }
}

TEST_CASE("GTH backend") {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 30; ++t) {
    const auto tm = transition_matrix(random_game({3, 4}, rng), 0.3, 50);
    CHECK(max_diff(stationary_distribution(tm).probabilities,
                   stationary_distribution_gth(tm).probabilities) <= 1e-12);
  }
  // Escape rates near 1e-107: the threshold rejects the chain, GTH still
  // resolves the symmetric split between the two sinks.
  const auto tm = transition_matrix(ac(), 5.0, 50);
  CHECK_THROWS_AS(stationary_distribution(tm), NotIrreducible);
  const auto d = stationary_distribution_gth(tm);
  CHECK(d.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.probabilities[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.residual <= 1e-15);
}

TEST_CASE("affine invariance of the chain") {
  // Dyadic payoffs, scales and intensities keep a*u + b and a*alpha exact,
  // so both sides see bit-identical arguments.
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pay(-32, 32), scale(1, 80), shift(-100, 100), intensity(1, 32);
  const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {3, 2}, {2, 2, 2}, {3, 3}};
  for (int t = 0; t < 200; ++t) {
    const auto& shape = shapes[t % shapes.size()];
    const std::size_t n = num_profiles(shape);
    std::vector<std::vector<double>> u(shape.size(), std::vector<double>(n)), v = u;
    const double a = scale(rng) / 8.0, b = shift(rng), alpha = intensity(rng) / 16.0;
    for (std::size_t p = 0; p < shape.size(); ++p)
      for (std::size_t k = 0; k < n; ++k) {
        u[p][k] = pay(rng) / 4.0;
        v[p][k] = a * u[p][k] + b;
      }
    const NormalFormGame g(shape, u), h(shape, v);
    const auto lhs = transition_matrix(h, alpha, 50);
    const auto rhs = transition_matrix(g, a * alpha, 50);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        const double x = lhs.entry(r, c), y = rhs.entry(r, c);
        REQUIRE(std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)));
      }
    if (t % 10 == 0) {
      try {
        const auto dl = stationary_distribution(lhs);
        const auto dr = stationary_distribution(rhs);
        REQUIRE(max_diff(dl.probabilities, dr.probabilities) <= 1e-10);
      } catch (const NotIrreducible&) {
        CHECK_THROWS_AS(stationary_distribution(rhs), NotIrreducible);
      }
    }
  }
}

TEST_CASE("sweeps on the Hawk-Dove instances") {
  const auto r_pd = alpha_sweep(pd(), 50, SweepConfig::doubling());
  CHECK(r_pd.dist.probabilities[0] >= 0.999);
  CHECK(r_pd.dist.converged);
  const auto r_ac = alpha_sweep(ac(), 50, SweepConfig::doubling());
  CHECK(std::abs(r_ac.dist.probabilities[1] - 0.5) <= 1e-6);
  CHECK(std::abs(r_ac.dist.probabilities[2] - 0.5) <= 1e-6);
  const auto r_mx = alpha_sweep(mixed(), 50, SweepConfig::doubling());
  CHECK(r_mx.dist.probabilities[1] >= 0.999);

  for (const auto* r : {&r_pd, &r_ac, &r_mx}) {
    REQUIRE(!r->trajectory.empty());
    CHECK(r->trajectory.front().alpha == 1e-5);
    // existence at alpha implies existence at alpha / 2
    bool failed = false;
    for (const auto& p : r->trajectory) {
      if (failed) CHECK(!p.exists);
      failed = failed || !p.exists;
    }
  }
}

TEST_CASE("fixed-mode sweep on the matching game at the prior means") {
  const auto game = matching::build_game(matching::Mechanism::boston,
                                         matching::uniform_type(100, 70, 25));
  const auto r = alpha_sweep(game, 50, SweepConfig::fixed(6.71, 0.1));
  CHECK(r.alpha_pre == 6.71);
  CHECK(r.trajectory.size() == 1);
  CHECK(r.dist.residual <= 1e-10);
}

TEST_CASE("sweep errors") {
  auto bad = SweepConfig::doubling(1e6);
  CHECK_THROWS_AS(alpha_sweep(ac(), 50, bad), SweepError);
  CHECK_THROWS_AS(alpha_sweep(ac(), 50, SweepConfig::fixed(1e6, 1e6)), SweepError);
  auto capped = SweepConfig::doubling();
  capped.convergence_tol = 0.0;
  capped.max_doublings = 3;
  CHECK_THROWS_AS(alpha_sweep(pd(), 50, capped), SweepError);
  CHECK_THROWS_AS(alpha_sweep(pd(), 50, SweepConfig::doubling(-1.0)), DomainError);
  CHECK_THROWS_AS(alpha_sweep(pd(), 50, SweepConfig::fixed(1.0, 0.0)), DomainError);
}

TEST_CASE("fixed-mode alpha values land on the decrement grid") {
  // AC has two closed classes at large alpha, so the sweep walks down.
  const auto r = alpha_sweep(ac(), 50, SweepConfig::fixed(10.3, 0.1));
  CHECK(r.alpha_pre < 10.3);
  CHECK(r.trajectory.size() > 1);
  for (const auto& p : r.trajectory) CHECK(p.alpha == std::round(p.alpha * 10.0) / 10.0);
  CHECK(r.trajectory.back().exists);
}

TEST_CASE("smoothness in a type coordinate") {
  const auto bg = hawk_dove::bayesian_game(0.5);
  using hawk_dove::kAntiCoordination;
  using hawk_dove::kPrisonersDilemma;
  const std::vector<TypeVector> bases{hawk_dove::types(kPrisonersDilemma, kPrisonersDilemma),
                                      hawk_dove::types(kAntiCoordination, kAntiCoordination),
                                      hawk_dove::types(kPrisonersDilemma, kAntiCoordination)};
  auto f = [&](const TypeVector& v, double alpha) {
    return stationary_distribution_gth(transition_matrix(realize(bg, v), alpha, 50)).probabilities;
  };
  for (double alpha : {0.1, 1.0, 5.0})
    for (const auto& base : bases)
      for (std::size_t coord : {0u, 2u}) {
        auto diff = [&](double h) {
          TypeVector up = base, down = base;
          up.values[0][coord] += h;
          down.values[0][coord] -= h;
          const auto a = f(up, alpha), b = f(down, alpha);
          std::vector<double> d(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) d[i] = (a[i] - b[i]) / (2 * h);
          return d;
        };
        const double h = 0.002 / alpha;
        const auto d1 = diff(h), d2 = diff(h / 2), d3 = diff(h / 4);
        const double e1 = max_diff(d1, d2), e2 = max_diff(d2, d3);
        for (double x : d3) REQUIRE(std::isfinite(x));
        if (e1 < 1e-9) continue;  // derivative already resolved below noise
        CAPTURE(alpha);
        CAPTURE(coord);
        const double ratio = e1 / e2;
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
      }
}
