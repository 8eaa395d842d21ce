#include "arc/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "arc/alpha_rank.hpp"
#include "arc/collections.hpp"
#include "arc/errors.hpp"
#include "arc/io.hpp"
#include "arc/mechanisms.hpp"
#include "arc/parallel.hpp"

namespace arc::cli {

using nlohmann::json;

std::size_t default_threads() {
  if (const char* env = std::getenv("ARC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return 1;
}

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct SweepFlags {
  std::optional<double> alpha_start;
  std::optional<double> alpha_fixed;
  double decrement = 0.1;
  double factor = 2.0;
  std::size_t max_doublings = 60;

  void add(CLI::App* app) {
    app->add_option("--alpha-start", alpha_start, "Doubling sweep from this alpha")
        ->check(CLI::PositiveNumber);
    app->add_option("--alpha-fixed", alpha_fixed, "Fixed alpha, decremented on failure")
        ->check(CLI::PositiveNumber);
    app->add_option("--alpha-decrement", decrement, "Decrement for --alpha-fixed")
        ->check(CLI::PositiveNumber);
    app->add_option("--alpha-factor", factor, "Growth factor of the doubling sweep")
        ->check(CLI::Range(1.0 + 1e-9, 1e9));
    app->add_option("--max-doublings", max_doublings, "Cap on doubling steps");
    app->callback([app] {
      if (app->count("--alpha-start") && app->count("--alpha-fixed"))
        throw CLI::ValidationError("--alpha-start and --alpha-fixed are exclusive");
    });
  }

  SweepConfig resolve(bool prefer_fixed) const {
    SweepConfig c;
    if (alpha_fixed || (prefer_fixed && !alpha_start)) {
      c = SweepConfig::fixed(alpha_fixed.value_or(6.71), decrement);
    } else {
      c = SweepConfig::doubling(alpha_start.value_or(1e-5), factor);
    }
    c.max_doublings = max_doublings;
    return c;
  }
};

json sweep_json(const SweepConfig& c) {
  json j;
  j["policy"] = c.describe();
  if (c.mode == SweepMode::doubling) {
    j["mode"] = "doubling";
    j["alpha_start"] = c.alpha0;
    j["factor"] = c.factor;
    j["max_doublings"] = c.max_doublings;
    j["convergence_tol"] = c.convergence_tol;
  } else {
    j["mode"] = "fixed";
    j["alpha_fixed"] = c.alpha_fixed;
    j["decrement"] = c.step;
  }
  j["solver_tol"] = c.solver.tol;
  return j;
}

std::string companion(const std::string& out, const std::string& suffix) {
  std::string stem = out;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0)
    stem.resize(stem.size() - 4);
  return stem + suffix;
}

void write_manifest(const std::string& out, const RunManifest& m) {
  write_text_file(companion(out, ".manifest.json"), m.to_json().dump(2) + "\n");
}

/// Strategy labels per group, for marginal tables.
std::vector<std::vector<std::string>> strategy_labels(const GameSpec& spec) {
  std::vector<std::vector<std::string>> out;
  for (const auto& g : spec.groups()) {
    std::vector<std::string> names;
    const std::size_t k = spec.strategy_counts()[g.front()];
    for (std::size_t s = 0; s < k; ++s) {
      if (spec.generator == "matching")
        names.push_back(matching::PreferenceOrder{static_cast<std::uint8_t>(s)}.label());
      else if (spec.generator == "hawk_dove")
        names.push_back(s == hawk_dove::kHawk ? "Hawk" : "Dove");
      else
        names.push_back("s" + std::to_string(s));
    }
    out.push_back(std::move(names));
  }
  return out;
}

std::vector<std::string> group_labels(const GameSpec& spec) {
  if (spec.generator == "matching") return {"Top", "Average"};
  std::vector<std::string> out;
  for (std::size_t p = 0; p < spec.strategy_counts().size(); ++p)
    out.push_back("player_" + std::to_string(p));
  return out;
}

/// A single game from a spec: normal form, or a Bayesian spec whose prior
/// has exactly one support point.
NormalFormGame single_game(const GameSpec& spec) {
  if (spec.normal_form) return *spec.normal_form;
  const Prior& prior = spec.bayesian->prior();
  if (prior.is_finite() && prior.support().types.size() == 1)
    return realize(*spec.bayesian, prior.support().types.front());
  throw InputError("rank needs a normal-form game or a single-point prior; use collection");
}

// ---- rank -----------------------------------------------------------------

struct RankArgs {
  std::string spec;
  std::string out;
  std::size_t m = kDefaultPopulation;
  SweepFlags sweep;
};

int do_rank(const RankArgs& a, std::ostream& out) {
  Stopwatch sw;
  RunManifest man;
  man.command = "rank";
  const GameSpec spec = load_game_spec(a.spec);
  const NormalFormGame game = single_game(spec);
  man.phase_seconds.emplace_back("load", sw.lap());

  const SweepConfig cfg = a.sweep.resolve(spec.generator == "matching");
  const SweepResult r = alpha_sweep(game, a.m, cfg);
  man.phase_seconds.emplace_back("sweep", sw.lap());

  std::ostringstream csv;
  write_rank_csv(csv, r.dist.probabilities, game.strategy_counts());
  write_text_file(a.out, csv.str());
  man.phase_seconds.emplace_back("write", sw.lap());

  man.parameters = {{"spec", spec.source}, {"m", a.m}, {"sweep", sweep_json(cfg)}};
  json traj = json::array();
  for (const auto& p : r.trajectory) traj.push_back({p.alpha, p.exists});
  man.extra = {{"alpha_pre", r.alpha_pre}, {"residual", r.dist.residual}, {"trajectory", traj}};
  write_manifest(a.out, man);
  out << "alpha_pre=" << format_real(r.alpha_pre) << " residual=" << format_real(r.dist.residual)
      << '\n';
  return kExitOk;
}

// ---- collection -----------------------------------------------------------

struct CollectionArgs {
  std::string spec;
  std::string out;
  std::string mode = "auto";
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::size_t m = kDefaultPopulation;
  std::size_t threads = 1;
  double max_skip_fraction = 0.1;
  SweepFlags sweep;
};

int do_collection(const CollectionArgs& a, std::ostream& out) {
  Stopwatch sw;
  RunManifest man;
  man.command = "collection";
  const GameSpec spec = load_game_spec(a.spec);
  if (!spec.bayesian) throw InputError("collection needs a Bayesian game spec");
  const BayesianGame& bg = *spec.bayesian;
  man.phase_seconds.emplace_back("load", sw.lap());

  bool exact = bg.prior().is_finite();
  if (a.mode == "exact" && !exact) throw InputError("exact mode needs a finite prior");
  if (a.mode == "mc") exact = false;

  const SweepConfig cfg = a.sweep.resolve(spec.generator == "matching");
  Collection c;
  if (exact) {
    c = exact_collection(bg, a.m, cfg);
  } else {
    MonteCarloOptions opts;
    opts.n_samples = a.samples;
    opts.seed = a.seed;
    opts.m = a.m;
    opts.sweep = cfg;
    opts.threads = a.threads;
    opts.max_skip_fraction = a.max_skip_fraction;
    try {
      c = monte_carlo_collection(bg, opts);
    } catch (const ExcessiveSkips& e) {
      man.skipped = e.skipped();
      throw;
    }
  }
  man.phase_seconds.emplace_back("compute", sw.lap());

  std::ostringstream csv;
  write_collection_csv(csv, c, bg.strategy_counts());
  write_text_file(a.out, csv.str());

  std::ostringstream marg;
  write_marginals_csv(marg, group_marginals(c.probabilities, spec.groups(), bg.strategy_counts()),
                      group_labels(spec), strategy_labels(spec));
  write_text_file(companion(a.out, ".marginals.csv"), marg.str());

  if (spec.mechanism) {
    std::ostringstream oc;
    oc << "group,gold,silver,bronze,unmatched\n";
    const auto rows = matching::group_outcomes(c.probabilities, *spec.mechanism);
    const auto names = group_labels(spec);
    for (std::size_t g = 0; g < rows.size(); ++g) {
      oc << names[g];
      for (double x : rows[g]) oc << ',' << format_real(x);
      oc << '\n';
    }
    write_text_file(companion(a.out, ".outcomes.csv"), oc.str());
  }
  man.phase_seconds.emplace_back("write", sw.lap());

  man.parameters = {{"spec", spec.source}, {"m", a.m},        {"sweep", sweep_json(cfg)},
                    {"exact", exact},      {"seed", a.seed},  {"n_samples", c.n_samples},
                    {"threads", a.threads}, {"max_skip_fraction", a.max_skip_fraction}};
  man.skipped = c.skipped;
  json alphas = json::array();
  for (const auto& r : c.alphas)
    alphas.push_back({{"index", r.index}, {"alpha", r.alpha}, {"retried", r.retried},
                      {"skipped", r.skipped}});
  man.extra = {{"alpha_policy", c.alpha_policy}, {"alphas", alphas}};
  write_manifest(a.out, man);
  out << (exact ? "exact" : "monte-carlo") << " collection over " << c.n_samples
      << (exact ? " support points" : " samples") << ", skipped " << c.skipped << '\n';
  return kExitOk;
}

// ---- sweep over v_S ---------------------------------------------------------

struct SweepArgs {
  std::string mechanism = "boston";
  double v_gold = 100.0;
  double v_bronze = 25.0;
  double vs_from = 70.0;
  double vs_to = 80.0;
  double vs_step = 1.0;
  std::size_t m = kDefaultPopulation;
  std::size_t threads = 1;
  std::string out;
  SweepFlags sweep;
};

struct GridRow {
  double v_silver = 0.0;
  double alpha = 0.0;
  double mass_da = 0.0;
  double mass_bo = 0.0;
};

int do_sweep(const SweepArgs& a, std::ostream& out) {
  Stopwatch sw;
  RunManifest man;
  man.command = "sweep";
  matching::Mechanism mech;
  try {
    mech = matching::parse_mechanism(a.mechanism);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  if (!(a.vs_step > 0.0) || a.vs_to < a.vs_from) throw InputError("empty v_S grid");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = a.vs_from + static_cast<double>(i) * a.vs_step;
    if (v > a.vs_to + 1e-9 * a.vs_step) break;
    grid.push_back(v);
  }
  const SweepConfig cfg = a.sweep.resolve(true);
  const auto ne_da = matching::named_profile_set(matching::Mechanism::deferred_acceptance);
  const auto ne_bo = matching::named_profile_set(matching::Mechanism::boston);

  std::vector<GridRow> rows(grid.size());
  parallel_for(grid.size(), a.threads, [&](std::size_t i) {
    const auto v = matching::uniform_type(a.v_gold, grid[i], a.v_bronze);
    if (!matching::strictly_ordinal(v))
      throw InputError("v_G > v_S > v_B > 0 fails at v_S = " + format_real(grid[i]));
    const SweepResult r = alpha_sweep(matching::build_game(mech, v), a.m, cfg);
    GridRow row{grid[i], r.alpha_pre, 0.0, 0.0};
    for (std::size_t k : ne_da) row.mass_da += r.dist.probabilities[k];
    for (std::size_t k : ne_bo) row.mass_bo += r.dist.probabilities[k];
    rows[i] = row;
  });
  man.phase_seconds.emplace_back("compute", sw.lap());

  std::ostringstream csv;
  csv << "v_silver,alpha,mass_ne_da,mass_ne_bo,boston_margin\n";
  for (const auto& r : rows) {
    const double v[4] = {a.v_gold, r.v_silver, a.v_bronze, 0.0};
    csv << format_real(r.v_silver) << ',' << format_real(r.alpha) << ',' << format_real(r.mass_da)
        << ',' << format_real(r.mass_bo) << ',' << format_real(matching::boston_margin(v)) << '\n';
  }
  write_text_file(a.out, csv.str());
  man.parameters = {{"mechanism", std::string(matching::mechanism_name(mech))},
                    {"v_gold", a.v_gold},
                    {"v_bronze", a.v_bronze},
                    {"v_silver_grid", grid},
                    {"m", a.m},
                    {"threads", a.threads},
                    {"sweep", sweep_json(cfg)}};
  write_manifest(a.out, man);
  out << grid.size() << " grid points written to " << a.out << '\n';
  return kExitOk;
}

// ---- graph ------------------------------------------------------------------

struct GraphArgs {
  std::string spec;
  std::string dist;
  std::string out;
  bool full = false;
  std::size_t samples = 50;
  std::uint64_t seed = 0;
};

int do_graph(const GraphArgs& a, std::ostream& out) {
  const GameSpec spec = load_game_spec(a.spec);
  std::vector<NormalFormGame> games;
  std::vector<double> weights;
  if (spec.normal_form) {
    games.push_back(*spec.normal_form);
    weights.push_back(1.0);
  } else if (spec.bayesian->prior().is_finite()) {
    const auto& sup = spec.bayesian->prior().support();
    for (std::size_t k = 0; k < sup.types.size(); ++k) {
      games.push_back(realize(*spec.bayesian, sup.types[k]));
      weights.push_back(sup.probabilities[k]);
    }
  } else {
    for (std::size_t i = 0; i < a.samples; ++i) {
      RngStream rng(a.seed, i);
      games.push_back(realize(*spec.bayesian, sample_type(spec.bayesian->prior(), rng)));
      weights.push_back(1.0 / static_cast<double>(a.samples));
    }
  }
  std::istringstream dist_text(read_text_file(a.dist));
  const ProfileTable table = read_profile_csv(dist_text, spec.strategy_counts());

  std::ostringstream dot;
  DotOptions opts;
  opts.full_game_graph = a.full;
  write_dot(dot, games, weights, table.mass, opts);
  write_text_file(a.out, dot.str());
  out << table.mass.size() << " nodes written to " << a.out << '\n';
  return kExitOk;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
  std::size_t agents = 5;
  std::size_t min_actions = 2;
  std::size_t max_actions = 6;
  double alpha = 0.1;
  std::size_t m = kDefaultPopulation;
  std::uint64_t seed = 0;
  std::string out;
};

NormalFormGame random_game(std::size_t agents, std::size_t actions, std::uint64_t seed) {
  const std::vector<std::size_t> counts(agents, actions);
  const std::size_t n = num_profiles(counts);
  RngStream rng(seed, actions);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> payoffs(agents, std::vector<double>(n));
  for (auto& row : payoffs)
    for (double& x : row) x = u(rng.engine());
  return NormalFormGame(counts, std::move(payoffs));
}

int do_bench(const BenchArgs& a, std::ostream& out) {
  if (a.min_actions < 2 || a.max_actions < a.min_actions) throw InputError("bad action range");
  RunManifest man;
  man.command = "bench";
  std::ostringstream csv;
  csv << "actions,profiles,build_seconds,solve_seconds,total_seconds\n";
  for (std::size_t k = a.min_actions; k <= a.max_actions; ++k) {
    const NormalFormGame game = random_game(a.agents, k, a.seed);
    Stopwatch sw;
    const TransitionMatrix tm = transition_matrix(game, a.alpha, a.m);
    const double build = sw.lap();
    const RankDistribution d = stationary_distribution(tm);
    const double solve = sw.lap();
    csv << k << ',' << game.num_profiles() << ',' << format_real(build) << ','
        << format_real(solve) << ',' << format_real(build + solve) << '\n';
    man.phase_seconds.emplace_back("actions_" + std::to_string(k), build + solve);
    out << k << " actions, " << game.num_profiles() << " profiles: " << build + solve << " s\n";
    (void)d;
  }
  write_text_file(a.out, csv.str());
  man.parameters = {{"agents", a.agents}, {"min_actions", a.min_actions},
                    {"max_actions", a.max_actions}, {"alpha", a.alpha},
                    {"m", a.m}, {"seed", a.seed}};
  write_manifest(a.out, man);
  return kExitOk;
}

// ---- generate -----------------------------------------------------------------

struct GenerateArgs {
  std::string generator;
  std::string out;
  double p = 0.5;
  std::string instance;
  std::string mechanism = "boston";
  std::string prior = "gaussian";
  double v_gold = 100.0, v_silver = 70.0, v_bronze = 25.0;
  double sd_gold = 6.0, sd_silver = 3.0, sd_bronze = 2.0;
  std::size_t max_rejections = 10000;
};

hawk_dove::Valuation parse_valuation(const std::string& s) {
  if (s == "PD" || s == "pd") return hawk_dove::kPrisonersDilemma;
  if (s == "AC" || s == "ac") return hawk_dove::kAntiCoordination;
  throw InputError("unknown Hawk-Dove type '" + s + "' (PD or AC)");
}

int do_generate(const GenerateArgs& a, std::ostream& out) {
  json j;
  if (a.generator == "hawk_dove") {
    if (!a.instance.empty()) {
      const auto comma = a.instance.find(',');
      if (comma == std::string::npos) throw InputError("--instance expects TYPE,TYPE");
      j = game_to_json(hawk_dove::game(parse_valuation(a.instance.substr(0, comma)),
                                       parse_valuation(a.instance.substr(comma + 1))));
    } else {
      j = {{"generator", "hawk_dove"}, {"prior", {{"type", "pd_ac"}, {"p", a.p}}}};
    }
  } else if (a.generator == "matching") {
    json prior;
    if (a.prior == "gaussian")
      prior = {{"type", "gaussian"},
               {"mean", {a.v_gold, a.v_silver, a.v_bronze}},
               {"stddev", {a.sd_gold, a.sd_silver, a.sd_bronze}},
               {"max_rejections", a.max_rejections}};
    else if (a.prior == "point")
      prior = {{"type", "point"}, {"values", {a.v_gold, a.v_silver, a.v_bronze}}};
    else
      throw InputError("--prior expects gaussian or point");
    j = {{"generator", "matching"}, {"mechanism", a.mechanism}, {"prior", prior}};
  } else {
    throw InputError("unknown generator '" + a.generator + "'");
  }
  parse_game_spec(j);  // validates
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty())
    out << text;
  else
    write_text_file(a.out, text);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"alpha-rank distributions and collections", "arc"};
  app.set_version_flag("--version", ARC_VERSION);
  app.require_subcommand(1);
  const std::size_t threads = default_threads();

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Limiting distribution of one game");
  rank_cmd->add_option("--spec", rank.spec, "Game spec (JSON)")->required();
  rank_cmd->add_option("--out", rank.out, "Output CSV")->required();
  rank_cmd->add_option("--m", rank.m, "Population size")->check(CLI::Range(2, 1000000));
  rank.sweep.add(rank_cmd);

  CollectionArgs coll;
  coll.threads = threads;
  auto* coll_cmd = app.add_subcommand("collection", "Expected distribution over a type prior");
  coll_cmd->add_option("--spec", coll.spec, "Bayesian game spec (JSON)")->required();
  coll_cmd->add_option("--out", coll.out, "Output CSV")->required();
  coll_cmd->add_option("--mode", coll.mode, "auto, exact or mc")
      ->check(CLI::IsMember({"auto", "exact", "mc"}));
  coll_cmd->add_option("--samples", coll.samples, "Monte-Carlo samples")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  coll_cmd->add_option("--seed", coll.seed, "Master seed");
  coll_cmd->add_option("--m", coll.m, "Population size")->check(CLI::Range(2, 1000000));
  coll_cmd->add_option("--threads", coll.threads, "Worker threads")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  coll_cmd->add_option("--max-skip-fraction", coll.max_skip_fraction)->check(CLI::Range(0.0, 1.0));
  coll.sweep.add(coll_cmd);

  SweepArgs sweep;
  sweep.threads = threads;
  auto* sweep_cmd = app.add_subcommand("sweep", "NE_DA / NE_Bo mass along a v_S grid");
  sweep_cmd->add_option("--mechanism", sweep.mechanism, "da or boston");
  sweep_cmd->add_option("--v-gold", sweep.v_gold);
  sweep_cmd->add_option("--v-bronze", sweep.v_bronze);
  sweep_cmd->add_option("--vs-from", sweep.vs_from);
  sweep_cmd->add_option("--vs-to", sweep.vs_to);
  sweep_cmd->add_option("--vs-step", sweep.vs_step);
  sweep_cmd->add_option("--m", sweep.m, "Population size")->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--threads", sweep.threads)
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  sweep_cmd->add_option("--out", sweep.out, "Output CSV")->required();
  sweep.sweep.add(sweep_cmd);

  GraphArgs graph;
  auto* graph_cmd = app.add_subcommand("graph", "DOT export of the weighted response graph");
  graph_cmd->add_option("--spec", graph.spec, "Game spec (JSON)")->required();
  graph_cmd->add_option("--dist", graph.dist, "Rank or collection CSV")->required();
  graph_cmd->add_option("--out", graph.out, "Output DOT file")->required();
  graph_cmd->add_flag("--full", graph.full, "Keep strictly worsening edges");
  graph_cmd->add_option("--samples", graph.samples, "Type samples for continuous priors")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  graph_cmd->add_option("--seed", graph.seed);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Build and solve time against action count");
  bench_cmd->add_option("--agents", bench.agents)->check(CLI::Range(1, 16));
  bench_cmd->add_option("--min-actions", bench.min_actions);
  bench_cmd->add_option("--max-actions", bench.max_actions);
  bench_cmd->add_option("--alpha", bench.alpha)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--m", bench.m)->check(CLI::Range(2, 1000000));
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out", bench.out, "Output CSV")->required();

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Emit a JSON game spec from a generator");
  gen_cmd->add_option("generator", gen.generator, "hawk_dove or matching")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");
  gen_cmd->add_option("--p", gen.p, "Probability of the PD type")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--instance", gen.instance, "Fixed Hawk-Dove types, e.g. PD,AC");
  gen_cmd->add_option("--mechanism", gen.mechanism, "da or boston");
  gen_cmd->add_option("--prior", gen.prior, "gaussian or point");
  gen_cmd->add_option("--v-gold", gen.v_gold);
  gen_cmd->add_option("--v-silver", gen.v_silver);
  gen_cmd->add_option("--v-bronze", gen.v_bronze);
  gen_cmd->add_option("--sd-gold", gen.sd_gold);
  gen_cmd->add_option("--sd-silver", gen.sd_silver);
  gen_cmd->add_option("--sd-bronze", gen.sd_bronze);
  gen_cmd->add_option("--max-rejections", gen.max_rejections);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*rank_cmd) return do_rank(rank, out);
    if (*coll_cmd) return do_collection(coll, out);
    if (*sweep_cmd) return do_sweep(sweep, out);
    if (*graph_cmd) return do_graph(graph, out);
    if (*bench_cmd) return do_bench(bench, out);
    if (*gen_cmd) return do_generate(gen, out);
  } catch (const ExcessiveSkips& e) {
    err << "error: " << e.what() << '\n';
    return kExitSkips;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SamplingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSweep;
  }
  return kExitInput;
}

}  // namespace arc::cli
