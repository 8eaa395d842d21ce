#include "arc/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "arc/response_graph.hpp"

namespace arc {

using nlohmann::json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::span<const std::size_t> GameSpec::strategy_counts() const {
  return bayesian ? bayesian->strategy_counts() : normal_form->strategy_counts();
}

std::vector<std::vector<std::size_t>> GameSpec::groups() const {
  if (generator == "matching") return matching::kGroups;
  std::vector<std::vector<std::size_t>> g;
  for (std::size_t p = 0; p < strategy_counts().size(); ++p) g.push_back({p});
  return g;
}

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object()) throw InputError(std::string(where) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(where) + ": missing \"" + key + "\"");
  return *it;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(what + ": not finite");
  return x;
}

std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw InputError(what + ": expected a positive integer");
  return j.get<std::size_t>();
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

NormalFormGame parse_normal_form(const json& j) {
  const std::size_t players = count(field(j, "players", "game"), "players");
  const json& sj = field(j, "strategies", "game");
  if (!sj.is_array() || sj.size() != players)
    throw InputError("strategies: expected one count per player");
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < players; ++i)
    counts.push_back(count(sj[i], "strategies[" + std::to_string(i) + "]"));
  const json& pj = field(j, "payoffs", "game");
  if (!pj.is_array() || pj.size() != players)
    throw InputError("payoffs: expected one row per player");
  const std::size_t n = num_profiles(counts);
  std::vector<std::vector<double>> payoffs;
  for (std::size_t i = 0; i < players; ++i) {
    auto row = numbers(pj[i], "payoffs[" + std::to_string(i) + "]");
    if (row.size() != n)
      throw InputError("payoffs[" + std::to_string(i) + "]: expected " + std::to_string(n) +
                       " entries");
    payoffs.push_back(std::move(row));
  }
  return NormalFormGame(std::move(counts), std::move(payoffs));
}

TypeVector matching_type(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array");
  if (j.size() == 3) {
    auto v = numbers(j, what);
    return matching::uniform_type(v[0], v[1], v[2]);
  }
  if (j.size() != matching::kStudents)
    throw InputError(what + ": expected (v_G, v_S, v_B) or one 4-vector per student");
  TypeVector t;
  for (std::size_t s = 0; s < j.size(); ++s) {
    auto v = numbers(j[s], what + "[" + std::to_string(s) + "]");
    if (v.size() != matching::kOutcomes)
      throw InputError(what + "[" + std::to_string(s) + "]: expected (v_G, v_S, v_B, v_U)");
    t.values.push_back(std::move(v));
  }
  return t;
}

GameSpec parse_matching(const json& j) {
  GameSpec spec;
  spec.generator = "matching";
  try {
    spec.mechanism = matching::parse_mechanism(field(j, "mechanism", "matching").get<std::string>());
  } catch (const DomainError& e) {
    throw InputError(std::string("mechanism: ") + e.what());
  } catch (const json::type_error&) {
    throw InputError("mechanism: expected a string");
  }
  const json& pj = field(j, "prior", "matching");
  const std::string type = field(pj, "type", "prior").is_string() ? pj["type"].get<std::string>() : "";
  Prior prior = Prior::point(matching::uniform_type(100, 70, 25));
  if (type == "gaussian") {
    auto mean = numbers(field(pj, "mean", "prior"), "prior.mean");
    auto sd = numbers(field(pj, "stddev", "prior"), "prior.stddev");
    if (mean.size() != 3 || sd.size() != 3)
      throw InputError("prior: mean and stddev need (G, S, B) entries");
    std::size_t max_rej = 10000;
    if (pj.contains("max_rejections")) max_rej = count(pj["max_rejections"], "prior.max_rejections");
    prior = matching::gaussian_prior(mean[0], sd[0], mean[1], sd[1], mean[2], sd[2], max_rej);
  } else if (type == "point") {
    prior = Prior::point(matching_type(field(pj, "values", "prior"), "prior.values"));
  } else if (type == "finite") {
    const json& sup = field(pj, "support", "prior");
    if (!sup.is_array() || sup.empty()) throw InputError("prior.support: expected a non-empty array");
    std::vector<TypeVector> types;
    std::vector<double> probs;
    for (std::size_t k = 0; k < sup.size(); ++k) {
      const std::string w = "prior.support[" + std::to_string(k) + "]";
      probs.push_back(number(field(sup[k], "probability", w.c_str()), w + ".probability"));
      types.push_back(matching_type(field(sup[k], "values", w.c_str()), w + ".values"));
    }
    prior = Prior::finite(std::move(types), std::move(probs));
  } else {
    throw InputError("prior.type: expected \"gaussian\", \"point\" or \"finite\"");
  }
  spec.bayesian = matching::bayesian_game(*spec.mechanism, std::move(prior));
  return spec;
}

GameSpec parse_hawk_dove(const json& j) {
  GameSpec spec;
  spec.generator = "hawk_dove";
  const json& pj = field(j, "prior", "hawk_dove");
  const double p = number(field(pj, "p", "prior"), "prior.p");
  if (pj.contains("type") && pj["type"] != "pd_ac")
    throw InputError("prior.type: hawk_dove supports only \"pd_ac\"");
  spec.bayesian = hawk_dove::bayesian_game(p);
  return spec;
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    auto [line, col] = line_column(text, byte);
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON");
  }
}

GameSpec parse_game_spec(const json& j) {
  GameSpec spec;
  try {
    if (j.is_object() && j.contains("generator")) {
      const json& g = j["generator"];
      if (g == "hawk_dove")
        spec = parse_hawk_dove(j);
      else if (g == "matching")
        spec = parse_matching(j);
      else
        throw InputError("generator: expected \"hawk_dove\" or \"matching\"");
    } else {
      spec.normal_form = parse_normal_form(j);
    }
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  spec.source = j;
  return spec;
}

GameSpec load_game_spec(const std::string& path) {
  return parse_game_spec(parse_json_text(read_text_file(path), path));
}

json game_to_json(const NormalFormGame& game) {
  json j;
  j["players"] = game.num_players();
  j["strategies"] = std::vector<std::size_t>(game.strategy_counts().begin(),
                                             game.strategy_counts().end());
  json rows = json::array();
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    auto u = game.payoffs(p);
    rows.push_back(std::vector<double>(u.begin(), u.end()));
  }
  j["payoffs"] = std::move(rows);
  return j;
}

namespace {

void write_header(std::ostream& os, std::size_t players, bool with_stderr) {
  os << "profile_index";
  for (std::size_t p = 0; p < players; ++p) os << ",coord_" << p;
  os << ",mass";
  if (with_stderr) os << ",stderr";
  os << '\n';
}

void write_rows(std::ostream& os, std::span<const double> mass, std::span<const double> se,
                std::span<const std::size_t> counts) {
  if (mass.size() != num_profiles(counts))
    throw DomainError("distribution does not match the game shape");
  std::vector<std::size_t> coords(counts.size(), 0);
  for (std::size_t k = 0; k < mass.size(); ++k) {
    os << k;
    for (std::size_t c : coords) os << ',' << c;
    os << ',' << format_real(mass[k]);
    if (!se.empty()) os << ',' << format_real(se[k]);
    os << '\n';
    for (std::size_t p = counts.size(); p-- > 0;) {
      if (++coords[p] < counts[p]) break;
      coords[p] = 0;
    }
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || (errno == ERANGE && std::isinf(x)))
    throw InputError("line " + std::to_string(line) + ": bad number \"" + s + "\"");
  return x;
}

std::size_t parse_index(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("line " + std::to_string(line) + ": bad index \"" + s + "\"");
  return std::stoull(s);
}

}  // namespace

void write_rank_csv(std::ostream& os, std::span<const double> probabilities,
                    std::span<const std::size_t> strategy_counts) {
  write_header(os, strategy_counts.size(), false);
  write_rows(os, probabilities, {}, strategy_counts);
}

void write_collection_csv(std::ostream& os, const Collection& c,
                          std::span<const std::size_t> strategy_counts) {
  write_header(os, strategy_counts.size(), true);
  write_rows(os, c.probabilities, c.standard_errors, strategy_counts);
}

ProfileTable read_profile_csv(std::istream& is, std::span<const std::size_t> strategy_counts) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("empty CSV");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.front() != "profile_index")
    throw InputError("line 1: expected a profile_index header");
  const bool with_se = header.back() == "stderr";
  const std::size_t players = header.size() - (with_se ? 3 : 2);
  for (std::size_t p = 0; p < players; ++p)
    if (header[1 + p] != "coord_" + std::to_string(p))
      throw InputError("line 1: expected coord_" + std::to_string(p));
  if (header[1 + players] != "mass") throw InputError("line 1: expected a mass column");
  if (!strategy_counts.empty() && strategy_counts.size() != players)
    throw InputError("CSV has " + std::to_string(players) + " players, the game has " +
                     std::to_string(strategy_counts.size()));

  ProfileTable t;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw InputError("line " + std::to_string(lineno) + ": wrong number of columns");
    if (parse_index(cells[0], lineno) != t.mass.size())
      throw InputError("line " + std::to_string(lineno) + ": profiles out of order");
    std::vector<std::size_t> coords;
    for (std::size_t p = 0; p < players; ++p) coords.push_back(parse_index(cells[1 + p], lineno));
    if (!strategy_counts.empty()) {
      try {
        if (profile_index(coords, strategy_counts) != t.mass.size()) throw DomainError("");
      } catch (const DomainError&) {
        throw InputError("line " + std::to_string(lineno) + ": coordinates do not match the index");
      }
    }
    t.coords.push_back(std::move(coords));
    t.mass.push_back(parse_real(cells[1 + players], lineno));
    if (with_se) t.standard_errors.push_back(parse_real(cells[2 + players], lineno));
  }
  if (!strategy_counts.empty() && t.mass.size() != num_profiles(strategy_counts))
    throw InputError("CSV has " + std::to_string(t.mass.size()) + " profiles, the game has " +
                     std::to_string(num_profiles(strategy_counts)));
  return t;
}

void write_marginals_csv(std::ostream& os, const MarginalTable& table,
                         const std::vector<std::string>& group_names,
                         const std::vector<std::vector<std::string>>& strategy_names) {
  os << "group,strategy,mass\n";
  for (std::size_t g = 0; g < table.size(); ++g)
    for (std::size_t s = 0; s < table[g].size(); ++s)
      os << group_names.at(g) << ',' << strategy_names.at(g).at(s) << ',' << format_real(table[g][s])
         << '\n';
}

json RunManifest::to_json() const {
  json j;
  j["tool"] = "arc";
  j["version"] = ARC_VERSION;
  j["command"] = command;
  j["parameters"] = parameters;
  json phases = json::object();
  for (const auto& [name, sec] : phase_seconds) phases[name] = sec;
  j["wall_clock_seconds"] = std::move(phases);
  j["skipped"] = skipped;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

void write_dot(std::ostream& os, std::span<const NormalFormGame> games,
               std::span<const double> game_weights, std::span<const double> node_mass,
               const DotOptions& opts) {
  if (games.empty() || games.size() != game_weights.size())
    throw DomainError("need one weight per game");
  const auto counts = games.front().strategy_counts();
  for (const auto& g : games)
    if (!std::equal(counts.begin(), counts.end(), g.strategy_counts().begin(),
                    g.strategy_counts().end()))
      throw DomainError("games differ in shape");
  const std::size_t n = games.front().num_profiles();
  if (node_mass.size() != n) throw DomainError("distribution does not match the game shape");

  std::vector<GameGraph> graphs;
  for (const auto& g : games) graphs.emplace_back(g);

  os << "digraph arc {\n";
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = profile_coords(k, counts);
    os << "  n" << k << " [label=\"(";
    for (std::size_t p = 0; p < c.size(); ++p) os << (p ? "," : "") << c[p];
    os << ")\", weight=\"" << format_real(node_mass[k]) << "\"];\n";
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto first = graphs.front().out_edges(k);
    for (std::size_t e = 0; e < first.size(); ++e) {
      double delta = 0.0;
      for (std::size_t g = 0; g < graphs.size(); ++g)
        delta += game_weights[g] * graphs[g].out_edges(k)[e].delta;
      if (delta < 0.0 && !opts.full_game_graph) continue;
      os << "  n" << k << " -> n" << first[e].target << " [player=" << first[e].player
         << ", delta=\"" << format_real(delta) << "\"];\n";
    }
  }
  os << "}\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path + " for writing");
  f << contents;
  if (!f) throw InputError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace arc
