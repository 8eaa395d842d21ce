#pragma once

// File formats: JSON game specs, result CSVs, DOT graphs and run manifests.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arc/collections.hpp"
#include "arc/errors.hpp"
#include "arc/game_model.hpp"
#include "arc/mechanisms.hpp"

namespace arc {

/// Malformed or inconsistent user input (exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// 17 significant digits.
std::string format_real(double x);

/// A parsed game spec: either a plain normal-form game or a generator for a
/// Bayesian game. The original JSON is kept for archival in manifests.
struct GameSpec {
  nlohmann::json source;
  std::optional<NormalFormGame> normal_form;
  std::optional<BayesianGame> bayesian;
  std::string generator;  // "", "hawk_dove" or "matching"
  std::optional<matching::Mechanism> mechanism;

  bool is_bayesian() const { return bayesian.has_value(); }
  std::span<const std::size_t> strategy_counts() const;
  /// Player groups used for marginal tables.
  std::vector<std::vector<std::size_t>> groups() const;
};

nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
GameSpec parse_game_spec(const nlohmann::json& j);
GameSpec load_game_spec(const std::string& path);

nlohmann::json game_to_json(const NormalFormGame& game);

void write_rank_csv(std::ostream& os, std::span<const double> probabilities,
                    std::span<const std::size_t> strategy_counts);
void write_collection_csv(std::ostream& os, const Collection& c,
                          std::span<const std::size_t> strategy_counts);

struct ProfileTable {
  std::vector<std::vector<std::size_t>> coords;
  std::vector<double> mass;
  std::vector<double> standard_errors;  // empty for rank CSVs
};

/// Reads either CSV flavour back; validates the header and the
/// index/coordinate consistency when strategy_counts is given.
ProfileTable read_profile_csv(std::istream& is,
                              std::span<const std::size_t> strategy_counts = {});

/// Long format: group,strategy,mass.
void write_marginals_csv(std::ostream& os, const MarginalTable& table,
                         const std::vector<std::string>& group_names,
                         const std::vector<std::vector<std::string>>& strategy_names);

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::pair<std::string, double>> phase_seconds;
  std::size_t skipped = 0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

struct DotOptions {
  bool full_game_graph = false;  // keep strictly worsening edges too
};

/// Weighted game graph; edge deltas are the deviator's utility change
/// (prior-weighted when several games and weights are given).
void write_dot(std::ostream& os, std::span<const NormalFormGame> games,
               std::span<const double> game_weights, std::span<const double> node_mass,
               const DotOptions& opts = {});

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace arc
