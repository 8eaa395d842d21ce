#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "arc/game_model.hpp"

namespace arc {

struct DeviationEdge {
  std::size_t target = 0;
  std::size_t player = 0;  // the deviating player
  double delta = 0.0;      // u_player(target) - u_player(source)
};

/// Single-deviation adjacency over joint profiles, stored row-compressed.
class DeviationGraph {
 public:
  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const DeviationEdge> out_edges(std::size_t node) const {
    return std::span<const DeviationEdge>(edges_).subspan(offsets_[node],
                                                           offsets_[node + 1] - offsets_[node]);
  }

 protected:
  std::vector<std::size_t> offsets_;
  std::vector<DeviationEdge> edges_;
};

/// Every single-player deviation, regardless of its effect on utility.
class GameGraph : public DeviationGraph {
 public:
  explicit GameGraph(const NormalFormGame& game);
};

/// Deviations that do not decrease the deviator's utility (delta >= -tie_tol).
class ResponseGraph : public DeviationGraph {
 public:
  ResponseGraph(const GameGraph& graph, double tie_tol);
  double tie_tol() const { return tie_tol_; }

 private:
  double tie_tol_;
};

GameGraph build_game_graph(const NormalFormGame& game);
ResponseGraph build_response_graph(const GameGraph& graph, double tie_tol = 0.0);

/// Plain digraph in row-compressed form, used for SCC queries.
struct Digraph {
  std::vector<std::size_t> offsets;  // size num_nodes + 1
  std::vector<std::size_t> targets;

  std::size_t num_nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

Digraph to_digraph(const DeviationGraph& graph);

/// Component label per node; labels are dense in [0, count).
struct ComponentLabels {
  std::vector<std::size_t> label;
  std::size_t count = 0;
};

ComponentLabels strongly_connected_components(const Digraph& graph);

/// SCCs with no edge leaving them, each sorted ascending, ordered by their
/// smallest member.
std::vector<std::vector<std::size_t>> closed_classes(const Digraph& graph);

/// Sink SCCs of the response graph (candidate Markov-Conley chains).
std::vector<std::vector<std::size_t>> sink_components(const ResponseGraph& rg);

}  // namespace arc
