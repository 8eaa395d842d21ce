#include "arc/response_graph.hpp"

#include <algorithm>
#include <limits>

#include "arc/errors.hpp"

namespace arc {

GameGraph::GameGraph(const NormalFormGame& game) {
  const auto counts = game.strategy_counts();
  const auto strides = profile_strides(counts);
  const std::size_t n = game.num_profiles();
  std::size_t degree = 0;
  for (std::size_t c : counts) degree += c - 1;

  offsets_.resize(n + 1);
  edges_.reserve(n * degree);
  std::vector<std::size_t> coords(counts.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    offsets_[k] = edges_.size();
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto own = game.payoffs(i);
      const std::size_t base = k - coords[i] * strides[i];
      for (std::size_t s = 0; s < counts[i]; ++s) {
        if (s == coords[i]) continue;
        const std::size_t target = base + s * strides[i];
        edges_.push_back({target, i, own[target] - own[k]});
      }
    }
    // advance the mixed-radix counter (last player fastest)
    for (std::size_t i = counts.size(); i-- > 0;) {
      if (++coords[i] < counts[i]) break;
      coords[i] = 0;
    }
  }
  offsets_[n] = edges_.size();
}

ResponseGraph::ResponseGraph(const GameGraph& graph, double tie_tol) : tie_tol_(tie_tol) {
  if (!(tie_tol >= 0.0)) throw DomainError("tie_tol must be nonnegative");
  const std::size_t n = graph.num_nodes();
  offsets_.resize(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    offsets_[k] = edges_.size();
    for (const auto& e : graph.out_edges(k))
      if (e.delta >= -tie_tol) edges_.push_back(e);
  }
  offsets_[n] = edges_.size();
}

GameGraph build_game_graph(const NormalFormGame& game) { return GameGraph(game); }

ResponseGraph build_response_graph(const GameGraph& graph, double tie_tol) {
  return ResponseGraph(graph, tie_tol);
}

Digraph to_digraph(const DeviationGraph& graph) {
  Digraph g;
  g.offsets.resize(graph.num_nodes() + 1);
  g.targets.reserve(graph.num_edges());
  for (std::size_t k = 0; k < graph.num_nodes(); ++k) {
    g.offsets[k] = g.targets.size();
    for (const auto& e : graph.out_edges(k)) g.targets.push_back(e.target);
  }
  g.offsets[graph.num_nodes()] = g.targets.size();
  return g;
}

// Iterative Tarjan.
ComponentLabels strongly_connected_components(const Digraph& graph) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = graph.num_nodes();
  ComponentLabels out;
  out.label.assign(n, kUnvisited);

  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), next_edge(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack, call;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back(root);
    index[root] = low[root] = counter++;
    next_edge[root] = graph.offsets[root];
    stack.push_back(root);
    on_stack[root] = 1;

    while (!call.empty()) {
      const std::size_t v = call.back();
      if (next_edge[v] < graph.offsets[v + 1]) {
        const std::size_t w = graph.targets[next_edge[v]++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          next_edge[w] = graph.offsets[w];
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.label[w] = out.count;
        } while (w != v);
        ++out.count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> closed_classes(const Digraph& graph) {
  const auto scc = strongly_connected_components(graph);
  std::vector<char> leaks(scc.count, 0);
  for (std::size_t v = 0; v < graph.num_nodes(); ++v)
    for (std::size_t e = graph.offsets[v]; e < graph.offsets[v + 1]; ++e)
      if (scc.label[graph.targets[e]] != scc.label[v]) leaks[scc.label[v]] = 1;

  // Nodes are visited in ascending order, so classes come out sorted and
  // ordered by smallest member.
  std::vector<std::size_t> slot(scc.count, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    const std::size_t c = scc.label[v];
    if (leaks[c]) continue;
    if (slot[c] == std::numeric_limits<std::size_t>::max()) {
      slot[c] = classes.size();
      classes.emplace_back();
    }
    classes[slot[c]].push_back(v);
  }
  return classes;
}

std::vector<std::vector<std::size_t>> sink_components(const ResponseGraph& rg) {
  return closed_classes(to_digraph(rg));
}

}  // namespace arc
