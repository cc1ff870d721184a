#include "slpsim/attacker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slpsim {

std::string_view to_string(AttackerMode m) {
  switch (m) {
    case AttackerMode::Passive: return "passive";
    case AttackerMode::HybridObserving: return "hybrid-observing";
    case AttackerMode::HybridActive: return "hybrid-active";
  }
  return "?";
}

std::string_view to_string(Direction d) { return d == Direction::Left ? "L" : "R"; }

AttackerState AttackerState::passive(const NetworkGraph& graph) {
  AttackerState s;
  s.position = graph.bs();
  s.mode = AttackerMode::Passive;
  return s;
}

AttackerState AttackerState::hybrid(const NetworkGraph& graph) {
  AttackerState s = passive(graph);
  s.mode = AttackerMode::HybridObserving;
  return s;
}

AttackerState observe_and_move(AttackerState state, const RouteTrace& trace) {
  if (state.captured) return state;
  const auto& hops = trace.hops;
  for (std::size_t i = 1; i < hops.size(); ++i) {
    if (hops[i] != state.position) continue;
    const NodeId upstream = hops[i - 1];
    state.position = upstream;
    ++state.hops_backtracked;
    state.observed_upstream.push_back(upstream);
    if (upstream == trace.source) state.captured = true;
    break;
  }
  return state;
}

Direction estimate_direction(const AttackerState& state, const NetworkGraph& graph, int h_est) {
  if (state.hops_backtracked < h_est || state.observed_upstream.empty())
    throw std::logic_error("direction estimated before enough hops were backtracked");
  double sum = 0.0;
  for (NodeId n : state.observed_upstream) sum += graph.position(n).x;
  const double mean = sum / static_cast<double>(state.observed_upstream.size());
  return mean >= graph.position(graph.bs()).x ? Direction::Right : Direction::Left;
}

namespace {

// Draws `k` distinct entries from `pool` (partial Fisher-Yates), removing them.
void draw(std::vector<NodeId>& pool, std::size_t k, NodeSet& out, Rng& rng) {
  for (std::size_t i = 0; i < k && !pool.empty(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t j = pick(rng);
    out.insert(pool[j]);
    pool[j] = pool.back();
    pool.pop_back();
  }
}

}  // namespace

Placement place_compromised_nodes(const NetworkGraph& graph, Direction direction, int count,
                                  double majority_fraction, const NodeSet& protected_nodes,
                                  Rng& rng) {
  if (count < 0) throw std::invalid_argument("compromised node count must be >= 0");
  if (!(majority_fraction > 0.5 && majority_fraction <= 1.0))
    throw std::invalid_argument("majority_fraction must be in (0.5, 1]");
  Placement out;
  if (count == 0) return out;

  const double bs_x = graph.position(graph.bs()).x;
  std::vector<NodeId> right;
  std::vector<NodeId> left;
  for (NodeId n = 0; n < graph.size(); ++n) {
    if (n == graph.bs() || protected_nodes.contains(n)) continue;
    const double x = graph.position(n).x;
    if (x > bs_x) right.push_back(n);
    else if (x < bs_x) left.push_back(n);
  }
  if (right.size() + left.size() < static_cast<std::size_t>(count))
    throw std::invalid_argument("not enough eligible nodes to compromise");

  auto& major = direction == Direction::Right ? right : left;
  auto& minor = direction == Direction::Right ? left : right;
  const auto want_major =
      static_cast<std::size_t>(std::ceil(static_cast<double>(count) * majority_fraction - 1e-9));
  const auto want_minor = static_cast<std::size_t>(count) - want_major;

  draw(major, want_major, out.nodes, rng);
  draw(minor, want_minor, out.nodes, rng);
  const auto short_by = static_cast<std::size_t>(count) - out.nodes.size();
  if (short_by > 0) {
    out.topped_up = true;
    draw(major, short_by, out.nodes, rng);
    draw(minor, static_cast<std::size_t>(count) - out.nodes.size(), out.nodes, rng);
  }
  return out;
}

AttackerState step_hybrid(AttackerState state, const RouteTrace& trace, const NetworkGraph& graph,
                          const CnParams& params, Rng& rng) {
  if (state.mode == AttackerMode::Passive)
    throw std::logic_error("step_hybrid called on a passive attacker");
  state = observe_and_move(std::move(state), trace);
  if (state.mode == AttackerMode::HybridObserving && state.hops_backtracked >= params.h_est) {
    const Direction dir = estimate_direction(state, graph, params.h_est);
    auto placement = place_compromised_nodes(graph, dir, params.count, params.majority_fraction,
                                             NodeSet{trace.source}, rng);
    state.estimated_direction = dir;
    state.compromised = std::move(placement.nodes);
    state.placement_topped_up = placement.topped_up;
    state.mode = AttackerMode::HybridActive;
  }
  return state;
}

}  // namespace slpsim
