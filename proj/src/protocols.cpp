#include "slpsim/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace slpsim {

std::string_view to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::PRS: return "prs";
    case ProtocolKind::SLPR: return "slpr";
    case ProtocolKind::PSSLP: return "psslp";
    case ProtocolKind::SPR: return "spr";
  }
  return "?";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::RW: return "RW";
    case Phase::BRW: return "BRW";
    case Phase::IDR: return "IDR";
    case Phase::SPR: return "SPR";
  }
  return "?";
}

std::string_view to_string(TieBreak t) {
  return t == TieBreak::LowestId ? "lowest-id" : "random";
}

ProtocolKind parse_protocol(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "prs" || lower == "pbr") return ProtocolKind::PRS;
  if (lower == "slpr" || lower == "slp-r") return ProtocolKind::SLPR;
  if (lower == "psslp") return ProtocolKind::PSSLP;
  if (lower == "spr" || lower == "spr-baseline") return ProtocolKind::SPR;
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

void RoutingPolicy::validate() const {
  if (ttl_init < 0) throw std::invalid_argument("ttl must be >= 0");
  if (!(idr_angle_max > 0.0 && idr_angle_max <= 360.0))
    throw std::invalid_argument("idr_angle_max must be in (0, 360]");
}

NodeSet::NodeSet(std::initializer_list<NodeId> ids) {
  for (NodeId n : ids) insert(n);
}

bool NodeSet::contains(NodeId n) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), n);
}

bool NodeSet::insert(NodeId n) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), n);
  if (it != ids_.end() && *it == n) return false;
  ids_.insert(it, n);
  return true;
}

int idr_hop_budget(double angle_deg, int ring_nodes) {
  return static_cast<int>(std::lround(angle_deg / 360.0 * static_cast<double>(ring_nodes)));
}

std::size_t max_route_hops(const NetworkGraph& graph, const RoutingPolicy& policy) {
  const auto dmax = static_cast<std::size_t>(graph.max_hop_distance());
  return static_cast<std::size_t>(policy.ttl_init) + static_cast<std::size_t>(graph.max_ring_size()) +
         2 * dmax + 2;
}

namespace {

template <class Container>
NodeId pick_uniform(const Container& c, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, c.size() - 1);
  return c[dist(rng)];
}

class TraceBuilder {
 public:
  TraceBuilder(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy)
      : graph_(graph), cap_(max_route_hops(graph, policy)) {
    if (source >= graph.size()) throw std::invalid_argument("source id out of range");
    if (source == graph.bs()) throw RoutingError("source must not be the base station");
    trace_.source = source;
    trace_.phantom = source;
    trace_.hops.push_back(source);
  }

  NodeId current() const { return trace_.hops.back(); }
  bool at_bs() const { return current() == graph_.bs(); }

  void step(NodeId next, Phase phase, int ttl) {
    trace_.hops.push_back(next);
    trace_.phase_labels.push_back(phase);
    trace_.ttl_series.push_back(ttl);
    if (trace_.phase_labels.size() > cap_) throw RoutingError("route exceeded hop cap");
  }

  void truncate_here() {
    if (!trace_.ttl_series.empty()) trace_.ttl_series.back() = 0;
    trace_.truncated_by = current();
    trace_.phantom = current();
  }

  void finish_spr(TieBreak tie_break, Rng& rng) {
    while (!at_bs()) step(spr_next_hop(graph_, current(), tie_break, rng), Phase::SPR, 0);
  }

  RouteTrace& trace() { return trace_; }

 private:
  const NetworkGraph& graph_;
  std::size_t cap_;
  RouteTrace trace_;
};

enum class WalkEnd { Natural, Truncated, Delivered };

enum class Candidates {
  AnyNeighbor,      // pure random walk
  Backward,         // strictly farther preferred, equal depth as fallback
  StrictlyOutward,  // strictly farther only
};

void collect(const NetworkGraph& g, NodeId cur, Candidates rule, std::vector<NodeId>& out) {
  out.clear();
  const auto nbrs = g.neighbors(cur);
  if (rule == Candidates::AnyNeighbor) {
    out.assign(nbrs.begin(), nbrs.end());
    return;
  }
  const int d = g.hop_distance(cur);
  for (NodeId n : nbrs)
    if (g.hop_distance(n) > d) out.push_back(n);
  if (out.empty() && rule == Candidates::Backward)
    for (NodeId n : nbrs)
      if (g.hop_distance(n) == d) out.push_back(n);
}

struct WalkOptions {
  Candidates rule;
  Phase label;
  int budget;
  /// Another random phase follows this one, so a compromised node cuts the
  /// route short even where this walk would have ended anyway.
  bool later_phase = false;
  /// Running out of candidates is the designed end, not a dead end.
  bool ends_at_edge = false;
};

WalkEnd random_walk(const NetworkGraph& g, TraceBuilder& b, const WalkOptions& opt,
                    const NodeSet& compromised, Rng& rng) {
  std::vector<NodeId> candidates;
  int ttl = opt.budget;
  for (;;) {
    const NodeId cur = b.current();
    if (cur == g.bs()) {
      b.trace().phantom = cur;
      return WalkEnd::Delivered;
    }
    const bool wants_more = ttl > 0;
    if (wants_more) collect(g, cur, opt.rule, candidates);
    const bool can_continue = wants_more && !candidates.empty();
    const bool is_relay = b.trace().hops.size() > 1;
    if (is_relay && (can_continue || opt.later_phase) && compromised.contains(cur)) {
      b.truncate_here();
      return WalkEnd::Truncated;
    }
    if (!can_continue) {
      if (wants_more && !opt.ends_at_edge) b.trace().dead_end = true;
      b.trace().phantom = cur;
      return WalkEnd::Natural;
    }
    --ttl;
    b.step(pick_uniform(candidates, rng), opt.label, ttl);
  }
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  while (a <= -pi) a += 2 * pi;
  while (a > pi) a -= 2 * pi;
  return a;
}

void ring_candidates(const NetworkGraph& g, NodeId cur, bool counter_clockwise,
                     std::vector<NodeId>& out) {
  constexpr double eps = 1e-12;
  out.clear();
  const int d = g.hop_distance(cur);
  const double here = g.bearing(cur);
  auto advances = [&](NodeId n) {
    const double delta = wrap_angle(g.bearing(n) - here);
    return counter_clockwise ? delta > eps : delta < -eps;
  };
  for (NodeId n : g.neighbors(cur))
    if (n != g.bs() && g.hop_distance(n) == d && advances(n)) out.push_back(n);
  if (!out.empty()) return;
  for (NodeId n : g.neighbors(cur))
    if (n != g.bs() && std::abs(g.hop_distance(n) - d) == 1 && advances(n)) out.push_back(n);
}

}  // namespace

NodeId spr_next_hop(const NetworkGraph& graph, NodeId node, TieBreak tie_break, Rng& rng) {
  if (node == graph.bs()) throw RoutingError("spr_next_hop called at the base station");
  const int d = graph.hop_distance(node);
  int best = d;
  for (NodeId n : graph.neighbors(node)) best = std::min(best, graph.hop_distance(n));
  if (best >= d) throw RoutingError("SPR stuck: no neighbour closer to the base station");

  // Neighbour lists are sorted, so the first match is the lowest id.
  std::vector<NodeId> ties;
  for (NodeId n : graph.neighbors(node)) {
    if (graph.hop_distance(n) != best) continue;
    if (tie_break == TieBreak::LowestId) return n;
    ties.push_back(n);
  }
  return ties.size() == 1 ? ties.front() : pick_uniform(ties, rng);
}

RouteTrace route_spr(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy, Rng& rng) {
  TraceBuilder b(graph, source, policy);
  b.finish_spr(policy.tie_break, rng);
  return std::move(b.trace());
}

RouteTrace route_prs(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                     const NodeSet& compromised, Rng& rng) {
  TraceBuilder b(graph, source, policy);
  random_walk(graph, b, {Candidates::AnyNeighbor, Phase::RW, policy.ttl_init}, compromised, rng);
  b.finish_spr(policy.tie_break, rng);
  return std::move(b.trace());
}

RouteTrace route_slpr(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                      const NodeSet& compromised, Rng& rng) {
  TraceBuilder b(graph, source, policy);
  WalkOptions brw{Candidates::Backward, Phase::BRW, policy.ttl_init};
  brw.later_phase = true;
  const WalkEnd end = random_walk(graph, b, brw, compromised, rng);

  if (end == WalkEnd::Natural) {
    const NodeId pn = b.current();
    std::uniform_real_distribution<double> angle(0.0, policy.idr_angle_max);
    const int budget = idr_hop_budget(angle(rng), graph.ring_size(graph.hop_distance(pn)));
    const bool ccw = std::bernoulli_distribution(0.5)(rng);

    std::vector<NodeId> candidates;
    for (int remaining = budget; remaining > 0;) {
      ring_candidates(graph, b.current(), ccw, candidates);
      if (candidates.empty()) {
        b.trace().dead_end = true;
        break;
      }
      --remaining;
      b.step(pick_uniform(candidates, rng), Phase::IDR, 0);
      if (remaining > 0 && compromised.contains(b.current())) {
        b.truncate_here();
        break;
      }
    }
  }
  b.finish_spr(policy.tie_break, rng);
  return std::move(b.trace());
}

int psslp_segment(const NetworkGraph& graph, int hop_distance) {
  const int dmax = graph.max_hop_distance();
  if (3 * hop_distance <= dmax) return 1;
  if (3 * hop_distance <= 2 * dmax) return 2;
  return 3;
}

RouteTrace route_psslp(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                       const NodeSet& compromised, Rng& rng) {
  TraceBuilder b(graph, source, policy);
  const int d = graph.hop_distance(source);
  switch (psslp_segment(graph, d)) {
    case 1: {
      WalkOptions edge{Candidates::StrictlyOutward, Phase::BRW, graph.max_hop_distance() - d};
      edge.ends_at_edge = true;
      random_walk(graph, b, edge, compromised, rng);
      break;
    }
    case 2:
      random_walk(graph, b, {Candidates::Backward, Phase::BRW, policy.ttl_init}, compromised, rng);
      break;
    default:
      break;
  }
  b.finish_spr(policy.tie_break, rng);
  return std::move(b.trace());
}

RouteTrace route_packet(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                        const NodeSet& compromised, Rng& rng) {
  switch (policy.kind) {
    case ProtocolKind::PRS: return route_prs(graph, source, policy, compromised, rng);
    case ProtocolKind::SLPR: return route_slpr(graph, source, policy, compromised, rng);
    case ProtocolKind::PSSLP: return route_psslp(graph, source, policy, compromised, rng);
    case ProtocolKind::SPR: return route_spr(graph, source, policy, rng);
  }
  throw std::invalid_argument("unknown protocol kind");
}

}  // namespace slpsim
