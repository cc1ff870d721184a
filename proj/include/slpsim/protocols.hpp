#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slpsim/net_model.hpp"
#include "slpsim/rng.hpp"

namespace slpsim {

enum class ProtocolKind { PRS, SLPR, PSSLP, SPR };
enum class TieBreak { LowestId, Random };

/// Phase under which a hop's next relay was chosen. SPR doubles as MHR.
enum class Phase : std::uint8_t { RW, BRW, IDR, SPR };

std::string_view to_string(ProtocolKind k);
std::string_view to_string(Phase p);
std::string_view to_string(TieBreak t);
/// Accepts prs, slpr, slp-r, psslp, spr (case-insensitive).
ProtocolKind parse_protocol(std::string_view name);

/// Per-node next-hop rule. The transition matrix is implicit: at each node
/// the policy induces a distribution over that node's neighbours only.
struct RoutingPolicy {
  ProtocolKind kind = ProtocolKind::PRS;
  int ttl_init = 5;
  double idr_angle_max = 180.0;  // degrees
  TieBreak tie_break = TieBreak::Random;

  void validate() const;  // throws std::invalid_argument
};

/// Small ordered set of node ids.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids);

  bool contains(NodeId n) const noexcept;
  bool insert(NodeId n);
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<NodeId> ids_;  // sorted
};

/// Full relay path of one packet.
///
/// hops[0] is the source and hops.back() the BS. phase_labels[i] and
/// ttl_series[i] describe hop i, the move hops[i] -> hops[i + 1]; the TTL is
/// the value carried by the packet after that move.
struct RouteTrace {
  NodeId source = 0;
  std::vector<NodeId> hops;
  std::vector<Phase> phase_labels;
  std::vector<int> ttl_series;
  NodeId phantom = 0;
  std::optional<NodeId> truncated_by;
  /// Random phase ended early because no eligible neighbour existed.
  bool dead_end = false;

  std::size_t hop_count() const noexcept { return phase_labels.size(); }
};

class RoutingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Neighbour of `node` with minimum hop distance. Throws RoutingError when
/// `node` is the BS or has no strictly closer neighbour.
NodeId spr_next_hop(const NetworkGraph& graph, NodeId node, TieBreak tie_break, Rng& rng);

/// Pure shortest-path route; phantom = source.
RouteTrace route_spr(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy, Rng& rng);

/// Phantom routing: TTL hops of uniform random walk, then SPR. A compromised
/// node reached while the walk still has TTL left zeroes it and becomes PN.
RouteTrace route_prs(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                     const NodeSet& compromised, Rng& rng);

/// Backward random walk, identical-depth ring walk, then min-hop routing.
RouteTrace route_slpr(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                      const NodeSet& compromised, Rng& rng);

/// Segment of a hop distance for the section-based scheme: 1 = inner third
/// of the network radius, 2 = middle, 3 = outer.
int psslp_segment(const NetworkGraph& graph, int hop_distance);

/// Section-based scheme: inner sources walk outward to the network edge,
/// middle sources do a TTL-bounded backward walk, outer sources use MHR.
RouteTrace route_psslp(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                       const NodeSet& compromised, Rng& rng);

/// Dispatches on policy.kind.
RouteTrace route_packet(const NetworkGraph& graph, NodeId source, const RoutingPolicy& policy,
                        const NodeSet& compromised, Rng& rng);

/// IDR hop budget for a ring of `ring_nodes` nodes and a sweep angle.
int idr_hop_budget(double angle_deg, int ring_nodes);

/// Upper bound on trace length used to guard against runaway walks.
std::size_t max_route_hops(const NetworkGraph& graph, const RoutingPolicy& policy);

}  // namespace slpsim
