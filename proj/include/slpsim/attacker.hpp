#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "slpsim/net_model.hpp"
#include "slpsim/protocols.hpp"
#include "slpsim/rng.hpp"

namespace slpsim {

enum class AttackerMode { Passive, HybridObserving, HybridActive };
enum class Direction { Left, Right };

std::string_view to_string(AttackerMode m);
std::string_view to_string(Direction d);

/// Local eavesdropper that starts at the BS and backtracks one hop per
/// packet it overhears. A hybrid attacker additionally compromises nodes
/// once it has estimated the direction traffic arrives from.
struct AttackerState {
  NodeId position = 0;
  AttackerMode mode = AttackerMode::Passive;
  int hops_backtracked = 0;
  std::vector<NodeId> observed_upstream;
  std::optional<Direction> estimated_direction;
  NodeSet compromised;
  bool captured = false;
  /// Placement had to borrow nodes from the minority half-plane.
  bool placement_topped_up = false;

  static AttackerState passive(const NetworkGraph& graph);
  static AttackerState hybrid(const NetworkGraph& graph);
};

struct CnParams {
  int count = 0;
  double majority_fraction = 0.8;
  int h_est = 3;  // backtracked hops before estimating direction
};

/// Moves to the relay that handed the packet to the attacker's node, if the
/// packet passed through it. The first arrival in the path is the one heard.
AttackerState observe_and_move(AttackerState state, const RouteTrace& trace);

/// R when the mean x of the observed upstream nodes is at or right of the
/// BS, otherwise L. Throws std::logic_error when fewer than `h_est` hops
/// have been backtracked.
Direction estimate_direction(const AttackerState& state, const NetworkGraph& graph, int h_est);

struct Placement {
  NodeSet nodes;
  bool topped_up = false;
};

/// Samples ceil(count * majority_fraction) nodes from the half-plane of
/// `direction` and the rest from the opposite half. Nodes on the BS's
/// vertical axis, the BS itself and `protected_nodes` are never chosen.
Placement place_compromised_nodes(const NetworkGraph& graph, Direction direction, int count,
                                  double majority_fraction, const NodeSet& protected_nodes,
                                  Rng& rng);

/// Hybrid attacker step. Observes like the passive attacker; after h_est
/// backtracked hops it estimates direction, compromises nodes (never the
/// trace's source or the BS) and switches to the active mode.
AttackerState step_hybrid(AttackerState state, const RouteTrace& trace, const NetworkGraph& graph,
                          const CnParams& params, Rng& rng);

}  // namespace slpsim
