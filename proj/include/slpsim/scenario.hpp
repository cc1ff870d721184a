#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "slpsim/attacker.hpp"
#include "slpsim/net_model.hpp"
#include "slpsim/protocols.hpp"

namespace slpsim {

enum class AttackerKind { Passive, Hybrid };

std::string_view to_string(AttackerKind k);

struct ScenarioConfig {
  RoutingPolicy protocol;
  double sn_distance_m = 300.0;
  int cn_count = 0;
  AttackerKind attacker = AttackerKind::Passive;
  double majority_fraction = 0.8;
  int h_est = 3;
  int packets_per_trial = 500;
  int trials = 50;
  std::uint64_t seed = 1;
  /// Pins the source node instead of drawing it from the distance ring.
  std::optional<NodeId> fixed_source;

  void validate() const;  // throws std::invalid_argument
};

/// One attacker observation, logged per packet.
struct AttackerEvent {
  int packet = 0;  // 1-based
  NodeId position = 0;
  AttackerMode mode = AttackerMode::Passive;
  bool captured = false;

  friend bool operator==(const AttackerEvent&, const AttackerEvent&) = default;
};

struct TrialResult {
  NodeId source = 0;
  bool captured = false;
  int packets_sent = 0;
  int packet_budget = 0;
  int safety_period = 0;
  int truncation_count = 0;
  std::vector<RouteTrace> traces;
  std::vector<AttackerEvent> events;
};

}  // namespace slpsim
