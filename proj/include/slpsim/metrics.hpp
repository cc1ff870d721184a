#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "slpsim/scenario.hpp"

namespace slpsim {

struct ScenarioMetrics {
  double mean_safety_period = 0.0;  // packets
  double capture_ratio = 0.0;       // percent
  double entropy = 0.0;             // bits
  int trial_count = 0;
  int truncation_count = 0;
  ProtocolKind protocol = ProtocolKind::PRS;
  double sn_distance_m = 0.0;
  int cn_count = 0;
};

/// Packets delivered before capture; the packet budget when never captured.
int safety_period(const TrialResult& trial);

/// Percentage of trials ending in capture. Throws on an empty list.
double capture_ratio(std::span<const TrialResult> trials);

/// Shannon entropy in bits of a count histogram; 0 for an empty one.
double shannon_entropy_bits(const std::map<NodeId, long>& counts);

/// Relay-usage entropy of one trial: every hop of every trace except the
/// source and the BS counts once for the node it lands on.
double trial_entropy(const TrialResult& trial);

/// Mean of trial_entropy over trials. Throws on an empty list.
double path_entropy(std::span<const TrialResult> trials);

ScenarioMetrics summarize(const ScenarioConfig& config, std::span<const TrialResult> trials);

enum class Metric { CaptureRatio, SafetyPeriod, Entropy };
std::string_view to_string(Metric m);

/// Percent change hybrid vs passive per metric; nullopt where the passive
/// value is zero.
struct Degradation {
  std::optional<double> capture_ratio;
  std::optional<double> safety_period;
  std::optional<double> entropy;

  std::optional<double> get(Metric m) const;
};

/// 100 * (hybrid - passive) / passive for every metric. Throws
/// std::invalid_argument unless both rows share protocol and SN distance and
/// the passive row has no compromised nodes.
Degradation percent_degradation(const ScenarioMetrics& passive, const ScenarioMetrics& hybrid);

/// One cell of the protocol x metric degradation table.
struct DegradationSummary {
  ProtocolKind protocol = ProtocolKind::PRS;
  Metric metric = Metric::CaptureRatio;
  std::optional<double> percent_change;  // mean over defined settings
  int settings = 0;                       // settings that contributed
};

/// Pairs every row with cn_count > 0 against the cn_count = 0 row of the
/// same protocol and SN distance and averages the percent changes per
/// protocol and metric. Protocols appear in first-seen order.
std::vector<DegradationSummary> average_degradation(std::span<const ScenarioMetrics> rows);

}  // namespace slpsim
