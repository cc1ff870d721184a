#include "slpsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slpsim {

int safety_period(const TrialResult& trial) {
  return trial.captured ? trial.packets_sent : trial.packet_budget;
}

double capture_ratio(std::span<const TrialResult> trials) {
  if (trials.empty()) throw std::invalid_argument("capture_ratio of an empty trial list");
  std::size_t captured = 0;
  for (const auto& t : trials) captured += t.captured ? 1 : 0;
  return 100.0 * static_cast<double>(captured) / static_cast<double>(trials.size());
}

double shannon_entropy_bits(const std::map<NodeId, long>& counts) {
  long total = 0;
  for (const auto& [node, c] : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto& [node, c] : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double trial_entropy(const TrialResult& trial) {
  std::map<NodeId, long> usage;
  for (const auto& trace : trial.traces) {
    for (std::size_t i = 1; i < trace.hops.size(); ++i) {
      const NodeId n = trace.hops[i];
      if (n == trace.source || i + 1 == trace.hops.size()) continue;
      ++usage[n];
    }
  }
  return shannon_entropy_bits(usage);
}

double path_entropy(std::span<const TrialResult> trials) {
  if (trials.empty()) throw std::invalid_argument("path_entropy of an empty trial list");
  double sum = 0.0;
  for (const auto& t : trials) sum += trial_entropy(t);
  return sum / static_cast<double>(trials.size());
}

ScenarioMetrics summarize(const ScenarioConfig& config, std::span<const TrialResult> trials) {
  ScenarioMetrics m;
  m.protocol = config.protocol.kind;
  m.sn_distance_m = config.sn_distance_m;
  m.cn_count = config.cn_count;
  m.trial_count = static_cast<int>(trials.size());
  m.capture_ratio = capture_ratio(trials);
  m.entropy = path_entropy(trials);
  double sp = 0.0;
  for (const auto& t : trials) {
    sp += safety_period(t);
    m.truncation_count += t.truncation_count;
  }
  m.mean_safety_period = sp / static_cast<double>(trials.size());
  return m;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::CaptureRatio: return "capture_ratio";
    case Metric::SafetyPeriod: return "safety_period";
    case Metric::Entropy: return "entropy";
  }
  return "?";
}

std::optional<double> Degradation::get(Metric m) const {
  switch (m) {
    case Metric::CaptureRatio: return capture_ratio;
    case Metric::SafetyPeriod: return safety_period;
    case Metric::Entropy: return entropy;
  }
  return std::nullopt;
}

namespace {

std::optional<double> change(double passive, double hybrid) {
  if (passive == 0.0) return std::nullopt;
  return 100.0 * (hybrid - passive) / passive;
}

}  // namespace

Degradation percent_degradation(const ScenarioMetrics& passive, const ScenarioMetrics& hybrid) {
  if (passive.protocol != hybrid.protocol)
    throw std::invalid_argument("degradation rows use different protocols");
  if (passive.sn_distance_m != hybrid.sn_distance_m)
    throw std::invalid_argument("degradation rows use different SN distances");
  if (passive.cn_count != 0)
    throw std::invalid_argument("passive row must have no compromised nodes");
  return {change(passive.capture_ratio, hybrid.capture_ratio),
          change(passive.mean_safety_period, hybrid.mean_safety_period),
          change(passive.entropy, hybrid.entropy)};
}

std::vector<DegradationSummary> average_degradation(std::span<const ScenarioMetrics> rows) {
  constexpr Metric kMetrics[] = {Metric::CaptureRatio, Metric::SafetyPeriod, Metric::Entropy};
  std::vector<ProtocolKind> order;
  for (const auto& r : rows)
    if (std::find(order.begin(), order.end(), r.protocol) == order.end()) order.push_back(r.protocol);

  std::vector<DegradationSummary> out;
  for (ProtocolKind protocol : order) {
    std::vector<Degradation> changes;
    for (const auto& hybrid : rows) {
      if (hybrid.protocol != protocol || hybrid.cn_count == 0) continue;
      const auto passive = std::find_if(rows.begin(), rows.end(), [&](const ScenarioMetrics& r) {
        return r.protocol == protocol && r.cn_count == 0 && r.sn_distance_m == hybrid.sn_distance_m;
      });
      if (passive != rows.end()) changes.push_back(percent_degradation(*passive, hybrid));
    }
    for (Metric m : kMetrics) {
      DegradationSummary cell{protocol, m, std::nullopt, 0};
      double sum = 0.0;
      for (const auto& c : changes) {
        if (auto v = c.get(m)) {
          sum += *v;
          ++cell.settings;
        }
      }
      if (cell.settings > 0) cell.percent_change = sum / cell.settings;
      out.push_back(cell);
    }
  }
  return out;
}

}  // namespace slpsim
