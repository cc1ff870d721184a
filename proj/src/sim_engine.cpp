#include "slpsim/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace slpsim {

std::string_view to_string(AttackerKind k) { return k == AttackerKind::Hybrid ? "hybrid" : "passive"; }

void ScenarioConfig::validate() const {
  protocol.validate();
  if (packets_per_trial < 1) throw std::invalid_argument("packets_per_trial must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cn_count < 0) throw std::invalid_argument("cn_count must be >= 0");
  if (h_est < 1) throw std::invalid_argument("h_est must be >= 1");
  if (!(majority_fraction > 0.5 && majority_fraction <= 1.0))
    throw std::invalid_argument("majority_fraction must be in (0.5, 1]");
}

NodeId select_source(const NetworkGraph& graph, double sn_distance_m, Rng& rng) {
  const double tolerance = graph.spacing() / 2.0 + 1e-9;
  std::vector<NodeId> candidates;
  std::set<double> achievable;
  for (NodeId n = 0; n < graph.size(); ++n) {
    if (n == graph.bs()) continue;
    const double d = graph.distance_to_bs(n);
    achievable.insert(std::round(d * 10.0) / 10.0);
    if (sn_distance_m > 0.0 && std::abs(d - sn_distance_m) <= tolerance) candidates.push_back(n);
  }
  if (candidates.empty()) {
    std::vector<double> nearest(achievable.begin(), achievable.end());
    std::sort(nearest.begin(), nearest.end(), [&](double a, double b) {
      return std::abs(a - sn_distance_m) < std::abs(b - sn_distance_m);
    });
    std::ostringstream msg;
    msg << "no source candidate at " << sn_distance_m << " m; nearest achievable distances:";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, nearest.size()); ++i) msg << ' ' << nearest[i];
    if (nearest.empty()) msg << " none";
    throw SourceSelectionError(msg.str());
  }
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng)];
}

std::uint64_t trial_stream_key(const ScenarioConfig& config, int trial_index) {
  const auto& p = config.protocol;
  return stream_id({config.seed, static_cast<std::uint64_t>(p.kind),
                    static_cast<std::uint64_t>(p.ttl_init), std::bit_cast<std::uint64_t>(p.idr_angle_max),
                    static_cast<std::uint64_t>(p.tie_break), std::bit_cast<std::uint64_t>(config.sn_distance_m),
                    config.fixed_source ? *config.fixed_source : ~std::uint64_t{0},
                    static_cast<std::uint64_t>(trial_index)});
}

TrialResult run_trial(const NetworkGraph& graph, const ScenarioConfig& config,
                      const TrialStreams& streams) {
  config.validate();
  TrialResult result;
  result.packet_budget = config.packets_per_trial;

  if (config.fixed_source) {
    if (*config.fixed_source >= graph.size() || *config.fixed_source == graph.bs())
      throw std::invalid_argument("fixed source must be a non-BS node");
    result.source = *config.fixed_source;
  } else {
    Rng rng = streams.stream(StreamPurpose::SourceSelection);
    result.source = select_source(graph, config.sn_distance_m, rng);
  }

  const bool hybrid = config.attacker == AttackerKind::Hybrid;
  AttackerState attacker = hybrid ? AttackerState::hybrid(graph) : AttackerState::passive(graph);
  const CnParams cn{config.cn_count, config.majority_fraction, config.h_est};
  Rng cn_rng = streams.stream(StreamPurpose::CnPlacement);

  result.traces.reserve(static_cast<std::size_t>(config.packets_per_trial));
  for (int packet = 1; packet <= config.packets_per_trial; ++packet) {
    Rng rng = streams.stream(StreamPurpose::Packet, static_cast<std::uint64_t>(packet));
    RouteTrace trace = route_packet(graph, result.source, config.protocol, attacker.compromised, rng);
    if (trace.truncated_by) ++result.truncation_count;
    attacker = hybrid ? step_hybrid(std::move(attacker), trace, graph, cn, cn_rng)
                      : observe_and_move(std::move(attacker), trace);
    result.events.push_back({packet, attacker.position, attacker.mode, attacker.captured});
    result.traces.push_back(std::move(trace));
    result.packets_sent = packet;
    if (attacker.captured) break;
  }
  result.captured = attacker.captured;
  result.safety_period = safety_period(result);
  return result;
}

namespace {

ScenarioOutcome run_scenario(const NetworkGraph& graph, const ScenarioConfig& config, int jobs) {
  ScenarioOutcome out{config, {}, {}};
  try {
    config.validate();
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }

  const int n = config.trials;
  std::vector<TrialResult> trials(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  int error_trial = n;
  std::string error;

  auto worker = [&] {
    for (int t = next++; t < n; t = next++) {
      try {
        trials[static_cast<std::size_t>(t)] =
            run_trial(graph, config, TrialStreams(trial_stream_key(config, t)));
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        // Report the lowest failing trial so the message is schedule-independent.
        if (t < error_trial) {
          error_trial = t;
          error = "trial " + std::to_string(t) + ": " + e.what();
        }
      }
    }
  };

  const int threads = std::clamp(jobs, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  if (!error.empty()) {
    out.error = std::move(error);
    return out;
  }
  out.trials = std::move(trials);
  return out;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const NetworkGraph& graph,
                                          const std::vector<ScenarioConfig>& sweep,
                                          const ExperimentOptions& options) {
  if (sweep.empty()) throw std::invalid_argument("experiment sweep is empty");
  std::vector<ExperimentRow> rows;
  rows.reserve(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    ScenarioOutcome outcome = run_scenario(graph, sweep[i], options.jobs);
    ExperimentRow row{sweep[i], outcome.error, {}};
    if (outcome.ok()) row.metrics = summarize(sweep[i], outcome.trials);
    if (options.on_scenario) options.on_scenario(i, outcome);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace slpsim
