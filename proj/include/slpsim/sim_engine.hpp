#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slpsim/metrics.hpp"
#include "slpsim/net_model.hpp"
#include "slpsim/rng.hpp"
#include "slpsim/scenario.hpp"

namespace slpsim {

class SourceSelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniformly random non-BS node whose Euclidean distance to the BS lies
/// within half a lattice spacing of `sn_distance_m`.
NodeId select_source(const NetworkGraph& graph, double sn_distance_m, Rng& rng);

/// Stream key for one trial. Excludes attacker kind and CN count: passive
/// and hybrid runs of one setting share the source draw and packet streams.
std::uint64_t trial_stream_key(const ScenarioConfig& config, int trial_index);

/// Runs one trial: packets are routed and shown to the attacker until
/// capture or until the packet budget is spent.
TrialResult run_trial(const NetworkGraph& graph, const ScenarioConfig& config,
                      const TrialStreams& streams);

struct ScenarioOutcome {
  ScenarioConfig config;
  std::string error;  // non-empty when the scenario aborted
  std::vector<TrialResult> trials;

  bool ok() const noexcept { return error.empty(); }
};

struct ExperimentOptions {
  int jobs = 1;
  /// Called with every finished scenario in sweep order, before its traces
  /// are released.
  std::function<void(std::size_t index, const ScenarioOutcome&)> on_scenario;
};

struct ExperimentRow {
  ScenarioConfig config;
  std::string error;
  ScenarioMetrics metrics;  // meaningful only when error is empty

  bool ok() const noexcept { return error.empty(); }
};

/// Runs every scenario of the sweep. Trials are spread across `jobs`
/// worker threads; the result does not depend on the job count. A failing
/// scenario is recorded in its row and does not stop the others.
std::vector<ExperimentRow> run_experiment(const NetworkGraph& graph,
                                          const std::vector<ScenarioConfig>& sweep,
                                          const ExperimentOptions& options = {});

}  // namespace slpsim
