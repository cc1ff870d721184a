#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "slpsim/config.hpp"
#include "slpsim/metrics.hpp"
#include "slpsim/sim_engine.hpp"

namespace slpsim {

inline constexpr const char* kResultsHeader =
    "protocol,sn_distance_m,cn_count,mean_safety_period,capture_ratio_pct,entropy_bits,trials,seed";
inline constexpr const char* kDegradationHeader = "protocol,metric,percent_change";
inline constexpr const char* kTracesHeader =
    "protocol,sn_distance_m,cn_count,trial,packet,hop_index,node,phase,ttl";

/// One row per successful scenario, in sweep order.
void write_results_csv(std::ostream& out, std::span<const ExperimentRow> rows, std::uint64_t seed);

/// Protocol x metric table; undefined cells are written as `undefined`.
void write_degradation_csv(std::ostream& out, std::span<const DegradationSummary> cells);

/// Every hop of every packet of every trial of one scenario.
void write_traces_csv(std::ostream& out, const ScenarioOutcome& outcome);

/// Per-protocol metric grids (rows: CN count, columns: SN distance), the
/// degradation table and any scenario failures.
void write_summary(std::ostream& out, const RunConfig& config, std::span<const ExperimentRow> rows,
                   std::span<const DegradationSummary> cells);

/// Entry point behind the `slpsim` executable. Returns 0 on success, 1 on
/// usage or I/O errors and 2 when any scenario failed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slpsim
