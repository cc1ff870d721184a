#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slpsim/net_model.hpp"
#include "slpsim/protocols.hpp"
#include "slpsim/scenario.hpp"

namespace slpsim {

/// Which attacker runs a scenario. Auto is passive for zero compromised
/// nodes and hybrid otherwise.
enum class AttackerSelection { Auto, Passive, Hybrid };

struct RunConfig {
  GridSpec grid;
  std::vector<ProtocolKind> protocols{ProtocolKind::PRS, ProtocolKind::SLPR, ProtocolKind::PSSLP};
  std::vector<double> sn_distances{300.0, 600.0, 900.0};
  std::vector<int> cn_counts{0, 5, 10, 15, 20};
  int ttl = 5;
  double idr_angle_max = 180.0;
  TieBreak tie_break = TieBreak::Random;
  AttackerSelection attacker = AttackerSelection::Auto;
  double majority_fraction = 0.8;
  int h_est = 3;
  int packets_per_trial = 500;
  int trials = 50;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "results";

  void validate() const;  // throws ConfigError with line 0
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parses the line-oriented `key = value` format. `[section]` headers are
/// optional; `#` and `;` start comments; lists are comma-separated. Omitted
/// keys keep their defaults, so empty text yields the default sweep.
RunConfig parse_config(std::string_view text);

/// Cross product protocol x SN distance x CN count, in that nesting order.
std::vector<ScenarioConfig> build_sweep(const RunConfig& config);

/// Predicate from a filter such as `protocol=psslp,sn=300|600,cn=10`.
/// Keys: protocol, sn, cn. Alternatives within a key are separated by `|`.
using ScenarioFilter = std::function<bool(const ScenarioConfig&)>;
ScenarioFilter parse_scenario_filter(std::string_view filter);

}  // namespace slpsim
