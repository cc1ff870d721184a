#include "slpsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>

namespace slpsim {

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return value;
}

template <class T>
T number_or_throw(std::string_view s, int line, std::string_view key) {
  auto v = parse_number<T>(s);
  if (!v) throw ConfigError(line, "malformed value '" + std::string(s) + "' for " + std::string(key));
  return *v;
}

template <class T>
std::vector<T> list_or_throw(std::string_view s, int line, std::string_view key) {
  std::vector<T> out;
  for (auto part : split(s, ',')) {
    if (part.empty()) throw ConfigError(line, "malformed list for " + std::string(key));
    out.push_back(number_or_throw<T>(part, line, key));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view value, int line)>;

struct KeySpec {
  std::string_view section;
  Setter set;
};

const std::map<std::string, KeySpec, std::less<>>& key_table() {
  static const std::map<std::string, KeySpec, std::less<>> table{
      {"side_count", {"grid", [](RunConfig& c, std::string_view v, int l) {
         c.grid.side_count = number_or_throw<int>(v, l, "side_count");
       }}},
      {"spacing", {"grid", [](RunConfig& c, std::string_view v, int l) {
         c.grid.spacing = number_or_throw<double>(v, l, "spacing");
       }}},
      {"radio_range", {"grid", [](RunConfig& c, std::string_view v, int l) {
         c.grid.radio_range = number_or_throw<double>(v, l, "radio_range");
       }}},
      {"protocols", {"protocol", [](RunConfig& c, std::string_view v, int l) {
         c.protocols.clear();
         for (auto name : split(v, ',')) {
           try {
             c.protocols.push_back(parse_protocol(name));
           } catch (const std::invalid_argument& e) {
             throw ConfigError(l, e.what());
           }
         }
       }}},
      {"ttl", {"protocol", [](RunConfig& c, std::string_view v, int l) {
         c.ttl = number_or_throw<int>(v, l, "ttl");
       }}},
      {"idr_angle_max", {"protocol", [](RunConfig& c, std::string_view v, int l) {
         c.idr_angle_max = number_or_throw<double>(v, l, "idr_angle_max");
       }}},
      {"tie_break", {"protocol", [](RunConfig& c, std::string_view v, int l) {
         if (v == "random") c.tie_break = TieBreak::Random;
         else if (v == "lowest-id") c.tie_break = TieBreak::LowestId;
         else throw ConfigError(l, "tie_break must be random or lowest-id");
       }}},
      {"attacker", {"attacker", [](RunConfig& c, std::string_view v, int l) {
         if (v == "auto") c.attacker = AttackerSelection::Auto;
         else if (v == "passive") c.attacker = AttackerSelection::Passive;
         else if (v == "hybrid") c.attacker = AttackerSelection::Hybrid;
         else throw ConfigError(l, "attacker must be auto, passive or hybrid");
       }}},
      {"h_est", {"attacker", [](RunConfig& c, std::string_view v, int l) {
         c.h_est = number_or_throw<int>(v, l, "h_est");
       }}},
      {"majority_fraction", {"attacker", [](RunConfig& c, std::string_view v, int l) {
         c.majority_fraction = number_or_throw<double>(v, l, "majority_fraction");
       }}},
      {"sn_distances", {"experiment", [](RunConfig& c, std::string_view v, int l) {
         c.sn_distances = list_or_throw<double>(v, l, "sn_distances");
       }}},
      {"cn_counts", {"experiment", [](RunConfig& c, std::string_view v, int l) {
         c.cn_counts = list_or_throw<int>(v, l, "cn_counts");
       }}},
      {"packets_per_trial", {"experiment", [](RunConfig& c, std::string_view v, int l) {
         c.packets_per_trial = number_or_throw<int>(v, l, "packets_per_trial");
       }}},
      {"trials", {"experiment", [](RunConfig& c, std::string_view v, int l) {
         c.trials = number_or_throw<int>(v, l, "trials");
       }}},
      {"seed", {"experiment", [](RunConfig& c, std::string_view v, int l) {
         c.seed = number_or_throw<std::uint64_t>(v, l, "seed");
       }}},
      {"output_dir", {"experiment", [](RunConfig& c, std::string_view v, int l) {
         if (v.empty()) throw ConfigError(l, "output_dir must not be empty");
         c.output_dir = std::string(v);
       }}},
  };
  return table;
}

void check(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(0, std::string(key) + ": " + what);
}

}  // namespace

void RunConfig::validate() const {
  check(grid.side_count >= 1, "side_count", "must be >= 1");
  check(grid.spacing > 0.0, "spacing", "must be > 0");
  check(grid.radio_range >= 0.0, "radio_range", "must be >= 0");
  check(!protocols.empty(), "protocols", "list must not be empty");
  check(!sn_distances.empty(), "sn_distances", "list must not be empty");
  check(std::all_of(sn_distances.begin(), sn_distances.end(), [](double d) { return d > 0.0; }),
        "sn_distances", "values must be > 0");
  check(!cn_counts.empty(), "cn_counts", "list must not be empty");
  check(std::all_of(cn_counts.begin(), cn_counts.end(), [](int c) { return c >= 0; }), "cn_counts",
        "values must be >= 0");
  check(ttl >= 0, "ttl", "must be >= 0");
  check(idr_angle_max > 0.0 && idr_angle_max <= 360.0, "idr_angle_max", "must be in (0, 360]");
  check(majority_fraction > 0.5 && majority_fraction <= 1.0, "majority_fraction",
        "must be in (0.5, 1]");
  check(h_est >= 1, "h_est", "must be >= 1");
  check(packets_per_trial >= 1, "packets_per_trial", "must be >= 1");
  check(trials >= 1, "trials", "must be >= 1");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::map<std::string, int, std::less<>> key_lines;
  std::string section;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
      line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string_view> known{"grid", "protocol", "attacker", "experiment"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError(line_no, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
    if (!section.empty() && it->second.section != section)
      throw ConfigError(line_no, "key '" + std::string(key) + "' does not belong in [" + section + "]");
    it->second.set(config, value, line_no);
    key_lines[std::string(key)] = line_no;
  }

  try {
    config.validate();
  } catch (const ConfigError& e) {
    // Point range errors at the line that set the key.
    const std::string msg = e.what();
    const auto key = msg.substr(0, msg.find(':'));
    if (auto l = key_lines.find(key); l != key_lines.end()) throw ConfigError(l->second, msg);
    throw;
  }
  return config;
}

std::vector<ScenarioConfig> build_sweep(const RunConfig& config) {
  config.validate();
  std::vector<ScenarioConfig> sweep;
  for (ProtocolKind kind : config.protocols) {
    for (double distance : config.sn_distances) {
      for (int cn : config.cn_counts) {
        ScenarioConfig s;
        s.protocol = {kind, config.ttl, config.idr_angle_max, config.tie_break};
        s.sn_distance_m = distance;
        s.cn_count = cn;
        switch (config.attacker) {
          case AttackerSelection::Auto:
            s.attacker = cn == 0 ? AttackerKind::Passive : AttackerKind::Hybrid;
            break;
          case AttackerSelection::Passive: s.attacker = AttackerKind::Passive; break;
          case AttackerSelection::Hybrid: s.attacker = AttackerKind::Hybrid; break;
        }
        s.majority_fraction = config.majority_fraction;
        s.h_est = config.h_est;
        s.packets_per_trial = config.packets_per_trial;
        s.trials = config.trials;
        s.seed = config.seed;
        sweep.push_back(s);
      }
    }
  }
  return sweep;
}

ScenarioFilter parse_scenario_filter(std::string_view filter) {
  std::vector<ScenarioFilter> clauses;
  for (auto clause : split(filter, ',')) {
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("scenario filter clause '" + std::string(clause) + "' lacks '='");
    const auto key = trim(clause.substr(0, eq));
    const auto alternatives = split(clause.substr(eq + 1), '|');
    if (key == "protocol") {
      std::vector<ProtocolKind> kinds;
      for (auto a : alternatives) kinds.push_back(parse_protocol(a));
      clauses.push_back([kinds](const ScenarioConfig& s) {
        return std::find(kinds.begin(), kinds.end(), s.protocol.kind) != kinds.end();
      });
    } else if (key == "sn") {
      std::vector<double> values;
      for (auto a : alternatives) {
        auto v = parse_number<double>(a);
        if (!v) throw std::invalid_argument("bad sn value '" + std::string(a) + "'");
        values.push_back(*v);
      }
      clauses.push_back([values](const ScenarioConfig& s) {
        return std::find(values.begin(), values.end(), s.sn_distance_m) != values.end();
      });
    } else if (key == "cn") {
      std::vector<int> values;
      for (auto a : alternatives) {
        auto v = parse_number<int>(a);
        if (!v) throw std::invalid_argument("bad cn value '" + std::string(a) + "'");
        values.push_back(*v);
      }
      clauses.push_back([values](const ScenarioConfig& s) {
        return std::find(values.begin(), values.end(), s.cn_count) != values.end();
      });
    } else {
      throw std::invalid_argument("unknown scenario filter key '" + std::string(key) + "'");
    }
  }
  return [clauses](const ScenarioConfig& s) {
    return std::all_of(clauses.begin(), clauses.end(), [&](const auto& c) { return c(s); });
  };
}

}  // namespace slpsim
