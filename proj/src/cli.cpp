#include "slpsim/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace slpsim {

namespace {

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

std::string compact(double v) { return fmt::format("{:g}", v); }

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ExperimentRow> rows, std::uint64_t seed) {
  out << kResultsHeader << '\n';
  for (const auto& row : rows) {
    if (!row.ok()) continue;
    const auto& m = row.metrics;
    out << fmt::format("{},{},{},{},{},{},{},{}\n", to_string(m.protocol), compact(m.sn_distance_m),
                       m.cn_count, fixed(m.mean_safety_period), fixed(m.capture_ratio), fixed(m.entropy),
                       m.trial_count, seed);
  }
}

void write_degradation_csv(std::ostream& out, std::span<const DegradationSummary> cells) {
  out << kDegradationHeader << '\n';
  for (const auto& c : cells) {
    out << fmt::format("{},{},{}\n", to_string(c.protocol), to_string(c.metric),
                       c.percent_change ? fmt::format("{:.2f}", *c.percent_change) : "undefined");
  }
}

void write_traces_csv(std::ostream& out, const ScenarioOutcome& outcome) {
  const auto& cfg = outcome.config;
  const auto prefix =
      fmt::format("{},{},{},", to_string(cfg.protocol.kind), compact(cfg.sn_distance_m), cfg.cn_count);
  for (std::size_t t = 0; t < outcome.trials.size(); ++t) {
    const auto& trial = outcome.trials[t];
    for (std::size_t p = 0; p < trial.traces.size(); ++p) {
      const auto& trace = trial.traces[p];
      out << prefix << fmt::format("{},{},0,{},SRC,{}\n", t, p + 1, trace.source, cfg.protocol.ttl_init);
      for (std::size_t h = 0; h < trace.hop_count(); ++h) {
        out << prefix
            << fmt::format("{},{},{},{},{},{}\n", t, p + 1, h + 1, trace.hops[h + 1],
                           to_string(trace.phase_labels[h]), trace.ttl_series[h]);
      }
    }
  }
}

void write_summary(std::ostream& out, const RunConfig& config, std::span<const ExperimentRow> rows,
                   std::span<const DegradationSummary> cells) {
  out << fmt::format("grid {}x{} spacing {} m, radio range {} m; ttl {}; {} trials x {} packets; seed {}\n",
                     config.grid.side_count, config.grid.side_count, compact(config.grid.spacing),
                     compact(config.grid.radio_range), config.ttl, config.trials,
                     config.packets_per_trial, config.seed);

  std::vector<ProtocolKind> protocols;
  std::vector<double> distances;
  std::vector<int> cns;
  std::map<std::tuple<ProtocolKind, double, int>, ScenarioMetrics> by_key;
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    const auto& m = r.metrics;
    if (std::find(protocols.begin(), protocols.end(), m.protocol) == protocols.end())
      protocols.push_back(m.protocol);
    if (std::find(distances.begin(), distances.end(), m.sn_distance_m) == distances.end())
      distances.push_back(m.sn_distance_m);
    if (std::find(cns.begin(), cns.end(), m.cn_count) == cns.end()) cns.push_back(m.cn_count);
    by_key[{m.protocol, m.sn_distance_m, m.cn_count}] = m;
  }

  struct Column {
    const char* title;
    double ScenarioMetrics::*field;
  };
  const Column columns[] = {{"safety period (packets)", &ScenarioMetrics::mean_safety_period},
                            {"capture ratio (%)", &ScenarioMetrics::capture_ratio},
                            {"entropy (bits)", &ScenarioMetrics::entropy}};
  for (ProtocolKind p : protocols) {
    out << fmt::format("\n== {} ==\n", to_string(p));
    for (const auto& col : columns) {
      out << fmt::format("{}\n{:>8}", col.title, "CN \\ SN");
      for (double d : distances) out << fmt::format("{:>12}", compact(d) + " m");
      out << '\n';
      for (int cn : cns) {
        out << fmt::format("{:>8}", cn);
        for (double d : distances) {
          auto it = by_key.find({p, d, cn});
          out << (it == by_key.end() ? fmt::format("{:>12}", "-")
                                     : fmt::format("{:>12.3f}", it->second.*col.field));
        }
        out << '\n';
      }
    }
  }

  out << "\n== degradation, hybrid vs passive (%) ==\n";
  out << fmt::format("{:<8}{:>16}{:>16}{:>16}\n", "", "capture ratio", "safety period", "entropy");
  for (std::size_t i = 0; i + 2 < cells.size(); i += 3) {
    out << fmt::format("{:<8}", to_string(cells[i].protocol));
    for (std::size_t j = i; j < i + 3; ++j)
      out << (cells[j].percent_change ? fmt::format("{:>16.2f}", *cells[j].percent_change)
                                      : fmt::format("{:>16}", "undefined"));
    out << '\n';
  }

  bool header = false;
  for (const auto& r : rows) {
    if (r.ok()) continue;
    if (!header) out << "\n== failed scenarios ==\n";
    header = true;
    out << fmt::format("{} sn={} cn={}: {}\n", to_string(r.config.protocol.kind),
                       compact(r.config.sn_distance_m), r.config.cn_count, r.error);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Source-location-privacy attack simulator", "slpsim"};
  std::string config_path;
  std::string out_dir;
  std::string scenario_filter;
  std::uint64_t seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool emit_traces = false;
  app.add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--scenario", scenario_filter, "Filter, e.g. protocol=psslp,sn=300|600,cn=10");
  app.add_option("--jobs", jobs, "Worker threads for trials")->check(CLI::PositiveNumber);
  app.add_flag("--emit-traces", emit_traces, "Also write traces.csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  RunConfig config;
  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    config = parse_config(text);
    if (seed_opt->count() > 0) config.seed = seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
  } catch (const std::exception& e) {
    err << "error: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << '\n';
    return 1;
  }

  std::vector<ScenarioConfig> sweep;
  try {
    sweep = build_sweep(config);
    if (!scenario_filter.empty()) {
      auto keep = parse_scenario_filter(scenario_filter);
      std::erase_if(sweep, [&](const ScenarioConfig& s) { return !keep(s); });
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (sweep.empty()) {
    err << "error: scenario filter matched nothing\n";
    return 1;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  auto open = [&](const char* name) {
    std::ofstream f(config.output_dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (config.output_dir / name).string());
    return f;
  };

  try {
    std::ofstream traces;
    if (emit_traces) {
      traces = open("traces.csv");
      traces << kTracesHeader << '\n';
    }
    auto results = open("results.csv");
    auto degradation = open("degradation.csv");
    auto summary = open("summary.txt");

    const NetworkGraph graph = build_grid(config.grid);
    ExperimentOptions options;
    options.jobs = jobs;
    options.on_scenario = [&](std::size_t i, const ScenarioOutcome& outcome) {
      err << fmt::format("[{}/{}] {} sn={} cn={} {}\n", i + 1, sweep.size(),
                         to_string(outcome.config.protocol.kind), compact(outcome.config.sn_distance_m),
                         outcome.config.cn_count, outcome.ok() ? "ok" : "FAILED: " + outcome.error);
      if (emit_traces && outcome.ok()) write_traces_csv(traces, outcome);
    };
    const auto rows = run_experiment(graph, sweep, options);

    std::vector<ScenarioMetrics> metrics;
    for (const auto& r : rows)
      if (r.ok()) metrics.push_back(r.metrics);
    const auto cells = average_degradation(metrics);

    write_results_csv(results, rows, config.seed);
    write_degradation_csv(degradation, cells);
    write_summary(summary, config, rows, cells);
    if (!results || !degradation || !summary || (emit_traces && !traces))
      throw std::runtime_error("write to " + config.output_dir.string() + " failed");

    const bool failed = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.ok(); });
    out << fmt::format("wrote {} scenario row(s) to {}\n", metrics.size(), config.output_dir.string());
    return failed ? 2 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace slpsim
