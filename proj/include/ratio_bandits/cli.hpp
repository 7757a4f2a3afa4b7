#pragma once

// Command-line front end:
//   ratio_bandits run --config PATH|PRESET [--out DIR] [--seed U64]
//                     [--threads N] [--set key=value]...
//   ratio_bandits report RUNS_CSV [--out DIR]
// Exit codes: 0 success, 1 runtime failure, 2 bad configuration or input.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ratio_bandits/config.hpp"
#include "ratio_bandits/harness.hpp"
#include "ratio_bandits/results_io.hpp"

namespace ratio_bandits {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitBadInput = 2;

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::vector<std::string> overrides;
};

/// --out, then the config's `out`, then $RATIO_BANDITS_OUT, then ./<name>.
inline std::filesystem::path resolve_output_dir(const std::string& flag,
                                                const ExperimentConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.out.empty()) return config.out;
  if (const char* env = std::getenv("RATIO_BANDITS_OUT"); env && *env) return env;
  return config.name;
}

/// Figure-style text layout: one block per policy, rows = K, columns = sigma.
inline void print_report(std::ostream& out, const std::vector<RelativeRegretCell>& cells) {
  using GroupKey = std::tuple<int, std::size_t, std::uint64_t, std::string>;
  std::map<GroupKey, std::vector<const RelativeRegretCell*>> groups;
  std::vector<GroupKey> order;
  for (const auto& c : cells) {
    GroupKey key{static_cast<int>(c.env.kind), c.env.reported_d(), c.T, c.policy.label()};
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&c);
  }
  for (const auto& key : order) {
    const auto& members = groups[key];
    const auto& first = *members.front();
    std::set<std::size_t> Ks;
    std::set<double> sigmas;
    std::map<std::pair<std::size_t, double>, const RelativeRegretCell*> at;
    for (const auto* c : members) {
      Ks.insert(c->env.K);
      sigmas.insert(c->env.reported_sigma());
      at[{c->env.K, c->env.reported_sigma()}] = c;
    }
    out << first.policy.label() << " (mean % of TS regret, +/- 95% CI)  "
        << to_string(first.env.kind) << " d=" << first.env.reported_d() << " T=" << first.T
        << '\n';
    out << std::setw(6) << "K";
    for (double s : sigmas) out << std::setw(18) << ("sigma=" + format_double(s));
    out << '\n';
    for (std::size_t K : Ks) {
      out << std::setw(6) << K;
      for (double s : sigmas) {
        std::ostringstream cell;
        if (auto it = at.find({K, s}); it != at.end()) {
          cell << std::fixed << std::setprecision(1) << it->second->mean_pct_of_ts << " +/- "
               << it->second->ci95_halfwidth;
        } else {
          cell << "-";
        }
        out << std::setw(18) << cell.str();
      }
      out << '\n';
    }
    out << '\n';
  }
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

inline int cmd_run(const RunOptions& options, std::ostream& log, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_experiment(options.config, options.overrides);
    if (options.seed) config.seed = *options.seed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitBadInput;
  }
  try {
    const auto dir = resolve_output_dir(options.out, config);
    std::filesystem::create_directories(dir);
    const unsigned threads =
        options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    log << "running " << config.name << ": " << config.cells().size() << " cells x "
        << config.policies.size() << " policies x " << config.runs << " runs, T=" << config.T
        << ", " << threads << " thread(s)\n";
    const auto results = run_grid(config, threads);
    const auto cells = aggregate(results);
    std::ostringstream runs_csv, cells_csv;
    write_runs_csv(runs_csv, results);
    write_cells_csv(cells_csv, cells);
    write_file(dir / "runs.csv", runs_csv.str());
    write_file(dir / "cells.csv", cells_csv.str());
    write_file(dir / "config.yaml", echo_experiment(config));
    log << "wrote " << (dir / "runs.csv").string() << ", " << (dir / "cells.csv").string()
        << ", " << (dir / "config.yaml").string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

/// Recomputes cells.csv from runs.csv and prints the relative-regret tables.
inline int cmd_report(const std::string& runs_path, const std::string& out_dir,
                      std::ostream& out, std::ostream& err) {
  std::vector<RunResult> runs;
  {
    std::ifstream in(runs_path, std::ios::binary);
    if (!in) {
      err << "error: cannot open " << runs_path << '\n';
      return kExitBadInput;
    }
    try {
      runs = read_runs_csv(in);
    } catch (const CsvError& e) {
      err << "malformed runs file " << runs_path << ": " << e.what() << '\n';
      return kExitBadInput;
    }
  }
  try {
    const auto cells = aggregate(runs);
    const std::filesystem::path dir =
        out_dir.empty() ? std::filesystem::path(runs_path).parent_path() : std::filesystem::path(out_dir);
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::ostringstream cells_csv;
    write_cells_csv(cells_csv, cells);
    write_file(dir / "cells.csv", cells_csv.str());
    print_report(out, cells);
    return kExitOk;
  } catch (const AggregationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"TS-UCB bandit experiments"};
  app.require_subcommand(1);

  RunOptions run;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "run an experiment grid");
  run_cmd->add_option("--config", run.config, "config file or preset (paper_grid, desk_grid)")
      ->required();
  run_cmd->add_option("--out", run.out, "output directory");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed (overrides config)");
  run_cmd->add_option("--threads", run.threads, "worker threads");
  run_cmd->add_option("--set", run.overrides, "override key=value (repeatable)");

  std::string runs_path, report_out;
  auto* report_cmd = app.add_subcommand("report", "recompute cells.csv and print tables");
  report_cmd->add_option("runs", runs_path, "runs.csv path")->required();
  report_cmd->add_option("--out", report_out, "directory for cells.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitBadInput;
  }
  if (*seed_opt) run.seed = seed;
  if (*run_cmd) return cmd_run(run, out, err);
  return cmd_report(runs_path, report_out, out, err);
}

}  // namespace ratio_bandits
