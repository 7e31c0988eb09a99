// coordsim - priority-based intersection coordination simulator
//
// subcommands:
//   run    execute one seeded traffic run, write trace + metrics
//   sweep  run the density sweep, write per-cell metrics + aggregate table
//   check  re-verify a written trace against its scenario

#include "CLI11.hpp"

#include "coord/scenario_io.hpp"
#include "coord/simulator.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace coord;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& file, const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  emit(out);
}

int cmd_run(const std::string& scenario_file, const std::string& out_dir, bool verify,
            bool strict, double density_override, long seed_override, int digits) {
  ScenarioConfig cfg = load_scenario(scenario_file);
  if (density_override > 0.0) cfg.density = density_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  cfg.validate();

  const RunResult result = run_scenario(cfg, cfg.density, cfg.seed, verify);
  const RunMetrics& m = result.metrics;

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "trace.tsv",
             [&](std::ostream& o) { write_trace(o, result.trace, digits); });
  write_file(fs::path(out_dir) / "metrics.txt",
             [&](std::ostream& o) { write_run_metrics(o, m); });
  write_file(fs::path(out_dir) / "robots.tsv",
             [&](std::ostream& o) { write_robot_records(o, m); });

  std::cout << "density " << m.density_requested << "% (achieved " << m.density_achieved
            << "%), seed " << m.seed << ": " << m.completed << "/" << m.spawned
            << " robots, mean increase " << m.mean_increase << "%" << std::endl;
  if (m.deadlock)
    std::cout << "deadlock detected at step " << m.deadlock_step << std::endl;
  if (verify)
    std::cout << "verification: " << m.collisions << " collisions, " << m.invariant_failures
              << " invariant failures, " << m.priority_mismatches << " priority mismatches"
              << std::endl;

  if (verify && (m.collisions > 0 || m.invariant_failures > 0 || m.priority_mismatches > 0))
    return kExitViolation;
  if (strict && m.deadlock) return kExitViolation;
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_file, const std::string& out_dir, bool verify,
              bool strict, unsigned jobs) {
  const ScenarioConfig cfg = load_scenario(scenario_file);

  struct Cell {
    double density;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double d : cfg.densities)
    for (std::uint64_t s : cfg.seeds) cells.push_back({d, s});

  std::vector<RunMetrics> metrics(cells.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t at = cursor.fetch_add(1);
      if (at >= cells.size()) return;
      metrics[at] = run_scenario(cfg, cells[at].density, cells[at].seed, verify).metrics;
    }
  };
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t + 1 < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  fs::create_directories(out_dir);
  for (std::size_t at = 0; at < cells.size(); ++at) {
    char name[64];
    std::snprintf(name, sizeof name, "metrics_d%g_s%llu.txt", cells[at].density,
                  static_cast<unsigned long long>(cells[at].seed));
    write_file(fs::path(out_dir) / name,
               [&](std::ostream& o) { write_run_metrics(o, metrics[at]); });
  }
  const auto aggregates = aggregate_sweep(metrics, cfg.densities);
  write_file(fs::path(out_dir) / "sweep.tsv",
             [&](std::ostream& o) { write_sweep(o, aggregates); });

  long collisions = 0, invariant = 0, mismatches = 0, deadlocks = 0;
  for (const SweepAggregate& row : aggregates) {
    std::cout << "density " << row.density << "%: achieved " << row.achieved_mean
              << "%, increase " << row.increase_mean << "% (std " << row.increase_std << "), "
              << row.completed << " robots, " << row.deadlock_runs << " deadlocked runs"
              << std::endl;
    collisions += row.collisions;
    invariant += row.invariant_failures;
    mismatches += row.priority_mismatches;
    deadlocks += row.deadlock_runs;
  }
  if (verify)
    std::cout << "verification: " << collisions << " collisions, " << invariant
              << " invariant failures, " << mismatches << " priority mismatches" << std::endl;

  if (verify && (collisions > 0 || invariant > 0 || mismatches > 0)) return kExitViolation;
  if (strict && deadlocks > 0) return kExitViolation;
  return kExitOk;
}

int cmd_check(const std::string& trace_file, const std::string& scenario_file) {
  const ScenarioConfig cfg = load_scenario(scenario_file);
  const std::vector<TraceRow> trace = load_trace(trace_file);
  const ReplayReport report = replay_check(trace, cfg);
  std::cout << report.rows << " rows over " << report.steps << " steps: "
            << report.consistency_errors << " consistency errors, " << report.collisions
            << " collisions, " << report.priority_mismatches << " priority mismatches"
            << std::endl;
  if (!report.ok()) {
    std::cout << "first violation: " << report.first_error << std::endl;
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"priority-based intersection coordination simulator"};
  app.require_subcommand(1);

  std::string scenario_file, trace_file;
  std::string out_dir = "out";
  bool verify = false, strict = false;
  double density = -1.0;
  long seed = -1;
  int digits = 17;
  unsigned jobs = 1;

  CLI::App* run = app.add_subcommand("run", "execute one seeded traffic run");
  run->add_option("scenario", scenario_file, "scenario file")->required();
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_flag("--verify", verify, "per-step safety checks (read-only)");
  run->add_flag("--strict", strict, "treat a deadlock as a failure");
  run->add_option("--density", density, "override the scenario's density percent");
  run->add_option("--seed", seed, "override the scenario's seed");
  run->add_option("--format", digits, "significant digits in the trace (17 = exact)");

  CLI::App* sweep = app.add_subcommand("sweep", "run the density sweep");
  sweep->add_option("scenario", scenario_file, "scenario file")->required();
  sweep->add_option("-o,--out", out_dir, "output directory");
  sweep->add_flag("--verify", verify, "per-step safety checks (read-only)");
  sweep->add_flag("--strict", strict, "treat any deadlocked run as a failure");
  sweep->add_option("--jobs", jobs, "concurrent sweep cells");

  CLI::App* check = app.add_subcommand("check", "re-verify a written trace");
  check->add_option("trace", trace_file, "trace file")->required();
  check->add_option("scenario", scenario_file, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_file, out_dir, verify, strict, density, seed, digits);
    if (sweep->parsed()) return cmd_sweep(scenario_file, out_dir, verify, strict, jobs);
    return cmd_check(trace_file, scenario_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  }
}
