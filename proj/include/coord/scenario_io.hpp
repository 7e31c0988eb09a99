#pragma once

#include "coord/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace coord {

/// Flat key-value scenario format with [layout], [robots], [planner], [sim]
/// and [sweep] sections; '#' starts a comment. Throws std::invalid_argument
/// with a line number on malformed input.
ScenarioConfig parse_scenario(std::istream& in, const std::string& name);
ScenarioConfig load_scenario(const std::filesystem::path& file);

/// Tab-separated trace rows (step, id, lane, x, v, action). The default 17
/// significant digits round-trip doubles exactly.
void write_trace(std::ostream& out, const std::vector<TraceRow>& trace, int digits = 17);
std::vector<TraceRow> read_trace(std::istream& in);
std::vector<TraceRow> load_trace(const std::filesystem::path& file);

void write_run_metrics(std::ostream& out, const RunMetrics& m);
void write_robot_records(std::ostream& out, const RunMetrics& m);

struct SweepAggregate {
  double density = 0.0;
  double achieved_mean = 0.0;
  double increase_mean = 0.0;
  double increase_std = 0.0;
  long deadlock_runs = 0;
  long collisions = 0;
  long invariant_failures = 0;
  long priority_mismatches = 0;
  long completed = 0;
  int runs = 0;
};

std::vector<SweepAggregate> aggregate_sweep(const std::vector<RunMetrics>& runs,
                                            const std::vector<double>& densities);
void write_sweep(std::ostream& out, const std::vector<SweepAggregate>& rows);

std::string format_double(double v, int digits = 17);

}  // namespace coord
