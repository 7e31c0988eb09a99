#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coord/scenario_io.hpp"

#include <random>
#include <sstream>

using namespace coord;

namespace {

const char* kCrossroadsText = R"(# demo intersection
[layout]
preset = crossroads
radius = 1.0
lane_offset = 8.0
spawn_margin = 30.0
exit_margin = 10.0
tail_margin = 10.0

[robots]
v_max = 1.0
a_max = 0.05
a_min = -0.05

[planner]
dt = 1.0
subdivisions = 4
verify_subdivisions = 4
grid_resolution = 0.1

[sim]
density = 10
seed = 1
horizon = 200000
robots_per_run = 500

[sweep]
densities = 1 2 5 10
seeds = 1 2 3
)";

}  // namespace

TEST_CASE("parsing the crossroads scenario") {
  std::istringstream in(kCrossroadsText);
  const ScenarioConfig cfg = parse_scenario(in, "demo");
  CHECK(cfg.name == "demo");
  CHECK(cfg.layout.lane_count() == 4);
  CHECK(cfg.layout.exit[0] == doctest::Approx(52.0));
  CHECK(cfg.model.a_min == doctest::Approx(-0.05));
  CHECK(cfg.densities == std::vector<double>{1, 2, 5, 10});
  CHECK(cfg.seeds.size() == 3);
  CHECK(cfg.robots_per_run == 500);
}

TEST_CASE("explicit path entries") {
  std::istringstream in(R"(
[layout]
radius = 1.0
path = 0 0 120 0 exit=100
path = 0 -4, 0 116, spawn=2 exit=98
)");
  const ScenarioConfig cfg = parse_scenario(in, "lanes");
  REQUIRE(cfg.layout.lane_count() == 2);
  CHECK(cfg.layout.paths[0].length() == doctest::Approx(120.0));
  CHECK(cfg.layout.spawn[1] == doctest::Approx(2.0));
  CHECK(cfg.layout.exit[1] == doctest::Approx(98.0));
}

TEST_CASE("scenario parse errors carry line numbers") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_scenario(in, "bad");
  };
  CHECK_THROWS_WITH_AS(parse("[layout]\npreset = crossroads\nradius = abc\n"),
                       doctest::Contains("line 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse("[layout]\npreset = roundabout\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("[layout]\npreset = crossroads\n[sweep]\ndensities = 0 5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse("[layout]\npath = 0 0 10 0\n"), std::invalid_argument);  // no exit
  CHECK_THROWS_AS(parse("radius = 1\n"), std::invalid_argument);   // key before any section
  CHECK_THROWS_AS(parse("[layout]\npreset = crossroads\nwheels = 4\n"), std::invalid_argument);
}

TEST_CASE("trace writing round-trips bit-exactly") {
  std::mt19937_64 rng(9);
  std::vector<TraceRow> rows;
  for (long k = 0; k < 500; ++k) {
    TraceRow row;
    row.step = k / 7;
    row.id = static_cast<RobotId>(k % 7);
    row.lane = static_cast<int>(k % 4);
    row.x = std::ldexp(static_cast<double>(rng()), -32);
    row.v = std::ldexp(static_cast<double>(rng()), -64);
    row.action = (rng() & 1) ? Action::Brake : Action::Accelerate;
    rows.push_back(row);
  }
  std::ostringstream out;
  write_trace(out, rows);
  std::istringstream in(out.str());
  const std::vector<TraceRow> parsed = read_trace(in);
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(parsed[k].step == rows[k].step);
    CHECK(parsed[k].id == rows[k].id);
    CHECK(parsed[k].lane == rows[k].lane);
    CHECK(parsed[k].x == rows[k].x);   // bit-identical
    CHECK(parsed[k].v == rows[k].v);
    CHECK(parsed[k].action == rows[k].action);
  }

  // and a rewrite of the parsed rows is byte-identical
  std::ostringstream again;
  write_trace(again, parsed);
  CHECK(again.str() == out.str());
}

TEST_CASE("trace parse errors") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return read_trace(in);
  };
  CHECK_THROWS_AS(parse("1\t2\t3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("0\t0\t0\t1.0\t1.0\tX\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("0\t-1\t0\t1.0\t1.0\tA\n"), std::invalid_argument);
  CHECK(parse("# comment only\n").empty());
}

TEST_CASE("metrics and sweep emission") {
  RunMetrics a;
  a.density_requested = 5.0;
  a.density_achieved = 4.7;
  a.seed = 1;
  a.mean_increase = 2.0;
  a.completed = 10;
  RunMetrics b = a;
  b.seed = 2;
  b.mean_increase = 4.0;
  b.deadlock = true;

  const auto rows = aggregate_sweep({a, b}, {5.0, 10.0});
  REQUIRE(rows.size() == 1);   // nothing ran at density 10
  CHECK(rows[0].runs == 2);
  CHECK(rows[0].increase_mean == doctest::Approx(3.0));
  CHECK(rows[0].increase_std == doctest::Approx(std::sqrt(2.0)));
  CHECK(rows[0].deadlock_runs == 1);
  CHECK(rows[0].completed == 20);

  std::ostringstream out;
  write_sweep(out, rows);
  CHECK(out.str().find("density_percent") != std::string::npos);
  std::ostringstream metrics;
  write_run_metrics(metrics, a);
  CHECK(metrics.str().find("mean_increase_percent = 2") != std::string::npos);
  std::ostringstream robots;
  write_robot_records(robots, a);
  CHECK(robots.str().find("ideal_steps") != std::string::npos);
}

TEST_CASE("format_double round-trips doubles at 17 digits") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::ldexp(static_cast<double>(rng()), -static_cast<int>(rng() % 60));
    CHECK(std::stod(format_double(v)) == v);
  }
}
