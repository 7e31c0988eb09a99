#include "coord/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace coord {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    // allow comma-separated lists as well
    std::string cleaned;
    for (char c : tok)
      if (c != ',') cleaned += c;
    if (!cleaned.empty()) tokens.push_back(cleaned);
  }
  return tokens;
}

double parse_number(const std::string& s, int line) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("line " + std::to_string(line) + ": expected a number, got '" +
                                s + "'");
  }
  if (consumed != s.size())
    throw std::invalid_argument("line " + std::to_string(line) + ": trailing characters in '" +
                                s + "'");
  return v;
}

long parse_integer(const std::string& s, int line) {
  const double v = parse_number(s, line);
  if (std::abs(v - std::round(v)) > 1e-9)
    throw std::invalid_argument("line " + std::to_string(line) + ": expected an integer");
  return static_cast<long>(std::llround(v));
}

struct PathSpec {
  std::vector<double> coords;
  double spawn = 0.0;
  double exit = 0.0;
  bool has_exit = false;
  int line = 0;
};

struct LayoutSpec {
  std::string preset;
  double lane_offset = 8.0;
  double spawn_margin = 30.0;
  double exit_margin = 10.0;
  double tail_margin = 10.0;
  std::vector<PathSpec> paths;
};

void finish_layout(ScenarioConfig& cfg, const LayoutSpec& spec) {
  if (!spec.preset.empty()) {
    if (spec.preset != "crossroads")
      throw std::invalid_argument("unknown layout preset '" + spec.preset + "'");
    if (!spec.paths.empty())
      throw std::invalid_argument("a layout preset cannot be combined with explicit paths");
    cfg.layout = make_crossroads_layout(cfg.radius, spec.lane_offset, spec.spawn_margin,
                                        spec.exit_margin, spec.tail_margin);
    return;
  }
  if (spec.paths.empty()) throw std::invalid_argument("layout needs a preset or path entries");
  IntersectionLayout layout;
  for (const PathSpec& ps : spec.paths) {
    if (ps.coords.size() < 4 || ps.coords.size() % 2 != 0)
      throw std::invalid_argument("line " + std::to_string(ps.line) +
                                  ": a path needs an even number of coordinates (at least two "
                                  "points)");
    if (!ps.has_exit)
      throw std::invalid_argument("line " + std::to_string(ps.line) +
                                  ": a path entry needs exit=<coordinate>");
    std::vector<Vec2> pts;
    for (std::size_t k = 0; k + 1 < ps.coords.size(); k += 2)
      pts.push_back({ps.coords[k], ps.coords[k + 1]});
    layout.paths.push_back(PathGeometry::polyline(layout.lane_count(), std::move(pts)));
    layout.spawn.push_back(ps.spawn);
    layout.exit.push_back(ps.exit);
  }
  cfg.layout = std::move(layout);
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  LayoutSpec layout_spec;

  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']')
        throw std::invalid_argument("line " + std::to_string(line) + ": malformed section header");
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("line " + std::to_string(line) + ": empty key or value");

    if (section == "layout") {
      if (key == "preset") {
        layout_spec.preset = value;
      } else if (key == "radius") {
        cfg.radius = parse_number(value, line);
      } else if (key == "lane_offset") {
        layout_spec.lane_offset = parse_number(value, line);
      } else if (key == "spawn_margin") {
        layout_spec.spawn_margin = parse_number(value, line);
      } else if (key == "exit_margin") {
        layout_spec.exit_margin = parse_number(value, line);
      } else if (key == "tail_margin") {
        layout_spec.tail_margin = parse_number(value, line);
      } else if (key == "path") {
        PathSpec ps;
        ps.line = line;
        for (const std::string& tok : tokenize(value)) {
          if (tok.rfind("spawn=", 0) == 0) {
            ps.spawn = parse_number(tok.substr(6), line);
          } else if (tok.rfind("exit=", 0) == 0) {
            ps.exit = parse_number(tok.substr(5), line);
            ps.has_exit = true;
          } else {
            ps.coords.push_back(parse_number(tok, line));
          }
        }
        layout_spec.paths.push_back(std::move(ps));
      } else {
        throw std::invalid_argument("line " + std::to_string(line) + ": unknown layout key '" +
                                    key + "'");
      }
    } else if (section == "robots") {
      if (key == "v_max") cfg.model.v_max = parse_number(value, line);
      else if (key == "a_max") cfg.model.a_max = parse_number(value, line);
      else if (key == "a_min") cfg.model.a_min = parse_number(value, line);
      else
        throw std::invalid_argument("line " + std::to_string(line) + ": unknown robots key '" +
                                    key + "'");
    } else if (section == "planner") {
      if (key == "dt") cfg.dt = parse_number(value, line);
      else if (key == "subdivisions") cfg.subdivisions = static_cast<int>(parse_integer(value, line));
      else if (key == "verify_subdivisions")
        cfg.verify_subdivisions = static_cast<int>(parse_integer(value, line));
      else if (key == "grid_resolution") cfg.grid_resolution = parse_number(value, line);
      else if (key == "max_steps") cfg.max_steps = parse_integer(value, line);
      else
        throw std::invalid_argument("line " + std::to_string(line) + ": unknown planner key '" +
                                    key + "'");
    } else if (section == "sim") {
      if (key == "density") cfg.density = parse_number(value, line);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(value, line));
      else if (key == "horizon") cfg.horizon = parse_integer(value, line);
      else if (key == "robots_per_run") cfg.robots_per_run = static_cast<int>(parse_integer(value, line));
      else
        throw std::invalid_argument("line " + std::to_string(line) + ": unknown sim key '" + key +
                                    "'");
    } else if (section == "sweep") {
      if (key == "densities") {
        cfg.densities.clear();
        for (const std::string& tok : tokenize(value)) cfg.densities.push_back(parse_number(tok, line));
      } else if (key == "seeds") {
        cfg.seeds.clear();
        for (const std::string& tok : tokenize(value))
          cfg.seeds.push_back(static_cast<std::uint64_t>(parse_integer(tok, line)));
      } else {
        throw std::invalid_argument("line " + std::to_string(line) + ": unknown sweep key '" +
                                    key + "'");
      }
    } else {
      throw std::invalid_argument("line " + std::to_string(line) +
                                  ": key outside of any known section");
    }
  }

  finish_layout(cfg, layout_spec);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open scenario file '" + file.string() + "'");
  return parse_scenario(in, file.stem().string());
}

std::string format_double(double v, int digits) {
  if (digits < 1) digits = 1;
  if (digits > 17) digits = 17;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_trace(std::ostream& out, const std::vector<TraceRow>& trace, int digits) {
  out << "# coordsim trace\n";
  out << "# columns: step id lane x v action(A=accelerate,B=brake)\n";
  for (const TraceRow& row : trace) {
    out << row.step << '\t' << row.id << '\t' << row.lane << '\t'
        << format_double(row.x, digits) << '\t' << format_double(row.v, digits) << '\t'
        << (row.action == Action::Brake ? 'B' : 'A') << '\n';
  }
}

std::vector<TraceRow> read_trace(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    std::istringstream fields(text);
    TraceRow row;
    std::string action;
    long id = 0;
    if (!(fields >> row.step >> id >> row.lane >> row.x >> row.v >> action))
      throw std::invalid_argument("trace line " + std::to_string(line) + ": expected 6 fields");
    std::string extra;
    if (fields >> extra)
      throw std::invalid_argument("trace line " + std::to_string(line) + ": trailing fields");
    if (id < 0) throw std::invalid_argument("trace line " + std::to_string(line) + ": negative id");
    row.id = static_cast<RobotId>(id);
    if (action == "A") row.action = Action::Accelerate;
    else if (action == "B") row.action = Action::Brake;
    else
      throw std::invalid_argument("trace line " + std::to_string(line) + ": unknown action '" +
                                  action + "'");
    rows.push_back(row);
  }
  return rows;
}

std::vector<TraceRow> load_trace(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open trace file '" + file.string() + "'");
  return read_trace(in);
}

void write_run_metrics(std::ostream& out, const RunMetrics& m) {
  out << "[metrics]\n";
  out << "density_requested_percent = " << format_double(m.density_requested, 10) << '\n';
  out << "density_achieved_percent = " << format_double(m.density_achieved, 10) << '\n';
  out << "seed = " << m.seed << '\n';
  out << "steps = " << m.steps << '\n';
  out << "robots_spawned = " << m.spawned << '\n';
  out << "robots_completed = " << m.completed << '\n';
  out << "spawn_deferrals = " << m.deferrals << '\n';
  out << "deadlock = " << (m.deadlock ? 1 : 0) << '\n';
  out << "deadlock_step = " << m.deadlock_step << '\n';
  out << "verified = " << (m.verified ? 1 : 0) << '\n';
  out << "collision_count = " << m.collisions << '\n';
  out << "invariant_failures = " << m.invariant_failures << '\n';
  out << "priority_mismatches = " << m.priority_mismatches << '\n';
  out << "inconsistent_pairs = " << m.inconsistent_pairs << '\n';
  out << "pairs_constrained = " << m.pairs_constrained << '\n';
  out << "pairs_unconstrained = " << m.pairs_unconstrained << '\n';
  out << "mean_increase_percent = " << format_double(m.mean_increase, 10) << '\n';
  out << "max_increase_percent = " << format_double(m.max_increase, 10) << '\n';
}

void write_robot_records(std::ostream& out, const RunMetrics& m) {
  out << "id\tlane\tspawn_step\texit_step\tideal_steps\tincrease_percent\n";
  for (const RobotRecord& r : m.robots)
    out << r.id << '\t' << r.lane << '\t' << r.spawn_step << '\t' << r.exit_step << '\t'
        << r.ideal_steps << '\t' << format_double(r.increase_percent, 10) << '\n';
}

std::vector<SweepAggregate> aggregate_sweep(const std::vector<RunMetrics>& runs,
                                            const std::vector<double>& densities) {
  std::vector<SweepAggregate> rows;
  for (double d : densities) {
    SweepAggregate agg;
    agg.density = d;
    std::vector<double> means;
    for (const RunMetrics& m : runs) {
      if (m.density_requested != d) continue;
      ++agg.runs;
      means.push_back(m.mean_increase);
      agg.achieved_mean += m.density_achieved;
      agg.deadlock_runs += m.deadlock ? 1 : 0;
      agg.collisions += m.collisions;
      agg.invariant_failures += m.invariant_failures;
      agg.priority_mismatches += m.priority_mismatches;
      agg.completed += m.completed;
    }
    if (agg.runs == 0) continue;
    agg.achieved_mean /= agg.runs;
    double sum = 0.0;
    for (double v : means) sum += v;
    agg.increase_mean = sum / static_cast<double>(means.size());
    double var = 0.0;
    for (double v : means) var += (v - agg.increase_mean) * (v - agg.increase_mean);
    agg.increase_std = means.size() > 1 ? std::sqrt(var / static_cast<double>(means.size() - 1))
                                        : 0.0;
    rows.push_back(agg);
  }
  return rows;
}

void write_sweep(std::ostream& out, const std::vector<SweepAggregate>& rows) {
  out << "density_percent\tachieved_percent_mean\tincrease_percent_mean\tincrease_percent_std\t"
         "runs\tdeadlock_runs\tcollisions\tinvariant_failures\tpriority_mismatches\tcompleted\n";
  for (const SweepAggregate& r : rows)
    out << format_double(r.density, 10) << '\t' << format_double(r.achieved_mean, 10) << '\t'
        << format_double(r.increase_mean, 10) << '\t' << format_double(r.increase_std, 10) << '\t'
        << r.runs << '\t' << r.deadlock_runs << '\t' << r.collisions << '\t'
        << r.invariant_failures << '\t' << r.priority_mismatches << '\t' << r.completed << '\n';
}

}  // namespace coord
