/*
 * Copyright (C) 2026 smgbench contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include <smgbench/batch.hpp>
#include <smgbench/config.hpp>

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace smgbench;
namespace fs = std::filesystem;

/// Command-line failure reported with exit status 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
std::string fmt(double v, int digits = 4)
{
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v == 0.0 ? 0.0 : v);
  return buffer;
}

bool all_digits(const std::string& s)
{
  if (s.empty())
    return false;
  for (const unsigned char c : s)
  {
    if (!std::isdigit(c))
      return false;
  }
  return true;
}

std::string method_list()
{
  std::string out;
  int i = 1;
  for (const auto kind : solver_kinds())
  {
    if (!out.empty())
      out += ", ";
    out += std::to_string(i++) + ". " + std::string(to_string(kind));
  }
  return out;
}

std::string environment_list()
{
  std::string out;
  int i = 1;
  for (const auto& info : list_scenarios())
  {
    if (!out.empty())
      out += ", ";
    out += std::to_string(i++) + ". " + std::string(to_string(info.kind));
  }
  return out;
}

/// A solver given by name or by its 1-based menu number.
SolverKind parse_solver(const std::string& text)
{
  const auto& kinds = solver_kinds();
  if (all_digits(text))
  {
    const auto index = std::stoul(text);
    if (index < 1 || index > kinds.size())
    {
      throw UsageError(
              "invalid method number " + text + "; valid methods: " + method_list());
    }
    return kinds[index - 1];
  }
  try
  {
    return solver_kind_from_string(text);
  }
  catch (const std::exception& e)
  {
    throw UsageError(std::string(e.what()) + "; valid methods: " + method_list());
  }
}

/// A scenario given by name or by its 1-based menu number.
ScenarioKind parse_scenario(const std::string& text)
{
  const auto& infos = list_scenarios();
  if (all_digits(text))
  {
    const auto index = std::stoul(text);
    if (index < 1 || index > infos.size())
    {
      throw UsageError(
              "invalid environment number " + text + "; valid environments: "
              + environment_list());
    }
    return infos[index - 1].kind;
  }
  try
  {
    return scenario_kind_from_string(text);
  }
  catch (const std::exception& e)
  {
    throw UsageError(
            std::string(e.what()) + "; valid environments: " + environment_list());
  }
}

/// Output root: the --out flag, then SMG_OUT_DIR, then the configured value.
std::string output_root(const std::string& flag, const std::string& configured)
{
  if (!flag.empty())
    return flag;
  if (const char* env = std::getenv("SMG_OUT_DIR"); env && *env)
    return env;
  return configured;
}

//==============================================================================
/// Line-oriented prompts on stdin with validation and re-prompting.
class Prompter
{
public:
  explicit Prompter(std::istream& in, std::ostream& out)
  : _in(in),
    _out(out)
  {}

  std::string line(const std::string& prompt)
  {
    _out << prompt << std::flush;
    std::string text;
    if (!std::getline(_in, text))
      throw UsageError("interactive input ended unexpectedly");
    _out << "\n";
    const auto first = text.find_first_not_of(" \t\r");
    const auto last = text.find_last_not_of(" \t\r");
    return first == std::string::npos ? "" : text.substr(first, last - first + 1);
  }

  int integer(const std::string& prompt, int lo, int hi)
  {
    for (;;)
    {
      const std::string text = line(prompt);
      if (all_digits(text))
      {
        const int v = std::stoi(text);
        if (v >= lo && v <= hi)
          return v;
      }
      _out << "Please enter a number between " << lo << " and " << hi << ".\n";
    }
  }

  /// Returns nullopt when the user accepts the default with an empty line.
  std::optional<double> coordinate(const std::string& prompt, double lo, double hi)
  {
    for (;;)
    {
      const std::string text = line(prompt);
      if (text.empty())
        return std::nullopt;
      double v = 0.0;
      std::istringstream parse(text);
      if (parse >> v && parse.eof() && v >= lo && v <= hi)
        return v;
      _out << "Out of bounds: enter a value between " << fmt(lo, 0) << " and "
           << fmt(hi, 0) << ".\n";
    }
  }

private:
  std::istream& _in;
  std::ostream& _out;
};

void interactive_setup(RunConfig& config, std::istream& in, std::ostream& out)
{
  Prompter ask(in, out);

  out << "Welcome to the Multi-Agent Navigation Simulator\n"
      << "==============================================\n\n"
      << "Available Methods:\n";
  const auto& kinds = solver_kinds();
  for (std::size_t i = 0; i < kinds.size(); ++i)
    out << i + 1 << ". " << to_string(kinds[i]) << "\n";
  out << "\n";
  config.settings.solver.kind = kinds[static_cast<std::size_t>(
      ask.integer("Enter method number (1-" + std::to_string(kinds.size()) + "): ",
      1, static_cast<int>(kinds.size())) - 1)];

  out << "Available environments:\n";
  const auto& infos = list_scenarios();
  for (std::size_t i = 0; i < infos.size(); ++i)
    out << i + 1 << ". " << to_string(infos[i].kind) << "\n";
  out << "\n";
  const auto& info = infos[static_cast<std::size_t>(
      ask.integer("Enter environment type (1-" + std::to_string(infos.size()) + "): ",
      1, static_cast<int>(infos.size())) - 1)];
  config.scenario = info.kind;

  config.params.n_agents = ask.integer(
    "Enter number of robots (" + std::to_string(info.min_agents) + "-"
    + std::to_string(info.max_agents) + "): ",
    info.min_agents, info.max_agents);
  config.agents.clear();

  const double scale = config.params.world_scale;
  const double hi = grid_cells - 1.0;
  const Scenario generated = build(config.scenario, config.params);
  std::string title(to_string(config.scenario));
  title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(title[0])));

  out << "\n" << title << " Configuration:\n";
  if (const auto& gap = generated.geometry.gap)
  {
    const double along = std::abs(gap->normal.x) > 0.5 ? gap->center.y : gap->center.x;
    const double across = std::abs(gap->normal.x) > 0.5 ? gap->center.x : gap->center.y;
    const char* wall_axis = std::abs(gap->normal.x) > 0.5 ? "x" : "y";
    const char* gap_axis = std::abs(gap->normal.x) > 0.5 ? "y" : "x";
    out << "- The " << to_string(config.scenario) << " has walls at " << wall_axis
        << "=" << fmt(across / scale - 0.5, 0) << "-" << fmt(across / scale + 0.5, 0)
        << " with a gap at " << gap_axis << "="
        << fmt((along - 0.5 * gap->width) / scale, 0) << "-"
        << fmt((along + 0.5 * gap->width) / scale, 0) << "\n";
  }
  out << "- World scale: " << fmt(scale, 4) << " m per grid cell\n"
      << "- Y coordinates should be between 0 and " << fmt(hi, 0) << "\n"
      << "- X coordinates should be between 0 and " << fmt(hi, 0) << "\n"
      << "- Press enter to keep the generated default\n\n";

  for (const auto& spec : generated.agents)
  {
    const int n = spec.id + 1;
    const std::string robot = " for robot " + std::to_string(n);
    const auto prompt = [&](const char* what, double current)
      {
        return std::string("Enter ") + what + " position (0-" + fmt(hi, 0) + ")"
               + robot + " [" + fmt(current / scale, 1) + "]: ";
      };

    out << "Robot " << n << " configuration:\n";
    AgentOverride o;
    o.id = spec.id;
    const auto sx = ask.coordinate(prompt("start X", spec.start.x), 0.0, hi);
    const auto sy = ask.coordinate(prompt("start Y", spec.start.y), 0.0, hi);
    const auto gx = ask.coordinate(prompt("goal X", spec.goal.x), 0.0, hi);
    const auto gy = ask.coordinate(prompt("goal Y", spec.goal.y), 0.0, hi);

    Vec2 start = spec.start;
    Vec2 goal = spec.goal;
    if (sx || sy)
    {
      start = {sx ? *sx * scale : spec.start.x, sy ? *sy * scale : spec.start.y};
      o.start = start;
    }
    if (gx || gy)
    {
      goal = {gx ? *gx * scale : spec.goal.x, gy ? *gy * scale : spec.goal.y};
      o.goal = goal;
    }
    out << "Robot " << n << " will move from (" << fmt(start.x / scale, 1) << ", "
        << fmt(start.y / scale, 1) << ") to (" << fmt(goal.x / scale, 1) << ", "
        << fmt(goal.y / scale, 1) << ")\n\n";
    if (o.start || o.goal)
      config.agents.push_back(o);
  }
}

//==============================================================================
void print_report(const EpisodeLog& log, const MetricsReport& report, std::ostream& out)
{
  const std::string stars(48, '*');
  out << "Evaluating trajectories...\n\n";
  for (const auto& a : report.agents)
  {
    const std::string robot = "Robot " + std::to_string(a.id);
    out << "Evaluating " << robot << " trajectory:\n"
        << stars << "\n"
        << robot << " Path Deviation Metrics:\n"
        << "Hausdorff distance: " << fmt(a.path_deviation) << "\n"
        << stars << "\n"
        << stars << "\n"
        << robot << " Avg delta velocity: " << fmt(a.avg_delta_v) << "\n"
        << robot << " Time to goal: "
        << (a.ttg ? fmt(*a.ttg) : std::string("not reached")) << "\n"
        << robot << " Makespan ratio: "
        << (a.makespan_ratio ? fmt(*a.makespan_ratio) : std::string("n/a")) << "\n"
        << robot << " Invasiveness: "
        << (a.invasiveness ? fmt(*a.invasiveness) : std::string("n/a"))
        << (a.invasiveness_degraded ? " (degraded counterfactual)" : "") << "\n"
        << stars << "\n\n";
  }

  out << "Termination: " << to_string(report.termination) << "\n"
      << "Success: " << (report.success ? "yes" : "no") << "\n"
      << "Collisions: " << report.collision_count << "\n"
      << "Deadlock: " << (report.deadlock_occurred ? "yes" : "no") << "\n"
      << "Social mini-game: " << (log.smg.is_smg ? "yes" : "no") << "\n";
  if (report.flow_rate)
  {
    out << "Flow rate (" << to_string(report.flow_time) << "): "
        << fmt(*report.flow_rate) << "\n";
  }
  out << "Social welfare: " << fmt(report.social_welfare) << "\n"
      << "Social welfare gap: "
      << (report.social_welfare_gap ? fmt(*report.social_welfare_gap)
        : "n/a (" + report.social_welfare_gap_note + ")")
      << "\n";
  if (!log.diagnostic.empty())
    out << "Diagnostic: " << log.diagnostic << "\n";
}

//==============================================================================
struct RunOptions
{
  std::string config;
  std::string scenario;
  std::string solver;
  std::optional<int> robots;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> tmax;
  std::string out;
  bool interactive = false;
};

int cmd_run(const RunOptions& opt)
{
  RunConfig config;
  if (!opt.config.empty())
    config = load_run_config(opt.config);
  if (!opt.scenario.empty())
    config.scenario = parse_scenario(opt.scenario);
  if (!opt.solver.empty())
    config.settings.solver.kind = parse_solver(opt.solver);
  if (opt.robots)
    config.params.n_agents = *opt.robots;
  if (opt.seed)
    config.params.seed = *opt.seed;
  if (opt.dt)
    config.settings.dt = *opt.dt;
  if (opt.tmax)
    config.settings.t_max = *opt.tmax;
  if (opt.interactive)
    interactive_setup(config, std::cin, std::cout);
  config.output_dir = output_root(opt.out, config.output_dir);

  const Scenario scenario = config.make_scenario();
  config.settings.validate();

  const fs::path root(config.output_dir);
  const std::string name = config.run_name();
  const fs::path config_path = root / ("config_" + name + ".json");
  write_text_file(config_path, dump(to_json(config)));
  std::cout << "Configuration saved to " << config_path.generic_string() << "\n\n"
            << "Running " << to_string(config.settings.solver.kind)
            << " simulation\n"
            << "=============================\n\n"
            << "Using configuration file: " << config_path.generic_string() << "\n\n"
            << "Running simulation with " << scenario.agents.size()
            << " robots...\n\n";

  const EpisodeLog log = run_episode(scenario, config.settings);
  const fs::path log_dir = root / "logs" / name;
  write_episode(log, log_dir, to_json(config));
  std::cout << "Log file generated: " << (log_dir / "meta.json").generic_string() << "\n"
            << "Trajectory CSV files generated in: "
            << (log_dir / "trajectories").generic_string() << "\n\n";

  const MetricsReport report = evaluate(log, config.metrics);
  write_text_file(log_dir / "metrics.json", dump(to_json(report)));
  print_report(log, report, std::cout);
  std::cout << "\nMetrics saved to " << (log_dir / "metrics.json").generic_string()
            << "\n";
  return 0;
}

//==============================================================================
int cmd_eval(const std::string& dir, const std::string& json_out)
{
  const fs::path log_dir(dir);
  const EpisodeLog log = read_episode(log_dir);

  MetricsOptions options;
  const Json meta = read_json_file(log_dir / "meta.json");
  if (meta.contains("config"))
    options = run_config_from_json(meta.at("config")).metrics;

  const MetricsReport report = evaluate(log, options);
  print_report(log, report, std::cout);
  if (!json_out.empty())
  {
    write_text_file(json_out, dump(to_json(report)));
    std::cout << "\nMetrics saved to " << json_out << "\n";
  }
  return 0;
}

//==============================================================================
struct BatchOptions
{
  std::string config;
  std::vector<std::string> scenarios;
  std::vector<std::string> solvers;
  std::optional<int> robots;
  std::optional<std::uint64_t> seeds;
  std::optional<std::uint64_t> first_seed;
  std::optional<double> dt;
  std::optional<double> tmax;
  std::optional<unsigned> jobs;
  std::string out;
};

int cmd_batch(const BatchOptions& opt)
{
  BatchSpec spec;
  if (!opt.config.empty())
    spec = load_batch_spec(opt.config);
  if (!opt.scenarios.empty())
  {
    spec.scenarios.clear();
    for (const auto& s : opt.scenarios)
      spec.scenarios.push_back(parse_scenario(s));
  }
  if (!opt.solvers.empty())
  {
    spec.solvers.clear();
    for (const auto& s : opt.solvers)
      spec.solvers.push_back(parse_solver(s));
  }
  if (opt.seeds || opt.first_seed)
  {
    spec.seeds.clear();
    const std::uint64_t first = opt.first_seed.value_or(0);
    for (std::uint64_t k = 0; k < opt.seeds.value_or(20); ++k)
      spec.seeds.push_back(first + k);
  }
  if (opt.robots)
    spec.params.n_agents = *opt.robots;
  if (opt.dt)
    spec.settings.dt = *opt.dt;
  if (opt.tmax)
    spec.settings.t_max = *opt.tmax;
  if (opt.jobs)
    spec.parallelism = *opt.jobs;

  try
  {
    spec.validate();
  }
  catch (const std::invalid_argument& e)
  {
    throw UsageError(e.what());
  }

  const BatchResult result = run_batch(spec);
  const fs::path results = fs::path(output_root(opt.out, "out")) / "results";
  const std::string table = render_table(result);
  write_text_file(results / "aggregate.csv", aggregate_csv(result));
  write_text_file(results / "episodes.csv", episodes_csv(result));
  write_text_file(results / "table.txt", table);
  write_text_file(results / "batch.json", dump(to_json(spec)));

  std::cout << table << "\n"
            << "Aggregate table written to "
            << (results / "aggregate.csv").generic_string() << "\n";
  for (const auto& e : result.episodes)
  {
    if (!e.error.empty())
    {
      std::cout << "episode " << to_string(e.scenario) << "/" << to_string(e.solver)
                << "/seed " << e.seed << " failed: " << e.error << "\n";
    }
  }
  return 0;
}

//==============================================================================
int cmd_list()
{
  int i = 1;
  for (const auto& info : list_scenarios())
  {
    std::cout << i++ << ". " << to_string(info.kind) << " (" << info.min_agents
              << "-" << info.max_agents << " robots)\n"
              << "   " << info.description << "\n";
    for (const auto& p : info.parameters)
    {
      std::cout << "   - " << p.name;
      if (!p.unit.empty())
        std::cout << " [" << p.unit << "]";
      std::cout << ": " << p.description << "\n";
    }
  }
  return 0;
}

} // anonymous namespace

//==============================================================================
int main(int argc, char** argv)
{
  CLI::App app{"Social mini-game benchmark for multi-robot navigation"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one episode and evaluate it");
  run_cmd->add_option("--config", run.config, "Run config JSON or an episode meta.json");
  run_cmd->add_option("--scenario", run.scenario, "Scenario name or number");
  run_cmd->add_option("--solver", run.solver, "Solver name or method number");
  run_cmd->add_option("--robots", run.robots, "Number of robots");
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--dt", run.dt, "Time step in seconds");
  run_cmd->add_option("--tmax", run.tmax, "Episode time limit in seconds");
  run_cmd->add_option("--out", run.out, "Output root directory");
  run_cmd->add_flag("--interactive", run.interactive, "Prompt for the setup");

  BatchOptions batch;
  auto* batch_cmd = app.add_subcommand("batch", "Run a scenario x solver x seed grid");
  batch_cmd->add_option("--config", batch.config, "Batch spec JSON");
  batch_cmd->add_option("--scenario", batch.scenarios, "Scenario names (repeatable)");
  batch_cmd->add_option("--solver", batch.solvers, "Solver names (repeatable)");
  batch_cmd->add_option("--robots", batch.robots, "Number of robots");
  batch_cmd->add_option("--seeds", batch.seeds, "Number of seeds");
  batch_cmd->add_option("--seed", batch.first_seed, "First seed");
  batch_cmd->add_option("--dt", batch.dt, "Time step in seconds");
  batch_cmd->add_option("--tmax", batch.tmax, "Episode time limit in seconds");
  batch_cmd->add_option("--jobs", batch.jobs, "Concurrent episodes");
  batch_cmd->add_option("--out", batch.out, "Output root directory");

  std::string eval_dir;
  std::string eval_json;
  auto* eval_cmd = app.add_subcommand("eval", "Recompute metrics from an episode log");
  eval_cmd->add_option("log", eval_dir, "Episode log directory")->required();
  eval_cmd->add_option("--json", eval_json, "Write the metrics report as JSON");

  auto* list_cmd = app.add_subcommand("list-scenarios", "Describe the scenarios");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*run_cmd)
      return cmd_run(run);
    if (*batch_cmd)
      return cmd_batch(batch);
    if (*eval_cmd)
      return cmd_eval(eval_dir, eval_json);
    if (*list_cmd)
      return cmd_list();
  }
  catch (const UsageError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
