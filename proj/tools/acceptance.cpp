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
#include <smgbench/io.hpp>
#include <smgbench/metrics.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

using namespace smgbench;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point begin)
{
  return std::chrono::duration<double>(Clock::now() - begin).count();
}

struct Verdict
{
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4)
{
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

//==============================================================================
Verdict kernel_oracle()
{
  const auto begin = Clock::now();
  double worst = 0.0;
  int mismatched = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    const auto instance = oracle::random_projection_instance(seed, 5);
    const auto cmp = oracle::compare_projection(instance, 0.002);
    const double diff = std::abs(cmp.kernel_objective - cmp.oracle_objective);
    worst = std::max(worst, diff);
    if (!cmp.feasible_agrees || cmp.kernel_excess > 0.0 || diff > 1e-3)
      ++mismatched;
  }
  const double elapsed = seconds_since(begin);
  return {mismatched == 0 && elapsed < 5.0,
    "100 instances, worst objective gap " + fmt(worst) + ", "
    + std::to_string(mismatched) + " mismatches, " + fmt(elapsed, 3) + " s"};
}

//==============================================================================
Verdict metric_suite()
{
  std::vector<std::string> failures;
  const auto expect = [&](bool ok, const std::string& what)
    {
      if (!ok)
        failures.push_back(what);
    };

  Trajectory constant;
  for (int k = 0; k <= 100; ++k)
    constant.samples.push_back({Vec2{0.8, 0.3} * (k * 0.05), {0.8, 0.3}, k * 0.05});
  expect(avg_delta_v(constant) == 0.0, "avg_delta_v");

  const std::vector<Vec2> path{{0, 0}, {1, 0.5}, {3, 0}};
  expect(hausdorff_distance(path, path) == 0.0, "hausdorff identical");
  expect(std::abs(hausdorff_distance({{0, 0}, {4, 0}}, {{0, 1}, {4, 1}}) - 1.0) <= 1e-9,
    "hausdorff offset");

  const auto ratios = makespan_ratio({6.0, 9.0, 7.5});
  double smallest = 1e300;
  for (const auto& r : ratios)
    smallest = std::min(smallest, r.value_or(1e300));
  expect(smallest == 1.0, "makespan_ratio");

  expect(std::abs(flow_rate(2, 10.0, 2.0) - 0.1) <= 1e-12, "flow_rate");

  ScenarioParams single;
  single.n_agents = 1;
  for (auto kind : {ScenarioKind::Doorway, ScenarioKind::Hallway})
  {
    for (auto solver : solver_kinds())
    {
      EpisodeSettings settings;
      settings.solver.kind = solver;
      const auto report = evaluate(run_episode(build(kind, single), settings));
      expect(report.agents.at(0).invasiveness == 0.0, "single-agent invasiveness");
    }
  }

  std::string detail = "avg_delta_v, hausdorff, makespan_ratio, flow_rate, invasiveness";
  if (!failures.empty())
  {
    detail = "failed:";
    for (const auto& f : failures)
      detail += " " + f;
  }
  return {failures.empty(), detail};
}

//==============================================================================
Verdict smg_detector()
{
  ScenarioParams params;
  params.jitter = 0.0;
  const bool hallway = detect_smg(build(ScenarioKind::Hallway, params)).is_smg;

  Scenario lanes = build(ScenarioKind::Parallel, params);
  const double combined = lanes.agents[0].radius + lanes.agents[1].radius;
  lanes.agents[0].start = {3.0, 8.0};
  lanes.agents[0].goal = {13.0, 8.0};
  lanes.agents[1].start = {3.0, 8.0 + 3.0 * combined};
  lanes.agents[1].goal = {13.0, 8.0 + 3.0 * combined};
  const bool parallel = detect_smg(lanes).is_smg;

  const Scenario door = build(ScenarioKind::Doorway, params);
  const double delta = 0.2;
  const auto report = detect_smg(door, delta);
  double length = 0.0;
  if (report.window)
    length = report.window->second - report.window->first;

  const auto p0 = nominal_plan(door.agents[0], door.geometry);
  const auto p1 = nominal_plan(door.agents[1], door.geometry);
  double brute = 0.0;
  for (const auto& [a, b] : oracle::overlap_runs(
      p0.path, p1.path, door.agents[0].preferred_speed,
      door.agents[0].radius + door.agents[1].radius, 0.01))
    brute = std::max(brute, b - a);

  const bool agree = std::abs(brute - length) <= 2 * 0.05 + 0.02;
  const bool pass = hallway && !parallel && report.is_smg && length > delta
    && brute > delta && agree;
  return {pass, std::string("hallway ") + (hallway ? "smg" : "no smg")
    + ", parallel lanes " + (parallel ? "smg" : "no smg")
    + ", doorway window " + fmt(length) + " s, fine scan " + fmt(brute) + " s"};
}

//==============================================================================
BatchSpec table_batch()
{
  BatchSpec spec;
  spec.scenarios = {ScenarioKind::Doorway, ScenarioKind::Hallway,
                    ScenarioKind::Intersection};
  spec.solvers = solver_kinds();
  for (std::uint64_t s = 0; s < 20; ++s)
    spec.seeds.push_back(s);
  spec.params.n_agents = 2;
  spec.params.jitter = 0.05;
  spec.parallelism = std::max(1u, std::thread::hardware_concurrency());
  return spec;
}

const AggregateRow& row_of(
  const BatchResult& result, ScenarioKind scenario, SolverKind solver)
{
  for (const auto& row : result.rows)
  {
    if (row.scenario == scenario && row.solver == solver)
      return row;
  }
  throw std::logic_error("missing aggregate row");
}

Verdict success_rates(const BatchResult& result, double elapsed)
{
  bool pass = elapsed < 60.0;
  std::string detail;
  for (auto solver : {SolverKind::Auction, SolverKind::ImpcLite})
  {
    for (auto scenario : {ScenarioKind::Doorway, ScenarioKind::Hallway,
                          ScenarioKind::Intersection})
    {
      std::size_t successes = 0;
      std::size_t collisions = 0;
      std::size_t episodes = 0;
      for (const auto& e : result.episodes)
      {
        if (e.solver != solver || e.scenario != scenario)
          continue;
        ++episodes;
        if (e.report)
        {
          successes += e.report->success ? 1 : 0;
          collisions += e.report->collision_count;
        }
      }
      pass = pass && episodes == 20 && successes == 20 && collisions == 0;
      detail += std::string(to_string(solver)) + "/" + std::string(to_string(scenario))
        + " " + std::to_string(successes) + "/" + std::to_string(episodes);
      if (collisions > 0)
        detail += " (" + std::to_string(collisions) + " collisions)";
      detail += ", ";
    }
  }
  return {pass, detail + "batch " + fmt(elapsed, 3) + " s"};
}

//==============================================================================
Verdict deadlock_contrast()
{
  ScenarioParams params;
  params.jitter = 0.0;
  const Scenario door = build(ScenarioKind::Doorway, params);

  EpisodeSettings orca;
  orca.solver.kind = SolverKind::Orca;
  EpisodeSettings rhr = orca;
  rhr.solver.kind = SolverKind::CbfRhr;

  const EpisodeLog a = run_episode(door, orca);
  const EpisodeLog b = run_episode(door, rhr);
  const bool repeatable = run_episode(door, orca) == a && run_episode(door, rhr) == b;

  const bool orca_stuck = !a.deadlock_flags.empty() || a.termination == Termination::Timeout;
  const bool rhr_done = b.termination == Termination::AllGoals && b.collisions.empty();
  return {orca_stuck && rhr_done && repeatable,
    "orca " + std::string(to_string(a.termination)) + " with "
    + std::to_string(a.deadlock_flags.size()) + " deadlock flags, cbf_rhr "
    + std::string(to_string(b.termination))
    + (repeatable ? ", repeatable" : ", not repeatable")};
}

//==============================================================================
Scenario priority_doorway(double phi0, double phi1)
{
  ScenarioParams params;
  params.jitter = 0.05;
  params.seed = 0;
  Scenario door = build(ScenarioKind::Doorway, params);
  door.agents[0].priority = phi0;
  door.agents[1].priority = phi1;
  return door;
}

/// Agent ids ordered by their first crossing of the gap plane.
std::vector<int> crossing_order(const EpisodeLog& log)
{
  std::vector<int> order;
  for (const auto& event : log.gap_crossings)
  {
    if (std::find(order.begin(), order.end(), event.agent_id) == order.end())
      order.push_back(event.agent_id);
  }
  return order;
}

Verdict priority_ordering()
{
  EpisodeSettings settings;
  settings.solver.kind = SolverKind::Auction;

  const auto order = [&](double phi0, double phi1)
    {
      return crossing_order(run_episode(priority_doorway(phi0, phi1), settings));
    };
  const auto text = [](const std::vector<int>& ids)
    {
      std::string s;
      for (int id : ids)
        s += (s.empty() ? "" : ",") + std::to_string(id);
      return "(" + s + ")";
    };

  const auto high_first = order(2.0, 1.0);
  const auto low_first = order(1.0, 2.0);
  const auto scaled = order(20.0, 10.0);
  const bool pass = high_first == std::vector<int>{0, 1}
    && low_first == std::vector<int>{1, 0}
    && scaled == high_first;
  return {pass, "phi=(2,1) order " + text(high_first) + ", phi=(1,2) order "
    + text(low_first) + ", phi=(20,10) order " + text(scaled)};
}

//==============================================================================
Verdict welfare_gap()
{
  const Scenario door = priority_doorway(2.0, 1.0);
  EpisodeSettings settings;
  settings.solver.kind = SolverKind::Auction;

  const auto consistent = social_welfare_gap(run_episode(door, settings));
  settings.solver.forced_ranking = {1, 0};
  const auto reverse = social_welfare_gap(run_episode(door, settings));

  const bool pass = consistent.value && *consistent.value <= 1e-6
    && reverse.value && *reverse.value > 0.0;
  return {pass, "consistent SWG " + fmt(consistent.value.value_or(NAN))
    + ", reversed SWG " + fmt(reverse.value.value_or(NAN))};
}

//==============================================================================
Verdict determinism(const BatchSpec& spec, const BatchResult& reference)
{
  const fs::path root = fs::temp_directory_path() / "smgbench_acceptance";
  fs::remove_all(root);

  bool episodes_match = true;
  for (auto kind : {ScenarioKind::Doorway, ScenarioKind::Intersection})
  {
    for (auto solver : solver_kinds())
    {
      RunConfig config;
      config.scenario = kind;
      config.params.jitter = 0.05;
      config.params.seed = 7;
      config.settings.solver.kind = solver;
      const std::string name = config.run_name() + "_" + std::string(to_string(solver));

      const fs::path first = root / "first" / name;
      write_episode(run_episode(config.make_scenario(), config.settings), first,
        to_json(config));

      // Reproduce from the logged metadata alone.
      const RunConfig logged = load_run_config(first / "meta.json");
      const fs::path second = root / "second" / name;
      write_episode(run_episode(logged.make_scenario(), logged.settings), second,
        to_json(logged));

      for (const auto& a : config.make_scenario().agents)
      {
        episodes_match = episodes_match
          && slurp(first / trajectory_file(a.id)) == slurp(second / trajectory_file(a.id));
      }
      episodes_match = episodes_match
        && slurp(first / "meta.json") == slurp(second / "meta.json");
    }
  }

  const std::string csv = aggregate_csv(reference);
  const bool rerun = aggregate_csv(run_batch(spec)) == csv;

  BatchSpec shuffled = spec;
  std::reverse(shuffled.seeds.begin(), shuffled.seeds.end());
  std::rotate(shuffled.seeds.begin(), shuffled.seeds.begin() + 7, shuffled.seeds.end());
  shuffled.parallelism = 1;
  const bool shuffle = aggregate_csv(run_batch(shuffled)) == csv;

  fs::remove_all(root);
  return {episodes_match && rerun && shuffle,
    std::string("trajectory CSVs ") + (episodes_match ? "identical" : "differ")
    + ", aggregate rerun " + (rerun ? "identical" : "differs")
    + ", shuffled seeds " + (shuffle ? "identical" : "differ")};
}

//==============================================================================
Verdict flow_ordering(const BatchResult& result)
{
  const std::size_t column = static_cast<std::size_t>(
    std::find(aggregate_metric_names().begin(), aggregate_metric_names().end(),
    "flow_rate") - aggregate_metric_names().begin());
  const auto& impc = row_of(result, ScenarioKind::Doorway, SolverKind::ImpcLite)
    .metrics.at(column);
  const auto& orca = row_of(result, ScenarioKind::Doorway, SolverKind::Orca)
    .metrics.at(column);
  return {impc.count > 0 && orca.count > 0 && impc.mean > orca.mean,
    "doorway flow rate impc_lite " + fmt(impc.mean) + " vs orca " + fmt(orca.mean)
    + " agents/(m s)"};
}

} // anonymous namespace

int main()
{
  int failures = 0;
  const auto report = [&](int number, const std::string& name, const Verdict& v)
    {
      std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << " "
                << name << ": " << v.detail << std::endl;
      failures += v.pass ? 0 : 1;
    };
  const auto guarded = [](const std::function<Verdict()>& check)
    {
      try
      {
        return check();
      }
      catch (const std::exception& e)
      {
        return Verdict{false, std::string("exception: ") + e.what()};
      }
    };

  report(1, "kernel-oracle equivalence", guarded(kernel_oracle));
  report(2, "metric unit suite", guarded(metric_suite));
  report(3, "SMG detector", guarded(smg_detector));

  const BatchSpec spec = table_batch();
  const auto begin = Clock::now();
  BatchResult batch;
  std::string batch_error;
  try
  {
    batch = run_batch(spec);
  }
  catch (const std::exception& e)
  {
    batch_error = e.what();
  }
  const double elapsed = seconds_since(begin);
  const auto with_batch = [&](const std::function<Verdict()>& check)
    {
      if (!batch_error.empty())
        return Verdict{false, "batch failed: " + batch_error};
      return check();
    };

  report(4, "success-rate reproduction",
    guarded([&] { return with_batch([&] { return success_rates(batch, elapsed); }); }));
  report(5, "deadlock contrast", guarded(deadlock_contrast));
  report(6, "priority ordering", guarded(priority_ordering));
  report(7, "SWG consistency", guarded(welfare_gap));
  report(8, "determinism",
    guarded([&] { return with_batch([&] { return determinism(spec, batch); }); }));
  report(9, "flow-rate ordering",
    guarded([&] { return with_batch([&] { return flow_ordering(batch); }); }));

  std::cout << (failures == 0 ? "all criteria passed" :
    std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
