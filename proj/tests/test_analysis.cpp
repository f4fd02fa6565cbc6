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


#include <smgbench/analysis.hpp>
#include <smgbench/scenario.hpp>

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace smgbench;
using Catch::Approx;

namespace {

Scenario parallel_lanes(double separation)
{
  ScenarioParams params;
  Scenario scenario = build(ScenarioKind::Parallel, params);
  scenario.agents[0].start = {3.0, 8.0};
  scenario.agents[0].goal = {13.0, 8.0};
  scenario.agents[1].start = {3.0, 8.0 + separation};
  scenario.agents[1].goal = {13.0, 8.0 + separation};
  validate(scenario);
  return scenario;
}

} // anonymous namespace

TEST_CASE("nominal plan in free space is the straight segment", "[analysis]")
{
  WorldGeometry world;
  world.bounds = {{0, 0}, {10, 10}};
  AgentSpec spec;
  spec.start = {1, 1};
  spec.goal = {4, 5};

  const auto plan = nominal_plan(spec, world, {0.1, 0.05});
  CHECK(plan.path.size() == 2);
  CHECK(plan.duration == Approx(5.0));
  CHECK(plan.trajectory.samples.front().position == spec.start);
  CHECK(plan.trajectory.samples.back().position == spec.goal);
  CHECK(plan.trajectory.samples.size() == 51);
}

TEST_CASE("nominal plan around walls keeps clearance", "[analysis]")
{
  for (auto kind : {ScenarioKind::Doorway, ScenarioKind::LCorner,
                    ScenarioKind::BlindCorner, ScenarioKind::Intersection})
  {
    INFO(to_string(kind));
    const Scenario scenario = build(kind, {});
    for (const auto& agent : scenario.agents)
    {
      const auto plan = nominal_plan(agent, scenario.geometry);
      CHECK(plan.path.front() == agent.start);
      CHECK(plan.path.back() == agent.goal);
      CHECK(plan.duration == Approx(path_length(plan.path) / agent.preferred_speed));
      for (const auto& s : plan.trajectory.samples)
        CHECK(scenario.geometry.clearance(s.position) >= agent.radius - 1e-9);

      // The path never beats the straight line.
      CHECK(path_length(plan.path) >= (agent.goal - agent.start).norm() - 1e-12);
    }
  }
}

TEST_CASE("unreachable goals are reported", "[analysis]")
{
  WorldGeometry world;
  world.bounds = {{0, 0}, {10, 10}};
  world.obstacles = {{{5, -1}, {5, 11}}};
  AgentSpec spec;
  spec.start = {1, 5};
  spec.goal = {9, 5};
  CHECK_THROWS_AS(nominal_plan(spec, world), UnreachableGoal);
}

TEST_CASE("head-on hallway is a social mini-game", "[analysis]")
{
  ScenarioParams params;
  params.jitter = 0.0;
  const auto report = detect_smg(build(ScenarioKind::Hallway, params));
  CHECK(report.is_smg);
  REQUIRE(report.conflicting_pairs.size() == 1);
  CHECK(report.conflicting_pairs[0] == std::pair{0, 1});
  REQUIRE(report.coupling_sets.size() == 1);
  CHECK(report.coupling_sets[0].members == std::vector<int>{0, 1});
}

TEST_CASE("parallel lanes at three times the combined radius are not", "[analysis]")
{
  const auto report = detect_smg(parallel_lanes(3.0 * 0.5));
  CHECK_FALSE(report.is_smg);
  CHECK_FALSE(report.window.has_value());
  CHECK(report.coupling_sets.empty());

  // Just beyond the combined radius is still clear.
  CHECK_FALSE(detect_smg(parallel_lanes(0.51)).is_smg);
}

TEST_CASE("doorway window agrees with a fine brute-force overlap scan", "[analysis]")
{
  const Scenario scenario = build(ScenarioKind::Doorway, {});
  const double delta = 0.2;
  const auto report = detect_smg(scenario, delta);
  REQUIRE(report.is_smg);
  REQUIRE(report.window.has_value());
  const auto [a, b] = *report.window;
  CHECK(b - a > delta);

  const auto p0 = nominal_plan(scenario.agents[0], scenario.geometry);
  const auto p1 = nominal_plan(scenario.agents[1], scenario.geometry);
  const double reach = scenario.agents[0].radius + scenario.agents[1].radius;
  const auto runs = oracle::overlap_runs(p0.path, p1.path, 1.0, reach, 0.01);

  std::vector<std::pair<double, double>> long_runs;
  for (const auto& r : runs)
  {
    if (r.second - r.first > delta)
      long_runs.push_back(r);
  }
  REQUIRE(long_runs.size() == 1);

  // The detector samples at 0.05 s, so its endpoints sit within one coarse
  // step of the fine scan.
  CHECK(std::abs(long_runs[0].first - a) <= 0.05 + 0.01);
  CHECK(std::abs(long_runs[0].second - b) <= 0.05 + 0.01);
}

TEST_CASE("short touches below delta do not qualify", "[analysis]")
{
  AgentSpec a;
  a.id = 0;
  a.start = {0, 0};
  a.goal = {4, 0};
  AgentSpec b;
  b.id = 1;
  b.start = {2, -2};
  b.goal = {2, 2};

  WorldGeometry world;
  world.bounds = {{-5, -5}, {5, 5}};
  const auto pa = nominal_plan(a, world);
  const auto pb = nominal_plan(b, world);

  // The discs overlap for about 0.7 s around t = 2.
  CHECK(detect_smg({a, b}, {pa, pb}, 0.2, 0.05).is_smg);
  CHECK_FALSE(detect_smg({a, b}, {pa, pb}, 1.0, 0.05).is_smg);
  CHECK_THROWS_AS(detect_smg({a, b}, {pa, pb}, 0.0, 0.05), std::invalid_argument);
}

TEST_CASE("three agents through one doorway form one coupling set", "[analysis]")
{
  ScenarioParams params;
  params.n_agents = 3;
  const auto report = detect_smg(build(ScenarioKind::Doorway, params));
  CHECK(report.is_smg);
  bool all_three = false;
  for (const auto& c : report.coupling_sets)
    all_three = all_three || c.members == std::vector<int>{0, 1, 2};
  CHECK(all_three);
  for (const auto& c : report.coupling_sets)
    CHECK(std::is_sorted(c.members.begin(), c.members.end()));
}
