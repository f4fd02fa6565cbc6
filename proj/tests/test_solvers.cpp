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


#include <smgbench/harness.hpp>
#include <smgbench/solvers.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace smgbench;
using Catch::Approx;

namespace {

struct Pair
{
  std::vector<AgentSpec> specs;
  std::vector<AgentState> states;
};

Pair random_pair(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Pair pair;
  for (int id = 0; id < 2; ++id)
  {
    AgentSpec spec;
    spec.id = id;
    spec.radius = 0.2 + 0.1 * unit(rng);
    spec.max_speed = 1.5;
    pair.specs.push_back(spec);
  }

  const double reach = pair.specs[0].radius + pair.specs[1].radius + 0.05;
  const double gap = reach + 0.05 + 2.0 * unit(rng);
  const double theta = 6.283185307179586 * unit(rng);
  const Vec2 offset = Vec2{std::cos(theta), std::sin(theta)} * gap;

  const auto velocity = [&]
    {
      const double a = 6.283185307179586 * unit(rng);
      return Vec2{std::cos(a), std::sin(a)} * (1.2 * unit(rng));
    };
  pair.states.push_back({{0.0, 0.0}, velocity(), 0.0});
  pair.states.push_back({offset, velocity(), 0.0});
  return pair;
}

Vec2 random_target(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  return {coord(rng), coord(rng)};
}

} // anonymous namespace

TEST_CASE("velocities inside both ORCA sets stay apart over the horizon", "[solvers]")
{
  std::mt19937_64 rng(2024);
  SolverConfig config;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial)
  {
    const Pair pair = random_pair(rng);
    const auto views = make_views(pair.specs, pair.states, {}, {}, 0.0);

    std::vector<Vec2> chosen;
    bool feasible = true;
    for (const auto& view : views)
    {
      const auto planes = orca_constraints(view, config, 0.05);
      const auto r = project(random_target(rng), planes, view.self.max_speed);
      feasible = feasible && r.feasible;
      chosen.push_back(r.u_star);
    }
    if (!feasible)
      continue;
    ++checked;

    const double reach = pair.specs[0].radius + pair.specs[1].radius;
    const Vec2 dp = pair.states[1].position - pair.states[0].position;
    const Vec2 dv = chosen[1] - chosen[0];
    for (int k = 0; k <= 400; ++k)
    {
      const double t = config.time_horizon * k / 400.0;
      CHECK((dp + dv * t).norm() >= reach - 1e-6);
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("CBF shares add up to the pairwise barrier condition", "[solvers]")
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SolverConfig config;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial)
  {
    const Pair pair = random_pair(rng);
    const auto views = make_views(pair.specs, pair.states, {}, {}, 0.0);
    const double w = unit(rng);

    const auto planes_i = cbf_constraints(views[0], config, {{1, w}});
    const auto planes_j = cbf_constraints(views[1], config, {{0, 1.0 - w}});
    const auto ri = project(random_target(rng), planes_i, 1.5);
    const auto rj = project(random_target(rng), planes_j, 1.5);
    if (!ri.feasible || !rj.feasible)
      continue;
    ++checked;

    const Vec2 p = pair.states[0].position - pair.states[1].position;
    const double safe = pair.specs[0].radius + pair.specs[1].radius
      + config.safety_margin;
    const double h = p.squared_norm() - safe * safe;
    CHECK(2.0 * p.dot(ri.u_star - rj.u_star) >= -config.cbf_alpha * h - 1e-8);
  }
  CHECK(checked > 200);
}

TEST_CASE("views respect sensing range and list neighbors by id", "[solvers]")
{
  std::vector<AgentSpec> specs(3);
  specs[0].id = 5;
  specs[1].id = 2;
  specs[2].id = 9;
  specs[0].sensing_radius = 2.0;
  specs[0].priority = 3.0;
  const std::vector<AgentState> states{
    {{0, 0}, {}, 0}, {{1, 0}, {}, 0}, {{5, 0}, {}, 0}};

  auto views = make_views(specs, states, {}, {}, 1.5);
  REQUIRE(views.size() == 3);
  CHECK(views[0].time == 1.5);
  REQUIRE(views[0].neighbors.size() == 1);
  CHECK(views[0].neighbors[0].id == 2);
  REQUIRE(views[1].neighbors.size() == 2);
  CHECK(views[1].neighbors[0].id == 5);
  CHECK(views[1].neighbors[1].id == 9);
  CHECK(views[1].neighbors[0].priority == 3.0);

  Observability hidden;
  hidden.valuations_visible = false;
  views = make_views(specs, states, {}, hidden, 0.0);
  CHECK_FALSE(views[1].neighbors[0].priority.has_value());
}

TEST_CASE("occluded neighbors are hidden", "[solvers]")
{
  std::vector<AgentSpec> specs(2);
  specs[1].id = 1;
  const std::vector<AgentState> states{{{0, 0}, {}, 0}, {{2, 0}, {}, 0}};
  WorldGeometry world;
  world.obstacles = {{{1, -1}, {1, 1}}};

  Observability occlusion;
  occlusion.occlusion = true;
  CHECK(make_views(specs, states, world, occlusion, 0.0)[0].neighbors.empty());
  CHECK(make_views(specs, states, world, {}, 0.0)[0].neighbors.size() == 1);
}

TEST_CASE("stall timer flags after the deadlock duration", "[solvers]")
{
  SolverConfig config;
  AgentSpec spec;
  spec.start = {0, 0};
  spec.goal = {5, 0};
  const std::vector<AgentSpec> specs{spec};
  std::vector<AgentState> states{{{1, 0}, {0.01, 0.0}, 0}};

  DeadlockState d;
  for (int k = 0; k < 29; ++k)
    d = detect_deadlock(specs, states, d, config, 0.05);
  CHECK(d.flagged.empty());
  d = detect_deadlock(specs, states, d, config, 0.05);
  CHECK(d.flagged.count(0) == 1);

  states[0].velocity = {1.0, 0.0};
  d = detect_deadlock(specs, states, d, config, 0.05);
  CHECK(d.flagged.empty());
  CHECK(d.stall_timer.at(0) == 0.0);

  // Resting at the goal is not a stall.
  states[0] = {{5, 0}, {}, 0};
  DeadlockState at_goal;
  for (int k = 0; k < 40; ++k)
    at_goal = detect_deadlock(specs, states, at_goal, config, 0.05);
  CHECK(at_goal.flagged.empty());
}

TEST_CASE("nominal control follows the plan and stops at the goal", "[solvers]")
{
  AgentSpec spec;
  spec.start = {0, 0};
  spec.goal = {4, 0};
  WorldGeometry world;
  world.bounds = {{-5, -5}, {5, 5}};
  const auto plan = nominal_plan(spec, world);
  SolverConfig config;

  WorldView view;
  view.self = spec;
  view.state.position = {1.0, 0.0};
  const auto u = nominal_control(view, plan, config, 0.05);
  CHECK(u.mode == ControlMode::Velocity);
  CHECK(u.value.x == Approx(spec.preferred_speed));
  CHECK(u.value.y == Approx(0.0).margin(1e-12));

  view.state.position = {3.95, 0.0};
  CHECK(nominal_control(view, plan, config, 0.05).value == Vec2{});
}

TEST_CASE("solver names and configuration checks", "[solvers]")
{
  for (auto kind : solver_kinds())
    CHECK(solver_kind_from_string(to_string(kind)) == kind);
  CHECK(solver_kinds().size() == 4);
  CHECK_THROWS_AS(solver_kind_from_string("mpc_full"), UnsupportedSolver);

  SolverConfig config;
  CHECK_NOTHROW(config.validate());
  config.time_horizon = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.velocity_scale = 1.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("bvc cells keep agents separated for one step", "[solvers]")
{
  std::mt19937_64 rng(5);
  SolverConfig config;
  for (int trial = 0; trial < 200; ++trial)
  {
    const Pair pair = random_pair(rng);
    const auto views = make_views(pair.specs, pair.states, {}, {}, 0.0);
    std::vector<Vec2> next;
    for (const auto& view : views)
    {
      const auto planes = bvc_constraints(view, config, 0.05);
      const auto r = project(random_target(rng), planes, view.self.max_speed);
      REQUIRE(r.feasible);
      next.push_back(view.state.position + r.u_star * 0.05);
    }
    const double reach = pair.specs[0].radius + pair.specs[1].radius;
    CHECK((next[0] - next[1]).norm() >= reach - 1e-9);
  }
}

TEST_CASE("auction ranks follow priorities", "[solvers]")
{
  Scenario scenario = build(ScenarioKind::Doorway, {});
  scenario.agents[0].priority = 1.0;
  scenario.agents[1].priority = 3.0;

  EpisodeSettings settings;
  settings.solver.kind = SolverKind::Auction;
  const auto plans = nominal_plans(scenario, settings);
  const auto smg = detect_smg(scenario.agents, plans, settings.smg_delta, settings.dt);
  Solver solver(settings.solver, scenario.agents, plans, smg, settings.dt);

  // Both agents approach the door from opposite sides.
  const std::vector<AgentState> states{
    {{6.9, 8.0}, {1.0, 0.0}, 2.0}, {{8.35, 8.0}, {-1.0, 0.0}, 2.0}};
  const auto views = make_views(scenario.agents, states, scenario.geometry, {}, 2.0);
  const auto controls = solver.step(views, {});
  REQUIRE(controls.size() == 2);
  REQUIRE(solver.ranks().size() == 2);
  CHECK(solver.ranks().at(1) < solver.ranks().at(0));
}
