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

#include <catch2/catch_amalgamated.hpp>

#include <string>

using namespace smgbench;
using Catch::Approx;

TEST_CASE("every kind builds a valid scenario at every supported size", "[scenario]")
{
  for (const auto& info : list_scenarios())
  {
    for (int n = info.min_agents; n <= info.max_agents; ++n)
    {
      for (double jitter : {0.0, 0.05})
      {
        INFO(to_string(info.kind) << " n=" << n << " jitter=" << jitter);
        ScenarioParams params;
        params.n_agents = n;
        params.jitter = jitter;
        params.seed = 11;
        const Scenario scenario = build(info.kind, params);
        CHECK(scenario.kind == info.kind);
        CHECK(scenario.agents.size() == static_cast<std::size_t>(n));
        CHECK_NOTHROW(validate(scenario));
        for (std::size_t i = 0; i < scenario.agents.size(); ++i)
          CHECK(scenario.agents[i].id == static_cast<int>(i));
      }
    }
  }
}

TEST_CASE("scenario generation is deterministic per seed", "[scenario]")
{
  ScenarioParams params;
  params.jitter = 0.05;
  params.seed = 5;
  CHECK(build(ScenarioKind::Doorway, params) == build(ScenarioKind::Doorway, params));

  ScenarioParams other = params;
  other.seed = 6;
  CHECK_FALSE(build(ScenarioKind::Doorway, params).agents
    == build(ScenarioKind::Doorway, other).agents);

  // Without jitter the seed does not move anybody.
  params.jitter = 0.0;
  other.jitter = 0.0;
  CHECK(build(ScenarioKind::Hallway, params).agents
    == build(ScenarioKind::Hallway, other).agents);
}

TEST_CASE("jitter stays within its bound", "[scenario]")
{
  const Scenario base = build(ScenarioKind::Intersection, {});
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    ScenarioParams params;
    params.jitter = 0.05;
    params.seed = seed;
    const Scenario s = build(ScenarioKind::Intersection, params);
    for (std::size_t i = 0; i < s.agents.size(); ++i)
    {
      const Vec2 d = s.agents[i].start - base.agents[i].start;
      CHECK(std::abs(d.x) <= 0.05 + 1e-12);
      CHECK(std::abs(d.y) <= 0.05 + 1e-12);
    }
  }
}

TEST_CASE("default doorway is the mirrored grid layout", "[scenario]")
{
  const Scenario s = build(ScenarioKind::Doorway, {});
  REQUIRE(s.geometry.gap.has_value());
  REQUIRE(s.agents.size() == 2);
  const Gap& gap = *s.geometry.gap;
  CHECK(s.geometry.bounds.max.x == Approx(grid_cells * 0.25));
  CHECK(s.agents[0].start == Vec2{15 * 0.25, 32 * 0.25});
  CHECK(s.agents[0].goal == Vec2{45 * 0.25, 32 * 0.25});
  CHECK(gap.signed_distance(s.agents[0].start) == -gap.signed_distance(s.agents[1].start));
  CHECK(gap.signed_distance(s.agents[0].goal) > 0.0);
  CHECK(gap.signed_distance(s.agents[1].goal) < 0.0);
}

TEST_CASE("scenario parameters are checked", "[scenario]")
{
  ScenarioParams params;
  params.n_agents = 0;
  CHECK_THROWS_AS(build(ScenarioKind::Doorway, params), ScenarioError);
  params.n_agents = 9;
  CHECK_THROWS_AS(build(ScenarioKind::Crowded, params), ScenarioError);
  params.n_agents = 2;
  params.world_scale = 0.0;
  CHECK_THROWS_AS(build(ScenarioKind::Doorway, params), ScenarioError);
  params.world_scale = 0.25;
  params.gap_width = 100.0;
  CHECK_THROWS_AS(build(ScenarioKind::Doorway, params), ScenarioError);
}

TEST_CASE("validation names the failing agent", "[scenario]")
{
  Scenario s = build(ScenarioKind::Hallway, {});
  s.agents[1].start = s.agents[0].start + Vec2{0.1, 0.0};
  try
  {
    validate(s);
    FAIL("expected ScenarioError");
  }
  catch (const ScenarioError& e)
  {
    CHECK(std::string(e.what()).find("agent") != std::string::npos);
  }
}

TEST_CASE("kind names round-trip and unknown names list the choices", "[scenario]")
{
  for (const auto& info : list_scenarios())
    CHECK(scenario_kind_from_string(to_string(info.kind)) == info.kind);

  try
  {
    scenario_kind_from_string("warehouse");
    FAIL("expected std::invalid_argument");
  }
  catch (const std::invalid_argument& e)
  {
    CHECK(std::string(e.what()).find("doorway") != std::string::npos);
  }
  CHECK(list_scenarios().size() == 9);
  CHECK(list_scenarios().front().kind == ScenarioKind::Doorway);
}

TEST_CASE("removing an agent keeps the others", "[scenario]")
{
  ScenarioParams params;
  params.n_agents = 3;
  const Scenario s = build(ScenarioKind::Doorway, params);
  const Scenario reduced = without_agent(s, 1);
  REQUIRE(reduced.agents.size() == 2);
  CHECK(reduced.agents[0] == s.agents[0]);
  CHECK(reduced.agents[1] == s.agents[2]);
  CHECK(reduced.geometry == s.geometry);
  CHECK_THROWS_AS(s.agent(7), std::out_of_range);
}
