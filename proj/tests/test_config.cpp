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


#include <smgbench/config.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

using namespace smgbench;
namespace fs = std::filesystem;

TEST_CASE("run configs round-trip through JSON", "[config]")
{
  RunConfig config;
  config.name = "custom";
  config.scenario = ScenarioKind::Intersection;
  config.params.n_agents = 3;
  config.params.jitter = 0.02;
  config.agents.push_back({1, Vec2{4.0, 8.5}, std::nullopt, 2.0});
  config.settings.solver.kind = SolverKind::CbfRhr;
  config.settings.t_max = 12.5;
  config.metrics.counterfactuals = false;
  config.output_dir = "elsewhere";

  CHECK(run_config_from_json(to_json(config)) == config);

  const fs::path dir = fs::temp_directory_path() / "smgbench_config";
  fs::remove_all(dir);
  write_text_file(dir / "run.json", dump(to_json(config)));
  CHECK(load_run_config(dir / "run.json") == config);
}

TEST_CASE("default run names follow the scenario and size", "[config]")
{
  RunConfig config;
  CHECK(config.run_name() == "doorway_2_robots");
  config.params.n_agents = 3;
  config.scenario = ScenarioKind::Hallway;
  CHECK(config.run_name() == "hallway_3_robots");
  config.name = "mine";
  CHECK(config.run_name() == "mine");
}

TEST_CASE("agent overrides replace generated values", "[config]")
{
  RunConfig config;
  config.agents.push_back({0, Vec2{3.0, 7.5}, Vec2{12.0, 8.5}, 4.0});
  const Scenario scenario = config.make_scenario();
  CHECK(scenario.agents[0].start == Vec2{3.0, 7.5});
  CHECK(scenario.agents[0].goal == Vec2{12.0, 8.5});
  CHECK(scenario.agents[0].priority == 4.0);
  CHECK(scenario.agents[1] == build(ScenarioKind::Doorway, config.params).agents[1]);

  config.agents = {{5, Vec2{3.0, 8.0}, std::nullopt, std::nullopt}};
  CHECK_THROWS_AS(config.make_scenario(), ScenarioError);

  // A start inside a wall fails validation.
  config.agents = {{0, Vec2{7.6, 2.0}, std::nullopt, std::nullopt}};
  CHECK_THROWS_AS(config.make_scenario(), ScenarioError);
}

TEST_CASE("config readers report the offending field", "[config]")
{
  Json json = to_json(RunConfig{});
  json["settings"]["solver"]["kind"] = "teleport";
  CHECK_THROWS(run_config_from_json(json));

  json = to_json(RunConfig{});
  json["params"]["robots"] = 3;
  try
  {
    run_config_from_json(json);
    FAIL("expected FormatError");
  }
  catch (const FormatError& e)
  {
    CHECK(std::string(e.what()).find("params.robots") != std::string::npos);
  }
}

TEST_CASE("episode metadata doubles as a config", "[config]")
{
  RunConfig config;
  config.settings.solver.kind = SolverKind::Auction;
  config.metrics.counterfactuals = false;
  const EpisodeLog log = run_episode(config.make_scenario(), config.settings);

  const fs::path dir = fs::temp_directory_path() / "smgbench_config_meta";
  fs::remove_all(dir);
  write_episode(log, dir, to_json(config));
  CHECK(load_run_config(dir / "meta.json") == config);
}
