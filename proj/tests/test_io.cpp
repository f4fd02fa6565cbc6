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


#include <smgbench/io.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace smgbench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("smgbench_io_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

EpisodeLog sample_log()
{
  ScenarioParams params;
  params.jitter = 0.05;
  params.seed = 3;
  EpisodeSettings settings;
  settings.solver.kind = SolverKind::Auction;
  return run_episode(build(ScenarioKind::Doorway, params), settings);
}

std::string expect_format_error(const fs::path& dir)
{
  try
  {
    read_episode(dir);
  }
  catch (const FormatError& e)
  {
    return e.what();
  }
  FAIL("expected FormatError");
  return {};
}

} // anonymous namespace

TEST_CASE("doubles round-trip through their shortest text", "[io]")
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> value(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i)
  {
    const double x = value(rng);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("episode logs round-trip through files", "[io]")
{
  const EpisodeLog log = sample_log();
  const fs::path dir = scratch("roundtrip");
  write_episode(log, dir);

  CHECK(fs::exists(dir / "meta.json"));
  CHECK(fs::exists(dir / trajectory_file(0)));
  CHECK(trajectory_file(1) == fs::path("trajectories/robot_1.csv"));

  const EpisodeLog back = read_episode(dir);
  CHECK(back == log);

  // Writing the re-read log reproduces the files byte for byte.
  const fs::path again = scratch("roundtrip_again");
  write_episode(back, again);
  CHECK(slurp(dir / "meta.json") == slurp(again / "meta.json"));
  CHECK(slurp(dir / trajectory_file(1)) == slurp(again / trajectory_file(1)));
}

TEST_CASE("trajectory CSV layout", "[io]")
{
  const EpisodeLog log = sample_log();
  const std::string csv = trajectory_csv(log, 1);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,agent_id,px,py,vx,vy,ux,uy");

  std::string row;
  std::size_t rows = 0;
  while (std::getline(in, row))
  {
    CHECK(std::count(row.begin(), row.end(), ',') == 7);
    ++rows;
  }
  CHECK(rows == log.steps.size());
}

TEST_CASE("truncated and malformed trajectories are rejected", "[io]")
{
  const EpisodeLog log = sample_log();
  const fs::path dir = scratch("broken");
  write_episode(log, dir);
  const fs::path csv = dir / trajectory_file(0);
  const std::string text = slurp(csv);

  write_text_file(csv, text.substr(0, text.size() / 2));
  std::string message = expect_format_error(dir);
  CHECK(message.find("robot_0.csv") != std::string::npos);

  std::string bad = text;
  bad.replace(bad.find('\n') + 1, 1, "x");
  write_text_file(csv, bad);
  message = expect_format_error(dir);
  CHECK(message.find("robot_0.csv") != std::string::npos);
  CHECK(message.find("row") != std::string::npos);

  fs::remove(csv);
  message = expect_format_error(dir);
  CHECK(message.find("robot_0.csv") != std::string::npos);
}

TEST_CASE("JSON syntax errors carry a location", "[io]")
{
  const fs::path dir = scratch("syntax");
  write_text_file(dir / "bad.json", "{\n  \"a\": 1,\n  oops\n}\n");
  try
  {
    read_json_file(dir / "bad.json");
    FAIL("expected FormatError");
  }
  catch (const FormatError& e)
  {
    const std::string message = e.what();
    CHECK(message.find("bad.json:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_json_file(dir / "missing.json"), FormatError);
}

TEST_CASE("readers keep defaults and reject unknown keys", "[io]")
{
  const Json partial = {{"time_horizon", 3.0}};
  const SolverConfig config = solver_config_from_json(partial, "solver");
  CHECK(config.time_horizon == 3.0);
  CHECK(config.kind == SolverKind::Orca);

  try
  {
    solver_config_from_json({{"horizon", 3.0}}, "solver");
    FAIL("expected FormatError");
  }
  catch (const FormatError& e)
  {
    CHECK(std::string(e.what()).find("solver.horizon") != std::string::npos);
  }

  CHECK_THROWS_AS(
    solver_config_from_json({{"time_horizon", "long"}}, "solver"), FormatError);
}

TEST_CASE("value types round-trip through JSON", "[io]")
{
  ScenarioParams params;
  params.gap_width = 1.25;
  params.jitter = 0.05;
  params.seed = 77;
  CHECK(scenario_params_from_json(to_json(params), "p") == params);

  const Scenario scenario = build(ScenarioKind::LCorner, params);
  CHECK(scenario_from_json(to_json(scenario), "s") == scenario);

  EpisodeSettings settings;
  settings.solver.kind = SolverKind::ImpcLite;
  settings.solver.forced_ranking = {1, 0};
  settings.collision_policy = CollisionPolicy::Continue;
  settings.observability.occlusion = true;
  CHECK(settings_from_json(to_json(settings), "e") == settings);

  MetricsOptions options;
  options.flow_time = FlowTime::Makespan;
  options.path_length_weight = 0.5;
  CHECK(metrics_options_from_json(to_json(options), "m") == options);

  const SmgReport smg = detect_smg(scenario);
  CHECK(smg_from_json(to_json(smg), "smg") == smg);

  // Infinite sensing range is written as null.
  CHECK(to_json(params)["sensing_radius"].is_null());
}
