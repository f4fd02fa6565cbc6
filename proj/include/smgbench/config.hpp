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

#ifndef SMGBENCH__CONFIG_HPP
#define SMGBENCH__CONFIG_HPP

#include <smgbench/io.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace smgbench {

/// Replaces generated values of one agent.
struct AgentOverride
{
  int id = 0;
  std::optional<Vec2> start;
  std::optional<Vec2> goal;
  std::optional<double> priority;

  bool operator==(const AgentOverride&) const = default;
};

/// Everything needed to reproduce a single run.
struct RunConfig
{
  /// Artifact name; empty selects "<scenario>_<n>_robots".
  std::string name;

  ScenarioKind scenario = ScenarioKind::Doorway;
  ScenarioParams params;
  std::vector<AgentOverride> agents;
  EpisodeSettings settings;
  MetricsOptions metrics;
  std::string output_dir = "out";

  std::string run_name() const;

  /// Generated scenario with the overrides applied and validated.
  /// Throws ScenarioError.
  Scenario make_scenario() const;

  bool operator==(const RunConfig&) const = default;
};

Json to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& json);

/// Reads a config file, or the config embedded in an episode's meta.json.
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace smgbench

#endif // SMGBENCH__CONFIG_HPP
