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

#ifndef SMGBENCH__SCENARIO_HPP
#define SMGBENCH__SCENARIO_HPP

#include <smgbench/core.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smgbench {

enum class ScenarioKind
{
  Doorway,
  Intersection,
  Hallway,
  LCorner,
  BlindCorner,
  Crowded,
  Parallel,
  Perpendicular,
  Circular
};

std::string_view to_string(ScenarioKind kind);

/// Throws std::invalid_argument listing the valid names.
ScenarioKind scenario_kind_from_string(std::string_view name);

/// Generator inputs. Lengths are meters. Unset dimensions fall back to
/// per-kind defaults expressed on a 64-cell grid scaled by world_scale, so
/// the default doorway is the 0-63 grid layout with 0.25 m cells.
struct ScenarioParams
{
  int n_agents = 2;
  std::optional<double> corridor_width;
  std::optional<double> gap_width;
  std::optional<double> approach_distance;
  double world_scale = 0.25;
  double jitter = 0.0;
  std::uint64_t seed = 0;

  double agent_radius = 0.25;
  double preferred_speed = 1.0;
  double max_speed = 1.5;
  double max_accel = 2.0;
  double sensing_radius = std::numeric_limits<double>::infinity();

  bool operator==(const ScenarioParams&) const = default;
};

struct Scenario
{
  ScenarioKind kind = ScenarioKind::Doorway;
  WorldGeometry geometry;
  std::vector<AgentSpec> agents;
  std::uint64_t seed = 0;

  const AgentSpec& agent(int id) const;

  bool operator==(const Scenario&) const = default;
};

/// Rejected scenario construction.
class ScenarioError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Deterministic generator for the nine scenario kinds. Jittered starts that
/// overlap or lose clearance are redrawn up to 100 times before rejecting.
Scenario build(ScenarioKind kind, const ScenarioParams& params);

/// Checks start separation, clearance and reachability of every goal.
/// Throws ScenarioError naming the failing agent and the failed clearance.
void validate(const Scenario& scenario);

/// Copy of the scenario without the agent `id`.
Scenario without_agent(const Scenario& scenario, int id);

struct ParameterInfo
{
  std::string name;
  std::string unit;
  std::string description;
};

struct ScenarioInfo
{
  ScenarioKind kind;
  std::string description;
  std::vector<ParameterInfo> parameters;
  int min_agents = 1;
  int max_agents = 4;
};

/// The nine kinds in canonical order, doorway first.
const std::vector<ScenarioInfo>& list_scenarios();

const ScenarioInfo& scenario_info(ScenarioKind kind);

/// The world is a square of 64 grid cells per side.
inline constexpr double grid_cells = 64.0;

} // namespace smgbench

#endif // SMGBENCH__SCENARIO_HPP
