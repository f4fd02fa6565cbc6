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

#ifndef SMGBENCH__HARNESS_HPP
#define SMGBENCH__HARNESS_HPP

#include <smgbench/analysis.hpp>
#include <smgbench/dynamics.hpp>
#include <smgbench/scenario.hpp>
#include <smgbench/solvers.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smgbench {

enum class Termination
{
  AllGoals,
  Timeout,
  CollisionAbort,
  SolverFailure
};

std::string_view to_string(Termination termination);
Termination termination_from_string(std::string_view name);

enum class CollisionPolicy
{
  /// Stop at the first contact and mark the episode failed.
  Abort,

  /// Record every contact and keep simulating.
  Continue
};

std::string_view to_string(CollisionPolicy policy);
CollisionPolicy collision_policy_from_string(std::string_view name);

/// Everything besides the scenario that determines an episode.
struct EpisodeSettings
{
  SolverConfig solver;
  Observability observability;
  double dt = 0.05;
  double t_max = 30.0;
  CollisionPolicy collision_policy = CollisionPolicy::Abort;

  /// Minimum overlap duration for the social mini-game test.
  double smg_delta = 0.2;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  bool operator==(const EpisodeSettings&) const = default;
};

/// Agent states at one grid time and the controls applied from it. The
/// final record of an episode carries zero controls.
struct StepRecord
{
  double time = 0.0;
  std::vector<AgentState> states;
  std::vector<Vec2> controls;

  bool operator==(const StepRecord&) const = default;
};

struct AgentEvent
{
  double time = 0.0;
  int agent_id = 0;

  bool operator==(const AgentEvent&) const = default;
};

struct EpisodeLog
{
  Scenario scenario;
  EpisodeSettings settings;
  SmgReport smg;

  std::vector<StepRecord> steps;

  std::vector<CollisionEvent> collisions;

  /// Rising edges of the stall flag.
  std::vector<AgentEvent> deadlock_flags;

  /// Sign changes of an agent's signed distance to the gap plane.
  std::vector<AgentEvent> gap_crossings;

  /// First time each agent came within goal tolerance.
  std::vector<AgentEvent> goal_arrivals;

  Termination termination = Termination::Timeout;
  std::string diagnostic;
  std::size_t infeasible_projections = 0;

  /// Recorded positions, velocities and times of one agent.
  Trajectory trajectory(int agent_id) const;

  /// Applied controls of one agent, one per step record.
  std::vector<Vec2> controls(int agent_id) const;

  std::optional<double> arrival_time(int agent_id) const;

  /// Index of the agent in the scenario, throws std::out_of_range.
  std::size_t index_of(int agent_id) const;

  bool operator==(const EpisodeLog&) const = default;
};

/// Nominal plans for every agent of the scenario at the settings' dt.
std::vector<NominalPlan> nominal_plans(
  const Scenario& scenario,
  const EpisodeSettings& settings);

/// Runs one episode: views, solver, dynamics, collision check and event
/// recording on every step, until all agents rest at their goals, the time
/// limit is reached, or (under the abort policy) the first collision.
EpisodeLog run_episode(const Scenario& scenario, const EpisodeSettings& settings);

/// The counterfactual rollout used for invasiveness: the same episode with
/// one agent removed.
EpisodeLog run_without_agent(const EpisodeLog& log, int agent_id);

} // namespace smgbench

#endif // SMGBENCH__HARNESS_HPP
