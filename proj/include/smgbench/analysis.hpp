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

#ifndef SMGBENCH__ANALYSIS_HPP
#define SMGBENCH__ANALYSIS_HPP

#include <smgbench/core.hpp>

#include <stdexcept>
#include <utility>
#include <vector>

namespace smgbench {

struct Scenario;

/// Raised when an agent's goal cannot be reached through free space.
class UnreachableGoal : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct PlannerOptions
{
  double dt = 0.05;

  /// Extra clearance added around obstacle vertices when building the
  /// visibility graph.
  double inflation_margin = 0.05;
};

/// The individually optimal trajectory of one agent, ignoring all others.
struct NominalPlan
{
  int agent_id = 0;
  std::vector<Vec2> path;
  Trajectory trajectory;

  /// Exact traversal time, path length over preferred speed.
  double duration = 0.0;
};

/// Shortest collision-free path on the visibility graph of the inflated
/// obstacle vertices, traversed at the preferred speed.
///
/// Equal-length alternatives are resolved toward the lexicographically
/// smaller predecessor waypoint so the result is deterministic.
NominalPlan nominal_plan(
  const AgentSpec& spec,
  const WorldGeometry& geometry,
  const PlannerOptions& options = {});

/// Members of one connected component of the pairwise conflict graph, held
/// over the grid-time interval [begin, end].
struct CouplingSet
{
  double begin = 0.0;
  double end = 0.0;
  std::vector<int> members;

  bool operator==(const CouplingSet&) const = default;
};

struct ConflictInterval
{
  int first = 0;
  int second = 0;
  double begin = 0.0;
  double end = 0.0;

  bool operator==(const ConflictInterval&) const = default;
};

struct SmgReport
{
  bool is_smg = false;
  double delta = 0.2;
  std::optional<std::pair<double, double>> window;
  std::vector<std::pair<int, int>> conflicting_pairs;

  /// Every qualifying overlap run, ordered by pair and then time.
  std::vector<ConflictInterval> conflicts;

  /// Time-indexed active coupling sets, run-length encoded.
  std::vector<CouplingSet> coupling_sets;

  /// Coupling sets active at time t.
  std::vector<std::vector<int>> coupling_at(double t) const;

  bool operator==(const SmgReport&) const = default;
};

/// Footprint overlap test along the agents' nominal trajectories. A pair
/// qualifies when their discs intersect on a contiguous run of grid times
/// [a, b] with b - a > delta. Agents stay at their goals after arriving.
SmgReport detect_smg(
  const Scenario& scenario,
  double delta = 0.2,
  const PlannerOptions& options = {});

/// Same test over precomputed plans, keyed by the specs' order.
SmgReport detect_smg(
  const std::vector<AgentSpec>& agents,
  const std::vector<NominalPlan>& plans,
  double delta,
  double dt);

} // namespace smgbench

#endif // SMGBENCH__ANALYSIS_HPP
