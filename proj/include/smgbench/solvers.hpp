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

#ifndef SMGBENCH__SOLVERS_HPP
#define SMGBENCH__SOLVERS_HPP

#include <smgbench/analysis.hpp>
#include <smgbench/dynamics.hpp>
#include <smgbench/kernel.hpp>

#include <map>
#include <numbers>
#include <optional>
#include <deque>
#include <set>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace smgbench {

enum class SolverKind
{
  Orca,
  CbfRhr,
  Auction,
  ImpcLite
};

std::string_view to_string(SolverKind kind);

/// Raised for solver names that are known but not provided, and for
/// unknown names.
class UnsupportedSolver : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

SolverKind solver_kind_from_string(std::string_view name);

/// The four solver names in registry order.
const std::vector<SolverKind>& solver_kinds();

struct SolverConfig
{
  SolverKind kind = SolverKind::Orca;

  /// ORCA horizon for agent-agent velocity obstacles, seconds.
  double time_horizon = 2.0;

  /// ORCA horizon for obstacle half-planes, seconds.
  double obstacle_time_horizon = 0.5;

  /// Extra separation kept between footprints and from walls, meters.
  double safety_margin = 0.05;

  double deadlock_speed = 0.05;
  double deadlock_duration = 1.5;

  /// Clockwise rotation applied to a stalled agent's nominal command.
  double perturb_angle = 0.75 * std::numbers::pi;

  /// Time the rotation is held after the stall flag clears.
  double perturb_hysteresis = 1.0;

  /// Auction speed factor gamma; the rank-k agent moves at gamma^k.
  double velocity_scale = 0.5;

  /// Buffered Voronoi warning band, meters.
  double warning_band = 0.3;

  double auction_period = 0.5;
  double goal_tolerance = 0.1;

  /// Pure-pursuit carrot distance along the nominal path.
  double lookahead = 0.5;

  /// Linear class-K gain of the barrier condition, 1/s.
  double cbf_alpha = 1.0;

  /// Auction ranking override, highest priority first. Empty means rank by
  /// the agents' priorities.
  std::vector<int> forced_ranking;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

struct Observability
{
  /// When false, neighbors' priorities are hidden from the views.
  bool valuations_visible = true;

  /// When true, neighbors behind an obstacle segment are not visible.
  bool occlusion = false;

  bool operator==(const Observability&) const = default;
};

/// The public part of another agent.
struct NeighborView
{
  int id = 0;
  double radius = 0.0;
  std::optional<double> priority;
  AgentState state;
};

/// Everything one agent knows when choosing its control.
struct WorldView
{
  AgentSpec self;
  AgentState state;
  std::vector<NeighborView> neighbors;
  std::vector<Segment> obstacles;
  double time = 0.0;
};

/// One view per agent, in the order of `specs`. Neighbors are ordered by id
/// and lie within the agent's sensing radius.
std::vector<WorldView> make_views(
  const std::vector<AgentSpec>& specs,
  const std::vector<AgentState>& states,
  const WorldGeometry& geometry,
  const Observability& observability,
  double time);

struct DeadlockState
{
  /// Accumulated stall time per agent id.
  std::map<int, double> stall_timer;
  std::set<int> flagged;

  bool operator==(const DeadlockState&) const = default;
};

/// Advances stall timers by dt for agents away from their goal that move
/// slower than the deadlock speed, resets the others, and flags every agent
/// whose timer has reached the deadlock duration.
DeadlockState detect_deadlock(
  const std::vector<AgentSpec>& specs,
  const std::vector<AgentState>& states,
  const DeadlockState& previous,
  const SolverConfig& config,
  double dt);

/// Pure-pursuit velocity command toward the point `lookahead` meters ahead
/// of the closest point on the nominal path. Zero inside goal_tolerance.
Control nominal_control(
  const WorldView& view,
  const NominalPlan& plan,
  const SolverConfig& config,
  double dt);

/// Reciprocal velocity-obstacle half-planes for every neighbor that can be
/// reached within the time horizon, plus obstacle half-planes.
std::vector<HalfPlane> orca_constraints(
  const WorldView& view,
  const SolverConfig& config,
  double dt);

/// Barrier half-planes for the pairwise condition
/// 2 p.(u_i - u_j) >= -alpha h, plus obstacle barriers with full
/// responsibility. Agent i takes the share w of each pair, looked up by
/// neighbor id in `responsibility` and 1/2 when absent; the neighbor is
/// assumed to take the remaining 1 - w.
std::vector<HalfPlane> cbf_constraints(
  const WorldView& view,
  const SolverConfig& config,
  const std::map<int, double>& responsibility = {});

/// Buffered Voronoi half-planes on the one-step displacement. Neighbors
/// listed in `tilted` have their cell boundary rotated counter-clockwise
/// about the boundary point nearest the agent, which opens the cell on the
/// agent's right.
std::vector<HalfPlane> bvc_constraints(
  const WorldView& view,
  const SolverConfig& config,
  double dt,
  const std::set<int>& tilted = {});

/// Ids of neighbors whose buffered cell boundary lies within the warning
/// band.
std::set<int> warning_band_neighbors(
  const WorldView& view,
  const SolverConfig& config);

/// Per-episode control policy. Holds the hysteresis timers and the auction
/// clock, so one instance must not be shared between episodes.
class Solver
{
public:
  Solver(
    SolverConfig config,
    std::vector<AgentSpec> specs,
    std::vector<NominalPlan> plans,
    SmgReport smg,
    double dt);

  /// Controls for every agent, aligned with the views.
  std::vector<Control> step(
    const std::vector<WorldView>& views,
    const DeadlockState& deadlock);

  const SolverConfig& config() const { return _config; }

  /// Number of projections that fell back to the least-violation point.
  std::size_t infeasible_projections() const { return _infeasible; }

  /// Current auction rank per agent id. Empty for other solvers.
  const std::map<int, int>& ranks() const { return _ranks; }

private:
  Vec2 filtered(const WorldView& view, const Vec2& nominal,
    std::vector<HalfPlane> planes);
  std::vector<Vec2> nominals(const std::vector<WorldView>& views) const;
  std::set<int> perturbing(
    const std::vector<WorldView>& views,
    const DeadlockState& deadlock);
  std::set<int> yielding(
    const std::vector<WorldView>& views,
    const std::set<int>& active,
    bool by_progress) const;
  void hold_auction(const std::vector<WorldView>& views);
  double scale(int id) const;

  std::vector<Control> step_orca(const std::vector<WorldView>& views);
  std::vector<Control> step_cbf(
    const std::vector<WorldView>& views, const DeadlockState& deadlock);
  std::vector<Control> step_auction(const std::vector<WorldView>& views);
  std::vector<Control> step_impc(
    const std::vector<WorldView>& views, const DeadlockState& deadlock);

  SolverConfig _config;
  std::vector<AgentSpec> _specs;
  std::vector<NominalPlan> _plans;
  SmgReport _smg;
  double _dt;

  std::map<int, double> _perturb_until;
  std::map<int, int> _ranks;
  std::map<int, int> _groups;
  std::optional<double> _next_auction;
  std::map<int, std::deque<Vec2>> _history;
  std::size_t _infeasible = 0;
};

} // namespace smgbench

#endif // SMGBENCH__SOLVERS_HPP
