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

#ifndef SMGBENCH__DYNAMICS_HPP
#define SMGBENCH__DYNAMICS_HPP

#include <smgbench/core.hpp>

#include <stdexcept>
#include <string_view>
#include <vector>

namespace smgbench {

enum class ControlMode
{
  Velocity,
  Acceleration
};

std::string_view to_string(ControlMode mode);

/// A velocity command in m/s or an acceleration command in m/s^2.
struct Control
{
  ControlMode mode = ControlMode::Velocity;
  Vec2 value;

  static Control velocity(const Vec2& v) { return {ControlMode::Velocity, v}; }
  static Control acceleration(const Vec2& a)
  {
    return {ControlMode::Acceleration, a};
  }

  bool operator==(const Control&) const = default;
};

/// Raised when a control contains NaN or infinite components.
class InvalidControl : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Advance one agent by dt. Velocity commands are clamped to max_speed and
/// applied directly. Acceleration commands are clamped to max_accel and
/// integrated with semi-implicit Euler, velocity first.
AgentState step(
  const AgentState& state,
  const AgentSpec& spec,
  const Control& control,
  double dt);

enum class CollisionKind
{
  AgentAgent,
  AgentObstacle
};

std::string_view to_string(CollisionKind kind);

struct CollisionEvent
{
  double time = 0.0;
  CollisionKind kind = CollisionKind::AgentAgent;

  /// One id for obstacle contacts, two ascending ids for agent contacts.
  std::vector<int> ids;

  /// Overlap depth in meters.
  double penetration = 0.0;

  bool operator==(const CollisionEvent&) const = default;
};

/// Discrete overlap test for one synchronous step. Contact at exactly the
/// summed radii or exactly the radius from a wall is not a collision.
/// Obstacle contacts report the deepest segment once per agent.
std::vector<CollisionEvent> check_collisions(
  const std::vector<AgentState>& states,
  const std::vector<AgentSpec>& specs,
  const WorldGeometry& geometry);

} // namespace smgbench

#endif // SMGBENCH__DYNAMICS_HPP
