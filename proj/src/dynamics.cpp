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

#include <smgbench/dynamics.hpp>

#include <algorithm>
#include <string>

namespace smgbench {

//==============================================================================
std::string_view to_string(ControlMode mode)
{
  return mode == ControlMode::Velocity ? "velocity" : "acceleration";
}

std::string_view to_string(CollisionKind kind)
{
  return kind == CollisionKind::AgentAgent ? "agent_agent" : "agent_obstacle";
}

//==============================================================================
AgentState step(
  const AgentState& state,
  const AgentSpec& spec,
  const Control& control,
  double dt)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("step: dt must be positive");
  if (!control.value.finite())
  {
    throw InvalidControl(
            "step: agent " + std::to_string(spec.id)
            + " received a non-finite control");
  }

  AgentState next;
  next.time = state.time + dt;
  if (control.mode == ControlMode::Velocity)
  {
    next.velocity = clamp_norm(control.value, spec.max_speed);
  }
  else
  {
    const Vec2 a = clamp_norm(control.value, spec.max_accel);
    next.velocity = clamp_norm(state.velocity + a * dt, spec.max_speed);
  }
  next.position = state.position + next.velocity * dt;
  return next;
}

//==============================================================================
std::vector<CollisionEvent> check_collisions(
  const std::vector<AgentState>& states,
  const std::vector<AgentSpec>& specs,
  const WorldGeometry& geometry)
{
  if (states.size() != specs.size())
    throw std::invalid_argument("check_collisions: states and specs differ in size");

  std::vector<CollisionEvent> events;
  const double time = states.empty() ? 0.0 : states.front().time;

  for (std::size_t i = 0; i < states.size(); ++i)
  {
    for (std::size_t j = i + 1; j < states.size(); ++j)
    {
      const double reach = specs[i].radius + specs[j].radius;
      const double d = (states[i].position - states[j].position).norm();
      if (d < reach)
      {
        events.push_back({time, CollisionKind::AgentAgent,
            {std::min(specs[i].id, specs[j].id),
              std::max(specs[i].id, specs[j].id)},
            reach - d});
      }
    }
  }

  for (std::size_t i = 0; i < states.size(); ++i)
  {
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& seg : geometry.obstacles)
      closest = std::min(closest, point_segment_distance(states[i].position, seg));

    if (closest < specs[i].radius)
    {
      events.push_back({time, CollisionKind::AgentObstacle, {specs[i].id},
          specs[i].radius - closest});
    }
  }

  std::sort(events.begin(), events.end(),
    [](const CollisionEvent& a, const CollisionEvent& b)
    {
      if (a.kind != b.kind)
        return a.kind < b.kind;
      return a.ids < b.ids;
    });
  return events;
}

} // namespace smgbench
