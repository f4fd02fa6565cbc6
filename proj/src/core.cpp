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

#include <smgbench/core.hpp>

#include <algorithm>
#include <string>

namespace smgbench {

//==============================================================================
Vec2 clamp_norm(const Vec2& v, double max_norm)
{
  const double n = v.norm();
  if (n <= max_norm)
    return v;
  return v * (max_norm / n);
}

//==============================================================================
Vec2 closest_point(const Vec2& p, const Segment& seg)
{
  const Vec2 d = seg.b - seg.a;
  const double len_sq = d.squared_norm();
  if (len_sq <= 0.0)
    return seg.a;

  const double s = std::clamp((p - seg.a).dot(d) / len_sq, 0.0, 1.0);
  return seg.a + d * s;
}

//==============================================================================
double point_segment_distance(const Vec2& p, const Segment& seg)
{
  return (p - closest_point(p, seg)).norm();
}

//==============================================================================
namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c)
{
  const double v = (b - a).cross(c - a);
  if (v > 0.0)
    return 1;
  if (v < 0.0)
    return -1;
  return 0;
}

bool on_segment(const Vec2& p, const Segment& s)
{
  return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x)
    && std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

bool segments_intersect(const Segment& s1, const Segment& s2)
{
  const int o1 = orientation(s1.a, s1.b, s2.a);
  const int o2 = orientation(s1.a, s1.b, s2.b);
  const int o3 = orientation(s2.a, s2.b, s1.a);
  const int o4 = orientation(s2.a, s2.b, s1.b);

  if (o1 != o2 && o3 != o4)
    return true;

  return (o1 == 0 && on_segment(s2.a, s1))
    || (o2 == 0 && on_segment(s2.b, s1))
    || (o3 == 0 && on_segment(s1.a, s2))
    || (o4 == 0 && on_segment(s1.b, s2));
}

} // anonymous namespace

double segment_segment_distance(const Segment& s1, const Segment& s2)
{
  if (segments_intersect(s1, s2))
    return 0.0;

  return std::min({
      point_segment_distance(s1.a, s2),
      point_segment_distance(s1.b, s2),
      point_segment_distance(s2.a, s1),
      point_segment_distance(s2.b, s1)});
}

//==============================================================================
double WorldGeometry::clearance(const Vec2& p) const
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : obstacles)
    best = std::min(best, point_segment_distance(p, seg));
  return best;
}

//==============================================================================
void validate(const AgentSpec& spec, const WorldGeometry& geometry)
{
  const std::string who = "agent " + std::to_string(spec.id) + ": ";
  if (spec.id < 0)
    throw std::invalid_argument(who + "id must be non-negative");
  if (!(spec.radius > 0.0))
    throw std::invalid_argument(who + "radius must be positive");
  if (!(spec.preferred_speed > 0.0))
    throw std::invalid_argument(who + "preferred_speed must be positive");
  if (!(spec.max_speed >= spec.preferred_speed))
    throw std::invalid_argument(who + "max_speed must be >= preferred_speed");
  if (!(spec.max_accel > 0.0))
    throw std::invalid_argument(who + "max_accel must be positive");
  if (!(spec.priority >= 0.0))
    throw std::invalid_argument(who + "priority must be non-negative");
  if (!(spec.sensing_radius > 0.0))
    throw std::invalid_argument(who + "sensing_radius must be positive");
  if (!spec.start.finite() || !spec.goal.finite())
    throw std::invalid_argument(who + "start and goal must be finite");

  const auto check_point = [&](const Vec2& p, const char* label)
    {
      if (!geometry.bounds.contains(p))
      {
        throw std::invalid_argument(
                who + label + " (" + std::to_string(p.x) + ", "
                + std::to_string(p.y) + ") lies outside the world bounds");
      }

      const double c = geometry.clearance(p);
      if (c < spec.radius - geometric_tolerance)
      {
        throw std::invalid_argument(
                who + label + " has clearance " + std::to_string(c)
                + " m from an obstacle, below its radius "
                + std::to_string(spec.radius) + " m");
      }
    };

  check_point(spec.start, "start");
  check_point(spec.goal, "goal");
}

//==============================================================================
Vec2 Trajectory::position_at(double t) const
{
  if (samples.empty())
    throw std::logic_error("position_at on an empty trajectory");

  if (t <= samples.front().time)
    return samples.front().position;
  if (t >= samples.back().time)
    return samples.back().position;

  const double u = (t - samples.front().time) / dt;
  const auto k = std::min<std::size_t>(
    static_cast<std::size_t>(std::floor(u)), samples.size() - 2);
  const double s = std::clamp(u - static_cast<double>(k), 0.0, 1.0);
  const Vec2& a = samples[k].position;
  const Vec2& b = samples[k + 1].position;
  return a + (b - a) * s;
}

//==============================================================================
double path_length(const Trajectory& traj)
{
  double total = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i)
    total += (traj.samples[i].position - traj.samples[i - 1].position).norm();
  return total;
}

double path_length(const std::vector<Vec2>& polyline)
{
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i)
    total += (polyline[i] - polyline[i - 1]).norm();
  return total;
}

//==============================================================================
Trajectory resample(const Trajectory& traj, double new_dt)
{
  if (!(new_dt > 0.0))
    throw std::invalid_argument("resample: new_dt must be positive");

  if (traj.samples.size() < 2)
    return traj;

  const double t0 = traj.start_time();
  const double t1 = traj.end_time();
  const double span = t1 - t0;
  const auto steps = std::max<std::size_t>(
    1, static_cast<std::size_t>(std::llround(span / new_dt)));
  const double step = span / static_cast<double>(steps);

  Trajectory out;
  out.dt = step;
  out.samples.reserve(steps + 1);

  std::size_t k = 0;
  for (std::size_t i = 0; i <= steps; ++i)
  {
    const double t = (i == steps) ? t1 : t0 + step * static_cast<double>(i);
    while (k + 2 < traj.samples.size() && traj.samples[k + 1].time <= t)
      ++k;

    const AgentState& a = traj.samples[k];
    const AgentState& b = traj.samples[k + 1];
    const double w = b.time > a.time ?
      std::clamp((t - a.time) / (b.time - a.time), 0.0, 1.0) : 0.0;

    AgentState s;
    s.time = t;
    if (w == 0.0)
    {
      s.position = a.position;
      s.velocity = a.velocity;
    }
    else if (w == 1.0)
    {
      s.position = b.position;
      s.velocity = b.velocity;
    }
    else
    {
      s.position = a.position + (b.position - a.position) * w;
      s.velocity = a.velocity + (b.velocity - a.velocity) * w;
    }
    out.samples.push_back(s);
  }

  out.samples.front() = traj.samples.front();
  out.samples.back() = traj.samples.back();
  return out;
}

} // namespace smgbench
