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

#ifndef SMGBENCH__CORE_HPP
#define SMGBENCH__CORE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace smgbench {

/// Tolerance used for geometric identities throughout the library.
inline constexpr double geometric_tolerance = 1e-9;

//==============================================================================
/// Planar vector in meters (positions) or meters per second (velocities).
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  constexpr bool operator==(const Vec2& o) const = default;

  constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }

  /// z-component of the 3D cross product.
  constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }

  constexpr double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }

  /// Unit vector in the same direction, or zero for a (near) zero vector.
  Vec2 normalized() const
  {
    const double n = norm();
    if (n < std::numeric_limits<double>::min())
      return {};
    return {x / n, y / n};
  }

  /// Counter-clockwise perpendicular.
  constexpr Vec2 left() const { return {-y, x}; }

  /// Clockwise perpendicular.
  constexpr Vec2 right() const { return {y, -x}; }

  /// Rotate counter-clockwise by `angle` radians.
  Vec2 rotated(double angle) const
  {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Lexicographic ordering used for deterministic tie-breaking.
inline bool lexicographic_less(const Vec2& a, const Vec2& b)
{
  if (a.x != b.x)
    return a.x < b.x;
  return a.y < b.y;
}

/// Clamp the magnitude of v to at most max_norm.
Vec2 clamp_norm(const Vec2& v, double max_norm);

//==============================================================================
struct Segment
{
  Vec2 a;
  Vec2 b;

  bool operator==(const Segment&) const = default;
};

/// Closest point on the segment to p. Degenerate segments act as a point.
Vec2 closest_point(const Vec2& p, const Segment& seg);

/// Euclidean distance from p to the closest point of the segment.
double point_segment_distance(const Vec2& p, const Segment& seg);

/// Minimum distance between two closed segments (0 if they intersect).
double segment_segment_distance(const Segment& s1, const Segment& s2);

//==============================================================================
struct Bounds
{
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p, double tol = geometric_tolerance) const
  {
    return p.x >= min.x - tol && p.x <= max.x + tol
      && p.y >= min.y - tol && p.y <= max.y + tol;
  }

  bool operator==(const Bounds&) const = default;
};

/// A doorway-style bottleneck. The plane passes through `center` with unit
/// `normal`; agents crossing it change the sign of the signed distance.
struct Gap
{
  Vec2 center;
  Vec2 normal;
  double width = 0.0;

  double signed_distance(const Vec2& p) const { return normal.dot(p - center); }

  bool operator==(const Gap&) const = default;
};

struct WorldGeometry
{
  std::vector<Segment> obstacles;
  std::optional<Gap> gap;
  Bounds bounds;

  std::optional<double> gap_width() const
  {
    if (gap)
      return gap->width;
    return std::nullopt;
  }

  /// Minimum distance from p to any obstacle, +inf when there are none.
  double clearance(const Vec2& p) const;

  bool operator==(const WorldGeometry&) const = default;
};

//==============================================================================
/// Static parameters of one robot. The footprint is a disc of `radius`.
struct AgentSpec
{
  int id = 0;
  double radius = 0.25;
  double preferred_speed = 1.0;
  double max_speed = 1.5;
  double max_accel = 2.0;
  Vec2 start;
  Vec2 goal;
  double priority = 1.0;
  double sensing_radius = std::numeric_limits<double>::infinity();

  bool operator==(const AgentSpec&) const = default;
};

/// Throws std::invalid_argument when the spec violates its own invariants or
/// its start/goal lack clearance from the geometry.
void validate(const AgentSpec& spec, const WorldGeometry& geometry);

struct AgentState
{
  Vec2 position;
  Vec2 velocity;
  double time = 0.0;

  bool operator==(const AgentState&) const = default;
};

//==============================================================================
/// Uniformly sampled state history.
struct Trajectory
{
  double dt = 0.05;
  std::vector<AgentState> samples;

  double start_time() const { return samples.front().time; }
  double end_time() const { return samples.back().time; }
  double duration() const { return end_time() - start_time(); }

  /// Linear interpolation of the position at time t, clamped to the ends.
  Vec2 position_at(double t) const;

  bool operator==(const Trajectory&) const = default;
};

/// Sum of consecutive position distances.
double path_length(const Trajectory& traj);

/// Length of an open polyline.
double path_length(const std::vector<Vec2>& polyline);

/// Linearly interpolate positions and velocities onto a uniform grid over the
/// same [t0, t_end]. The step is adjusted to the nearest value that divides the
/// span evenly so both endpoints are preserved exactly.
Trajectory resample(const Trajectory& traj, double new_dt);

} // namespace smgbench

#endif // SMGBENCH__CORE_HPP
