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

#ifndef SMGBENCH__KERNEL_HPP
#define SMGBENCH__KERNEL_HPP

#include <smgbench/core.hpp>

#include <span>

namespace smgbench {

/// Velocity-space half-plane {u : normal . u <= offset}.
struct HalfPlane
{
  Vec2 normal;
  double offset = 0.0;

  /// Builds a half-plane from any non-zero normal, rescaling the offset so
  /// the stored normal has unit length.
  static HalfPlane from(const Vec2& normal, double offset);

  /// Signed violation of u: positive when u lies outside.
  double violation(const Vec2& u) const { return normal.dot(u) - offset; }

  bool operator==(const HalfPlane&) const = default;
};

struct ProjectionResult
{
  Vec2 u_star;
  bool feasible = true;

  /// Minimax violation when infeasible, otherwise exactly 0.
  double max_violation = 0.0;
};

/// Largest number of constraints project() accepts.
inline constexpr std::size_t max_projection_constraints = 64;

/// Feasibility slack applied to every half-plane test inside the kernel.
inline constexpr double projection_tolerance = 1e-9;

/// Closest point to u_nom inside the intersection of the half-planes and the
/// disc |u| <= speed_cap.
///
/// Solved by randomized incremental insertion: constraints are put into a
/// canonical order, shuffled with a seed derived from their contents, and
/// inserted one at a time; whenever the running optimum violates the new
/// constraint the optimum is re-solved on that constraint's boundary line.
///
/// If the region is empty, the result minimizes the largest violation over
/// all half-planes within the disc. That level is found by bisection on the
/// uniform relaxation t of every offset, and ties at the optimal level are
/// resolved toward the smallest |u|.
///
/// The result does not depend on the order of `constraints`.
ProjectionResult project(
  const Vec2& u_nom,
  std::span<const HalfPlane> constraints,
  double speed_cap);

} // namespace smgbench

#endif // SMGBENCH__KERNEL_HPP
