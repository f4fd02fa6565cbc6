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


#ifndef SMGBENCH_TESTS__ORACLES_HPP
#define SMGBENCH_TESTS__ORACLES_HPP

#include <smgbench/core.hpp>
#include <smgbench/kernel.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace smgbench::oracle {

/// Brute-force answer to the projection problem found by scanning a square
/// grid over the speed disc and refining around the best grid point.
struct GridProjection
{
  /// Best strictly feasible point, absent when the grid found none.
  std::optional<Vec2> u;
  /// Smallest achievable largest violation over the disc.
  double min_max_violation = 0.0;
};

GridProjection grid_project(
  const Vec2& u_nom,
  const std::vector<HalfPlane>& constraints,
  double speed_cap,
  double step);

/// One directed sample-based Hausdorff distance: the largest distance from
/// points sampled every `spacing` meters along `a` to the polyline `b`.
double sampled_directed_hausdorff(
  const std::vector<Vec2>& a,
  const std::vector<Vec2>& b,
  double spacing);

double sampled_hausdorff(
  const std::vector<Vec2>& a,
  const std::vector<Vec2>& b,
  double spacing);

/// Position at time t of a point that starts at path.front() and travels
/// along the polyline at `speed`, resting at the end.
Vec2 travel(const std::vector<Vec2>& path, double speed, double t);

/// Maximal runs [begin, end] of sampled times at which two discs travelling
/// along their paths overlap.
std::vector<std::pair<double, double>> overlap_runs(
  const std::vector<Vec2>& path_a,
  const std::vector<Vec2>& path_b,
  double speed,
  double reach,
  double dt);

struct ProjectionInstance
{
  Vec2 u_nom;
  std::vector<HalfPlane> constraints;
  double speed_cap = 1.0;
};

/// Seeded random problem with one to `max_constraints` half-planes whose
/// boundaries pass within the speed disc.
ProjectionInstance random_projection_instance(
  std::uint64_t seed,
  std::size_t max_constraints);

struct ProjectionComparison
{
  bool feasible_agrees = false;
  /// Distance to u_nom, or the largest violation for infeasible instances.
  double kernel_objective = 0.0;
  double oracle_objective = 0.0;
  /// Violation of the kernel's point beyond the kernel tolerance.
  double kernel_excess = 0.0;
};

/// Solves the instance with project() and with grid_project() at `step`.
ProjectionComparison compare_projection(
  const ProjectionInstance& instance,
  double step);

} // namespace smgbench::oracle

#endif // SMGBENCH_TESTS__ORACLES_HPP
