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


#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace smgbench::oracle {

namespace {

double worst_violation(const std::vector<HalfPlane>& planes, const Vec2& u)
{
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : planes)
    worst = std::max(worst, h.violation(u));
  return worst;
}

/// Scores a candidate lexicographically: feasibility first, then distance.
struct Candidate
{
  Vec2 u;
  double violation = std::numeric_limits<double>::infinity();
  double distance = std::numeric_limits<double>::infinity();
};

template <typename Better>
Candidate scan(
  const Vec2& center,
  double half_width,
  double step,
  double cap,
  const std::vector<HalfPlane>& planes,
  const Vec2& u_nom,
  Candidate best,
  Better better)
{
  const int n = static_cast<int>(std::ceil(half_width / step));
  for (int ix = -n; ix <= n; ++ix)
  {
    for (int iy = -n; iy <= n; ++iy)
    {
      const Vec2 u = center + Vec2{ix * step, iy * step};
      if (u.squared_norm() > cap * cap)
        continue;
      Candidate c{u, worst_violation(planes, u), (u - u_nom).norm()};
      if (better(c, best))
        best = c;
    }
  }
  return best;
}

} // anonymous namespace

//==============================================================================
GridProjection grid_project(
  const Vec2& u_nom,
  const std::vector<HalfPlane>& constraints,
  double speed_cap,
  double step)
{
  const auto closer = [](const Candidate& c, const Candidate& best)
    {
      return c.violation <= 0.0 && c.distance < best.distance;
    };
  const auto less_violating = [](const Candidate& c, const Candidate& best)
    {
      return c.violation < best.violation;
    };

  GridProjection result;

  Candidate level = scan({}, speed_cap, step, speed_cap, constraints, u_nom,
      {}, less_violating);
  Candidate feasible = scan({}, speed_cap, step, speed_cap, constraints, u_nom,
      {}, closer);

  // Both problems are convex, so refining a window around the grid optimum
  // converges to the continuous optimum. Each scale is rescanned until the
  // optimum stops moving so narrow wedges are followed to their apex.
  const auto refine = [&](Candidate best, auto better, double h)
    {
      for (int round = 0; round < 6; ++round)
      {
        const double fine = h / 10.0;
        for (int sweep = 0; sweep < 100; ++sweep)
        {
          const Candidate next = scan(best.u, 2.0 * h, fine, speed_cap,
              constraints, u_nom, best, better);
          const bool moved = !(next.u == best.u);
          best = next;
          if (!moved)
            break;
        }
        h = fine;
      }
      return best;
    };

  level = refine(level, less_violating, step);
  if (feasible.violation <= 0.0)
    feasible = refine(feasible, closer, step);

  result.min_max_violation = std::max(0.0, level.violation);
  if (feasible.violation <= 0.0)
    result.u = feasible.u;
  return result;
}

//==============================================================================
double sampled_directed_hausdorff(
  const std::vector<Vec2>& a,
  const std::vector<Vec2>& b,
  double spacing)
{
  const auto distance_to_b = [&](const Vec2& p)
    {
      if (b.size() == 1)
        return (p - b.front()).norm();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < b.size(); ++i)
        best = std::min(best, point_segment_distance(p, {b[i - 1], b[i]}));
      return best;
    };

  double worst = distance_to_b(a.front());
  for (std::size_t i = 1; i < a.size(); ++i)
  {
    const Vec2 d = a[i] - a[i - 1];
    const int n = std::max(1, static_cast<int>(std::ceil(d.norm() / spacing)));
    for (int k = 1; k <= n; ++k)
      worst = std::max(worst, distance_to_b(a[i - 1] + d * (double(k) / n)));
  }
  return worst;
}

double sampled_hausdorff(
  const std::vector<Vec2>& a,
  const std::vector<Vec2>& b,
  double spacing)
{
  return std::max(
    sampled_directed_hausdorff(a, b, spacing),
    sampled_directed_hausdorff(b, a, spacing));
}

//==============================================================================
Vec2 travel(const std::vector<Vec2>& path, double speed, double t)
{
  double s = speed * t;
  for (std::size_t i = 1; i < path.size(); ++i)
  {
    const double len = (path[i] - path[i - 1]).norm();
    if (s <= len)
      return path[i - 1] + (path[i] - path[i - 1]) * (len > 0.0 ? s / len : 0.0);
    s -= len;
  }
  return path.back();
}

std::vector<std::pair<double, double>> overlap_runs(
  const std::vector<Vec2>& path_a,
  const std::vector<Vec2>& path_b,
  double speed,
  double reach,
  double dt)
{
  double length = 0.0;
  for (const auto* path : {&path_a, &path_b})
  {
    double l = 0.0;
    for (std::size_t i = 1; i < path->size(); ++i)
      l += ((*path)[i] - (*path)[i - 1]).norm();
    length = std::max(length, l);
  }

  std::vector<std::pair<double, double>> runs;
  std::optional<double> begin;
  double previous = 0.0;
  const int steps = static_cast<int>(std::ceil(length / speed / dt)) + 1;
  for (int k = 0; k <= steps; ++k)
  {
    const double t = k * dt;
    const bool overlap =
      (travel(path_a, speed, t) - travel(path_b, speed, t)).norm() <= reach;
    if (overlap && !begin)
      begin = t;
    if (!overlap && begin)
    {
      runs.emplace_back(*begin, previous);
      begin.reset();
    }
    previous = t;
  }
  if (begin)
    runs.emplace_back(*begin, previous);
  return runs;
}

//==============================================================================
ProjectionInstance random_projection_instance(
  std::uint64_t seed,
  std::size_t max_constraints)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ProjectionInstance instance;
  instance.speed_cap = 0.5 + unit(rng);
  const double cap = instance.speed_cap;

  const double r = 1.5 * cap * unit(rng);
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  instance.u_nom = Vec2{std::cos(theta), std::sin(theta)} * r;

  const auto count = 1 + static_cast<std::size_t>(rng() % max_constraints);
  for (std::size_t i = 0; i < count; ++i)
  {
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double offset = cap * (2.0 * unit(rng) - 1.0);
    instance.constraints.push_back(
      HalfPlane::from({std::cos(phi), std::sin(phi)}, offset));
  }
  return instance;
}

ProjectionComparison compare_projection(
  const ProjectionInstance& instance,
  double step)
{
  const auto result = project(
    instance.u_nom, instance.constraints, instance.speed_cap);
  const auto grid = grid_project(
    instance.u_nom, instance.constraints, instance.speed_cap, step);

  ProjectionComparison cmp;
  if (result.feasible)
  {
    cmp.kernel_excess = std::max(0.0,
        worst_violation(instance.constraints, result.u_star)
        - projection_tolerance);
    cmp.kernel_excess = std::max(cmp.kernel_excess,
        result.u_star.norm() - instance.speed_cap - projection_tolerance);
    cmp.kernel_objective = (result.u_star - instance.u_nom).norm();
    cmp.feasible_agrees = grid.u.has_value();
    if (grid.u)
      cmp.oracle_objective = (*grid.u - instance.u_nom).norm();
  }
  else
  {
    cmp.kernel_objective = result.max_violation;
    cmp.oracle_objective = grid.min_max_violation;
    cmp.feasible_agrees = grid.min_max_violation > 0.0;
  }
  return cmp;
}

} // namespace smgbench::oracle
