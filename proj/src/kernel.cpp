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

#include <smgbench/kernel.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace smgbench {

//==============================================================================
HalfPlane HalfPlane::from(const Vec2& normal, double offset)
{
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(offset))
    throw std::invalid_argument("HalfPlane::from: degenerate normal or offset");
  return {normal / n, offset / n};
}

namespace {

//==============================================================================
std::uint64_t mix(std::uint64_t h, double v)
{
  // splitmix64 over the bit pattern; +0.0 and -0.0 hash alike
  std::uint64_t x = std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

bool canonical_less(const HalfPlane& a, const HalfPlane& b)
{
  if (a.normal.x != b.normal.x)
    return a.normal.x < b.normal.x;
  if (a.normal.y != b.normal.y)
    return a.normal.y < b.normal.y;
  return a.offset < b.offset;
}

/// Canonical sort followed by a content-seeded shuffle.
std::vector<HalfPlane> insertion_order(std::span<const HalfPlane> constraints)
{
  std::vector<HalfPlane> order(constraints.begin(), constraints.end());
  std::sort(order.begin(), order.end(), canonical_less);

  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
  for (const auto& h : order)
  {
    seed = mix(seed, h.normal.x);
    seed = mix(seed, h.normal.y);
    seed = mix(seed, h.offset);
  }

  // Fisher-Yates with an explicit engine so the permutation is identical on
  // every standard library.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
  {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

//==============================================================================
/// Closest point to `target` on the boundary line of planes[index], subject
/// to planes[0..index) shifted by `relax` and the speed disc.
std::optional<Vec2> solve_on_line(
  const std::vector<HalfPlane>& planes,
  std::size_t index,
  double relax,
  const Vec2& target,
  double cap)
{
  const HalfPlane& line = planes[index];
  const double b = line.offset + relax;
  if (std::abs(b) > cap + projection_tolerance)
    return std::nullopt;

  const Vec2 origin = line.normal * b;
  const Vec2 dir = line.normal.left();
  const double half_chord = std::sqrt(std::max(0.0, cap * cap - b * b));

  double lo = -half_chord;
  double hi = half_chord;

  for (std::size_t j = 0; j < index; ++j)
  {
    const HalfPlane& other = planes[j];
    const double denom = other.normal.dot(dir);
    const double numer = other.offset + relax - other.normal.dot(origin);

    if (std::abs(denom) <= 1e-12)
    {
      // Parallel: either the whole line satisfies it or none of it does.
      if (numer < -projection_tolerance)
        return std::nullopt;
      continue;
    }

    const double s = numer / denom;
    if (denom > 0.0)
      hi = std::min(hi, s);
    else
      lo = std::max(lo, s);

    if (lo > hi + projection_tolerance)
      return std::nullopt;
  }

  if (lo > hi)
  {
    const double mid = 0.5 * (lo + hi);
    lo = mid;
    hi = mid;
  }

  const double s = std::clamp(dir.dot(target - origin), lo, hi);
  return origin + dir * s;
}

/// Closest point to `target` in the relaxed region, or nullopt if empty.
std::optional<Vec2> closest_feasible(
  const std::vector<HalfPlane>& planes,
  double relax,
  const Vec2& target,
  double cap)
{
  Vec2 result = clamp_norm(target, cap);
  for (std::size_t i = 0; i < planes.size(); ++i)
  {
    if (planes[i].violation(result) - relax <= projection_tolerance)
      continue;

    const auto next = solve_on_line(planes, i, relax, target, cap);
    if (!next)
      return std::nullopt;
    result = *next;
  }
  return result;
}

double max_violation(const std::vector<HalfPlane>& planes, const Vec2& u)
{
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : planes)
    worst = std::max(worst, h.violation(u));
  return worst;
}

} // anonymous namespace

//==============================================================================
ProjectionResult project(
  const Vec2& u_nom,
  std::span<const HalfPlane> constraints,
  double speed_cap)
{
  if (!(speed_cap > 0.0))
    throw std::invalid_argument("project: speed_cap must be positive");
  if (constraints.size() > max_projection_constraints)
  {
    throw std::invalid_argument(
            "project: " + std::to_string(constraints.size())
            + " constraints exceed the limit of "
            + std::to_string(max_projection_constraints));
  }
  if (!u_nom.finite())
    throw std::invalid_argument("project: u_nom is not finite");

  if (constraints.empty())
    return {clamp_norm(u_nom, speed_cap), true, 0.0};

  const auto planes = insertion_order(constraints);

  if (const auto u = closest_feasible(planes, 0.0, u_nom, speed_cap))
    return {*u, true, 0.0};

  // Every point of the disc satisfies n.u - b <= cap - b, so the relaxation
  // level `hi` is always feasible; level 0 is known to be infeasible.
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& h : planes)
    hi = std::max(hi, speed_cap - h.offset);

  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter)
  {
    const double mid = 0.5 * (lo + hi);
    if (closest_feasible(planes, mid, Vec2{}, speed_cap))
      hi = mid;
    else
      lo = mid;
  }

  auto u = closest_feasible(planes, hi, Vec2{}, speed_cap);
  if (!u)
    u = Vec2{};

  ProjectionResult result;
  result.u_star = *u;
  result.feasible = false;
  result.max_violation = std::max(0.0, max_violation(planes, *u));
  return result;
}

} // namespace smgbench
