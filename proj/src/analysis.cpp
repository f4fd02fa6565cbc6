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

#include <smgbench/analysis.hpp>
#include <smgbench/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

namespace smgbench {

namespace {

//==============================================================================
double segment_clearance(const Segment& s, const WorldGeometry& geometry)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto& obstacle : geometry.obstacles)
    best = std::min(best, segment_segment_distance(s, obstacle));
  return best;
}

std::vector<Vec2> unique_vertices(const WorldGeometry& geometry)
{
  std::vector<Vec2> vertices;
  for (const auto& seg : geometry.obstacles)
  {
    vertices.push_back(seg.a);
    vertices.push_back(seg.b);
  }

  std::sort(vertices.begin(), vertices.end(), lexicographic_less);
  vertices.erase(
    std::unique(vertices.begin(), vertices.end(),
    [](const Vec2& a, const Vec2& b)
    {
      return (a - b).norm() < geometric_tolerance;
    }),
    vertices.end());
  return vertices;
}

//==============================================================================
std::vector<Vec2> shortest_path(
  const AgentSpec& spec,
  const WorldGeometry& geometry,
  const PlannerOptions& options)
{
  const double required = spec.radius - geometric_tolerance;
  if (segment_clearance({spec.start, spec.goal}, geometry) >= required)
    return {spec.start, spec.goal};

  // Octagon around each obstacle vertex, circumscribing the inflated disc.
  constexpr int sides = 8;
  const double inflated = spec.radius + options.inflation_margin;
  const double rho = inflated / std::cos(std::numbers::pi / sides);

  std::vector<Vec2> nodes = {spec.start, spec.goal};
  for (const auto& v : unique_vertices(geometry))
  {
    for (int k = 0; k < sides; ++k)
    {
      const double angle = (2.0 * k + 1.0) * std::numbers::pi / sides;
      const Vec2 p = v + Vec2{std::cos(angle), std::sin(angle)} * rho;
      if (!geometry.bounds.contains(p, 0.0))
        continue;
      if (geometry.clearance(p) < spec.radius + 0.5 * options.inflation_margin)
        continue;
      nodes.push_back(p);
    }
  }

  const std::size_t n = nodes.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<std::size_t> pred(n, n);
  std::vector<bool> done(n, false);

  // Dense Dijkstra; node counts stay in the low hundreds.
  dist[0] = 0.0;
  for (std::size_t iter = 0; iter < n; ++iter)
  {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i)
    {
      if (!done[i] && dist[i] < inf && (u == n || dist[i] < dist[u]))
        u = i;
    }
    if (u == n || u == 1)
      break;
    done[u] = true;

    for (std::size_t v = 0; v < n; ++v)
    {
      if (done[v] || v == u)
        continue;

      const double candidate = dist[u] + (nodes[v] - nodes[u]).norm();
      const bool better = candidate < dist[v] - 1e-12;
      const bool tie = !better && std::abs(candidate - dist[v]) <= 1e-12
        && pred[v] < n && lexicographic_less(nodes[u], nodes[pred[v]]);
      if (!better && !tie)
        continue;

      if (segment_clearance({nodes[u], nodes[v]}, geometry) < required)
        continue;

      dist[v] = candidate;
      pred[v] = u;
    }
  }

  if (!(dist[1] < inf))
  {
    throw UnreachableGoal(
            "agent " + std::to_string(spec.id)
            + ": goal is not reachable through free space");
  }

  std::vector<Vec2> path;
  for (std::size_t v = 1; v != n; v = pred[v])
  {
    path.push_back(nodes[v]);
    if (v == 0)
      break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Vec2 point_along(const std::vector<Vec2>& path, double s, Vec2* tangent)
{
  for (std::size_t i = 1; i < path.size(); ++i)
  {
    const Vec2 d = path[i] - path[i - 1];
    const double len = d.norm();
    if (s <= len || i + 1 == path.size())
    {
      if (tangent)
        *tangent = d.normalized();
      if (len <= 0.0)
        return path[i];
      return path[i - 1] + d * (std::min(s, len) / len);
    }
    s -= len;
  }
  if (tangent)
    *tangent = Vec2{};
  return path.back();
}

} // anonymous namespace

//==============================================================================
NominalPlan nominal_plan(
  const AgentSpec& spec,
  const WorldGeometry& geometry,
  const PlannerOptions& options)
{
  if (!(options.dt > 0.0))
    throw std::invalid_argument("nominal_plan: dt must be positive");

  NominalPlan plan;
  plan.agent_id = spec.id;
  plan.trajectory.dt = options.dt;

  if ((spec.goal - spec.start).norm() < geometric_tolerance)
  {
    plan.path = {spec.start};
    plan.trajectory.samples.push_back({spec.start, {}, 0.0});
    plan.duration = 0.0;
    return plan;
  }

  plan.path = shortest_path(spec, geometry, options);
  const double length = path_length(plan.path);
  plan.duration = length / spec.preferred_speed;

  const auto steps = static_cast<std::size_t>(
    std::ceil(plan.duration / options.dt - 1e-9));
  plan.trajectory.samples.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
  {
    const double t = static_cast<double>(k) * options.dt;
    AgentState s;
    s.time = t;
    if (k == steps)
    {
      s.position = plan.path.back();
    }
    else
    {
      Vec2 tangent;
      s.position = point_along(plan.path, spec.preferred_speed * t, &tangent);
      s.velocity = tangent * spec.preferred_speed;
    }
    plan.trajectory.samples.push_back(s);
  }
  return plan;
}

//==============================================================================
std::vector<std::vector<int>> SmgReport::coupling_at(double t) const
{
  std::vector<std::vector<int>> sets;
  for (const auto& c : coupling_sets)
  {
    if (c.begin - geometric_tolerance <= t && t <= c.end + geometric_tolerance)
      sets.push_back(c.members);
  }
  return sets;
}

namespace {

Vec2 held_position(const Trajectory& traj, std::size_t k)
{
  return traj.samples[std::min(k, traj.samples.size() - 1)].position;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i)
{
  while (parent[i] != i)
  {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

} // anonymous namespace

//==============================================================================
SmgReport detect_smg(
  const std::vector<AgentSpec>& agents,
  const std::vector<NominalPlan>& plans,
  double delta,
  double dt)
{
  if (!(delta > 0.0))
    throw std::invalid_argument("detect_smg: delta must be positive");
  if (agents.size() != plans.size())
    throw std::invalid_argument("detect_smg: one plan per agent is required");

  SmgReport report;
  report.delta = delta;

  const std::size_t n = agents.size();
  std::size_t horizon = 0;
  for (const auto& p : plans)
    horizon = std::max(horizon, p.trajectory.samples.size());

  // Per-step active edges, used to build the coupling sets afterwards.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges(horizon);

  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = i + 1; j < n; ++j)
    {
      if (plans[i].duration <= 0.0 || plans[j].duration <= 0.0)
        continue;

      const double reach = agents[i].radius + agents[j].radius;
      const std::size_t steps = std::max(
        plans[i].trajectory.samples.size(), plans[j].trajectory.samples.size());

      std::optional<std::size_t> run_start;
      const auto close_run = [&](std::size_t last)
        {
          const double a = static_cast<double>(*run_start) * dt;
          const double b = static_cast<double>(last) * dt;
          if (b - a > delta)
          {
            const int lo = std::min(agents[i].id, agents[j].id);
            const int hi = std::max(agents[i].id, agents[j].id);
            report.conflicts.push_back({lo, hi, a, b});
            for (std::size_t k = *run_start; k <= last; ++k)
              edges[k].emplace_back(i, j);
          }
          run_start.reset();
        };

      for (std::size_t k = 0; k < steps; ++k)
      {
        const double d = (held_position(plans[i].trajectory, k)
          - held_position(plans[j].trajectory, k)).norm();
        const bool overlap = d <= reach;
        if (overlap && !run_start)
          run_start = k;
        else if (!overlap && run_start)
          close_run(k - 1);
      }
      if (run_start)
        close_run(steps - 1);
    }
  }

  std::sort(report.conflicts.begin(), report.conflicts.end(),
    [](const ConflictInterval& a, const ConflictInterval& b)
    {
      if (a.first != b.first)
        return a.first < b.first;
      if (a.second != b.second)
        return a.second < b.second;
      return a.begin < b.begin;
    });

  for (const auto& c : report.conflicts)
  {
    const std::pair<int, int> pair{c.first, c.second};
    if (std::find(report.conflicting_pairs.begin(),
      report.conflicting_pairs.end(), pair) == report.conflicting_pairs.end())
      report.conflicting_pairs.push_back(pair);

    if (!report.window
      || c.begin < report.window->first
      || (c.begin == report.window->first && c.end < report.window->second))
      report.window = std::make_pair(c.begin, c.end);
  }
  report.is_smg = report.window.has_value();

  for (std::size_t k = 0; k < horizon; ++k)
  {
    if (edges[k].empty())
      continue;

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i)
      parent[i] = i;
    std::vector<bool> involved(n, false);
    for (const auto& [i, j] : edges[k])
    {
      parent[find_root(parent, i)] = find_root(parent, j);
      involved[i] = involved[j] = true;
    }

    std::vector<std::vector<int>> components;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i)
    {
      if (!involved[i])
        continue;
      const std::size_t r = find_root(parent, i);
      const auto it = std::find(roots.begin(), roots.end(), r);
      if (it == roots.end())
      {
        roots.push_back(r);
        components.push_back({agents[i].id});
      }
      else
      {
        components[static_cast<std::size_t>(it - roots.begin())].push_back(
          agents[i].id);
      }
    }
    for (auto& c : components)
      std::sort(c.begin(), c.end());
    std::sort(components.begin(), components.end());

    const double t = static_cast<double>(k) * dt;
    for (auto& members : components)
    {
      // Extend a set that was active on the previous grid step.
      bool extended = false;
      for (auto& existing : report.coupling_sets)
      {
        if (existing.members == members
          && std::abs(existing.end - (t - dt)) < 0.5 * dt)
        {
          existing.end = t;
          extended = true;
          break;
        }
      }
      if (!extended)
        report.coupling_sets.push_back({t, t, std::move(members)});
    }
  }

  return report;
}

//==============================================================================
SmgReport detect_smg(
  const Scenario& scenario,
  double delta,
  const PlannerOptions& options)
{
  std::vector<NominalPlan> plans;
  plans.reserve(scenario.agents.size());
  for (const auto& a : scenario.agents)
    plans.push_back(nominal_plan(a, scenario.geometry, options));

  return detect_smg(scenario.agents, plans, delta, options.dt);
}

} // namespace smgbench
