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
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace smgbench {

namespace {

//==============================================================================
constexpr std::array<std::pair<ScenarioKind, std::string_view>, 9> kind_names = {{
  {ScenarioKind::Doorway, "doorway"},
  {ScenarioKind::Intersection, "intersection"},
  {ScenarioKind::Hallway, "hallway"},
  {ScenarioKind::LCorner, "l_corner"},
  {ScenarioKind::BlindCorner, "blind_corner"},
  {ScenarioKind::Crowded, "crowded"},
  {ScenarioKind::Parallel, "parallel"},
  {ScenarioKind::Perpendicular, "perpendicular"},
  {ScenarioKind::Circular, "circular"},
}};

/// Uniform double in [0, 1) from the top 53 bits, identical on every
/// standard library.
double unit_uniform(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
  return lo + (hi - lo) * unit_uniform(rng);
}

void add_rectangle(std::vector<Segment>& out, Vec2 lo, Vec2 hi)
{
  out.push_back({{lo.x, lo.y}, {hi.x, lo.y}});
  out.push_back({{hi.x, lo.y}, {hi.x, hi.y}});
  out.push_back({{hi.x, hi.y}, {lo.x, hi.y}});
  out.push_back({{lo.x, hi.y}, {lo.x, lo.y}});
}

struct Layout
{
  WorldGeometry geometry;
  std::vector<std::pair<Vec2, Vec2>> endpoints;
  std::vector<double> preferred_speed_factor;
};

//==============================================================================
class Builder
{
public:
  Builder(const ScenarioParams& params)
  : _p(params),
    _s(params.world_scale),
    _w(grid_cells * params.world_scale),
    _c(0.5 * grid_cells * params.world_scale)
  {
    _layout.geometry.bounds = {{0.0, 0.0}, {_w, _w}};
    add_rectangle(_layout.geometry.obstacles, {0.0, 0.0}, {_w, _w});
  }

  Layout doorway()
  {
    const double z = _p.gap_width.value_or(4.0 * _s);
    const double approach = _p.approach_distance.value_or(15.5 * _s);
    const double wall_lo = 30.0 * _s;
    const double wall_hi = 31.0 * _s;
    const double door_x = 0.5 * (wall_lo + wall_hi);

    if (!(z > 0.0) || z >= _w)
      throw ScenarioError("doorway: gap_width must lie in (0, world size)");

    auto& obstacles = _layout.geometry.obstacles;
    add_rectangle(obstacles, {wall_lo, 0.0}, {wall_hi, _c - 0.5 * z});
    add_rectangle(obstacles, {wall_lo, _c + 0.5 * z}, {wall_hi, _w});
    _layout.geometry.gap = Gap{{door_x, _c}, {1.0, 0.0}, z};

    // Even ids start left of the wall, odd ids mirror them on the right.
    // The goal stops one cell short of the mirrored start, which reproduces
    // the (15, 32) -> (45, 32) grid layout.
    for (int i = 0; i < _p.n_agents; ++i)
    {
      const double y = _c + lane(i / 2, 6.0 * _s);
      const double side = (i % 2 == 0) ? -1.0 : 1.0;
      add({door_x + side * approach, y}, {door_x - side * (approach - _s), y});
    }
    return std::move(_layout);
  }

  Layout hallway()
  {
    const double width = _p.corridor_width.value_or(8.0 * _s);
    const double approach = _p.approach_distance.value_or(14.0 * _s);
    corridor_walls_x(width);

    for (int i = 0; i < _p.n_agents; ++i)
    {
      const int k = i / 2;
      const double y = _c + (k == 0 ? 0.0 : 0.25 * width);
      const double x = approach + 4.0 * _s * k;
      if (i % 2 == 0)
        add({_c - x, y}, {_c + x, y});
      else
        add({_c + x, y}, {_c - x, y});
    }
    return std::move(_layout);
  }

  Layout intersection()
  {
    const double width = _p.corridor_width.value_or(8.0 * _s);
    const double approach = _p.approach_distance.value_or(14.0 * _s);
    const double h = 0.5 * width;
    auto& obstacles = _layout.geometry.obstacles;
    for (const double sx : {-1.0, 1.0})
    {
      for (const double sy : {-1.0, 1.0})
      {
        const Vec2 corner{_c + sx * h, _c + sy * h};
        obstacles.push_back({corner, {sx < 0 ? 0.0 : _w, corner.y}});
        obstacles.push_back({corner, {corner.x, sy < 0 ? 0.0 : _w}});
      }
    }

    // West->east, south->north, east->west, north->south.
    const std::array<Vec2, 4> headings = {
      Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{-1.0, 0.0}, Vec2{0.0, -1.0}};
    const Vec2 center{_c, _c};
    for (int i = 0; i < _p.n_agents; ++i)
    {
      const Vec2 d = headings[static_cast<std::size_t>(i % 4)];
      add(center - d * approach, center + d * approach);
    }
    return std::move(_layout);
  }

  Layout corner(bool opposing)
  {
    const double width = _p.corridor_width.value_or(8.0 * _s);
    const double approach = _p.approach_distance.value_or(
      (opposing ? 28.0 : 20.0) * _s);
    const double h = 0.5 * width;
    auto& obstacles = _layout.geometry.obstacles;

    // Horizontal arm enters from the west, vertical arm exits to the north.
    obstacles.push_back({{0.0, _c - h}, {_c + h, _c - h}});
    obstacles.push_back({{_c + h, _c - h}, {_c + h, _w}});
    obstacles.push_back({{0.0, _c + h}, {_c - h, _c + h}});
    obstacles.push_back({{_c - h, _c + h}, {_c - h, _w}});

    for (int i = 0; i < _p.n_agents; ++i)
    {
      const double back = 6.0 * _s * (i / 2);
      if (opposing)
      {
        const Vec2 west{_c - approach + back, _c};
        const Vec2 north{_c, _c + approach - back};
        if (i % 2 == 0)
          add(west, north);
        else
          add(north, west);
      }
      else
      {
        // Side by side on the same arm; goals keep the same lateral order.
        const double o = (i % 2 == 0 ? 1.0 : -1.0) * 0.25 * width;
        add({_c - approach - back, _c + o}, {_c - o, _c + approach - back});
      }
    }
    return std::move(_layout);
  }

  Layout crowded(std::mt19937_64& rng)
  {
    const double half = 12.0 * _s;
    const double r = _p.agent_radius;
    std::vector<Vec2> starts;
    std::vector<Vec2> goals;

    const auto draw = [&](const std::vector<Vec2>& taken) -> Vec2
      {
        for (int attempt = 0; attempt < 1000; ++attempt)
        {
          const Vec2 p{uniform(rng, _c - half, _c + half),
            uniform(rng, _c - half, _c + half)};
          const bool free = std::all_of(taken.begin(), taken.end(),
            [&](const Vec2& q) { return (p - q).norm() >= 2.0 * r + 0.1; });
          if (free)
            return p;
        }
        throw ScenarioError("crowded: could not place agents without overlap");
      };

    for (int i = 0; i < _p.n_agents; ++i)
    {
      starts.push_back(draw(starts));
      Vec2 g;
      do
      {
        g = draw(goals);
      } while ((g - starts.back()).norm() < 1.0);
      goals.push_back(g);
      add(starts.back(), goals.back());
    }
    return std::move(_layout);
  }

  Layout parallel()
  {
    const double approach = _p.approach_distance.value_or(20.0 * _s);
    const int pairs = (_p.n_agents + 1) / 2;
    const double spacing = 6.0 * _s;
    for (int i = 0; i < _p.n_agents; ++i)
    {
      const int k = i / 2;
      const double y = _c + (k - 0.5 * (pairs - 1)) * spacing;
      if (i % 2 == 0)
      {
        add({_c - approach, y}, {_c + approach, y});
      }
      else
      {
        // Slower leader with a head start: the follower must overtake.
        add({_c - approach + 6.0 * _s, y}, {_c + approach - 6.0 * _s, y});
        _layout.preferred_speed_factor.back() = 0.5;
      }
    }
    return std::move(_layout);
  }

  Layout perpendicular()
  {
    const double approach = _p.approach_distance.value_or(20.0 * _s);
    for (int i = 0; i < _p.n_agents; ++i)
    {
      const double d = -6.0 * _s * (i / 2);
      if (i % 2 == 0)
        add({_c - approach, _c + d}, {_c + approach, _c + d});
      else
        add({_c + d, _c - approach}, {_c + d, _c + approach});
    }
    return std::move(_layout);
  }

  Layout circular()
  {
    const double radius = _p.approach_distance.value_or(16.0 * _s);
    const Vec2 center{_c, _c};
    for (int i = 0; i < _p.n_agents; ++i)
    {
      const double angle =
        std::numbers::pi + 2.0 * std::numbers::pi * i / _p.n_agents;
      const Vec2 offset = Vec2{std::cos(angle), std::sin(angle)} * radius;
      add(center + offset, center - offset);
    }
    return std::move(_layout);
  }

private:
  double lane(int k, double spacing) const
  {
    return spacing * k;
  }

  void corridor_walls_x(double width)
  {
    const double h = 0.5 * width;
    _layout.geometry.obstacles.push_back({{0.0, _c - h}, {_w, _c - h}});
    _layout.geometry.obstacles.push_back({{0.0, _c + h}, {_w, _c + h}});
  }

  void add(Vec2 start, Vec2 goal)
  {
    _layout.endpoints.emplace_back(start, goal);
    _layout.preferred_speed_factor.push_back(1.0);
  }

  const ScenarioParams& _p;
  double _s;
  double _w;
  double _c;
  Layout _layout;
};

//==============================================================================
std::string describe_point(const Vec2& p)
{
  std::ostringstream ss;
  ss << "(" << p.x << ", " << p.y << ")";
  return ss.str();
}

/// Empty string when the starts are acceptable, otherwise the reason.
std::string start_problem(
  const std::vector<AgentSpec>& agents,
  const WorldGeometry& geometry)
{
  for (std::size_t i = 0; i < agents.size(); ++i)
  {
    const auto& a = agents[i];
    if (!geometry.bounds.contains(a.start))
      return "agent " + std::to_string(a.id) + " start "
        + describe_point(a.start) + " lies outside the world bounds";

    const double c = geometry.clearance(a.start);
    if (c < a.radius - geometric_tolerance)
      return "agent " + std::to_string(a.id) + " start "
        + describe_point(a.start) + " has obstacle clearance "
        + std::to_string(c) + " m < radius " + std::to_string(a.radius) + " m";

    for (std::size_t j = 0; j < i; ++j)
    {
      const auto& b = agents[j];
      const double d = (a.start - b.start).norm();
      if (d < a.radius + b.radius - geometric_tolerance)
        return "agents " + std::to_string(b.id) + " and "
          + std::to_string(a.id) + " start " + std::to_string(d)
          + " m apart, below the required "
          + std::to_string(a.radius + b.radius) + " m";
    }
  }
  return {};
}

} // anonymous namespace

//==============================================================================
std::string_view to_string(ScenarioKind kind)
{
  for (const auto& [k, name] : kind_names)
  {
    if (k == kind)
      return name;
  }
  return "unknown";
}

//==============================================================================
ScenarioKind scenario_kind_from_string(std::string_view name)
{
  for (const auto& [k, n] : kind_names)
  {
    if (n == name)
      return k;
  }

  std::string valid;
  for (const auto& [k, n] : kind_names)
  {
    if (!valid.empty())
      valid += ", ";
    valid += n;
  }
  throw std::invalid_argument(
          "unknown scenario kind '" + std::string(name) + "' (valid: "
          + valid + ")");
}

//==============================================================================
const AgentSpec& Scenario::agent(int id) const
{
  for (const auto& a : agents)
  {
    if (a.id == id)
      return a;
  }
  throw std::out_of_range("no agent with id " + std::to_string(id));
}

//==============================================================================
const std::vector<ScenarioInfo>& list_scenarios()
{
  static const std::vector<ScenarioInfo> infos = []()
    {
      const std::vector<ParameterInfo> common = {
        {"n_agents", "count", "number of robots"},
        {"world_scale", "m/cell", "meters per grid cell of the 64-cell world"},
        {"jitter", "m", "uniform random start perturbation half-width"},
        {"seed", "", "random seed for jitter and random layouts"},
      };

      const auto with = [&](std::vector<ParameterInfo> extra)
        {
          auto all = common;
          all.insert(all.end(), extra.begin(), extra.end());
          return all;
        };

      const ParameterInfo corridor{"corridor_width", "m",
        "free width between the corridor walls (default 8 cells)"};

      return std::vector<ScenarioInfo>{
        {ScenarioKind::Doorway,
          "Wall at cells 30-31 with a single gap; agents from both sides "
          "contend for the bottleneck.",
          with({{"gap_width", "m", "doorway opening (default 4 cells)"},
              {"approach_distance", "m",
                "start distance from the door plane (default 15.5 cells)"}}),
          1, 4},
        {ScenarioKind::Intersection,
          "Two orthogonal corridors crossing at the world center.",
          with({corridor, {"approach_distance", "m",
                "start distance from the crossing (default 14 cells)"}}),
          1, 4},
        {ScenarioKind::Hallway,
          "Straight corridor with two-way head-on traffic.",
          with({corridor, {"approach_distance", "m",
                "start distance from the corridor midpoint (default 14 cells)"}}),
          1, 4},
        {ScenarioKind::LCorner,
          "L-shaped corridor; agents start side by side and take the same "
          "90-degree turn.",
          with({corridor, {"approach_distance", "m",
                "arm distance from the corner (default 20 cells)"}}),
          1, 4},
        {ScenarioKind::BlindCorner,
          "L-shaped corridor with opposing approaches hidden by the inner "
          "wall.",
          with({corridor, {"approach_distance", "m",
                "start distance from the corner (default 28 cells)"}}),
          1, 4},
        {ScenarioKind::Crowded,
          "Random collision-free starts and goals in the central region.",
          common, 1, 8},
        {ScenarioKind::Parallel,
          "Parallel lanes; a faster follower must overtake a slower leader.",
          with({{"approach_distance", "m",
                "start distance from the center (default 20 cells)"}}),
          1, 8},
        {ScenarioKind::Perpendicular,
          "Open-space streams crossing at right angles.",
          with({{"approach_distance", "m",
                "start distance from the crossing (default 20 cells)"}}),
          1, 8},
        {ScenarioKind::Circular,
          "Agents on a ring, each bound for its antipodal point.",
          with({{"approach_distance", "m", "ring radius (default 16 cells)"}}),
          1, 8},
      };
    }();
  return infos;
}

const ScenarioInfo& scenario_info(ScenarioKind kind)
{
  for (const auto& info : list_scenarios())
  {
    if (info.kind == kind)
      return info;
  }
  throw std::invalid_argument("unknown scenario kind");
}

//==============================================================================
Scenario build(ScenarioKind kind, const ScenarioParams& params)
{
  const auto& info = scenario_info(kind);
  if (params.n_agents < info.min_agents || params.n_agents > info.max_agents)
  {
    throw ScenarioError(
            std::string(to_string(kind)) + " supports "
            + std::to_string(info.min_agents) + "-"
            + std::to_string(info.max_agents) + " agents, got "
            + std::to_string(params.n_agents));
  }
  if (!(params.world_scale > 0.0))
    throw ScenarioError("world_scale must be positive");
  if (!(params.jitter >= 0.0))
    throw ScenarioError("jitter must be non-negative");
  if (params.corridor_width && !(*params.corridor_width > 0.0))
    throw ScenarioError("corridor_width must be positive");
  if (params.gap_width && !(*params.gap_width > 0.0))
    throw ScenarioError("gap_width must be positive");
  if (params.approach_distance && !(*params.approach_distance > 0.0))
    throw ScenarioError("approach_distance must be positive");

  std::mt19937_64 rng(params.seed);
  Builder builder(params);
  Layout layout;
  switch (kind)
  {
    case ScenarioKind::Doorway: layout = builder.doorway(); break;
    case ScenarioKind::Intersection: layout = builder.intersection(); break;
    case ScenarioKind::Hallway: layout = builder.hallway(); break;
    case ScenarioKind::LCorner: layout = builder.corner(false); break;
    case ScenarioKind::BlindCorner: layout = builder.corner(true); break;
    case ScenarioKind::Crowded: layout = builder.crowded(rng); break;
    case ScenarioKind::Parallel: layout = builder.parallel(); break;
    case ScenarioKind::Perpendicular: layout = builder.perpendicular(); break;
    case ScenarioKind::Circular: layout = builder.circular(); break;
  }

  Scenario scenario;
  scenario.kind = kind;
  scenario.seed = params.seed;
  scenario.geometry = std::move(layout.geometry);

  std::vector<AgentSpec> base;
  for (std::size_t i = 0; i < layout.endpoints.size(); ++i)
  {
    AgentSpec a;
    a.id = static_cast<int>(i);
    a.radius = params.agent_radius;
    a.preferred_speed = params.preferred_speed * layout.preferred_speed_factor[i];
    a.max_speed = params.max_speed;
    a.max_accel = params.max_accel;
    a.start = layout.endpoints[i].first;
    a.goal = layout.endpoints[i].second;
    a.sensing_radius = params.sensing_radius;
    base.push_back(a);
  }

  std::string problem;
  constexpr int max_attempts = 100;
  for (int attempt = 0; attempt < max_attempts; ++attempt)
  {
    scenario.agents = base;
    if (params.jitter > 0.0)
    {
      for (auto& a : scenario.agents)
      {
        a.start.x += uniform(rng, -params.jitter, params.jitter);
        a.start.y += uniform(rng, -params.jitter, params.jitter);
      }
    }

    problem = start_problem(scenario.agents, scenario.geometry);
    if (problem.empty())
      break;
    if (params.jitter <= 0.0)
      throw ScenarioError(std::string(to_string(kind)) + ": " + problem);
  }

  if (!problem.empty())
  {
    throw ScenarioError(
            std::string(to_string(kind)) + ": jittered starts still invalid after "
            + std::to_string(max_attempts) + " attempts: " + problem);
  }

  validate(scenario);
  return scenario;
}

//==============================================================================
void validate(const Scenario& scenario)
{
  for (std::size_t i = 0; i < scenario.agents.size(); ++i)
  {
    for (std::size_t j = 0; j < i; ++j)
    {
      if (scenario.agents[i].id == scenario.agents[j].id)
        throw ScenarioError(
                "duplicate agent id " + std::to_string(scenario.agents[i].id));
    }
  }

  for (const auto& a : scenario.agents)
  {
    try
    {
      validate(a, scenario.geometry);
    }
    catch (const std::invalid_argument& e)
    {
      throw ScenarioError(e.what());
    }
  }

  const auto problem = start_problem(scenario.agents, scenario.geometry);
  if (!problem.empty())
    throw ScenarioError(problem);

  for (const auto& a : scenario.agents)
  {
    try
    {
      nominal_plan(a, scenario.geometry);
    }
    catch (const UnreachableGoal& e)
    {
      throw ScenarioError(e.what());
    }
  }
}

//==============================================================================
Scenario without_agent(const Scenario& scenario, int id)
{
  Scenario out = scenario;
  out.agents.erase(
    std::remove_if(out.agents.begin(), out.agents.end(),
    [id](const AgentSpec& a) { return a.id == id; }),
    out.agents.end());
  return out;
}

} // namespace smgbench
