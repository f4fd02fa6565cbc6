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

#include <smgbench/solvers.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace smgbench {

namespace {

//==============================================================================
constexpr std::array<std::pair<SolverKind, std::string_view>, 4> solver_names = {{
  {SolverKind::Orca, "orca"},
  {SolverKind::CbfRhr, "cbf_rhr"},
  {SolverKind::Auction, "auction"},
  {SolverKind::ImpcLite, "impc_lite"},
}};

bool at_goal(const AgentSpec& spec, const AgentState& state, double tol)
{
  return (spec.goal - state.position).norm() <= tol;
}

bool occluded(const Vec2& a, const Vec2& b, const WorldGeometry& geometry)
{
  const Segment sight{a, b};
  for (const auto& seg : geometry.obstacles)
  {
    if (segment_segment_distance(sight, seg) <= 0.0)
      return true;
  }
  return false;
}

/// Closest point of `seg` to `p` and the outward unit normal toward `p`.
std::optional<std::pair<double, Vec2>> obstacle_normal(
  const Vec2& p, const Segment& seg)
{
  const Vec2 q = closest_point(p, seg);
  const Vec2 d = p - q;
  const double dist = d.norm();
  if (dist < geometric_tolerance)
    return std::nullopt;
  return std::make_pair(dist, d / dist);
}

void push_if_binding(
  std::vector<HalfPlane>& planes, const Vec2& normal, double offset, double cap)
{
  if (offset < cap)
    planes.push_back(HalfPlane::from(normal, offset));
}

/// Connected components of `members` under the proximity relation used for
/// deadlock groups.
std::vector<std::vector<std::size_t>> proximity_groups(
  const std::vector<WorldView>& views,
  const std::vector<std::size_t>& members,
  double reach)
{
  std::vector<std::size_t> parent(members.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    parent[i] = i;

  const auto root = [&](std::size_t i)
    {
      while (parent[i] != i)
        i = parent[i] = parent[parent[i]];
      return i;
    };

  for (std::size_t a = 0; a < members.size(); ++a)
  {
    for (std::size_t b = a + 1; b < members.size(); ++b)
    {
      const auto& va = views[members[a]];
      const auto& vb = views[members[b]];
      const double limit = va.self.radius + vb.self.radius + reach;
      if ((va.state.position - vb.state.position).norm() <= limit)
        parent[root(a)] = root(b);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < members.size(); ++a)
    groups[root(a)].push_back(members[a]);

  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, g] : groups)
    out.push_back(std::move(g));
  return out;
}

/// Clockwise angle from +y in [0, 2 pi).
double clockwise_bearing(const Vec2& d)
{
  double a = std::atan2(d.x, d.y);
  if (a < 0.0)
    a += 2.0 * std::numbers::pi;
  return a;
}

Vec2 point_along(const std::vector<Vec2>& path, double s)
{
  for (std::size_t i = 1; i < path.size(); ++i)
  {
    const Vec2 d = path[i] - path[i - 1];
    const double len = d.norm();
    if (s <= len)
      return len > 0.0 ? path[i - 1] + d * (s / len) : path[i];
    s -= len;
  }
  return path.back();
}

} // anonymous namespace

//==============================================================================
std::string_view to_string(SolverKind kind)
{
  for (const auto& [k, name] : solver_names)
  {
    if (k == kind)
      return name;
  }
  return "unknown";
}

SolverKind solver_kind_from_string(std::string_view name)
{
  for (const auto& [k, n] : solver_names)
  {
    if (n == name)
      return k;
  }
  if (name == "cadrl")
  {
    throw UnsupportedSolver(
            "solver 'cadrl' requires a trained policy network and is not "
            "provided; choose one of orca, cbf_rhr, auction, impc_lite");
  }
  throw UnsupportedSolver(
          "unknown solver '" + std::string(name)
          + "' (valid: orca, cbf_rhr, auction, impc_lite)");
}

const std::vector<SolverKind>& solver_kinds()
{
  static const std::vector<SolverKind> kinds = {
    SolverKind::Orca, SolverKind::CbfRhr, SolverKind::Auction,
    SolverKind::ImpcLite};
  return kinds;
}

//==============================================================================
void SolverConfig::validate() const
{
  const auto require = [](bool ok, const char* what)
    {
      if (!ok)
        throw std::invalid_argument(std::string("solver config: ") + what);
    };

  require(time_horizon > 0.0, "time_horizon must be positive");
  require(obstacle_time_horizon > 0.0, "obstacle_time_horizon must be positive");
  require(safety_margin >= 0.0, "safety_margin must be non-negative");
  require(deadlock_speed > 0.0, "deadlock_speed must be positive");
  require(deadlock_duration > 0.0, "deadlock_duration must be positive");
  require(std::isfinite(perturb_angle), "perturb_angle must be finite");
  require(perturb_hysteresis >= 0.0, "perturb_hysteresis must be non-negative");
  require(velocity_scale > 0.0 && velocity_scale < 1.0,
    "velocity_scale must lie in (0, 1)");
  require(warning_band > 0.0, "warning_band must be positive");
  require(auction_period > 0.0, "auction_period must be positive");
  require(goal_tolerance > 0.0, "goal_tolerance must be positive");
  require(lookahead > 0.0, "lookahead must be positive");
  require(cbf_alpha > 0.0, "cbf_alpha must be positive");

  std::set<int> seen;
  for (const int id : forced_ranking)
    require(seen.insert(id).second, "forced_ranking repeats an agent id");
}

//==============================================================================
std::vector<WorldView> make_views(
  const std::vector<AgentSpec>& specs,
  const std::vector<AgentState>& states,
  const WorldGeometry& geometry,
  const Observability& observability,
  double time)
{
  if (specs.size() != states.size())
    throw std::invalid_argument("make_views: specs and states differ in size");

  std::vector<std::size_t> by_id(specs.size());
  for (std::size_t i = 0; i < by_id.size(); ++i)
    by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(),
    [&](std::size_t a, std::size_t b) { return specs[a].id < specs[b].id; });

  std::vector<WorldView> views;
  views.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i)
  {
    WorldView view;
    view.self = specs[i];
    view.state = states[i];
    view.time = time;
    const Vec2 p = states[i].position;
    const double range = specs[i].sensing_radius;

    for (const std::size_t j : by_id)
    {
      if (j == i)
        continue;
      if ((states[j].position - p).norm() > range)
        continue;
      if (observability.occlusion
        && occluded(p, states[j].position, geometry))
        continue;

      NeighborView n;
      n.id = specs[j].id;
      n.radius = specs[j].radius;
      if (observability.valuations_visible)
        n.priority = specs[j].priority;
      n.state = states[j];
      view.neighbors.push_back(n);
    }

    for (const auto& seg : geometry.obstacles)
    {
      if (point_segment_distance(p, seg) <= range)
        view.obstacles.push_back(seg);
    }
    views.push_back(std::move(view));
  }
  return views;
}

//==============================================================================
DeadlockState detect_deadlock(
  const std::vector<AgentSpec>& specs,
  const std::vector<AgentState>& states,
  const DeadlockState& previous,
  const SolverConfig& config,
  double dt)
{
  if (specs.size() != states.size())
    throw std::invalid_argument("detect_deadlock: specs and states differ in size");

  DeadlockState next;
  for (std::size_t i = 0; i < specs.size(); ++i)
  {
    const int id = specs[i].id;
    double timer = 0.0;
    const bool stalled = states[i].velocity.norm() < config.deadlock_speed;
    if (stalled && !at_goal(specs[i], states[i], config.goal_tolerance))
    {
      const auto it = previous.stall_timer.find(id);
      timer = (it == previous.stall_timer.end() ? 0.0 : it->second) + dt;
    }
    next.stall_timer[id] = timer;

    // Absorbs the rounding of repeated dt additions.
    if (timer >= config.deadlock_duration - 1e-9)
      next.flagged.insert(id);
  }
  return next;
}

//==============================================================================
Control nominal_control(
  const WorldView& view,
  const NominalPlan& plan,
  const SolverConfig& config,
  double dt)
{
  const Vec2 p = view.state.position;
  if (at_goal(view.self, view.state, config.goal_tolerance))
    return Control::velocity({});

  Vec2 carrot = view.self.goal;
  const auto& path = plan.path;
  if (path.size() >= 2)
  {
    double best = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    double walked = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i)
    {
      const Segment seg{path[i - 1], path[i]};
      const Vec2 q = closest_point(p, seg);
      const double d = (p - q).norm();
      if (d < best - 1e-12)
      {
        best = d;
        best_s = walked + (q - path[i - 1]).norm();
      }
      walked += (path[i] - path[i - 1]).norm();
    }
    carrot = point_along(path, best_s + config.lookahead);
  }

  const Vec2 d = carrot - p;
  const double dist = d.norm();
  if (dist < geometric_tolerance)
    return Control::velocity({});

  const double speed = std::min(view.self.preferred_speed, dist / dt);
  return Control::velocity(d * (speed / dist));
}

//==============================================================================
std::vector<HalfPlane> orca_constraints(
  const WorldView& view,
  const SolverConfig& config,
  double dt)
{
  std::vector<HalfPlane> planes;
  const Vec2 p = view.state.position;
  const Vec2 v = view.state.velocity;
  const double r = view.self.radius;
  const double cap = view.self.max_speed;
  const double tau = config.time_horizon;

  for (const auto& n : view.neighbors)
  {
    const Vec2 rel_pos = n.state.position - p;
    const double dist_sq = rel_pos.squared_norm();
    if (std::sqrt(dist_sq)
      > tau * 2.0 * view.self.max_speed + r + n.radius)
      continue;

    const Vec2 rel_vel = v - n.state.velocity;
    const double combined = r + n.radius + config.safety_margin;
    const double combined_sq = combined * combined;

    Vec2 direction;
    Vec2 u;
    if (dist_sq > combined_sq)
    {
      const Vec2 w = rel_vel - rel_pos / tau;
      const double w_len_sq = w.squared_norm();
      const double dot1 = w.dot(rel_pos);

      if (dot1 < 0.0 && dot1 * dot1 > combined_sq * w_len_sq)
      {
        // Closest boundary point lies on the truncation circle.
        const double w_len = std::sqrt(w_len_sq);
        const Vec2 unit_w = w / w_len;
        direction = {unit_w.y, -unit_w.x};
        u = unit_w * (combined / tau - w_len);
      }
      else
      {
        const double leg = std::sqrt(dist_sq - combined_sq);
        if (rel_pos.cross(w) > 0.0)
        {
          direction = Vec2{
            rel_pos.x * leg - rel_pos.y * combined,
            rel_pos.x * combined + rel_pos.y * leg} / dist_sq;
        }
        else
        {
          direction = -Vec2{
            rel_pos.x * leg + rel_pos.y * combined,
            -rel_pos.x * combined + rel_pos.y * leg} / dist_sq;
        }
        u = direction * rel_vel.dot(direction) - rel_vel;
      }
    }
    else
    {
      // Already inside the margin: resolve within one step.
      const Vec2 w = rel_vel - rel_pos / dt;
      const double w_len = w.norm();
      if (w_len < geometric_tolerance)
        continue;
      const Vec2 unit_w = w / w_len;
      direction = {unit_w.y, -unit_w.x};
      u = unit_w * (combined / dt - w_len);
    }

    const Vec2 point = v + u * 0.5;
    const Vec2 normal{direction.y, -direction.x};
    push_if_binding(planes, normal, normal.dot(point), cap);
  }

  for (const auto& seg : view.obstacles)
  {
    const auto hit = obstacle_normal(p, seg);
    if (!hit)
      continue;
    const auto [d, n_out] = *hit;
    const double offset =
      (d - r - config.safety_margin) / config.obstacle_time_horizon;
    push_if_binding(planes, -n_out, offset, cap);
  }
  return planes;
}

//==============================================================================
std::vector<HalfPlane> cbf_constraints(
  const WorldView& view,
  const SolverConfig& config,
  const std::map<int, double>& responsibility)
{
  std::vector<HalfPlane> planes;
  const Vec2 p_i = view.state.position;
  const Vec2 v_i = view.state.velocity;
  const double r = view.self.radius;
  const double cap = view.self.max_speed;
  const double alpha = config.cbf_alpha;

  for (const auto& n : view.neighbors)
  {
    const Vec2 p = p_i - n.state.position;
    const double dist = p.norm();
    if (dist < geometric_tolerance)
      continue;

    const double safe = r + n.radius + config.safety_margin;
    const double h = dist * dist - safe * safe;

    const auto it = responsibility.find(n.id);
    const double w = it == responsibility.end() ? 0.5 : it->second;

    // 2 p.u_i >= 2 p.((1 - w) v_i + w v_j) - w alpha h
    const Vec2 assumed = v_i * (1.0 - w) + n.state.velocity * w;
    const double offset = (w * alpha * h - 2.0 * p.dot(assumed)) / (2.0 * dist);
    push_if_binding(planes, -p / dist, offset, cap);
  }

  for (const auto& seg : view.obstacles)
  {
    const auto hit = obstacle_normal(p_i, seg);
    if (!hit)
      continue;
    const auto [d, n_out] = *hit;
    const double safe = r + config.safety_margin;
    const double h = d * d - safe * safe;
    push_if_binding(planes, -n_out, alpha * h / (2.0 * d), cap);
  }
  return planes;
}

//==============================================================================
std::set<int> warning_band_neighbors(
  const WorldView& view,
  const SolverConfig& config)
{
  std::set<int> out;
  for (const auto& n : view.neighbors)
  {
    const double dist = (n.state.position - view.state.position).norm();
    const double buffer =
      0.5 * (view.self.radius + n.radius) + 0.5 * config.safety_margin;
    if (0.5 * dist - buffer <= config.warning_band)
      out.insert(n.id);
  }
  return out;
}

std::vector<HalfPlane> bvc_constraints(
  const WorldView& view,
  const SolverConfig& config,
  double dt,
  const std::set<int>& tilted)
{
  std::vector<HalfPlane> planes;
  const Vec2 p = view.state.position;
  const double r = view.self.radius;
  const double cap = view.self.max_speed;

  for (const auto& n : view.neighbors)
  {
    const Vec2 d = n.state.position - p;
    const double dist = d.norm();
    if (dist < geometric_tolerance)
      continue;

    // The cell boundary point on this agent's side of the bisector. Tilting
    // pivots about it, so the current position stays inside the cell.
    const double buffer = 0.5 * (r + n.radius) + 0.5 * config.safety_margin;
    Vec2 normal = d / dist;
    const Vec2 pivot = p + normal * (0.5 * dist - buffer);
    if (tilted.contains(n.id))
      normal = normal.rotated(std::atan2(config.warning_band, dist));

    const double offset = normal.dot(pivot - p) / dt;
    push_if_binding(planes, normal, offset, cap);
  }

  for (const auto& seg : view.obstacles)
  {
    const auto hit = obstacle_normal(p, seg);
    if (!hit)
      continue;
    const auto [dist, n_out] = *hit;
    push_if_binding(planes, -n_out, (dist - r - config.safety_margin) / dt, cap);
  }
  return planes;
}

//==============================================================================
Solver::Solver(
  SolverConfig config,
  std::vector<AgentSpec> specs,
  std::vector<NominalPlan> plans,
  SmgReport smg,
  double dt)
: _config(std::move(config)),
  _specs(std::move(specs)),
  _plans(std::move(plans)),
  _smg(std::move(smg)),
  _dt(dt)
{
  _config.validate();
  if (!(dt > 0.0))
    throw std::invalid_argument("Solver: dt must be positive");
  if (_specs.size() != _plans.size())
    throw std::invalid_argument("Solver: one nominal plan per agent is required");
}

//==============================================================================
std::vector<Control> Solver::step(
  const std::vector<WorldView>& views,
  const DeadlockState& deadlock)
{
  if (views.size() != _specs.size())
    throw std::invalid_argument("Solver::step: one view per agent is required");

  switch (_config.kind)
  {
    case SolverKind::Orca: return step_orca(views);
    case SolverKind::CbfRhr: return step_cbf(views, deadlock);
    case SolverKind::Auction: return step_auction(views);
    case SolverKind::ImpcLite: return step_impc(views, deadlock);
  }
  throw std::logic_error("Solver::step: unhandled solver kind");
}

//==============================================================================
Vec2 Solver::filtered(
  const WorldView& view, const Vec2& nominal, std::vector<HalfPlane> planes)
{
  if (planes.size() > max_projection_constraints)
  {
    std::partial_sort(planes.begin(),
      planes.begin() + static_cast<std::ptrdiff_t>(max_projection_constraints),
      planes.end(),
      [](const HalfPlane& a, const HalfPlane& b) { return a.offset < b.offset; });
    planes.resize(max_projection_constraints);
  }

  const auto result = project(nominal, planes, view.self.max_speed);
  if (!result.feasible)
    ++_infeasible;
  return result.u_star;
}

std::vector<Vec2> Solver::nominals(const std::vector<WorldView>& views) const
{
  std::vector<Vec2> out;
  out.reserve(views.size());
  for (std::size_t i = 0; i < views.size(); ++i)
    out.push_back(nominal_control(views[i], _plans[i], _config, _dt).value);
  return out;
}

//==============================================================================
std::vector<Control> Solver::step_orca(const std::vector<WorldView>& views)
{
  const auto nominal = nominals(views);
  std::vector<Control> out;
  for (std::size_t i = 0; i < views.size(); ++i)
  {
    out.push_back(Control::velocity(
        filtered(views[i], nominal[i], orca_constraints(views[i], _config, _dt))));
  }
  return out;
}

//==============================================================================
std::set<int> Solver::perturbing(
  const std::vector<WorldView>& views,
  const DeadlockState& deadlock)
{
  std::set<int> active;
  for (const auto& view : views)
  {
    const int id = view.self.id;
    if (at_goal(view.self, view.state, _config.goal_tolerance))
    {
      _perturb_until.erase(id);
      continue;
    }
    if (deadlock.flagged.contains(id))
      _perturb_until[id] = view.time + _config.perturb_hysteresis;

    const auto it = _perturb_until.find(id);
    if (it != _perturb_until.end() && view.time <= it->second + 1e-9)
      active.insert(id);
  }
  return active;
}

std::set<int> Solver::yielding(
  const std::vector<WorldView>& views,
  const std::set<int>& active,
  bool by_progress) const
{
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < views.size(); ++i)
  {
    if (active.contains(views[i].self.id))
      members.push_back(i);
  }

  const double reach = _config.safety_margin + _config.lookahead;
  std::set<int> rotate;
  for (const auto& group : proximity_groups(views, members, reach))
  {
    if (group.size() == 1)
    {
      rotate.insert(views[group.front()].self.id);
      continue;
    }

    Vec2 centroid;
    for (const auto i : group)
      centroid += views[i].state.position;
    centroid = centroid / static_cast<double>(group.size());

    const auto key = [&](std::size_t i)
      {
        const auto& v = views[i];
        return by_progress
          ? (v.self.goal - v.state.position).norm()
          : clockwise_bearing(v.state.position - centroid);
      };

    std::size_t keeper = group.front();
    for (const auto i : group)
    {
      const double a = key(i);
      const double b = key(keeper);
      if (a < b - 1e-9
        || (std::abs(a - b) <= 1e-9 && views[i].self.id < views[keeper].self.id))
        keeper = i;
    }

    for (const auto i : group)
    {
      if (i != keeper)
        rotate.insert(views[i].self.id);
    }
  }
  return rotate;
}

//==============================================================================
std::vector<Control> Solver::step_cbf(
  const std::vector<WorldView>& views,
  const DeadlockState& deadlock)
{
  auto nominal = nominals(views);
  const auto rotate = yielding(views, perturbing(views, deadlock), false);

  std::vector<Control> out;
  for (std::size_t i = 0; i < views.size(); ++i)
  {
    if (rotate.contains(views[i].self.id))
      nominal[i] = nominal[i].rotated(-_config.perturb_angle);
    out.push_back(Control::velocity(
        filtered(views[i], nominal[i], cbf_constraints(views[i], _config))));
  }
  return out;
}

//==============================================================================
void Solver::hold_auction(const std::vector<WorldView>& views)
{
  const auto nominal = nominals(views);
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < views.size(); ++i)
    index[views[i].self.id] = i;

  const auto live = [&](std::size_t a, std::size_t b)
    {
      const auto& va = views[a];
      const auto& vb = views[b];
      if (at_goal(va.self, va.state, _config.goal_tolerance)
        || at_goal(vb.self, vb.state, _config.goal_tolerance))
        return false;

      const Vec2 d = vb.state.position - va.state.position;
      const double reach = va.self.radius + vb.self.radius
        + _config.time_horizon * (va.self.max_speed + vb.self.max_speed);
      if (d.norm() > reach)
        return false;

      return nominal[a].dot(d) > 0.0 || nominal[b].dot(-d) > 0.0;
    };

  // Connected components of the live conflict pairs.
  std::map<int, int> parent;
  const auto root = [&](int id)
    {
      while (parent[id] != id)
        id = parent[id] = parent[parent[id]];
      return id;
    };
  for (const auto& v : views)
    parent[v.self.id] = v.self.id;

  for (const auto& [a, b] : _smg.conflicting_pairs)
  {
    const auto ia = index.find(a);
    const auto ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      continue;
    if (live(ia->second, ib->second))
      parent[root(a)] = root(b);
  }

  std::map<int, std::vector<int>> groups;
  for (const auto& v : views)
    groups[root(v.self.id)].push_back(v.self.id);

  const auto forced_position = [&](int id)
    {
      const auto& f = _config.forced_ranking;
      const auto it = std::find(f.begin(), f.end(), id);
      return static_cast<std::size_t>(it - f.begin());
    };

  _ranks.clear();
  _groups.clear();
  for (auto& [r, members] : groups)
  {
    std::sort(members.begin(), members.end(),
      [&](int a, int b)
      {
        const auto fa = forced_position(a);
        const auto fb = forced_position(b);
        if (fa != fb)
          return fa < fb;
        const double pa = views[index[a]].self.priority;
        const double pb = views[index[b]].self.priority;
        if (pa != pb)
          return pa > pb;
        return a < b;
      });
    for (std::size_t k = 0; k < members.size(); ++k)
    {
      _ranks[members[k]] = static_cast<int>(k);
      _groups[members[k]] = r;
    }
  }
}

double Solver::scale(int id) const
{
  const auto it = _ranks.find(id);
  const int rank = it == _ranks.end() ? 0 : it->second;
  return std::pow(_config.velocity_scale, rank);
}

std::vector<Control> Solver::step_auction(const std::vector<WorldView>& views)
{
  const double now = views.empty() ? 0.0 : views.front().time;
  if (!_next_auction || now >= *_next_auction - 1e-9)
  {
    hold_auction(views);
    _next_auction = now + _config.auction_period;
  }

  const auto nominal = nominals(views);
  std::vector<Control> out;
  for (std::size_t i = 0; i < views.size(); ++i)
  {
    const int id = views[i].self.id;
    const Vec2 scaled = nominal[i] * scale(id);

    // Within a coupling set the pairwise barrier deficit is shared in
    // proportion to the other agent's speed factor, so the lower-ranked
    // agent carries the larger part.
    std::map<int, double> share;
    for (const auto& n : views[i].neighbors)
    {
      const auto gi = _groups.find(id);
      const auto gj = _groups.find(n.id);
      if (gi == _groups.end() || gj == _groups.end() || gi->second != gj->second)
        continue;
      share[n.id] = scale(n.id) / (scale(id) + scale(n.id));
    }

    out.push_back(Control::velocity(
        filtered(views[i], scaled, cbf_constraints(views[i], _config, share))));
  }
  return out;
}

//==============================================================================
std::vector<Control> Solver::step_impc(
  const std::vector<WorldView>& views,
  const DeadlockState& deadlock)
{
  auto nominal = nominals(views);
  const auto rotate = yielding(views, perturbing(views, deadlock), true);

  std::vector<Control> out;
  for (std::size_t i = 0; i < views.size(); ++i)
  {
    const auto& view = views[i];
    std::set<int> tilted;
    const double speed = nominal[i].norm();
    if (speed > 0.0)
    {
      auto& history = _history[view.self.id];
      history.push_back(view.state.position);
      if (history.size() > 6)
        history.pop_front();
      const double span = static_cast<double>(history.size() - 1) * _dt;
      const double progress = history.size() < 2
        ? view.state.velocity.dot(nominal[i] / speed)
        : (history.back() - history.front()).dot(nominal[i] / speed) / span;
      if (progress < _config.deadlock_speed)
        tilted = warning_band_neighbors(view, _config);
    }

    if (rotate.contains(view.self.id))
      nominal[i] = nominal[i].rotated(-_config.perturb_angle);
    out.push_back(Control::velocity(
        filtered(view, nominal[i], bvc_constraints(view, _config, _dt, tilted))));
  }
  return out;
}

} // namespace smgbench
