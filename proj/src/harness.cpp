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

#include <smgbench/harness.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace smgbench {

namespace {

constexpr std::array<std::pair<Termination, std::string_view>, 4>
termination_names = {{
  {Termination::AllGoals, "all_goals"},
  {Termination::Timeout, "timeout"},
  {Termination::CollisionAbort, "collision_abort"},
  {Termination::SolverFailure, "solver_failure"},
}};

int side_of(const Gap& gap, const Vec2& p)
{
  const double s = gap.signed_distance(p);
  return s > 0.0 ? 1 : (s < 0.0 ? -1 : 0);
}

} // anonymous namespace

//==============================================================================
std::string_view to_string(Termination termination)
{
  for (const auto& [t, name] : termination_names)
  {
    if (t == termination)
      return name;
  }
  return "unknown";
}

Termination termination_from_string(std::string_view name)
{
  for (const auto& [t, n] : termination_names)
  {
    if (n == name)
      return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(name) + "'");
}

std::string_view to_string(CollisionPolicy policy)
{
  return policy == CollisionPolicy::Abort ? "abort" : "continue";
}

CollisionPolicy collision_policy_from_string(std::string_view name)
{
  if (name == "abort")
    return CollisionPolicy::Abort;
  if (name == "continue")
    return CollisionPolicy::Continue;
  throw std::invalid_argument(
          "unknown collision policy '" + std::string(name)
          + "' (valid: abort, continue)");
}

//==============================================================================
void EpisodeSettings::validate() const
{
  solver.validate();
  if (!(dt > 0.0))
    throw std::invalid_argument("episode settings: dt must be positive");
  if (!(t_max > 0.0))
    throw std::invalid_argument("episode settings: t_max must be positive");
  if (!(smg_delta > 0.0))
    throw std::invalid_argument("episode settings: smg_delta must be positive");
}

//==============================================================================
std::size_t EpisodeLog::index_of(int agent_id) const
{
  for (std::size_t i = 0; i < scenario.agents.size(); ++i)
  {
    if (scenario.agents[i].id == agent_id)
      return i;
  }
  throw std::out_of_range("episode has no agent " + std::to_string(agent_id));
}

Trajectory EpisodeLog::trajectory(int agent_id) const
{
  const std::size_t i = index_of(agent_id);
  Trajectory traj;
  traj.dt = settings.dt;
  traj.samples.reserve(steps.size());
  for (const auto& s : steps)
    traj.samples.push_back(s.states[i]);
  return traj;
}

std::vector<Vec2> EpisodeLog::controls(int agent_id) const
{
  const std::size_t i = index_of(agent_id);
  std::vector<Vec2> out;
  out.reserve(steps.size());
  for (const auto& s : steps)
    out.push_back(s.controls[i]);
  return out;
}

std::optional<double> EpisodeLog::arrival_time(int agent_id) const
{
  for (const auto& e : goal_arrivals)
  {
    if (e.agent_id == agent_id)
      return e.time;
  }
  return std::nullopt;
}

//==============================================================================
std::vector<NominalPlan> nominal_plans(
  const Scenario& scenario,
  const EpisodeSettings& settings)
{
  PlannerOptions options;
  options.dt = settings.dt;

  std::vector<NominalPlan> plans;
  plans.reserve(scenario.agents.size());
  for (const auto& a : scenario.agents)
    plans.push_back(nominal_plan(a, scenario.geometry, options));
  return plans;
}

//==============================================================================
EpisodeLog run_episode(const Scenario& scenario, const EpisodeSettings& settings)
{
  settings.validate();
  for (const auto& a : scenario.agents)
  {
    if (settings.dt * a.max_speed >= 2.0 * a.radius)
    {
      throw std::invalid_argument(
              "run_episode: dt * max_speed of agent " + std::to_string(a.id)
              + " exceeds the footprint diameter; collisions could tunnel");
    }
  }

  EpisodeLog log;
  log.scenario = scenario;
  log.settings = settings;

  const auto& specs = scenario.agents;
  const std::size_t n = specs.size();
  const double dt = settings.dt;
  const double goal_tol = settings.solver.goal_tolerance;

  auto plans = nominal_plans(scenario, settings);
  log.smg = detect_smg(specs, plans, settings.smg_delta, dt);
  Solver solver(settings.solver, specs, std::move(plans), log.smg, dt);

  std::vector<AgentState> states(n);
  for (std::size_t i = 0; i < n; ++i)
    states[i].position = specs[i].start;

  std::vector<bool> arrived(n, false);
  DeadlockState deadlock;
  const std::optional<Gap>& gap = scenario.geometry.gap;

  const auto finish = [&](Termination termination)
    {
      StepRecord last;
      last.time = states.empty() ? 0.0 : states.front().time;
      last.states = states;
      last.controls.assign(n, Vec2{});
      log.steps.push_back(std::move(last));
      log.termination = termination;
    };

  for (std::size_t k = 0;; ++k)
  {
    const double t = static_cast<double>(k) * dt;

    bool all_home = true;
    for (std::size_t i = 0; i < n; ++i)
    {
      const bool home = (specs[i].goal - states[i].position).norm() <= goal_tol;
      if (home && !arrived[i])
      {
        arrived[i] = true;
        log.goal_arrivals.push_back({t, specs[i].id});
      }
      all_home = all_home && home;
    }

    if (all_home)
    {
      finish(Termination::AllGoals);
      break;
    }
    if (t >= settings.t_max - 1e-9)
    {
      finish(Termination::Timeout);
      break;
    }

    const auto views = make_views(specs, states, scenario.geometry,
        settings.observability, t);

    std::vector<Control> controls;
    try
    {
      controls = solver.step(views, deadlock);
      for (std::size_t i = 0; i < n; ++i)
      {
        if (!controls[i].value.finite())
        {
          throw InvalidControl(
                  "agent " + std::to_string(specs[i].id)
                  + " received a non-finite control");
        }
      }
    }
    catch (const std::exception& e)
    {
      log.diagnostic = std::string("solver failure at t=")
        + std::to_string(t) + ": " + e.what();
      finish(Termination::SolverFailure);
      break;
    }

    StepRecord record;
    record.time = t;
    record.states = states;
    std::vector<AgentState> next(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      next[i] = step(states[i], specs[i], controls[i], dt);
      next[i].time = static_cast<double>(k + 1) * dt;
      record.controls.push_back(controls[i].value);
    }
    log.steps.push_back(std::move(record));

    if (gap)
    {
      for (std::size_t i = 0; i < n; ++i)
      {
        const int before = side_of(*gap, states[i].position);
        const int after = side_of(*gap, next[i].position);
        if (before != 0 && after != before)
          log.gap_crossings.push_back({next[i].time, specs[i].id});
      }
    }

    states = std::move(next);

    const auto contacts = check_collisions(states, specs, scenario.geometry);
    log.collisions.insert(log.collisions.end(), contacts.begin(), contacts.end());
    if (!contacts.empty() && settings.collision_policy == CollisionPolicy::Abort)
    {
      log.diagnostic = "collision at t=" + std::to_string(states.front().time);
      finish(Termination::CollisionAbort);
      break;
    }

    const auto updated = detect_deadlock(specs, states, deadlock,
        settings.solver, dt);
    for (const int id : updated.flagged)
    {
      if (!deadlock.flagged.contains(id))
        log.deadlock_flags.push_back({states.front().time, id});
    }
    deadlock = updated;
  }

  log.infeasible_projections = solver.infeasible_projections();
  return log;
}

//==============================================================================
EpisodeLog run_without_agent(const EpisodeLog& log, int agent_id)
{
  log.index_of(agent_id);
  return run_episode(without_agent(log.scenario, agent_id), log.settings);
}

} // namespace smgbench
