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

#include <smgbench/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace smgbench {

//==============================================================================
double avg_delta_v(const Trajectory& trajectory)
{
  const auto& s = trajectory.samples;
  if (s.size() < 2)
    return 0.0;

  double total = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k)
    total += (s[k].velocity - s[k - 1].velocity).norm();

  const double duration = s.back().time - s.front().time;
  if (!(duration > 0.0))
    return 0.0;
  return total / duration;
}

//==============================================================================
std::vector<std::optional<double>> makespan_ratio(
  const std::vector<std::optional<double>>& ttgs)
{
  double fastest = std::numeric_limits<double>::infinity();
  for (const auto& t : ttgs)
  {
    if (t)
      fastest = std::min(fastest, *t);
  }

  std::vector<std::optional<double>> ratios(ttgs.size());
  if (!(fastest > 0.0) || !std::isfinite(fastest))
    return ratios;

  for (std::size_t i = 0; i < ttgs.size(); ++i)
  {
    if (ttgs[i])
      ratios[i] = *ttgs[i] / fastest;
  }
  return ratios;
}

//==============================================================================
namespace {

/// Distance from p to every segment of the polyline, or to its single vertex.
void segment_distances(
  const Vec2& p,
  const std::vector<Vec2>& line,
  std::vector<double>& out)
{
  out.clear();
  if (line.size() == 1)
  {
    out.push_back((p - line.front()).norm());
    return;
  }
  for (std::size_t i = 1; i < line.size(); ++i)
    out.push_back(point_segment_distance(p, {line[i - 1], line[i]}));
}

/// sup over the polyline `a` of the distance to `b`, by interval bisection.
/// Along a segment of `a` the distance to each segment of `b` is convex, so
/// on any interval it is bounded by its larger endpoint value; the distance
/// to `b` is the smallest of these. The distance to `b` is also 1-Lipschitz,
/// which bounds an interval by the mean of its endpoint values plus half its
/// length. Intervals whose bound cannot beat the current best are pruned.
double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b)
{
  constexpr double tolerance = 1e-12;

  struct Sample
  {
    double t = 0.0;
    double f = 0.0;
    std::vector<double> per_segment;
  };

  const auto sample = [&](const Vec2& p, double t)
    {
      Sample s;
      s.t = t;
      segment_distances(p, b, s.per_segment);
      s.f = *std::min_element(s.per_segment.begin(), s.per_segment.end());
      return s;
    };

  const auto bound = [](const Sample& lo, const Sample& hi, double length)
    {
      double convex = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < lo.per_segment.size(); ++j)
        convex = std::min(convex, std::max(lo.per_segment[j], hi.per_segment[j]));
      const double lipschitz = 0.5 * (lo.f + hi.f + length * (hi.t - lo.t));
      return std::min(convex, lipschitz);
    };

  double best = 0.0;
  std::vector<Sample> vertices;
  vertices.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    vertices.push_back(sample(a[i], 0.0));
    best = std::max(best, vertices.back().f);
  }

  struct Interval
  {
    Sample lo;
    Sample hi;
    int depth = 0;
  };

  std::vector<Interval> stack;
  for (std::size_t i = 1; i < a.size(); ++i)
  {
    const Vec2 p = a[i - 1];
    const Vec2 d = a[i] - p;
    const double length = d.norm();
    if (length <= 0.0)
      continue;

    Sample lo = vertices[i - 1];
    Sample hi = vertices[i];
    lo.t = 0.0;
    hi.t = 1.0;
    stack.push_back({std::move(lo), std::move(hi), 0});
    while (!stack.empty())
    {
      Interval iv = std::move(stack.back());
      stack.pop_back();

      if (iv.depth >= 60 || bound(iv.lo, iv.hi, length) <= best + tolerance)
        continue;

      const double tm = 0.5 * (iv.lo.t + iv.hi.t);
      Sample mid = sample(p + d * tm, tm);
      best = std::max(best, mid.f);
      stack.push_back({mid, std::move(iv.hi), iv.depth + 1});
      stack.push_back({std::move(iv.lo), std::move(mid), iv.depth + 1});
    }
  }
  return best;
}

} // anonymous namespace

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b)
{
  if (a.empty() || b.empty())
    throw std::invalid_argument("hausdorff_distance: empty polyline");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double path_deviation(const Trajectory& actual, const NominalPlan& nominal)
{
  std::vector<Vec2> driven;
  driven.reserve(actual.samples.size());
  for (const auto& s : actual.samples)
    driven.push_back(s.position);
  return hausdorff_distance(driven, nominal.path);
}

//==============================================================================
double flow_rate(int n_agents, double makespan, double gap_width)
{
  if (n_agents < 0)
    throw std::invalid_argument("flow_rate: negative agent count");
  if (!(makespan > 0.0) || !std::isfinite(makespan))
    throw std::invalid_argument("flow_rate: makespan must be positive");
  if (!(gap_width > 0.0) || !std::isfinite(gap_width))
    throw std::invalid_argument("flow_rate: gap width must be positive");
  return static_cast<double>(n_agents) / (gap_width * makespan);
}

double social_welfare(
  const std::vector<double>& phis,
  const std::vector<double>& local_rewards)
{
  if (phis.size() != local_rewards.size())
    throw std::invalid_argument("social_welfare: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i)
    total += phis[i] * local_rewards[i];
  return total;
}

//==============================================================================
std::string_view to_string(FlowTime flow_time)
{
  return flow_time == FlowTime::GapCrossing ? "gap_crossing" : "makespan";
}

FlowTime flow_time_from_string(std::string_view name)
{
  if (name == "gap_crossing")
    return FlowTime::GapCrossing;
  if (name == "makespan")
    return FlowTime::Makespan;
  throw std::invalid_argument(
          "unknown flow time '" + std::string(name)
          + "' (valid: gap_crossing, makespan)");
}

//==============================================================================
Invasiveness invasiveness(
  const EpisodeLog& log,
  const EpisodeLog& counterfactual,
  int agent_id)
{
  log.index_of(agent_id);

  Invasiveness result;
  result.degraded = counterfactual.termination == Termination::CollisionAbort
    || counterfactual.termination == Termination::SolverFailure;

  const std::size_t horizon = result.degraded
    ? counterfactual.steps.size()
    : std::max(log.steps.size(), counterfactual.steps.size());
  const double dt = log.settings.dt;

  const auto control_at = [](const EpisodeLog& episode, std::size_t agent,
      int id, std::size_t k)
    {
      if (k >= episode.steps.size())
        return Vec2{};
      const auto arrival = episode.arrival_time(id);
      if (arrival && episode.steps[k].time >= *arrival - 1e-9)
        return Vec2{};
      return episode.steps[k].controls[agent];
    };

  for (const auto& spec : log.scenario.agents)
  {
    if (spec.id == agent_id)
      continue;
    const std::size_t full = log.index_of(spec.id);
    const std::size_t cf = counterfactual.index_of(spec.id);
    for (std::size_t k = 0; k < horizon; ++k)
    {
      const Vec2 a = control_at(log, full, spec.id, k);
      const Vec2 b = control_at(counterfactual, cf, spec.id, k);
      result.value += (a - b).norm() * dt;
    }
  }
  return result;
}

Invasiveness invasiveness(const EpisodeLog& log, int agent_id)
{
  return invasiveness(log, run_without_agent(log, agent_id), agent_id);
}

//==============================================================================
std::vector<double> local_rewards(
  const EpisodeLog& log,
  const MetricsOptions& options)
{
  std::vector<double> rewards;
  rewards.reserve(log.scenario.agents.size());
  for (const auto& spec : log.scenario.agents)
  {
    const auto arrival = log.arrival_time(spec.id);
    double r = -(arrival ? *arrival : log.settings.t_max);
    if (options.path_length_weight != 0.0)
    {
      std::vector<Vec2> driven;
      for (const auto& s : log.trajectory(spec.id).samples)
        driven.push_back(s.position);
      r -= options.path_length_weight * path_length(driven);
    }
    rewards.push_back(r);
  }
  return rewards;
}

namespace {

double welfare_of(const EpisodeLog& log, const MetricsOptions& options)
{
  std::vector<double> phis;
  for (const auto& spec : log.scenario.agents)
    phis.push_back(spec.priority);
  return social_welfare(phis, local_rewards(log, options));
}

} // anonymous namespace

WelfareGap social_welfare_gap(const EpisodeLog& log, const MetricsOptions& options)
{
  WelfareGap gap;
  gap.achieved = welfare_of(log, options);
  gap.best = gap.achieved;

  std::vector<int> members;
  for (const auto& c : log.smg.coupling_sets)
    members.insert(members.end(), c.members.begin(), c.members.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  if (members.size() < 2)
  {
    gap.value = 0.0;
    gap.note = "no coupled agents";
    return gap;
  }
  if (members.size() > options.max_ordering_size)
  {
    gap.note = "coupling set of " + std::to_string(members.size())
      + " agents exceeds the enumeration limit of "
      + std::to_string(options.max_ordering_size);
    return gap;
  }

  EpisodeSettings settings = log.settings;
  settings.solver.kind = SolverKind::Auction;

  do
  {
    settings.solver.forced_ranking = members;
    const EpisodeLog rollout = run_episode(log.scenario, settings);
    gap.orderings.push_back({members, welfare_of(rollout, options)});
  }
  while (std::next_permutation(members.begin(), members.end()));

  for (const auto& o : gap.orderings)
    gap.best = std::max(gap.best, o.welfare);
  for (const auto& o : gap.orderings)
  {
    if (o.welfare >= gap.best - 1e-12)
    {
      gap.best_ordering = o.ordering;
      break;
    }
  }

  gap.value = std::max(0.0, gap.best - gap.achieved);
  return gap;
}

//==============================================================================
MetricsReport evaluate(const EpisodeLog& log, const MetricsOptions& options)
{
  MetricsReport report;
  report.termination = log.termination;
  report.flow_time = options.flow_time;
  report.collision_count = log.collisions.size();
  report.deadlock_occurred = !log.deadlock_flags.empty();
  report.success = log.termination == Termination::AllGoals
    && log.collisions.empty();

  const auto plans = nominal_plans(log.scenario, log.settings);
  const auto rewards = local_rewards(log, options);

  std::vector<std::optional<double>> ttgs;
  for (const auto& spec : log.scenario.agents)
    ttgs.push_back(log.arrival_time(spec.id));
  const auto ratios = makespan_ratio(ttgs);

  for (std::size_t i = 0; i < log.scenario.agents.size(); ++i)
  {
    const int id = log.scenario.agents[i].id;
    AgentMetrics m;
    m.id = id;
    const Trajectory traj = log.trajectory(id);
    m.avg_delta_v = avg_delta_v(traj);
    m.makespan_ratio = ratios[i];
    m.path_deviation = path_deviation(traj, plans[i]);
    m.ttg = ttgs[i];
    m.local_reward = rewards[i];
    if (options.counterfactuals && log.scenario.agents.size() > 1)
    {
      const auto is = invasiveness(log, id);
      m.invasiveness = is.value;
      m.invasiveness_degraded = is.degraded;
    }
    else if (log.scenario.agents.size() == 1)
    {
      m.invasiveness = 0.0;
    }
    report.agents.push_back(m);
  }

  bool all_arrived = true;
  double last_arrival = 0.0;
  for (const auto& t : ttgs)
  {
    all_arrived = all_arrived && t.has_value();
    if (t)
      last_arrival = std::max(last_arrival, *t);
  }
  report.makespan = all_arrived
    ? last_arrival
    : (log.steps.empty() ? 0.0 : log.steps.back().time);

  if (const auto& gap = log.scenario.geometry.gap)
  {
    for (const auto& spec : log.scenario.agents)
    {
      const Trajectory traj = log.trajectory(spec.id);
      const double before = gap->signed_distance(traj.samples.front().position);
      const double after = gap->signed_distance(traj.samples.back().position);
      if (before * after >= 0.0)
        continue;

      ++report.gap_crossers;
      for (const auto& e : log.gap_crossings)
      {
        if (e.agent_id == spec.id)
        {
          report.last_gap_crossing = std::max(
            report.last_gap_crossing.value_or(0.0), e.time);
        }
      }
    }

    const double t = options.flow_time == FlowTime::GapCrossing
      ? report.last_gap_crossing.value_or(0.0)
      : *report.makespan;
    report.flow_rate = report.gap_crossers == 0 || !(t > 0.0)
      ? 0.0
      : flow_rate(report.gap_crossers, t, gap->width);
  }

  report.social_welfare = welfare_of(log, options);
  if (options.counterfactuals)
  {
    const auto swg = social_welfare_gap(log, options);
    report.social_welfare_gap = swg.value;
    report.social_welfare_gap_note = swg.note;
  }
  else
  {
    report.social_welfare_gap_note = "counterfactuals disabled";
  }
  return report;
}

} // namespace smgbench
