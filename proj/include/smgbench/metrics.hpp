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

#ifndef SMGBENCH__METRICS_HPP
#define SMGBENCH__METRICS_HPP

#include <smgbench/harness.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smgbench {

/// Sum of |v_{k+1} - v_k| over the trajectory divided by its duration.
/// A single sample gives 0.
double avg_delta_v(const Trajectory& trajectory);

/// TTG_i / min_j TTG_j over finished agents. Unfinished agents stay absent.
std::vector<std::optional<double>> makespan_ratio(
  const std::vector<std::optional<double>>& ttgs);

/// Symmetric Hausdorff distance between two polylines, each treated as the
/// continuous union of its segments. Accurate to 1e-12 m.
double hausdorff_distance(
  const std::vector<Vec2>& a,
  const std::vector<Vec2>& b);

/// Hausdorff distance between the driven positions and the nominal path.
double path_deviation(const Trajectory& actual, const NominalPlan& nominal);

/// Agents per meter of gap per second, N / (z T).
double flow_rate(int n_agents, double makespan, double gap_width);

/// Sum of phi_i * R_i.
double social_welfare(
  const std::vector<double>& phis,
  const std::vector<double>& local_rewards);

enum class FlowTime
{
  /// T is the last time an agent center crossed the gap plane.
  GapCrossing,

  /// T is the time the last agent reached its goal.
  Makespan
};

std::string_view to_string(FlowTime flow_time);
FlowTime flow_time_from_string(std::string_view name);

struct MetricsOptions
{
  FlowTime flow_time = FlowTime::GapCrossing;

  /// Weight of path length in the local reward, R_i = -TTG_i - w L_i.
  double path_length_weight = 0.0;

  /// Run the counterfactual rollouts for invasiveness and the welfare gap.
  bool counterfactuals = true;

  /// Largest coupling set whose orderings are enumerated.
  std::size_t max_ordering_size = 5;

  bool operator==(const MetricsOptions&) const = default;
};

struct Invasiveness
{
  double value = 0.0;

  /// The counterfactual rollout ended early on a collision or solver failure.
  bool degraded = false;
};

/// Control deviation agent `agent_id` induces on the others, measured
/// against the same episode re-run without it. Controls after an agent's
/// goal arrival and after a rollout's end count as zero.
Invasiveness invasiveness(const EpisodeLog& log, int agent_id);

/// Same computation with the counterfactual rollout already available.
Invasiveness invasiveness(
  const EpisodeLog& log,
  const EpisodeLog& counterfactual,
  int agent_id);

struct OrderingWelfare
{
  std::vector<int> ordering;
  double welfare = 0.0;
};

struct WelfareGap
{
  /// Absent when the coupling set is too large to enumerate.
  std::optional<double> value;
  std::string note;
  double achieved = 0.0;
  double best = 0.0;
  std::vector<int> best_ordering;
  std::vector<OrderingWelfare> orderings;
};

/// Local rewards of every agent in scenario order.
std::vector<double> local_rewards(
  const EpisodeLog& log,
  const MetricsOptions& options = {});

/// Welfare shortfall of the episode against the best passage ordering of
/// its coupled agents. Each ordering is evaluated by re-running the episode
/// with the auction solver forced to that ranking.
WelfareGap social_welfare_gap(
  const EpisodeLog& log,
  const MetricsOptions& options = {});

struct AgentMetrics
{
  int id = 0;
  double avg_delta_v = 0.0;
  std::optional<double> makespan_ratio;
  double path_deviation = 0.0;
  std::optional<double> ttg;
  std::optional<double> invasiveness;
  bool invasiveness_degraded = false;
  double local_reward = 0.0;
};

struct MetricsReport
{
  std::vector<AgentMetrics> agents;

  std::optional<double> flow_rate;
  FlowTime flow_time = FlowTime::GapCrossing;
  int gap_crossers = 0;
  std::optional<double> last_gap_crossing;
  std::optional<double> makespan;

  bool success = false;
  std::size_t collision_count = 0;
  bool deadlock_occurred = false;
  double social_welfare = 0.0;
  std::optional<double> social_welfare_gap;
  std::string social_welfare_gap_note;
  Termination termination = Termination::Timeout;
};

MetricsReport evaluate(const EpisodeLog& log, const MetricsOptions& options = {});

} // namespace smgbench

#endif // SMGBENCH__METRICS_HPP
