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

#ifndef SMGBENCH__BATCH_HPP
#define SMGBENCH__BATCH_HPP

#include <smgbench/io.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace smgbench {

/// Grid of episodes: every scenario kind with every solver over every seed.
struct BatchSpec
{
  std::vector<ScenarioKind> scenarios;
  std::vector<SolverKind> solvers;
  std::vector<std::uint64_t> seeds;

  /// Generator parameters shared by all episodes; the seed field is
  /// replaced per episode.
  ScenarioParams params;

  /// Episode settings shared by all episodes; the solver kind is replaced
  /// per cell.
  EpisodeSettings settings;

  MetricsOptions metrics;

  /// Upper bound on concurrently running episodes.
  unsigned parallelism = 1;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  bool operator==(const BatchSpec&) const = default;
};

Json to_json(const BatchSpec& spec);

/// Seeds may be given as a list or as {"first": a, "count": n}.
BatchSpec batch_spec_from_json(const Json& json);
BatchSpec load_batch_spec(const std::filesystem::path& path);

struct EpisodeOutcome
{
  ScenarioKind scenario = ScenarioKind::Doorway;
  SolverKind solver = SolverKind::Orca;
  std::uint64_t seed = 0;

  /// Absent when the episode could not be run at all.
  std::optional<MetricsReport> report;
  std::string error;
};

struct Statistic
{
  std::size_t count = 0;
  double mean = 0.0;

  /// Sample standard deviation, 0 for a single value.
  double std = 0.0;
};

/// Mean and sample standard deviation of the values.
Statistic summarize(const std::vector<double>& values);

struct AggregateRow
{
  ScenarioKind scenario = ScenarioKind::Doorway;
  SolverKind solver = SolverKind::Orca;
  std::size_t episodes = 0;
  std::size_t errors = 0;

  /// Percent of episodes that reached all goals without a collision.
  double success_rate = 0.0;

  /// Fraction of episodes in which a deadlock flag was raised.
  double deadlock_rate = 0.0;

  /// One entry per name in aggregate_metric_names(), in that order.
  std::vector<Statistic> metrics;
};

/// Per-episode scalar metrics that are aggregated, in column order.
const std::vector<std::string>& aggregate_metric_names();

/// The per-episode scalars of aggregate_metric_names(); agent-level metrics
/// are averaged over agents except the makespan ratio, which takes the
/// largest ratio.
std::vector<std::optional<double>> episode_scalars(const MetricsReport& report);

struct BatchResult
{
  /// Ordered by scenario, solver and ascending seed.
  std::vector<EpisodeOutcome> episodes;
  std::vector<AggregateRow> rows;
};

/// Runs every episode of the spec. Failures are recorded, never thrown.
/// Results do not depend on seed order or parallelism.
BatchResult run_batch(const BatchSpec& spec);

/// One row per scenario and solver with mean and std columns.
std::string aggregate_csv(const BatchResult& result);

/// One row per scenario, solver and seed.
std::string episodes_csv(const BatchResult& result);

/// Aligned text table with "mean ± std" cells.
std::string render_table(const BatchResult& result);

} // namespace smgbench

#endif // SMGBENCH__BATCH_HPP
