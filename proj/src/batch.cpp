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

#include <smgbench/batch.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace smgbench {

//==============================================================================
void BatchSpec::validate() const
{
  if (scenarios.empty())
    throw std::invalid_argument("batch spec: scenario list is empty");
  if (solvers.empty())
    throw std::invalid_argument("batch spec: solver list is empty");
  if (seeds.empty())
    throw std::invalid_argument("batch spec: seed list is empty");
  if (parallelism == 0)
    throw std::invalid_argument("batch spec: parallelism must be at least 1");
  settings.validate();
}

Json to_json(const BatchSpec& spec)
{
  Json scenarios = Json::array();
  for (const auto k : spec.scenarios)
    scenarios.push_back(std::string(to_string(k)));
  Json solvers = Json::array();
  for (const auto k : spec.solvers)
    solvers.push_back(std::string(to_string(k)));

  Json j;
  j["scenarios"] = std::move(scenarios);
  j["solvers"] = std::move(solvers);
  j["seeds"] = spec.seeds;
  j["params"] = to_json(spec.params);
  j["settings"] = to_json(spec.settings);
  j["metrics"] = to_json(spec.metrics);
  j["parallelism"] = spec.parallelism;
  return j;
}

BatchSpec batch_spec_from_json(const Json& json)
{
  if (!json.is_object())
    throw FormatError("batch spec: expected an object");

  BatchSpec spec;
  const auto names = [](const Json& v, const std::string& key, auto parse, auto& out)
    {
      if (!v.is_array())
        throw FormatError("field '" + key + "': expected an array of names");
      for (std::size_t i = 0; i < v.size(); ++i)
      {
        const std::string where = key + "[" + std::to_string(i) + "]";
        if (!v[i].is_string())
          throw FormatError("field '" + where + "': expected a string");
        try
        {
          out.push_back(parse(v[i].template get<std::string>()));
        }
        catch (const std::invalid_argument& e)
        {
          throw FormatError("field '" + where + "': " + e.what());
        }
      }
    };

  for (auto it = json.begin(); it != json.end(); ++it)
  {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "scenarios")
    {
      names(v, key, scenario_kind_from_string, spec.scenarios);
    }
    else if (key == "solvers")
    {
      names(v, key, solver_kind_from_string, spec.solvers);
    }
    else if (key == "seeds")
    {
      if (v.is_array())
      {
        for (std::size_t i = 0; i < v.size(); ++i)
        {
          if (!is_non_negative_integer(v[i]))
          {
            throw FormatError(
                    "field 'seeds[" + std::to_string(i)
                    + "]': expected a non-negative integer");
          }
          spec.seeds.push_back(v[i].get<std::uint64_t>());
        }
      }
      else if (v.is_object())
      {
        std::uint64_t first = 0;
        std::uint64_t count = 0;
        for (auto f = v.begin(); f != v.end(); ++f)
        {
          if (f.key() != "first" && f.key() != "count")
            throw FormatError("field 'seeds." + f.key() + "': unknown field");
          if (!is_non_negative_integer(f.value()))
          {
            throw FormatError(
                    "field 'seeds." + f.key() + "': expected a non-negative integer");
          }
          (f.key() == "first" ? first : count) = f.value().get<std::uint64_t>();
        }
        for (std::uint64_t s = 0; s < count; ++s)
          spec.seeds.push_back(first + s);
      }
      else
      {
        throw FormatError("field 'seeds': expected a list or {\"first\", \"count\"}");
      }
    }
    else if (key == "params")
    {
      spec.params = scenario_params_from_json(v, "params");
    }
    else if (key == "settings")
    {
      spec.settings = settings_from_json(v, "settings");
    }
    else if (key == "metrics")
    {
      spec.metrics = metrics_options_from_json(v, "metrics");
    }
    else if (key == "parallelism")
    {
      if (!is_non_negative_integer(v) || v.get<std::int64_t>() == 0)
        throw FormatError("field 'parallelism': expected a positive integer");
      spec.parallelism = v.get<unsigned>();
    }
    else
    {
      throw FormatError("field '" + key + "': unknown field");
    }
  }
  return spec;
}

BatchSpec load_batch_spec(const std::filesystem::path& path)
{
  try
  {
    return batch_spec_from_json(read_json_file(path));
  }
  catch (const FormatError& e)
  {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0)
      throw;
    throw FormatError(path.string() + ": " + what);
  }
}

//==============================================================================
Statistic summarize(const std::vector<double>& values)
{
  Statistic s;
  s.count = values.size();
  if (values.empty())
    return s;

  double sum = 0.0;
  for (const double v : values)
    sum += v;
  s.mean = sum / static_cast<double>(values.size());

  if (values.size() > 1)
  {
    double sq = 0.0;
    for (const double v : values)
      sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

const std::vector<std::string>& aggregate_metric_names()
{
  static const std::vector<std::string> names = {
    "avg_delta_v",
    "path_deviation",
    "makespan_ratio",
    "flow_rate",
    "invasiveness",
    "social_welfare",
    "social_welfare_gap",
    "collisions",
  };
  return names;
}

std::vector<std::optional<double>> episode_scalars(const MetricsReport& report)
{
  const auto agent_mean = [&](auto field) -> std::optional<double>
    {
      std::vector<double> values;
      for (const auto& a : report.agents)
      {
        if (const std::optional<double> v = field(a))
          values.push_back(*v);
      }
      if (values.empty())
        return std::nullopt;
      return summarize(values).mean;
    };

  std::optional<double> makespan_ratio;
  for (const auto& a : report.agents)
  {
    if (a.makespan_ratio)
      makespan_ratio = std::max(makespan_ratio.value_or(0.0), *a.makespan_ratio);
  }

  return {
    agent_mean([](const AgentMetrics& a) -> std::optional<double> {
      return a.avg_delta_v;
    }),
    agent_mean([](const AgentMetrics& a) -> std::optional<double> {
      return a.path_deviation;
    }),
    makespan_ratio,
    report.flow_rate,
    agent_mean([](const AgentMetrics& a) { return a.invasiveness; }),
    report.social_welfare,
    report.social_welfare_gap,
    static_cast<double>(report.collision_count),
  };
}

//==============================================================================
BatchResult run_batch(const BatchSpec& spec)
{
  spec.validate();

  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());

  BatchResult result;
  for (const auto scenario : spec.scenarios)
  {
    for (const auto solver : spec.solvers)
    {
      for (const auto seed : seeds)
        result.episodes.push_back({scenario, solver, seed, std::nullopt, {}});
    }
  }

  const auto run_one = [&](EpisodeOutcome& outcome)
    {
      try
      {
        ScenarioParams params = spec.params;
        params.seed = outcome.seed;
        EpisodeSettings settings = spec.settings;
        settings.solver.kind = outcome.solver;
        const Scenario scenario = build(outcome.scenario, params);
        const EpisodeLog log = run_episode(scenario, settings);
        outcome.report = evaluate(log, spec.metrics);
      }
      catch (const std::exception& e)
      {
        outcome.error = e.what();
      }
    };

  const std::size_t workers = std::min<std::size_t>(
    spec.parallelism, result.episodes.size());
  if (workers <= 1)
  {
    for (auto& outcome : result.episodes)
      run_one(outcome);
  }
  else
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
    {
      pool.emplace_back([&]
        {
          for (std::size_t i = next++; i < result.episodes.size(); i = next++)
            run_one(result.episodes[i]);
        });
    }
  }

  const std::size_t n_metrics = aggregate_metric_names().size();
  for (std::size_t begin = 0; begin < result.episodes.size(); begin += seeds.size())
  {
    AggregateRow row;
    row.scenario = result.episodes[begin].scenario;
    row.solver = result.episodes[begin].solver;
    row.episodes = seeds.size();

    std::size_t successes = 0;
    std::size_t deadlocks = 0;
    std::vector<std::vector<double>> columns(n_metrics);
    for (std::size_t k = begin; k < begin + seeds.size(); ++k)
    {
      const auto& outcome = result.episodes[k];
      if (!outcome.report)
      {
        ++row.errors;
        continue;
      }
      successes += outcome.report->success ? 1 : 0;
      deadlocks += outcome.report->deadlock_occurred ? 1 : 0;
      const auto scalars = episode_scalars(*outcome.report);
      for (std::size_t m = 0; m < n_metrics; ++m)
      {
        if (scalars[m])
          columns[m].push_back(*scalars[m]);
      }
    }

    const auto total = static_cast<double>(row.episodes);
    row.success_rate = 100.0 * static_cast<double>(successes) / total;
    row.deadlock_rate = static_cast<double>(deadlocks) / total;
    for (const auto& values : columns)
      row.metrics.push_back(summarize(values));
    result.rows.push_back(std::move(row));
  }
  return result;
}

//==============================================================================
namespace {

std::string fixed(double v, int digits = 6)
{
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v == 0.0 ? 0.0 : v);
  return buffer;
}

} // anonymous namespace

std::string aggregate_csv(const BatchResult& result)
{
  std::string out = "scenario,solver,episodes,errors,success_rate,deadlock_rate";
  for (const auto& name : aggregate_metric_names())
    out += "," + name + "_mean," + name + "_std," + name + "_count";
  out += '\n';

  for (const auto& row : result.rows)
  {
    out += std::string(to_string(row.scenario)) + "," + std::string(to_string(row.solver))
      + "," + std::to_string(row.episodes) + "," + std::to_string(row.errors)
      + "," + fixed(row.success_rate) + "," + fixed(row.deadlock_rate);
    for (const auto& s : row.metrics)
    {
      if (s.count == 0)
        out += ",,,0";
      else
        out += "," + fixed(s.mean) + "," + fixed(s.std) + "," + std::to_string(s.count);
    }
    out += '\n';
  }
  return out;
}

std::string episodes_csv(const BatchResult& result)
{
  std::string out = "scenario,solver,seed,termination,success,deadlock";
  for (const auto& name : aggregate_metric_names())
    out += "," + name;
  out += ",error\n";

  for (const auto& e : result.episodes)
  {
    out += std::string(to_string(e.scenario)) + "," + std::string(to_string(e.solver))
      + "," + std::to_string(e.seed);
    if (e.report)
    {
      out += "," + std::string(to_string(e.report->termination))
        + "," + (e.report->success ? "1" : "0")
        + "," + (e.report->deadlock_occurred ? "1" : "0");
      for (const auto& v : episode_scalars(*e.report))
        out += "," + (v ? fixed(*v) : std::string());
      out += ",\n";
    }
    else
    {
      std::string error = e.error;
      std::replace(error.begin(), error.end(), '"', '\'');
      out += ",error,0,0";
      for (std::size_t m = 0; m < aggregate_metric_names().size(); ++m)
        out += ",";
      out += ",\"" + error + "\"\n";
    }
  }
  return out;
}

std::string render_table(const BatchResult& result)
{
  const std::vector<std::string> header = {
    "Scenario", "Method", "Avg. dV", "Path Deviation", "Makespan Ratio",
    "Success Rate", "Flow Rate", "IS", "SW", "SWG", "Deadlock Rate"};

  const auto cell = [](const Statistic& s)
    {
      if (s.count == 0)
        return std::string("n/a");
      return fixed(s.mean, 2) + " ± " + fixed(s.std, 2);
    };

  std::vector<std::vector<std::string>> rows = {header};
  for (const auto& row : result.rows)
  {
    const auto& m = row.metrics;
    rows.push_back({
      std::string(to_string(row.scenario)),
      std::string(to_string(row.solver)),
      cell(m[0]), cell(m[1]), cell(m[2]),
      fixed(row.success_rate, 2),
      cell(m[3]), cell(m[4]), cell(m[5]), cell(m[6]),
      fixed(row.deadlock_rate, 2)});
  }

  // Width in code points so the multi-byte plus-minus sign aligns.
  const auto width = [](const std::string& s)
    {
      std::size_t n = 0;
      for (const unsigned char c : s)
        n += (c & 0xC0) != 0x80 ? 1 : 0;
      return n;
    };

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& r : rows)
  {
    for (std::size_t c = 0; c < r.size(); ++c)
      widths[c] = std::max(widths[c], width(r[c]));
  }

  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (std::size_t c = 0; c < rows[i].size(); ++c)
    {
      if (c > 0)
        out += " | ";
      out += rows[i][c];
      if (c + 1 < rows[i].size())
        out += std::string(widths[c] - width(rows[i][c]), ' ');
    }
    out += '\n';
    if (i == 0)
    {
      std::size_t total = 0;
      for (const auto w : widths)
        total += w;
      out += std::string(total + 3 * (widths.size() - 1), '-') + "\n";
    }
  }
  return out;
}

} // namespace smgbench
