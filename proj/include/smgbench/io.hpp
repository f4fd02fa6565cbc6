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

#ifndef SMGBENCH__IO_HPP
#define SMGBENCH__IO_HPP

#include <smgbench/harness.hpp>
#include <smgbench/metrics.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace smgbench {

using Json = nlohmann::ordered_json;

/// Malformed input file, with the location of the problem in the message.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// True for integers of either JSON signedness that are at least zero.
bool is_non_negative_integer(const Json& json);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Pretty-printed JSON text with a trailing newline.
std::string dump(const Json& json);

/// Parses a JSON file. Syntax errors report the file, line and column.
Json read_json_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

Json to_json(const ScenarioParams& params);
Json to_json(const Scenario& scenario);
Json to_json(const SolverConfig& config);
Json to_json(const EpisodeSettings& settings);
Json to_json(const MetricsOptions& options);
Json to_json(const SmgReport& report);
Json to_json(const MetricsReport& report);

/// Readers accept partial objects, keep defaults for missing keys, and
/// reject unknown keys. `where` prefixes field names in error messages.
ScenarioParams scenario_params_from_json(const Json& json, const std::string& where);
Scenario scenario_from_json(const Json& json, const std::string& where);
SolverConfig solver_config_from_json(const Json& json, const std::string& where);
EpisodeSettings settings_from_json(const Json& json, const std::string& where);
MetricsOptions metrics_options_from_json(const Json& json, const std::string& where);
SmgReport smg_from_json(const Json& json, const std::string& where);

/// Trajectory CSV of one agent with columns t, agent_id, px, py, vx, vy,
/// ux, uy and one row per step record.
std::string trajectory_csv(const EpisodeLog& log, int agent_id);

/// Relative path of an agent's trajectory file inside an episode directory.
std::filesystem::path trajectory_file(int agent_id);

/// Writes <dir>/meta.json and <dir>/trajectories/robot_<id>.csv. The
/// optional `config` is embedded so the run can be reproduced from the
/// directory alone.
void write_episode(
  const EpisodeLog& log,
  const std::filesystem::path& dir,
  const std::optional<Json>& config = std::nullopt);

/// Inverse of write_episode. Missing files and malformed rows raise
/// FormatError naming the file and row.
EpisodeLog read_episode(const std::filesystem::path& dir);

} // namespace smgbench

#endif // SMGBENCH__IO_HPP
