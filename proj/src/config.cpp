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

#include <smgbench/config.hpp>

#include <algorithm>

namespace smgbench {

//==============================================================================
std::string RunConfig::run_name() const
{
  if (!name.empty())
    return name;
  return std::string(to_string(scenario)) + "_" + std::to_string(params.n_agents)
         + "_robots";
}

Scenario RunConfig::make_scenario() const
{
  Scenario s = build(scenario, params);
  for (const auto& o : agents)
  {
    const auto it = std::find_if(s.agents.begin(), s.agents.end(),
        [&](const AgentSpec& a) { return a.id == o.id; });
    if (it == s.agents.end())
    {
      throw ScenarioError(
              "agent override names agent " + std::to_string(o.id)
              + ", but the scenario has " + std::to_string(s.agents.size())
              + " agents");
    }
    if (o.start)
      it->start = *o.start;
    if (o.goal)
      it->goal = *o.goal;
    if (o.priority)
      it->priority = *o.priority;
  }
  if (!agents.empty())
    validate(s);
  return s;
}

//==============================================================================
Json to_json(const RunConfig& c)
{
  Json agents = Json::array();
  for (const auto& o : c.agents)
  {
    Json a;
    a["id"] = o.id;
    if (o.start)
      a["start"] = Json::array({o.start->x, o.start->y});
    if (o.goal)
      a["goal"] = Json::array({o.goal->x, o.goal->y});
    if (o.priority)
      a["priority"] = *o.priority;
    agents.push_back(std::move(a));
  }

  Json j;
  j["name"] = c.name;
  j["scenario"] = std::string(to_string(c.scenario));
  j["params"] = to_json(c.params);
  j["agents"] = std::move(agents);
  j["settings"] = to_json(c.settings);
  j["metrics"] = to_json(c.metrics);
  j["output_dir"] = c.output_dir;
  return j;
}

namespace {

Vec2 read_vec(const Json& j, const std::string& where)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("field '" + where + "': expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

} // anonymous namespace

RunConfig run_config_from_json(const Json& json)
{
  if (!json.is_object())
    throw FormatError("run config: expected an object");

  RunConfig c;
  for (auto it = json.begin(); it != json.end(); ++it)
  {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "name")
    {
      if (!v.is_string())
        throw FormatError("field 'name': expected a string");
      c.name = v.get<std::string>();
    }
    else if (key == "scenario")
    {
      if (!v.is_string())
        throw FormatError("field 'scenario': expected a string");
      try
      {
        c.scenario = scenario_kind_from_string(v.get<std::string>());
      }
      catch (const std::invalid_argument& e)
      {
        throw FormatError(std::string("field 'scenario': ") + e.what());
      }
    }
    else if (key == "params")
    {
      c.params = scenario_params_from_json(v, "params");
    }
    else if (key == "agents")
    {
      if (!v.is_array())
        throw FormatError("field 'agents': expected an array");
      for (std::size_t i = 0; i < v.size(); ++i)
      {
        const std::string where = "agents[" + std::to_string(i) + "]";
        const Json& a = v[i];
        if (!a.is_object())
          throw FormatError("field '" + where + "': expected an object");

        AgentOverride o;
        bool has_id = false;
        for (auto f = a.begin(); f != a.end(); ++f)
        {
          const std::string fw = where + "." + f.key();
          if (f.key() == "id")
          {
            if (!f.value().is_number_integer())
              throw FormatError("field '" + fw + "': expected an integer");
            o.id = f.value().get<int>();
            has_id = true;
          }
          else if (f.key() == "start")
          {
            o.start = read_vec(f.value(), fw);
          }
          else if (f.key() == "goal")
          {
            o.goal = read_vec(f.value(), fw);
          }
          else if (f.key() == "priority")
          {
            if (!f.value().is_number())
              throw FormatError("field '" + fw + "': expected a number");
            o.priority = f.value().get<double>();
          }
          else
          {
            throw FormatError("field '" + fw + "': unknown field");
          }
        }
        if (!has_id)
          throw FormatError("field '" + where + ".id': missing");
        c.agents.push_back(o);
      }
    }
    else if (key == "settings")
    {
      c.settings = settings_from_json(v, "settings");
    }
    else if (key == "metrics")
    {
      c.metrics = metrics_options_from_json(v, "metrics");
    }
    else if (key == "output_dir")
    {
      if (!v.is_string())
        throw FormatError("field 'output_dir': expected a string");
      c.output_dir = v.get<std::string>();
    }
    else
    {
      throw FormatError("field '" + key + "': unknown field");
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
  const Json json = read_json_file(path);
  try
  {
    if (json.is_object() && json.contains("format") && json.contains("config"))
      return run_config_from_json(json.at("config"));
    return run_config_from_json(json);
  }
  catch (const FormatError& e)
  {
    throw FormatError(path.string() + ": " + e.what());
  }
}

} // namespace smgbench
