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

#include <smgbench/io.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace smgbench {

//==============================================================================
bool is_non_negative_integer(const Json& json)
{
  return json.is_number_unsigned()
    || (json.is_number_integer() && json.get<std::int64_t>() >= 0);
}

std::string format_double(double value)
{
  if (value == 0.0)
    return "0";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string dump(const Json& json)
{
  return json.dump(2) + "\n";
}

Json read_json_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FormatError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  try
  {
    return Json::parse(text);
  }
  catch (const Json::parse_error& e)
  {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < end; ++i)
    {
      if (text[i] == '\n')
      {
        ++line;
        column = 1;
      }
      else
      {
        ++column;
      }
    }
    throw FormatError(
            path.string() + ":" + std::to_string(line) + ":"
            + std::to_string(column) + ": invalid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out)
    throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

//==============================================================================
Json vec(const Vec2& v)
{
  return Json::array({v.x, v.y});
}

/// Finite doubles as numbers, infinities as null.
Json maybe_infinite(double v)
{
  if (std::isinf(v))
    return nullptr;
  return v;
}

template <typename T>
Json optional_value(const std::optional<T>& v)
{
  if (v)
    return *v;
  return nullptr;
}

//==============================================================================
/// Reads the members of one JSON object, tracking which keys were consumed.
class ObjectReader
{
public:
  ObjectReader(const Json& json, std::string where)
  : _json(json),
    _where(std::move(where))
  {
    if (!_json.is_object())
      fail(_where, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what)
  {
    throw FormatError("field '" + where + "': " + what);
  }

  std::string path(const std::string& key) const
  {
    return _where.empty() ? key : _where + "." + key;
  }

  const Json* find(const std::string& key)
  {
    _seen.insert(key);
    const auto it = _json.find(key);
    return it == _json.end() ? nullptr : &*it;
  }

  const Json& require(const std::string& key)
  {
    const Json* j = find(key);
    if (!j)
      fail(path(key), "missing");
    return *j;
  }

  void number(const std::string& key, double& out)
  {
    if (const Json* j = find(key))
      out = as_number(*j, path(key));
  }

  void number_or_infinity(const std::string& key, double& out)
  {
    if (const Json* j = find(key))
    {
      out = j->is_null()
        ? std::numeric_limits<double>::infinity()
        : as_number(*j, path(key));
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out)
  {
    if (const Json* j = find(key))
    {
      if (j->is_null())
        out.reset();
      else
        out = as_number(*j, path(key));
    }
  }

  void integer(const std::string& key, int& out)
  {
    if (const Json* j = find(key))
      out = as_int(*j, path(key));
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out)
  {
    if (const Json* j = find(key))
    {
      if (!is_non_negative_integer(*j))
        fail(path(key), "expected a non-negative integer");
      out = j->get<std::uint64_t>();
    }
  }

  void size(const std::string& key, std::size_t& out)
  {
    std::uint64_t v = out;
    unsigned_integer(key, v);
    out = static_cast<std::size_t>(v);
  }

  void boolean(const std::string& key, bool& out)
  {
    if (const Json* j = find(key))
    {
      if (!j->is_boolean())
        fail(path(key), "expected true or false");
      out = j->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out)
  {
    if (const Json* j = find(key))
      out = as_string(*j, path(key));
  }

  template <typename Enum, typename Parse>
  void enumeration(const std::string& key, Enum& out, Parse parse)
  {
    if (const Json* j = find(key))
    {
      const std::string name = as_string(*j, path(key));
      try
      {
        out = parse(name);
      }
      catch (const std::exception& e)
      {
        fail(path(key), e.what());
      }
    }
  }

  void finish() const
  {
    for (auto it = _json.begin(); it != _json.end(); ++it)
    {
      if (!_seen.contains(it.key()))
        fail(path(it.key()), "unknown field");
    }
  }

  static double as_number(const Json& j, const std::string& where)
  {
    if (!j.is_number())
      fail(where, "expected a number");
    return j.get<double>();
  }

  static int as_int(const Json& j, const std::string& where)
  {
    if (!j.is_number_integer())
      fail(where, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      fail(where, "integer out of range");
    return static_cast<int>(v);
  }

  static std::string as_string(const Json& j, const std::string& where)
  {
    if (!j.is_string())
      fail(where, "expected a string");
    return j.get<std::string>();
  }

  static Vec2 as_vec(const Json& j, const std::string& where)
  {
    if (!j.is_array() || j.size() != 2)
      fail(where, "expected [x, y]");
    return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]")};
  }

  static const Json& as_array(const Json& j, const std::string& where)
  {
    if (!j.is_array())
      fail(where, "expected an array");
    return j;
  }

private:
  const Json& _json;
  std::string _where;
  std::set<std::string> _seen;
};

std::string item(const std::string& where, std::size_t i)
{
  return where + "[" + std::to_string(i) + "]";
}

} // anonymous namespace

//==============================================================================
Json to_json(const ScenarioParams& p)
{
  Json j;
  j["n_agents"] = p.n_agents;
  j["corridor_width"] = optional_value(p.corridor_width);
  j["gap_width"] = optional_value(p.gap_width);
  j["approach_distance"] = optional_value(p.approach_distance);
  j["world_scale"] = p.world_scale;
  j["jitter"] = p.jitter;
  j["seed"] = p.seed;
  j["agent_radius"] = p.agent_radius;
  j["preferred_speed"] = p.preferred_speed;
  j["max_speed"] = p.max_speed;
  j["max_accel"] = p.max_accel;
  j["sensing_radius"] = maybe_infinite(p.sensing_radius);
  return j;
}

ScenarioParams scenario_params_from_json(const Json& json, const std::string& where)
{
  ScenarioParams p;
  ObjectReader r(json, where);
  r.integer("n_agents", p.n_agents);
  r.optional_number("corridor_width", p.corridor_width);
  r.optional_number("gap_width", p.gap_width);
  r.optional_number("approach_distance", p.approach_distance);
  r.number("world_scale", p.world_scale);
  r.number("jitter", p.jitter);
  r.unsigned_integer("seed", p.seed);
  r.number("agent_radius", p.agent_radius);
  r.number("preferred_speed", p.preferred_speed);
  r.number("max_speed", p.max_speed);
  r.number("max_accel", p.max_accel);
  r.number_or_infinity("sensing_radius", p.sensing_radius);
  r.finish();
  return p;
}

//==============================================================================
Json to_json(const Scenario& s)
{
  Json geometry;
  Json obstacles = Json::array();
  for (const auto& seg : s.geometry.obstacles)
    obstacles.push_back(Json::array({vec(seg.a), vec(seg.b)}));
  geometry["obstacles"] = std::move(obstacles);
  if (s.geometry.gap)
  {
    geometry["gap"] = {
      {"center", vec(s.geometry.gap->center)},
      {"normal", vec(s.geometry.gap->normal)},
      {"width", s.geometry.gap->width},
    };
  }
  else
  {
    geometry["gap"] = nullptr;
  }
  geometry["bounds"] = {
    {"min", vec(s.geometry.bounds.min)},
    {"max", vec(s.geometry.bounds.max)},
  };

  Json agents = Json::array();
  for (const auto& a : s.agents)
  {
    agents.push_back({
      {"id", a.id},
      {"radius", a.radius},
      {"preferred_speed", a.preferred_speed},
      {"max_speed", a.max_speed},
      {"max_accel", a.max_accel},
      {"start", vec(a.start)},
      {"goal", vec(a.goal)},
      {"priority", a.priority},
      {"sensing_radius", maybe_infinite(a.sensing_radius)},
    });
  }

  Json j;
  j["kind"] = std::string(to_string(s.kind));
  j["seed"] = s.seed;
  j["geometry"] = std::move(geometry);
  j["agents"] = std::move(agents);
  return j;
}

Scenario scenario_from_json(const Json& json, const std::string& where)
{
  Scenario s;
  ObjectReader r(json, where);
  r.enumeration("kind", s.kind, scenario_kind_from_string);
  r.unsigned_integer("seed", s.seed);

  {
    const std::string gw = r.path("geometry");
    ObjectReader g(r.require("geometry"), gw);
    const Json& obstacles = ObjectReader::as_array(g.require("obstacles"),
        g.path("obstacles"));
    for (std::size_t i = 0; i < obstacles.size(); ++i)
    {
      const std::string w = item(g.path("obstacles"), i);
      if (!obstacles[i].is_array() || obstacles[i].size() != 2)
        ObjectReader::fail(w, "expected [[ax, ay], [bx, by]]");
      s.geometry.obstacles.push_back({
        ObjectReader::as_vec(obstacles[i][0], w),
        ObjectReader::as_vec(obstacles[i][1], w)});
    }

    if (const Json* gap = g.find("gap"); gap && !gap->is_null())
    {
      ObjectReader gr(*gap, g.path("gap"));
      Gap value;
      value.center = ObjectReader::as_vec(gr.require("center"), gr.path("center"));
      value.normal = ObjectReader::as_vec(gr.require("normal"), gr.path("normal"));
      gr.number("width", value.width);
      gr.finish();
      s.geometry.gap = value;
    }

    ObjectReader b(g.require("bounds"), g.path("bounds"));
    s.geometry.bounds.min = ObjectReader::as_vec(b.require("min"), b.path("min"));
    s.geometry.bounds.max = ObjectReader::as_vec(b.require("max"), b.path("max"));
    b.finish();
    g.finish();
  }

  const Json& agents = ObjectReader::as_array(r.require("agents"), r.path("agents"));
  for (std::size_t i = 0; i < agents.size(); ++i)
  {
    const std::string w = item(r.path("agents"), i);
    ObjectReader a(agents[i], w);
    AgentSpec spec;
    a.integer("id", spec.id);
    a.number("radius", spec.radius);
    a.number("preferred_speed", spec.preferred_speed);
    a.number("max_speed", spec.max_speed);
    a.number("max_accel", spec.max_accel);
    spec.start = ObjectReader::as_vec(a.require("start"), a.path("start"));
    spec.goal = ObjectReader::as_vec(a.require("goal"), a.path("goal"));
    a.number("priority", spec.priority);
    a.number_or_infinity("sensing_radius", spec.sensing_radius);
    a.finish();
    s.agents.push_back(spec);
  }
  r.finish();
  return s;
}

//==============================================================================
Json to_json(const SolverConfig& c)
{
  Json j;
  j["kind"] = std::string(to_string(c.kind));
  j["time_horizon"] = c.time_horizon;
  j["obstacle_time_horizon"] = c.obstacle_time_horizon;
  j["safety_margin"] = c.safety_margin;
  j["deadlock_speed"] = c.deadlock_speed;
  j["deadlock_duration"] = c.deadlock_duration;
  j["perturb_angle"] = c.perturb_angle;
  j["perturb_hysteresis"] = c.perturb_hysteresis;
  j["velocity_scale"] = c.velocity_scale;
  j["warning_band"] = c.warning_band;
  j["auction_period"] = c.auction_period;
  j["goal_tolerance"] = c.goal_tolerance;
  j["lookahead"] = c.lookahead;
  j["cbf_alpha"] = c.cbf_alpha;
  j["forced_ranking"] = c.forced_ranking;
  return j;
}

SolverConfig solver_config_from_json(const Json& json, const std::string& where)
{
  SolverConfig c;
  ObjectReader r(json, where);
  r.enumeration("kind", c.kind, solver_kind_from_string);
  r.number("time_horizon", c.time_horizon);
  r.number("obstacle_time_horizon", c.obstacle_time_horizon);
  r.number("safety_margin", c.safety_margin);
  r.number("deadlock_speed", c.deadlock_speed);
  r.number("deadlock_duration", c.deadlock_duration);
  r.number("perturb_angle", c.perturb_angle);
  r.number("perturb_hysteresis", c.perturb_hysteresis);
  r.number("velocity_scale", c.velocity_scale);
  r.number("warning_band", c.warning_band);
  r.number("auction_period", c.auction_period);
  r.number("goal_tolerance", c.goal_tolerance);
  r.number("lookahead", c.lookahead);
  r.number("cbf_alpha", c.cbf_alpha);
  if (const Json* f = r.find("forced_ranking"))
  {
    const std::string w = r.path("forced_ranking");
    for (std::size_t i = 0; i < ObjectReader::as_array(*f, w).size(); ++i)
      c.forced_ranking.push_back(ObjectReader::as_int((*f)[i], item(w, i)));
  }
  r.finish();
  return c;
}

//==============================================================================
Json to_json(const EpisodeSettings& s)
{
  Json j;
  j["solver"] = to_json(s.solver);
  j["observability"] = {
    {"valuations_visible", s.observability.valuations_visible},
    {"occlusion", s.observability.occlusion},
  };
  j["dt"] = s.dt;
  j["t_max"] = s.t_max;
  j["collision_policy"] = std::string(to_string(s.collision_policy));
  j["smg_delta"] = s.smg_delta;
  return j;
}

EpisodeSettings settings_from_json(const Json& json, const std::string& where)
{
  EpisodeSettings s;
  ObjectReader r(json, where);
  if (const Json* solver = r.find("solver"))
    s.solver = solver_config_from_json(*solver, r.path("solver"));
  if (const Json* o = r.find("observability"))
  {
    ObjectReader obs(*o, r.path("observability"));
    obs.boolean("valuations_visible", s.observability.valuations_visible);
    obs.boolean("occlusion", s.observability.occlusion);
    obs.finish();
  }
  r.number("dt", s.dt);
  r.number("t_max", s.t_max);
  r.enumeration("collision_policy", s.collision_policy,
    collision_policy_from_string);
  r.number("smg_delta", s.smg_delta);
  r.finish();
  return s;
}

//==============================================================================
Json to_json(const MetricsOptions& o)
{
  Json j;
  j["flow_time"] = std::string(to_string(o.flow_time));
  j["path_length_weight"] = o.path_length_weight;
  j["counterfactuals"] = o.counterfactuals;
  j["max_ordering_size"] = o.max_ordering_size;
  return j;
}

MetricsOptions metrics_options_from_json(const Json& json, const std::string& where)
{
  MetricsOptions o;
  ObjectReader r(json, where);
  r.enumeration("flow_time", o.flow_time, flow_time_from_string);
  r.number("path_length_weight", o.path_length_weight);
  r.boolean("counterfactuals", o.counterfactuals);
  r.size("max_ordering_size", o.max_ordering_size);
  r.finish();
  return o;
}

//==============================================================================
Json to_json(const SmgReport& report)
{
  Json j;
  j["is_smg"] = report.is_smg;
  j["delta"] = report.delta;
  j["window"] = report.window
    ? Json::array({report.window->first, report.window->second})
    : Json(nullptr);

  Json pairs = Json::array();
  for (const auto& [a, b] : report.conflicting_pairs)
    pairs.push_back(Json::array({a, b}));
  j["conflicting_pairs"] = std::move(pairs);

  Json conflicts = Json::array();
  for (const auto& c : report.conflicts)
  {
    conflicts.push_back({
      {"first", c.first}, {"second", c.second},
      {"begin", c.begin}, {"end", c.end}});
  }
  j["conflicts"] = std::move(conflicts);

  Json sets = Json::array();
  for (const auto& c : report.coupling_sets)
    sets.push_back({{"begin", c.begin}, {"end", c.end}, {"members", c.members}});
  j["coupling_sets"] = std::move(sets);
  return j;
}

SmgReport smg_from_json(const Json& json, const std::string& where)
{
  SmgReport report;
  ObjectReader r(json, where);
  r.boolean("is_smg", report.is_smg);
  r.number("delta", report.delta);
  if (const Json* w = r.find("window"); w && !w->is_null())
  {
    const Vec2 v = ObjectReader::as_vec(*w, r.path("window"));
    report.window = std::make_pair(v.x, v.y);
  }

  if (const Json* pairs = r.find("conflicting_pairs"))
  {
    const std::string w = r.path("conflicting_pairs");
    for (std::size_t i = 0; i < ObjectReader::as_array(*pairs, w).size(); ++i)
    {
      const Json& p = (*pairs)[i];
      if (!p.is_array() || p.size() != 2)
        ObjectReader::fail(item(w, i), "expected [a, b]");
      report.conflicting_pairs.emplace_back(
        ObjectReader::as_int(p[0], item(w, i)),
        ObjectReader::as_int(p[1], item(w, i)));
    }
  }

  if (const Json* conflicts = r.find("conflicts"))
  {
    const std::string w = r.path("conflicts");
    for (std::size_t i = 0; i < ObjectReader::as_array(*conflicts, w).size(); ++i)
    {
      ObjectReader c((*conflicts)[i], item(w, i));
      ConflictInterval ci;
      c.integer("first", ci.first);
      c.integer("second", ci.second);
      c.number("begin", ci.begin);
      c.number("end", ci.end);
      c.finish();
      report.conflicts.push_back(ci);
    }
  }

  if (const Json* sets = r.find("coupling_sets"))
  {
    const std::string w = r.path("coupling_sets");
    for (std::size_t i = 0; i < ObjectReader::as_array(*sets, w).size(); ++i)
    {
      ObjectReader c((*sets)[i], item(w, i));
      CouplingSet cs;
      c.number("begin", cs.begin);
      c.number("end", cs.end);
      const Json& members = ObjectReader::as_array(c.require("members"),
          c.path("members"));
      for (std::size_t k = 0; k < members.size(); ++k)
        cs.members.push_back(ObjectReader::as_int(members[k], item(c.path("members"), k)));
      c.finish();
      report.coupling_sets.push_back(std::move(cs));
    }
  }
  r.finish();
  return report;
}

//==============================================================================
Json to_json(const MetricsReport& report)
{
  Json agents = Json::array();
  for (const auto& a : report.agents)
  {
    agents.push_back({
      {"id", a.id},
      {"avg_delta_v", a.avg_delta_v},
      {"makespan_ratio", optional_value(a.makespan_ratio)},
      {"path_deviation", a.path_deviation},
      {"ttg", optional_value(a.ttg)},
      {"invasiveness", optional_value(a.invasiveness)},
      {"invasiveness_degraded", a.invasiveness_degraded},
      {"local_reward", a.local_reward},
    });
  }

  Json j;
  j["termination"] = std::string(to_string(report.termination));
  j["success"] = report.success;
  j["collision_count"] = report.collision_count;
  j["deadlock_occurred"] = report.deadlock_occurred;
  j["flow_rate"] = optional_value(report.flow_rate);
  j["flow_time"] = std::string(to_string(report.flow_time));
  j["gap_crossers"] = report.gap_crossers;
  j["last_gap_crossing"] = optional_value(report.last_gap_crossing);
  j["makespan"] = optional_value(report.makespan);
  j["social_welfare"] = report.social_welfare;
  j["social_welfare_gap"] = optional_value(report.social_welfare_gap);
  j["social_welfare_gap_note"] = report.social_welfare_gap_note;
  j["agents"] = std::move(agents);
  return j;
}

//==============================================================================
std::filesystem::path trajectory_file(int agent_id)
{
  return std::filesystem::path("trajectories")
         / ("robot_" + std::to_string(agent_id) + ".csv");
}

std::string trajectory_csv(const EpisodeLog& log, int agent_id)
{
  const std::size_t i = log.index_of(agent_id);
  std::string out = "t,agent_id,px,py,vx,vy,ux,uy\n";
  for (const auto& record : log.steps)
  {
    const AgentState& s = record.states[i];
    const Vec2& u = record.controls[i];
    out += format_double(record.time);
    out += ',';
    out += std::to_string(agent_id);
    for (const double v : {s.position.x, s.position.y, s.velocity.x,
        s.velocity.y, u.x, u.y})
    {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_episode(
  const EpisodeLog& log,
  const std::filesystem::path& dir,
  const std::optional<Json>& config)
{
  Json meta;
  meta["format"] = "smgbench-episode";
  meta["version"] = 1;
  if (config)
    meta["config"] = *config;
  meta["scenario"] = to_json(log.scenario);
  meta["settings"] = to_json(log.settings);
  meta["smg"] = to_json(log.smg);
  meta["step_count"] = log.steps.size();

  Json files = Json::array();
  for (const auto& a : log.scenario.agents)
  {
    files.push_back({
      {"id", a.id},
      {"radius", a.radius},
      {"trajectory", trajectory_file(a.id).generic_string()}});
  }
  meta["trajectories"] = std::move(files);

  Json collisions = Json::array();
  for (const auto& c : log.collisions)
  {
    collisions.push_back({
      {"time", c.time},
      {"kind", std::string(to_string(c.kind))},
      {"ids", c.ids},
      {"penetration", c.penetration}});
  }

  const auto events = [](const std::vector<AgentEvent>& list)
    {
      Json out = Json::array();
      for (const auto& e : list)
        out.push_back({{"time", e.time}, {"agent_id", e.agent_id}});
      return out;
    };

  meta["events"] = {
    {"collisions", std::move(collisions)},
    {"deadlock_flags", events(log.deadlock_flags)},
    {"gap_crossings", events(log.gap_crossings)},
    {"goal_arrivals", events(log.goal_arrivals)},
  };
  meta["termination"] = std::string(to_string(log.termination));
  meta["diagnostic"] = log.diagnostic;
  meta["infeasible_projections"] = log.infeasible_projections;

  std::filesystem::create_directories(dir / "trajectories");
  write_text_file(dir / "meta.json", dump(meta));
  for (const auto& a : log.scenario.agents)
    write_text_file(dir / trajectory_file(a.id), trajectory_csv(log, a.id));
}

//==============================================================================
namespace {

double parse_csv_double(
  std::string_view text,
  const std::string& file,
  std::size_t row,
  const char* column)
{
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size())
  {
    throw FormatError(
            file + ": row " + std::to_string(row) + ": column '" + column
            + "' is not a number: '" + std::string(text) + "'");
  }
  return value;
}

struct CsvRow
{
  double t = 0.0;
  AgentState state;
  Vec2 control;
};

std::vector<CsvRow> read_trajectory_csv(
  const std::filesystem::path& path,
  int agent_id)
{
  const std::string file = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FormatError("missing trajectory file '" + file + "'");

  static constexpr const char* columns[] = {
    "t", "agent_id", "px", "py", "vx", "vy", "ux", "uy"};

  std::string line;
  if (!std::getline(in, line) || line != "t,agent_id,px,py,vx,vy,ux,uy")
    throw FormatError(file + ": row 1: unexpected header '" + line + "'");

  std::vector<CsvRow> rows;
  std::size_t row = 1;
  while (std::getline(in, line))
  {
    ++row;
    if (line.empty())
      continue;

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;)
    {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos)
        break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 8)
    {
      throw FormatError(
              file + ": row " + std::to_string(row) + ": expected 8 columns, found "
              + std::to_string(fields.size()));
    }

    double v[8];
    for (std::size_t k = 0; k < 8; ++k)
      v[k] = parse_csv_double(fields[k], file, row, columns[k]);
    if (v[1] != static_cast<double>(agent_id))
    {
      throw FormatError(
              file + ": row " + std::to_string(row) + ": agent_id "
              + std::string(fields[1]) + " does not match the file's agent "
              + std::to_string(agent_id));
    }

    CsvRow r;
    r.t = v[0];
    r.state = {{v[2], v[3]}, {v[4], v[5]}, v[0]};
    r.control = {v[6], v[7]};
    rows.push_back(r);
  }
  return rows;
}

std::vector<AgentEvent> events_from_json(const Json& json, const std::string& where)
{
  std::vector<AgentEvent> out;
  for (std::size_t i = 0; i < ObjectReader::as_array(json, where).size(); ++i)
  {
    ObjectReader r(json[i], item(where, i));
    AgentEvent e;
    r.number("time", e.time);
    r.integer("agent_id", e.agent_id);
    r.finish();
    out.push_back(e);
  }
  return out;
}

CollisionKind collision_kind_from_string(std::string_view name)
{
  for (const auto kind : {CollisionKind::AgentAgent, CollisionKind::AgentObstacle})
  {
    if (to_string(kind) == name)
      return kind;
  }
  throw std::invalid_argument("unknown collision kind '" + std::string(name) + "'");
}

} // anonymous namespace

EpisodeLog read_episode(const std::filesystem::path& dir)
{
  const auto meta_path = dir / "meta.json";
  if (!std::filesystem::exists(meta_path))
    throw FormatError("missing episode metadata '" + meta_path.string() + "'");
  const Json meta = read_json_file(meta_path);

  EpisodeLog log;
  ObjectReader r(meta, "");
  std::string format;
  r.string("format", format);
  if (format != "smgbench-episode")
    ObjectReader::fail("format", "not an episode log");
  int version = 0;
  r.integer("version", version);
  if (version != 1)
    ObjectReader::fail("version", "unsupported version " + std::to_string(version));
  r.find("config");
  r.find("trajectories");

  log.scenario = scenario_from_json(r.require("scenario"), "scenario");
  log.settings = settings_from_json(r.require("settings"), "settings");
  log.smg = smg_from_json(r.require("smg"), "smg");
  std::size_t step_count = 0;
  r.size("step_count", step_count);

  {
    ObjectReader ev(r.require("events"), "events");
    const Json& collisions = ObjectReader::as_array(ev.require("collisions"),
        "events.collisions");
    for (std::size_t i = 0; i < collisions.size(); ++i)
    {
      ObjectReader c(collisions[i], item("events.collisions", i));
      CollisionEvent e;
      c.number("time", e.time);
      c.enumeration("kind", e.kind, collision_kind_from_string);
      const Json& ids = ObjectReader::as_array(c.require("ids"), c.path("ids"));
      for (std::size_t k = 0; k < ids.size(); ++k)
        e.ids.push_back(ObjectReader::as_int(ids[k], item(c.path("ids"), k)));
      c.number("penetration", e.penetration);
      c.finish();
      log.collisions.push_back(std::move(e));
    }
    log.deadlock_flags = events_from_json(ev.require("deadlock_flags"),
        "events.deadlock_flags");
    log.gap_crossings = events_from_json(ev.require("gap_crossings"),
        "events.gap_crossings");
    log.goal_arrivals = events_from_json(ev.require("goal_arrivals"),
        "events.goal_arrivals");
    ev.finish();
  }

  r.enumeration("termination", log.termination, termination_from_string);
  r.string("diagnostic", log.diagnostic);
  r.size("infeasible_projections", log.infeasible_projections);
  r.finish();

  const std::size_t n = log.scenario.agents.size();
  log.steps.resize(step_count);
  for (auto& record : log.steps)
  {
    record.states.resize(n);
    record.controls.resize(n);
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    const int id = log.scenario.agents[i].id;
    const auto path = dir / trajectory_file(id);
    const auto rows = read_trajectory_csv(path, id);
    if (rows.size() != step_count)
    {
      throw FormatError(
              path.string() + ": row " + std::to_string(rows.size() + 2)
              + ": expected " + std::to_string(step_count)
              + " data rows, found " + std::to_string(rows.size()));
    }
    for (std::size_t k = 0; k < step_count; ++k)
    {
      if (i == 0)
      {
        log.steps[k].time = rows[k].t;
      }
      else if (rows[k].t != log.steps[k].time)
      {
        throw FormatError(
                path.string() + ": row " + std::to_string(k + 2)
                + ": time does not match the other trajectories");
      }
      log.steps[k].states[i] = rows[k].state;
      log.steps[k].controls[i] = rows[k].control;
    }
  }
  return log;
}

} // namespace smgbench
