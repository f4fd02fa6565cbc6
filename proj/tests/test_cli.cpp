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


#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome
{
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path workdir()
{
  static const fs::path dir = []
    {
      const fs::path d = fs::temp_directory_path() / "smgbench_cli";
      fs::remove_all(d);
      fs::create_directories(d);
      return d;
    }();
  return dir;
}

Outcome smg(const std::string& args, const std::string& input = "")
{
  const fs::path out = workdir() / "stdout.txt";
  const fs::path err = workdir() / "stderr.txt";
  const fs::path in = workdir() / "stdin.txt";
  std::ofstream(in) << input;

  const std::string command = "env -u SMG_OUT_DIR " + std::string(SMG_BINARY) + " "
    + args + " < " + in.string() + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(command.c_str());

  Outcome result;
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

bool contains(const std::string& text, const std::string& part)
{
  return text.find(part) != std::string::npos;
}

} // anonymous namespace

TEST_CASE("help lists the subcommands", "[cli]")
{
  const Outcome r = smg("--help");
  CHECK(r.status == 0);
  for (const char* name : {"run", "batch", "eval", "list-scenarios"})
    CHECK(contains(r.out, name));
}

TEST_CASE("invalid method numbers are usage errors", "[cli]")
{
  const Outcome r = smg("run --solver 7 --out " + (workdir() / "bad").string());
  CHECK(r.status == 2);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(workdir() / "bad" / "logs"));

  CHECK(smg("run --scenario warehouse").status == 2);
  CHECK(smg("frobnicate").status != 0);
}

TEST_CASE("list-scenarios prints every kind", "[cli]")
{
  const Outcome r = smg("list-scenarios");
  CHECK(r.status == 0);
  for (const char* name : {"doorway", "intersection", "hallway", "l_corner",
                           "blind_corner", "crowded", "parallel",
                           "perpendicular", "circular"})
    CHECK(contains(r.out, name));
}

TEST_CASE("run writes artifacts and eval reproduces the metrics", "[cli]")
{
  const fs::path root = workdir() / "run";
  const Outcome r = smg("run --scenario doorway --solver 3 --out " + root.string());
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "Configuration saved to"));
  CHECK(contains(r.out, "Hausdorff distance:"));

  const fs::path log = root / "logs" / "doorway_2_robots";
  CHECK(fs::exists(root / "config_doorway_2_robots.json"));
  CHECK(fs::exists(log / "meta.json"));
  CHECK(fs::exists(log / "trajectories" / "robot_0.csv"));
  CHECK(fs::exists(log / "trajectories" / "robot_1.csv"));
  REQUIRE(fs::exists(log / "metrics.json"));

  const fs::path first = workdir() / "eval1.json";
  const fs::path second = workdir() / "eval2.json";
  REQUIRE(smg("eval " + log.string() + " --json " + first.string()).status == 0);
  REQUIRE(smg("eval " + log.string() + " --json " + second.string()).status == 0);
  CHECK(slurp(first) == slurp(second));
  CHECK(slurp(first) == slurp(log / "metrics.json"));

  // Re-running the logged configuration reproduces the trajectories.
  const fs::path again = workdir() / "again";
  REQUIRE(smg("run --config " + (log / "meta.json").string()
    + " --out " + again.string()).status == 0);
  const fs::path log2 = again / "logs" / "doorway_2_robots";
  CHECK(slurp(log / "trajectories" / "robot_0.csv")
    == slurp(log2 / "trajectories" / "robot_0.csv"));
  CHECK(slurp(log / "trajectories" / "robot_1.csv")
    == slurp(log2 / "trajectories" / "robot_1.csv"));
}

TEST_CASE("eval rejects a truncated trajectory", "[cli]")
{
  const fs::path root = workdir() / "truncated";
  REQUIRE(smg("run --scenario hallway --solver orca --out " + root.string()).status == 0);
  const fs::path csv = root / "logs" / "hallway_2_robots" / "trajectories" / "robot_1.csv";
  const std::string text = slurp(csv);
  std::ofstream(csv, std::ios::binary | std::ios::trunc) << text.substr(0, text.size() / 3);

  const Outcome r = smg("eval " + (root / "logs" / "hallway_2_robots").string());
  CHECK(r.status == 1);
  CHECK(contains(r.err, "robot_1.csv"));
}

TEST_CASE("interactive setup accepts defaults", "[cli]")
{
  const fs::path root = workdir() / "interactive";
  std::string input = "4\n1\n2\n";
  for (int i = 0; i < 8; ++i)
    input += "\n";
  const Outcome r = smg("run --interactive --out " + root.string(), input);
  CHECK(r.status == 0);
  CHECK(contains(r.out, "Enter method number (1-4)"));
  CHECK(contains(r.out, "Robot 1 will move from"));
  CHECK(contains(r.out, "Robot 2 will move from"));
  CHECK(fs::exists(root / "logs" / "doorway_2_robots" / "meta.json"));
}

TEST_CASE("batch writes the aggregate table", "[cli]")
{
  const fs::path root = workdir() / "batch";
  const Outcome r = smg("batch --scenario doorway --solver orca --solver auction"
    " --seeds 2 --out " + root.string());
  REQUIRE(r.status == 0);
  const std::string csv = slurp(root / "results" / "aggregate.csv");
  CHECK(contains(csv, "doorway,orca,2,"));
  CHECK(contains(csv, "doorway,auction,2,"));
  CHECK(fs::exists(root / "results" / "episodes.csv"));
}
