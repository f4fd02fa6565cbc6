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


#include <smgbench/core.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace smgbench;
using Catch::Approx;

TEST_CASE("Vec2 arithmetic and rotations", "[core]")
{
  const Vec2 a{3.0, 4.0};
  CHECK(a.norm() == 5.0);
  CHECK(a.dot({1.0, 0.0}) == 3.0);
  CHECK(a.cross({1.0, 0.0}) == -4.0);
  CHECK(a.left() == Vec2{-4.0, 3.0});
  CHECK(a.right() == Vec2{4.0, -3.0});
  CHECK(Vec2{}.normalized() == Vec2{});

  const Vec2 r = Vec2{1.0, 0.0}.rotated(std::numbers::pi / 2.0);
  CHECK(r.x == Approx(0.0).margin(1e-15));
  CHECK(r.y == Approx(1.0));

  CHECK(clamp_norm(a, 1.0).norm() == Approx(1.0));
  CHECK(clamp_norm(a, 10.0) == a);
}

TEST_CASE("segment distances agree with dense sampling", "[core]")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial)
  {
    const Segment s1{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    const Segment s2{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};

    double sampled = std::numeric_limits<double>::infinity();
    constexpr int n = 400;
    for (int k = 0; k <= n; ++k)
    {
      const Vec2 p = s1.a + (s1.b - s1.a) * (double(k) / n);
      sampled = std::min(sampled, point_segment_distance(p, s2));
    }
    const double exact = segment_segment_distance(s1, s2);
    CHECK(exact <= sampled + 1e-12);
    CHECK(exact >= sampled - (s1.b - s1.a).norm() / n);
  }
}

TEST_CASE("crossing segments have zero distance", "[core]")
{
  CHECK(segment_segment_distance({{-1, 0}, {1, 0}}, {{0, -1}, {0, 1}}) == 0.0);
  CHECK(point_segment_distance({0, 2}, {{-1, 0}, {1, 0}}) == 2.0);
  CHECK(point_segment_distance({3, 0}, {{1, 1}, {1, 1}}) == Approx(std::sqrt(5.0)));
}

TEST_CASE("trajectory interpolation and resampling", "[core]")
{
  Trajectory traj;
  traj.dt = 0.5;
  for (int k = 0; k <= 4; ++k)
    traj.samples.push_back({{k * 0.5, 0.0}, {1.0, 0.0}, k * 0.5});

  CHECK(traj.duration() == 2.0);
  CHECK(traj.position_at(0.75).x == Approx(0.75));
  CHECK(traj.position_at(-1.0) == Vec2{0.0, 0.0});
  CHECK(traj.position_at(5.0) == Vec2{2.0, 0.0});
  CHECK(path_length(traj) == Approx(2.0));

  const Trajectory fine = resample(traj, 0.3);
  CHECK(fine.samples.front().time == 0.0);
  CHECK(fine.samples.back().time == 2.0);
  CHECK(fine.samples.back().position == Vec2{2.0, 0.0});
  for (const auto& s : fine.samples)
    CHECK(s.position.x == Approx(s.time));
}

TEST_CASE("agent spec validation", "[core]")
{
  WorldGeometry world;
  world.bounds = {{0, 0}, {10, 10}};
  world.obstacles.push_back({{5, 0}, {5, 10}});

  AgentSpec spec;
  spec.start = {1, 1};
  spec.goal = {2, 2};
  CHECK_NOTHROW(validate(spec, world));

  spec.radius = -1.0;
  CHECK_THROWS_AS(validate(spec, world), std::invalid_argument);

  spec.radius = 0.25;
  spec.start = {4.9, 5.0};
  CHECK_THROWS_AS(validate(spec, world), std::invalid_argument);

  CHECK(world.clearance({3, 3}) == Approx(2.0));
}
