// Copyright 2026 The headcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "headcount/headcount.hpp"
#include "oracles.hpp"

namespace testing_support {

using namespace headcount;

inline BinaryMask to_mask(const oracle::Grid& g) {
  BinaryMask m(g.w, g.h);
  for (int y = 0; y < g.h; ++y)
    for (int x = 0; x < g.w; ++x) m.set(x, y, g.at(x, y) != 0);
  return m;
}

inline oracle::Grid to_grid(const BinaryMask& m) {
  oracle::Grid g(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) g.at(x, y) = m.test(x, y) ? 1 : 0;
  return g;
}

inline std::filesystem::path scenes_dir() { return HEADCOUNT_SCENES_DIR; }

inline Json load_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

inline SceneSpec load_scene(const std::string& name) {
  return scene_from_json(load_json(scenes_dir() / name));
}

inline LinePair scene_lines(const std::string& name) {
  const auto j = load_json(scenes_dir() / name);
  return LinePair(j.at("lines").at("in_y").get<double>(), j.at("lines").at("out_y").get<double>());
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("headcount_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Drives a pipeline frame by frame and checks, after every frame, that
/// total == in + out and that no counter decreased.
class CheckedRun {
 public:
  explicit CheckedRun(PipelineConfig cfg) : pipeline_(std::move(cfg)) {}

  void feed(const Frame& frame) {
    const auto before = pipeline_.counters();
    const auto emitted = pipeline_.process_frame(frame);
    const auto& after = pipeline_.counters();
    EXPECT_EQ(after.total_count(), after.in_count() + after.out_count());
    EXPECT_GE(after.in_count(), before.in_count());
    EXPECT_GE(after.out_count(), before.out_count());
    EXPECT_EQ(after.total_count(), before.total_count() + emitted.size());
    for (const auto& e : emitted) EXPECT_EQ(e.frame, frame.index());
    ++frames_;
  }

  void feed_all(std::span<const Frame> frames) {
    for (const auto& f : frames) feed(f);
  }

  /// Renders and feeds the scene one frame at a time.
  void feed_scene(const SceneSpec& scene) {
    for (std::size_t i = 0; i < scene.frames; ++i) feed(render_frame(scene, i));
  }

  CountReport report(const std::optional<GroundTruth>& truth = std::nullopt) const {
    return pipeline_.report(truth);
  }

  Pipeline& pipeline() { return pipeline_; }
  std::size_t frames() const { return frames_; }

 private:
  Pipeline pipeline_;
  std::size_t frames_ = 0;
};

inline PipelineConfig config_for(const LinePair& lines) {
  PipelineConfig cfg;
  cfg.lines = lines;
  return cfg;
}

inline ActorSpec vertical_actor(double x, double y, double vy, std::size_t spawn,
                                std::size_t life, double radius = 10.0, int intensity = 200) {
  ActorSpec a;
  a.radius = radius;
  a.start = {x, y};
  a.velocity = {0.0, vy};
  a.spawn_frame = spawn;
  a.despawn_frame = spawn + life;
  a.intensity = intensity;
  return a;
}

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace testing_support
