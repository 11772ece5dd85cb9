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

// Deterministic scenes of moving disks with exact crossing ground truth.
//
// An actor is a filled disk that exists for frames [spawn_frame,
// despawn_frame) and sits at start + (frame - spawn_frame) * velocity.
// Every pixel, disk or background, gets independent uniform integer noise
// in [-noise_amplitude, noise_amplitude] drawn from a per-frame generator,
// so any single frame can be rendered on its own.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "headcount/error.hpp"
#include "headcount/image.hpp"
#include "headcount/line_counter.hpp"
#include "headcount/metrics.hpp"

namespace headcount {

struct ActorSpec {
  double radius = 10.0;
  Point2 start;
  Point2 velocity;
  std::size_t spawn_frame = 0;
  std::size_t despawn_frame = 0;
  int intensity = 200;

  bool alive_at(std::size_t frame) const noexcept {
    return frame >= spawn_frame && frame < despawn_frame;
  }

  Point2 position_at(std::size_t frame) const noexcept {
    const double t = static_cast<double>(frame) - static_cast<double>(spawn_frame);
    return {start.x + t * velocity.x, start.y + t * velocity.y};
  }
};

struct SceneSpec {
  int width = 320;
  int height = 240;
  std::size_t frames = 0;
  int background_intensity = 60;
  int noise_amplitude = 0;
  std::uint64_t seed = 0;
  std::vector<ActorSpec> actors;

  /// `min_contrast` is the subtraction threshold the scene must clear.
  void validate(double min_contrast = 25.0) const {
    if (frames == 0) fail(Errc::ConfigError, "scene needs at least one frame");
    if (width < kMinFrameEdge || height < kMinFrameEdge)
      fail(Errc::ConfigError, "scene must be at least 8x8");
    auto in_range = [](int v) { return v >= 0 && v <= 255; };
    if (!in_range(background_intensity)) fail(Errc::ConfigError, "background intensity not in [0,255]");
    if (noise_amplitude < 0 || noise_amplitude > 255)
      fail(Errc::ConfigError, "noise amplitude not in [0,255]");
    for (std::size_t i = 0; i < actors.size(); ++i) {
      const auto& a = actors[i];
      const auto tag = "actor " + std::to_string(i) + ": ";
      if (!(a.radius >= 2.0)) fail(Errc::ConfigError, tag + "radius must be >= 2");
      if (!in_range(a.intensity)) fail(Errc::ConfigError, tag + "intensity not in [0,255]");
      if (!(std::abs(a.intensity - background_intensity) > min_contrast))
        fail(Errc::ConfigError, tag + "intensity too close to background");
      if (a.despawn_frame < a.spawn_frame)
        fail(Errc::ConfigError, tag + "despawn_frame before spawn_frame");
    }
  }
};

/// Renders one frame of the scene. Disks are painted in actor order and
/// clipped at the borders.
inline Frame render_frame(const SceneSpec& spec, std::size_t index) {
  std::vector<std::uint8_t> base(static_cast<std::size_t>(spec.width) *
                                     static_cast<std::size_t>(spec.height),
                                 static_cast<std::uint8_t>(spec.background_intensity));
  Plane<std::uint8_t> plane(spec.width, spec.height, std::move(base));

  for (const auto& a : spec.actors) {
    if (!a.alive_at(index)) continue;
    const auto c = a.position_at(index);
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - a.radius)));
    const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(c.y + a.radius)));
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - a.radius)));
    const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(c.x + a.radius)));
    const double r2 = a.radius * a.radius;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - c.x;
        const double dy = y - c.y;
        if (dx * dx + dy * dy <= r2) plane(x, y) = static_cast<std::uint8_t>(a.intensity);
      }
  }

  if (spec.noise_amplitude > 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    const auto span = static_cast<std::uint64_t>(2 * spec.noise_amplitude + 1);
    for (auto& px : plane.values()) {
      const int noise = static_cast<int>(rng() % span) - spec.noise_amplitude;
      px = static_cast<std::uint8_t>(std::clamp(px + noise, 0, 255));
    }
  }
  return Frame(spec.width, spec.height,
               std::vector<std::uint8_t>(plane.values().begin(), plane.values().end()), index);
}

inline std::vector<Frame> render_scene(const SceneSpec& spec) {
  spec.validate();
  std::vector<Frame> frames;
  frames.reserve(spec.frames);
  for (std::size_t i = 0; i < spec.frames; ++i) frames.push_back(render_frame(spec, i));
  return frames;
}

/// Expected crossing of one actor; `actor` is its index in the spec.
struct ExpectedEvent {
  std::size_t frame = 0;
  std::size_t actor = 0;
  Direction direction = Direction::In;

  friend bool operator==(const ExpectedEvent&, const ExpectedEvent&) = default;
};

struct SceneTruth {
  GroundTruth truth;
  std::vector<ExpectedEvent> events;  // ordered by frame, then actor
};

/// Crossings in a per-frame zone string ('A', 'M', 'B'). Between-line
/// frames are dropped and repeated letters collapsed; every remaining
/// adjacent "AB" is an IN and every "BA" an OUT, reported at the frame
/// where the second run begins.
inline std::vector<std::pair<std::size_t, Direction>> scan_zone_string(const std::string& zones,
                                                                       std::size_t first_frame = 0) {
  std::vector<std::pair<char, std::size_t>> runs;
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const char z = zones[i];
    if (z == 'M') continue;
    if (runs.empty() || runs.back().first != z) runs.emplace_back(z, first_frame + i);
  }
  std::vector<std::pair<std::size_t, Direction>> out;
  for (std::size_t i = 1; i < runs.size(); ++i)
    out.emplace_back(runs[i].second, runs[i - 1].first == 'A' ? Direction::In : Direction::Out);
  return out;
}

/// Analytic ground truth: zone string of every actor's disk center over
/// its visible lifetime, scanned for full traversals.
inline SceneTruth ground_truth_events(const SceneSpec& spec, const LinePair& lines) {
  SceneTruth out;
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    const auto& a = spec.actors[i];
    const std::size_t end = std::min(a.despawn_frame, spec.frames);
    std::string zones;
    for (std::size_t f = a.spawn_frame; f < end; ++f) {
      const double y = a.position_at(f).y;
      zones.push_back(y < lines.line_in_y ? 'A' : (y > lines.line_out_y ? 'B' : 'M'));
    }
    for (auto [frame, dir] : scan_zone_string(zones, a.spawn_frame)) {
      out.events.push_back({frame, i, dir});
      (dir == Direction::In ? out.truth.true_in : out.truth.true_out) += 1;
    }
  }
  out.truth.true_total = out.truth.true_in + out.truth.true_out;
  std::ranges::sort(out.events, [](const ExpectedEvent& a, const ExpectedEvent& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.actor < b.actor;
  });
  return out;
}

inline Json to_json(const SceneSpec& s) {
  Json actors = Json::array();
  for (const auto& a : s.actors)
    actors.push_back(Json{{"radius", a.radius},
                          {"start", {a.start.x, a.start.y}},
                          {"velocity", {a.velocity.x, a.velocity.y}},
                          {"spawn_frame", a.spawn_frame},
                          {"despawn_frame", a.despawn_frame},
                          {"intensity", a.intensity}});
  return Json{{"width", s.width},
              {"height", s.height},
              {"frames", s.frames},
              {"background_intensity", s.background_intensity},
              {"noise_amplitude", s.noise_amplitude},
              {"seed", s.seed},
              {"actors", std::move(actors)}};
}

namespace detail {

inline Point2 point_from_json(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(Errc::ConfigError, std::string("'") + key + "' must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline int require_int(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer()) fail(Errc::ConfigError, std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace detail

inline SceneSpec scene_from_json(const Json& j) {
  using namespace detail;
  if (!j.is_object()) fail(Errc::ConfigError, "scene spec must be a JSON object");
  SceneSpec s;
  s.width = require_int(j, "width");
  s.height = require_int(j, "height");
  s.frames = require_count(j, "frames");
  s.background_intensity = require_int(j, "background_intensity");
  s.noise_amplitude = j.contains("noise_amplitude") ? require_int(j, "noise_amplitude") : 0;
  s.seed = j.contains("seed") ? require_count(j, "seed") : 0;
  const auto& actors = require(j, "actors");
  if (!actors.is_array()) fail(Errc::ConfigError, "'actors' must be an array");
  for (const auto& aj : actors) {
    ActorSpec a;
    a.radius = require_number(aj, "radius");
    a.start = point_from_json(aj, "start");
    a.velocity = point_from_json(aj, "velocity");
    a.spawn_frame = require_count(aj, "spawn_frame");
    a.despawn_frame = require_count(aj, "despawn_frame");
    a.intensity = require_int(aj, "intensity");
    s.actors.push_back(a);
  }
  return s;
}

}  // namespace headcount
