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

// Per-frame dataflow: subtract -> open -> detect -> track -> count.
//
// Stages are strictly feed-forward. The first frame seeds the background;
// frames with index < warmup only update the background. Memory is one
// background estimate plus the live tracks; no frames are buffered.

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "headcount/background.hpp"
#include "headcount/blobs.hpp"
#include "headcount/error.hpp"
#include "headcount/image.hpp"
#include "headcount/line_counter.hpp"
#include "headcount/metrics.hpp"
#include "headcount/tracker.hpp"

namespace headcount {

struct PipelineConfig {
  BackgroundParams background;
  BlobFilterParams blob;
  Connectivity connectivity = Connectivity::Eight;
  TrackerConfig tracker;
  /// Unset means rows height/3 and 2*height/3.
  std::optional<LinePair> lines;
  bool invert_direction = false;

  void validate() const {
    background.validate();
    blob.validate();
    tracker.validate();
    if (lines && !(lines->line_in_y < lines->line_out_y))
      fail(Errc::ConfigError, "line_in_y must be < line_out_y");
  }

  /// Copy with every frame-dependent default filled in.
  PipelineConfig resolved(int width, int height) const {
    PipelineConfig c = *this;
    if (!c.lines) c.lines = LinePair(height / 3.0, 2.0 * height / 3.0);
    if (!c.blob.max_area) c.blob.max_area = blob.effective_max_area(width, height);
    if (c.lines->line_in_y < 0.0 || c.lines->line_out_y > height - 1.0)
      fail(Errc::ConfigError, "lines must lie within the frame height " + std::to_string(height));
    return c;
  }
};

inline Json to_json(const PipelineConfig& c) {
  Json j;
  j["background"] = Json{{"alpha", c.background.alpha},
                         {"threshold", c.background.threshold},
                         {"warmup", c.background.warmup},
                         {"morph_radius", c.background.morph_radius}};
  Json blob{{"min_area", c.blob.min_area}};
  blob["max_area"] = c.blob.max_area ? Json(*c.blob.max_area) : Json(nullptr);
  blob["min_circularity"] = c.blob.min_circularity;
  blob["min_convexity"] = c.blob.min_convexity;
  blob["min_inertia_ratio"] = c.blob.min_inertia_ratio;
  blob["connectivity"] = static_cast<int>(c.connectivity);
  j["blob"] = std::move(blob);
  j["tracker"] = Json{{"max_match_distance", c.tracker.max_match_distance},
                      {"max_missed", c.tracker.max_missed}};
  j["lines"] = c.lines ? Json{{"in_y", c.lines->line_in_y}, {"out_y", c.lines->line_out_y}}
                       : Json(nullptr);
  j["invert_direction"] = c.invert_direction;
  return j;
}

namespace detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(Errc::ConfigError, "unknown config key '" + where + key + "'");
  }
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if constexpr (std::same_as<T, bool>) {
    if (!v.is_boolean()) fail(Errc::ConfigError, std::string("'") + key + "' must be a boolean");
    out = v.get<bool>();
  } else if constexpr (std::floating_point<T>) {
    if (!v.is_number()) fail(Errc::ConfigError, std::string("'") + key + "' must be a number");
    out = v.get<T>();
  } else {
    if (!v.is_number_integer())
      fail(Errc::ConfigError, std::string("'") + key + "' must be an integer");
    if constexpr (std::unsigned_integral<T>)
      if (v.get<long long>() < 0)
        fail(Errc::ConfigError, std::string("'") + key + "' must be non-negative");
    out = v.get<T>();
  }
}

}  // namespace detail

/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
inline PipelineConfig pipeline_config_from_json(const Json& j, PipelineConfig base = {}) {
  using detail::read_if;
  if (!j.is_object()) fail(Errc::ConfigError, "config must be a JSON object");
  detail::reject_unknown(j, {"background", "blob", "tracker", "lines", "invert_direction"}, "");

  auto section = [&](const char* name) -> const Json* {
    if (!j.contains(name)) return nullptr;
    if (!j.at(name).is_object()) fail(Errc::ConfigError, std::string("'") + name + "' must be an object");
    return &j.at(name);
  };

  if (const auto* b = section("background")) {
    detail::reject_unknown(*b, {"alpha", "threshold", "warmup", "morph_radius"}, "background.");
    read_if(*b, "alpha", base.background.alpha);
    read_if(*b, "threshold", base.background.threshold);
    read_if(*b, "warmup", base.background.warmup);
    read_if(*b, "morph_radius", base.background.morph_radius);
  }
  if (const auto* b = section("blob")) {
    detail::reject_unknown(*b, {"min_area", "max_area", "min_circularity", "min_convexity",
                                "min_inertia_ratio", "connectivity"},
                           "blob.");
    read_if(*b, "min_area", base.blob.min_area);
    if (b->contains("max_area")) {
      if (b->at("max_area").is_null()) {
        base.blob.max_area.reset();
      } else {
        std::size_t m = 0;
        read_if(*b, "max_area", m);
        base.blob.max_area = m;
      }
    }
    read_if(*b, "min_circularity", base.blob.min_circularity);
    read_if(*b, "min_convexity", base.blob.min_convexity);
    read_if(*b, "min_inertia_ratio", base.blob.min_inertia_ratio);
    int conn = static_cast<int>(base.connectivity);
    read_if(*b, "connectivity", conn);
    base.connectivity = connectivity_from_int(conn);
  }
  if (const auto* t = section("tracker")) {
    detail::reject_unknown(*t, {"max_match_distance", "max_missed"}, "tracker.");
    read_if(*t, "max_match_distance", base.tracker.max_match_distance);
    read_if(*t, "max_missed", base.tracker.max_missed);
  }
  if (j.contains("lines") && !j.at("lines").is_null()) {
    const auto& l = j.at("lines");
    if (!l.is_object()) fail(Errc::ConfigError, "'lines' must be {\"in_y\":..,\"out_y\":..}");
    detail::reject_unknown(l, {"in_y", "out_y"}, "lines.");
    base.lines = LinePair(detail::require_number(l, "in_y"), detail::require_number(l, "out_y"));
  } else if (j.contains("lines")) {
    base.lines.reset();
  }
  read_if(j, "invert_direction", base.invert_direction);
  base.validate();
  return base;
}

/// One stream's worth of counting state.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config) : config_(std::move(config)), tracker_(config_.tracker) {
    config_.validate();
  }

  /// Effective configuration; frame-dependent defaults are filled in once
  /// the first frame has been seen.
  const PipelineConfig& config() const noexcept { return config_; }
  const std::optional<BackgroundModel>& background() const noexcept { return model_; }
  const Tracker& tracker() const noexcept { return tracker_; }
  const std::vector<BlobKeypoint>& last_keypoints() const noexcept { return keypoints_; }
  std::size_t frames_seen() const noexcept { return frames_seen_; }

  const Counters& counters() const noexcept {
    static const Counters empty;
    return counter_ ? counter_->counters() : empty;
  }
  std::span<const CrossEvent> events() const noexcept {
    return counter_ ? std::span<const CrossEvent>(counter_->events()) : std::span<const CrossEvent>();
  }

  /// Runs one frame through every stage and returns the crossings it
  /// completed.
  std::vector<CrossEvent> process_frame(const Frame& frame) {
    keypoints_.clear();
    if (!model_) {
      start(frame);
    } else {
      if (!model_->estimate().same_shape(frame))
        fail(Errc::ShapeError, "frame " + std::to_string(frame.index()) + " changes geometry");
      if (frame.index() <= last_index_)
        fail(Errc::OrderError, "frame index " + std::to_string(frame.index()) +
                                   " not after " + std::to_string(last_index_));
    }
    last_index_ = frame.index();
    ++frames_seen_;

    if (model_->in_warmup(frame)) {
      model_->update(frame);
      return {};
    }

    auto mask = model_->subtract(frame);
    model_->update(frame);
    if (config_.background.morph_radius > 0) mask = morph_open(mask, config_.background.morph_radius);
    keypoints_ = detect_blobs(mask, config_.blob, config_.connectivity);
    const auto step = tracker_.step(keypoints_, frame.index());

    std::vector<CrossEvent> emitted;
    for (auto id : step.observed) {
      Track* track = tracker_.find(id);
      if (auto e = counter_->observe(track->zone_state, track->last_centroid(), frame.index(), id))
        emitted.push_back(*e);
    }
    return emitted;
  }

  CountReport report(const std::optional<GroundTruth>& truth = std::nullopt) const {
    return build_report(counters(), {events().begin(), events().end()}, truth, to_json(config_));
  }

 private:
  void start(const Frame& first) {
    if (first.width() < kMinFrameEdge || first.height() < kMinFrameEdge)
      fail(Errc::ShapeError, "frames must be at least 8x8");
    config_ = config_.resolved(first.width(), first.height());
    model_.emplace(first, config_.background);
    counter_.emplace(*config_.lines, config_.invert_direction);
  }

  PipelineConfig config_;
  std::optional<BackgroundModel> model_;
  Tracker tracker_;
  std::optional<LineCounter> counter_;
  std::vector<BlobKeypoint> keypoints_;
  std::size_t last_index_ = 0;
  std::size_t frames_seen_ = 0;
};

template <typename S>
concept FrameSource = requires(S s) {
  { s.next() } -> std::same_as<std::optional<Frame>>;
};

/// Folds the pipeline over every frame of `source` and reports.
template <FrameSource Source>
CountReport run(Source& source, const PipelineConfig& config,
                const std::optional<GroundTruth>& truth = std::nullopt) {
  Pipeline pipeline(config);
  while (auto frame = source.next()) pipeline.process_frame(*frame);
  if (pipeline.frames_seen() == 0) fail(Errc::EmptySequence, "empty sequence");
  return pipeline.report(truth);
}

inline CountReport run(std::span<const Frame> frames, const PipelineConfig& config,
                       const std::optional<GroundTruth>& truth = std::nullopt) {
  if (frames.empty()) fail(Errc::EmptySequence, "empty sequence");
  Pipeline pipeline(config);
  for (const auto& f : frames) pipeline.process_frame(f);
  return pipeline.report(truth);
}

}  // namespace headcount
