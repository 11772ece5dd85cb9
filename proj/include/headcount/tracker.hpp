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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "headcount/blobs.hpp"
#include "headcount/error.hpp"
#include "headcount/image.hpp"
#include "headcount/line_counter.hpp"

namespace headcount {

struct TrackerConfig {
  double max_match_distance = 50.0;
  std::size_t max_missed = 5;

  void validate() const {
    if (!(max_match_distance > 0.0)) fail(Errc::ConfigError, "max_match_distance must be > 0");
  }
};

struct TrackPoint {
  std::size_t frame = 0;
  Point2 centroid;
};

struct Track {
  std::uint64_t id = 0;
  std::vector<TrackPoint> history;
  std::size_t missed = 0;
  LineZoneState zone_state;
  bool alive = true;

  Point2 last_centroid() const noexcept { return history.back().centroid; }
  std::size_t last_frame() const noexcept { return history.back().frame; }
};

/// Index pairs into the track and keypoint lists.
struct Match {
  std::size_t track = 0;
  std::size_t keypoint = 0;
  double distance = 0.0;
};

struct Assignment {
  std::vector<Match> matches;
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_keypoints;
};

/// Greedy globally-nearest matching: take the closest remaining
/// (track, keypoint) pair within the gate, drop both, repeat. Ties go to the
/// lower track id, then the earlier keypoint.
inline Assignment associate(std::span<const Track> tracks,
                            std::span<const BlobKeypoint> keypoints, const TrackerConfig& cfg) {
  struct Candidate {
    double d2;
    std::uint64_t track_id;
    std::size_t track;
    std::size_t keypoint;
  };
  const double gate2 = cfg.max_match_distance * cfg.max_match_distance;
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    const auto p = tracks[t].last_centroid();
    for (std::size_t k = 0; k < keypoints.size(); ++k) {
      const double dx = keypoints[k].centroid.x - p.x;
      const double dy = keypoints[k].centroid.y - p.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= gate2) candidates.push_back({d2, tracks[t].id, t, k});
    }
  }
  std::ranges::sort(candidates, [](const Candidate& a, const Candidate& b) {
    return std::tie(a.d2, a.track_id, a.keypoint) < std::tie(b.d2, b.track_id, b.keypoint);
  });

  Assignment out;
  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> keypoint_used(keypoints.size(), false);
  for (const auto& c : candidates) {
    if (track_used[c.track] || keypoint_used[c.keypoint]) continue;
    track_used[c.track] = keypoint_used[c.keypoint] = true;
    out.matches.push_back({c.track, c.keypoint, std::sqrt(c.d2)});
  }
  for (std::size_t t = 0; t < tracks.size(); ++t)
    if (!track_used[t]) out.unmatched_tracks.push_back(t);
  for (std::size_t k = 0; k < keypoints.size(); ++k)
    if (!keypoint_used[k]) out.unmatched_keypoints.push_back(k);
  return out;
}

struct StepResult {
  std::vector<std::uint64_t> spawned;
  std::vector<std::uint64_t> expired;
  /// Ids of tracks that received a keypoint this frame (matched or new).
  std::vector<std::uint64_t> observed;
};

/// Owns the live tracks of one stream.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  const TrackerConfig& config() const noexcept { return cfg_; }
  const std::vector<Track>& tracks() const noexcept { return tracks_; }
  std::vector<Track>& tracks() noexcept { return tracks_; }
  std::uint64_t next_id() const noexcept { return next_id_; }

  Track* find(std::uint64_t id) noexcept {
    auto it = std::ranges::find(tracks_, id, &Track::id);
    return it == tracks_.end() ? nullptr : &*it;
  }

  StepResult step(std::span<const BlobKeypoint> keypoints, std::size_t frame_index) {
    if (last_frame_ && frame_index <= *last_frame_)
      fail(Errc::OrderError, "frame " + std::to_string(frame_index) + " not after " +
                                 std::to_string(*last_frame_));
    last_frame_ = frame_index;

    const auto assignment = associate(tracks_, keypoints, cfg_);
    StepResult result;

    for (const auto& m : assignment.matches) {
      auto& t = tracks_[m.track];
      t.history.push_back({frame_index, keypoints[m.keypoint].centroid});
      t.missed = 0;
      result.observed.push_back(t.id);
    }
    for (auto t : assignment.unmatched_tracks) {
      auto& track = tracks_[t];
      if (++track.missed > cfg_.max_missed) {
        track.alive = false;
        result.expired.push_back(track.id);
      }
    }
    std::erase_if(tracks_, [](const Track& t) { return !t.alive; });

    for (auto k : assignment.unmatched_keypoints) {
      Track t;
      t.id = next_id_++;
      t.history.push_back({frame_index, keypoints[k].centroid});
      tracks_.push_back(std::move(t));
      result.spawned.push_back(tracks_.back().id);
      result.observed.push_back(tracks_.back().id);
    }
    std::ranges::sort(result.observed);
    return result;
  }

 private:
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  std::uint64_t next_id_ = 1;
  std::optional<std::size_t> last_frame_;
};

}  // namespace headcount
