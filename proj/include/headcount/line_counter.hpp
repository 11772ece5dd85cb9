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

// Two-line traversal counting.
//
// The lines split the image into three horizontal bands: zone A above the IN
// line, zone M between the lines (both boundary rows included), zone B below
// the OUT line. A track is counted once per full traversal A -> B (IN) or
// B -> A (OUT); wandering across a single line never counts.

#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "headcount/error.hpp"
#include "headcount/image.hpp"

namespace headcount {

enum class Zone : std::uint8_t { A, M, B };
enum class Direction : std::uint8_t { In, Out };

constexpr char to_char(Zone z) noexcept {
  return z == Zone::A ? 'A' : z == Zone::M ? 'M' : 'B';
}

constexpr std::string_view to_string(Direction d) noexcept {
  return d == Direction::In ? "IN" : "OUT";
}

inline Direction parse_direction(std::string_view text) {
  if (text == "IN") return Direction::In;
  if (text == "OUT") return Direction::Out;
  fail(Errc::ParseError, "direction must be IN or OUT, got '" + std::string(text) + "'");
}

struct LinePair {
  double line_in_y = 0.0;
  double line_out_y = 0.0;

  LinePair() = default;
  LinePair(double in_y, double out_y) : line_in_y(in_y), line_out_y(out_y) {
    if (!(in_y < out_y))
      fail(Errc::ConfigError, "IN line must lie above OUT line (line_in_y < line_out_y)");
  }

  friend bool operator==(const LinePair&, const LinePair&) = default;
};

struct LineZoneState {
  /// Last outer zone (A or B) the track was anchored in; unset until the
  /// first classified position.
  std::optional<Zone> origin_zone;
  Zone current_zone = Zone::M;

  friend bool operator==(const LineZoneState&, const LineZoneState&) = default;
};

struct CrossEvent {
  std::size_t frame = 0;
  std::uint64_t track_id = 0;
  Direction direction = Direction::In;

  friend bool operator==(const CrossEvent&, const CrossEvent&) = default;
};

/// IN/OUT/total tallies. Only grows; total is kept equal to in + out.
class Counters {
 public:
  Counters() = default;
  Counters(std::uint64_t in, std::uint64_t out) : in_(in), out_(out), total_(in + out) {}

  std::uint64_t in_count() const noexcept { return in_; }
  std::uint64_t out_count() const noexcept { return out_; }
  std::uint64_t total_count() const noexcept { return total_; }

  void add(Direction d) noexcept {
    (d == Direction::In ? in_ : out_) += 1;
    total_ += 1;
    assert(total_ == in_ + out_);
  }

  friend bool operator==(const Counters&, const Counters&) = default;

 private:
  std::uint64_t in_ = 0;
  std::uint64_t out_ = 0;
  std::uint64_t total_ = 0;
};

inline Zone classify_zone(Point2 centroid, const LinePair& lines) noexcept {
  if (centroid.y < lines.line_in_y) return Zone::A;
  if (centroid.y > lines.line_out_y) return Zone::B;
  return Zone::M;
}

/// Feeds one observed position of a track into its zone state. Returns the
/// crossing completed by this position, if any. `invert` swaps which
/// traversal counts as IN.
inline std::optional<CrossEvent> advance(LineZoneState& state, Point2 centroid,
                                         const LinePair& lines, std::size_t frame,
                                         std::uint64_t track_id, bool invert = false) {
  const Zone zone = classify_zone(centroid, lines);
  state.current_zone = zone;
  if (zone == Zone::M) {
    // A track first seen between the lines stays unanchored until it
    // reaches an outer zone.
    if (!state.origin_zone) state.origin_zone = Zone::M;
    return std::nullopt;
  }
  const auto origin = state.origin_zone;
  state.origin_zone = zone;
  if (!origin || *origin == Zone::M || *origin == zone) return std::nullopt;

  Direction d = (*origin == Zone::A) ? Direction::In : Direction::Out;
  if (invert) d = (d == Direction::In) ? Direction::Out : Direction::In;
  return CrossEvent{frame, track_id, d};
}

inline Counters apply_event(Counters counters, const CrossEvent& event) noexcept {
  counters.add(event.direction);
  return counters;
}

/// Counting state for one stream: line geometry, tallies and the event log.
class LineCounter {
 public:
  explicit LineCounter(LinePair lines, bool invert_direction = false)
      : lines_(lines), invert_(invert_direction) {}

  const LinePair& lines() const noexcept { return lines_; }
  bool inverted() const noexcept { return invert_; }
  const Counters& counters() const noexcept { return counters_; }
  const std::vector<CrossEvent>& events() const noexcept { return events_; }

  std::optional<CrossEvent> observe(LineZoneState& state, Point2 centroid, std::size_t frame,
                                    std::uint64_t track_id) {
    auto event = advance(state, centroid, lines_, frame, track_id, invert_);
    if (event) {
      counters_ = apply_event(counters_, *event);
      events_.push_back(*event);
    }
    return event;
  }

 private:
  LinePair lines_;
  bool invert_;
  Counters counters_;
  std::vector<CrossEvent> events_;
};

}  // namespace headcount
