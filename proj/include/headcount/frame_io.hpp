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

// Binary PGM (P5, maxval 255) frames, frame sequences and debug overlays.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "headcount/blobs.hpp"
#include "headcount/error.hpp"
#include "headcount/image.hpp"
#include "headcount/line_counter.hpp"

namespace headcount {

namespace fs = std::filesystem;

namespace detail {

inline void skip_pgm_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (c != std::char_traits<char>::eof() && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline long read_pgm_int(std::istream& in, const char* what) {
  skip_pgm_space(in);
  long v = 0;
  int digits = 0;
  while (std::isdigit(in.peek())) {
    v = v * 10 + (in.get() - '0');
    if (++digits > 9) fail(Errc::ParseError, std::string("PGM ") + what + " too large");
  }
  if (digits == 0) fail(Errc::ParseError, std::string("PGM header: missing ") + what);
  return v;
}

}  // namespace detail

inline Frame read_pgm(std::istream& in, std::size_t index = 0) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5')
    fail(Errc::ParseError, "not a binary PGM (expected magic P5)");
  const long width = detail::read_pgm_int(in, "width");
  const long height = detail::read_pgm_int(in, "height");
  const long maxval = detail::read_pgm_int(in, "maxval");
  if (width <= 0 || height <= 0) fail(Errc::ParseError, "PGM dimensions must be positive");
  if (maxval != 255)
    fail(Errc::UnsupportedFormat, "PGM maxval " + std::to_string(maxval) + " (only 255)");
  if (!std::isspace(in.get())) fail(Errc::ParseError, "PGM header not terminated by whitespace");

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size())
    fail(Errc::ParseError, "PGM pixel data shorter than header promises");
  return Frame(static_cast<int>(width), static_cast<int>(height), std::move(pixels), index);
}

inline void write_pgm(std::ostream& out, const Plane<std::uint8_t>& image) {
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  auto px = image.values();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

inline Frame load_frame(const fs::path& path, std::size_t index = 0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  try {
    return read_pgm(in, index);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()));
  }
}

inline void write_frame(const fs::path& path, const Plane<std::uint8_t>& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  write_pgm(out, image);
  out.flush();
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

struct SequenceSpec {
  fs::path source;
  /// Required for raw files; ignored for PGM directories.
  int width = 0;
  int height = 0;
  double fps = 25.0;
};

/// Ordered, single-pass frame stream over a directory of numbered PGM files
/// or a headerless raw file of concatenated frames.
class FrameSequence {
 public:
  static FrameSequence open(const SequenceSpec& spec) {
    FrameSequence seq;
    seq.spec_ = spec;
    std::error_code ec;
    if (fs::is_directory(spec.source, ec)) {
      seq.files_ = list_pgm_files(spec.source);
      if (seq.files_.empty())
        fail(Errc::EmptySequence, "no PGM frames in " + spec.source.string());
    } else if (fs::is_regular_file(spec.source, ec)) {
      seq.open_raw();
    } else {
      fail(Errc::IoError, "input not found: " + spec.source.string());
    }
    return seq;
  }

  const SequenceSpec& spec() const noexcept { return spec_; }
  bool raw() const noexcept { return raw_.has_value(); }

  /// Total frames in the sequence.
  std::size_t size() const noexcept { return raw_ ? raw_frames_ : files_.size(); }

  std::optional<Frame> next() {
    if (next_index_ >= size()) return std::nullopt;
    const std::size_t index = next_index_++;
    if (!raw_) return load_frame(files_[index], index);

    std::vector<std::uint8_t> pixels(frame_bytes());
    raw_->read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (static_cast<std::size_t>(raw_->gcount()) != pixels.size())
      fail(Errc::TruncatedStream, "raw stream ended inside frame " + std::to_string(index));
    return Frame(spec_.width, spec_.height, std::move(pixels), index);
  }

  /// Sorted by numeric file stem (zero-padded names), then by name.
  static std::vector<fs::path> list_pgm_files(const fs::path& dir) {
    struct Entry {
      bool numeric;
      unsigned long long number;
      fs::path path;
    };
    std::vector<Entry> entries;
    for (const auto& de : fs::directory_iterator(dir)) {
      if (!de.is_regular_file()) continue;
      auto ext = de.path().extension().string();
      std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext != ".pgm") continue;
      const auto stem = de.path().stem().string();
      const bool numeric = !stem.empty() && stem.size() < 19 &&
                           std::ranges::all_of(stem, [](unsigned char c) { return std::isdigit(c); });
      entries.push_back({numeric, numeric ? std::stoull(stem) : 0ULL, de.path()});
    }
    std::ranges::sort(entries, [](const Entry& a, const Entry& b) {
      if (a.numeric != b.numeric) return a.numeric;
      if (a.number != b.number) return a.number < b.number;
      return a.path.filename() < b.path.filename();
    });
    std::vector<fs::path> out;
    out.reserve(entries.size());
    for (auto& e : entries) out.push_back(std::move(e.path));
    return out;
  }

 private:
  std::size_t frame_bytes() const noexcept {
    return static_cast<std::size_t>(spec_.width) * static_cast<std::size_t>(spec_.height);
  }

  void open_raw() {
    if (spec_.width <= 0 || spec_.height <= 0)
      fail(Errc::ConfigError, "raw input needs frame geometry (WxH)");
    const auto bytes = fs::file_size(spec_.source);
    if (bytes == 0) fail(Errc::EmptySequence, "raw file is empty: " + spec_.source.string());
    if (bytes % frame_bytes() != 0)
      fail(Errc::TruncatedStream, "raw file size " + std::to_string(bytes) +
                                      " is not a multiple of " + std::to_string(frame_bytes()));
    raw_frames_ = bytes / frame_bytes();
    raw_.emplace(spec_.source, std::ios::binary);
    if (!*raw_) fail(Errc::IoError, "cannot open " + spec_.source.string());
  }

  SequenceSpec spec_;
  std::vector<fs::path> files_;
  std::optional<std::ifstream> raw_;
  std::size_t raw_frames_ = 0;
  std::size_t next_index_ = 0;
};

/// Offsets of a midpoint-circle ring of integer radius around the origin.
inline std::vector<std::pair<int, int>> circle_offsets(int radius) {
  std::vector<std::pair<int, int>> pts;
  if (radius <= 0) {
    pts.emplace_back(0, 0);
    return pts;
  }
  int x = radius;
  int y = 0;
  int err = 1 - radius;
  while (x >= y) {
    for (auto [px, py] : {std::pair{x, y}, {y, x}, {-y, x}, {-x, y}, {-x, -y}, {-y, -x},
                          {y, -x}, {x, -y}})
      pts.emplace_back(px, py);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
  std::ranges::sort(pts);
  auto dup = std::ranges::unique(pts);
  pts.erase(dup.begin(), dup.end());
  return pts;
}

inline constexpr std::uint8_t kOverlayIntensity = 255;

/// Copy of `frame` with both counting lines and a ring of diameter s per
/// keypoint burned in at full intensity.
inline Frame annotate(const Frame& frame, std::span<const BlobKeypoint> keypoints,
                      const LinePair& lines) {
  Frame out = frame;
  for (double line_y : {lines.line_in_y, lines.line_out_y}) {
    const int row = static_cast<int>(std::lround(line_y));
    if (row < 0 || row >= frame.height())
      fail(Errc::PreconditionViolation, "line y=" + std::to_string(line_y) + " outside frame");
    std::ranges::fill(out.row(row), kOverlayIntensity);
  }
  for (const auto& kp : keypoints) {
    const int cx = static_cast<int>(std::lround(kp.centroid.x));
    const int cy = static_cast<int>(std::lround(kp.centroid.y));
    if (!std::isfinite(kp.centroid.x) || !std::isfinite(kp.centroid.y) || !frame.contains(cx, cy))
      fail(Errc::PreconditionViolation, "keypoint centroid outside frame");
    const int radius = static_cast<int>(std::lround(kp.diameter_s / 2.0));
    for (auto [dx, dy] : circle_offsets(radius))
      if (out.contains(cx + dx, cy + dy)) out(cx + dx, cy + dy) = kOverlayIntensity;
  }
  return out;
}

inline void write_annotated(const Frame& frame, std::span<const BlobKeypoint> keypoints,
                            const LinePair& lines, const fs::path& path) {
  write_frame(path, annotate(frame, keypoints, lines));
}

}  // namespace headcount
