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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "headcount/error.hpp"

namespace headcount {

/// Minimum frame edge the pipeline accepts.
inline constexpr int kMinFrameEdge = 8;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Dense row-major 2D grid.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;

  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0)
      fail(Errc::ShapeError, "negative plane size");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Plane(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      fail(Errc::ShapeError, "pixel buffer does not match " + std::to_string(width) + "x" +
                                 std::to_string(height));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) noexcept { return data_[offset(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[offset(x, y)]; }

  std::span<T> row(int y) noexcept {
    return {data_.data() + offset(0, y), static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + offset(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Plane<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// 8-bit grayscale image with its position in the stream.
class Frame : public Plane<std::uint8_t> {
 public:
  Frame() = default;
  Frame(int width, int height, std::uint8_t fill = 0, std::size_t index = 0)
      : Plane(width, height, fill), index_(index) {}
  Frame(int width, int height, std::vector<std::uint8_t> pixels, std::size_t index = 0)
      : Plane(width, height, std::move(pixels)), index_(index) {}

  std::size_t index() const noexcept { return index_; }
  void set_index(std::size_t index) noexcept { index_ = index; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index_ = 0;
};

/// Foreground map; a nonzero byte marks a foreground pixel.
class BinaryMask : public Plane<std::uint8_t> {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height) : Plane(width, height, 0) {}

  bool test(int x, int y) const noexcept { return (*this)(x, y) != 0; }
  void set(int x, int y, bool on = true) noexcept { (*this)(x, y) = on ? 1 : 0; }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : values()) n += v != 0;
    return n;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

}  // namespace headcount
