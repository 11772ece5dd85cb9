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

// Running-average background model and mask cleanup.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "headcount/error.hpp"
#include "headcount/image.hpp"

namespace headcount {

struct BackgroundParams {
  double alpha = 0.02;
  double threshold = 25.0;
  std::size_t warmup = 30;
  int morph_radius = 1;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      fail(Errc::ConfigError, "alpha must be in (0,1), got " + std::to_string(alpha));
    if (!(threshold > 0.0 && threshold <= 255.0))
      fail(Errc::ConfigError, "threshold must be in (0,255], got " + std::to_string(threshold));
    if (morph_radius < 0) fail(Errc::ConfigError, "morph radius must be >= 0");
  }
};

/// Per-pixel exponential moving average of the scene. Foreground is not
/// masked out of the update.
class BackgroundModel {
 public:
  /// Copies `first` into the estimate.
  static BackgroundModel init(const Frame& first, double alpha, double threshold,
                              std::size_t warmup) {
    BackgroundParams p;
    p.alpha = alpha;
    p.threshold = threshold;
    p.warmup = warmup;
    return BackgroundModel(first, p);
  }

  BackgroundModel(const Frame& first, const BackgroundParams& params)
      : alpha_(params.alpha), threshold_(params.threshold), warmup_(params.warmup) {
    params.validate();
    std::vector<double> est(first.size());
    std::ranges::copy(first.values(), est.begin());
    estimate_ = Plane<double>(first.width(), first.height(), std::move(est));
  }

  int width() const noexcept { return estimate_.width(); }
  int height() const noexcept { return estimate_.height(); }
  double alpha() const noexcept { return alpha_; }
  double threshold() const noexcept { return threshold_; }
  std::size_t warmup() const noexcept { return warmup_; }
  const Plane<double>& estimate() const noexcept { return estimate_; }

  bool in_warmup(const Frame& frame) const noexcept { return frame.index() < warmup_; }

  /// estimate <- (1 - alpha) * estimate + alpha * frame, written as
  /// estimate + alpha * (frame - estimate) so equal inputs are an exact
  /// fixed point.
  void update(const Frame& frame) {
    check_shape(frame);
    auto est = estimate_.values();
    auto px = frame.values();
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double e = est[i];
      est[i] = std::clamp(e + alpha_ * (static_cast<double>(px[i]) - e), 0.0, 255.0);
    }
  }

  /// Foreground where |frame - estimate| > threshold. Computed during warmup
  /// too; the caller decides whether to use it.
  BinaryMask subtract(const Frame& frame) const {
    check_shape(frame);
    BinaryMask mask(frame.width(), frame.height());
    auto est = estimate_.values();
    auto px = frame.values();
    auto bits = mask.values();
    for (std::size_t i = 0; i < est.size(); ++i)
      bits[i] = std::abs(static_cast<double>(px[i]) - est[i]) > threshold_ ? 1 : 0;
    return mask;
  }

 private:
  void check_shape(const Frame& frame) const {
    if (!estimate_.same_shape(frame))
      fail(Errc::ShapeError, "frame " + std::to_string(frame.width()) + "x" +
                                 std::to_string(frame.height()) + " does not match model " +
                                 std::to_string(width()) + "x" + std::to_string(height()));
  }

  Plane<double> estimate_;
  double alpha_;
  double threshold_;
  std::size_t warmup_;
};

namespace detail {

// Square-window min (erode) or max (dilate), separable, window clipped to
// the image.
inline BinaryMask square_filter(const BinaryMask& in, int radius, bool take_min) {
  const int w = in.width();
  const int h = in.height();
  BinaryMask tmp(w, h);
  BinaryMask out(w, h);

  // Prefix counts turn each window query into O(1).
  std::vector<int> prefix(static_cast<std::size_t>(std::max(w, h)) + 1);
  auto window = [&](int lo, int hi, int n) {
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    const int ones = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
    return take_min ? ones == hi - lo + 1 : ones > 0;
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x)
      prefix[static_cast<std::size_t>(x) + 1] = prefix[static_cast<std::size_t>(x)] + in.test(x, y);
    for (int x = 0; x < w; ++x) tmp.set(x, y, window(x - radius, x + radius, w));
  }
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y)
      prefix[static_cast<std::size_t>(y) + 1] = prefix[static_cast<std::size_t>(y)] + tmp.test(x, y);
    for (int y = 0; y < h; ++y) out.set(x, y, window(y - radius, y + radius, h));
  }
  return out;
}

}  // namespace detail

inline BinaryMask erode(const BinaryMask& mask, int radius) {
  return detail::square_filter(mask, radius, true);
}

inline BinaryMask dilate(const BinaryMask& mask, int radius) {
  return detail::square_filter(mask, radius, false);
}

/// Erosion followed by dilation with a (2r+1)x(2r+1) square.
inline BinaryMask morph_open(const BinaryMask& mask, int radius) {
  if (radius < 1) fail(Errc::ConfigError, "opening radius must be >= 1");
  return dilate(erode(mask, radius), radius);
}

}  // namespace headcount
