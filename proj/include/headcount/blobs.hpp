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

// Connected-component labeling, per-blob geometry and shape filtering.
//
// Shape metrics follow the usual blob-detector conventions:
//   circularity   = 4*pi*area / perimeter^2
//   convexity     = area / hull_area
//   inertia ratio = lambda_min / lambda_max of the central second moments
//
// Perimeter is a Crofton estimate from boundary transitions in four
// directions (horizontal, vertical, both diagonals), which keeps digital
// disks near circularity 1. The hull is taken over pixel edge midpoints
// (x +- 1/2, y) and (x, y +- 1/2), so a filled rectangle has convexity just
// above 1 and digital disks stay above 0.9.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "headcount/error.hpp"
#include "headcount/image.hpp"

namespace headcount {

enum class Connectivity : int { Four = 4, Eight = 8 };

inline Connectivity connectivity_from_int(int n) {
  if (n == 4) return Connectivity::Four;
  if (n == 8) return Connectivity::Eight;
  fail(Errc::ConfigError, "connectivity must be 4 or 8, got " + std::to_string(n));
}

/// Label image: 0 is background, components are numbered 1..count in the
/// raster order of their first pixel.
struct ComponentLabels {
  Plane<std::int32_t> labels;
  std::int32_t count = 0;

  int width() const noexcept { return labels.width(); }
  int height() const noexcept { return labels.height(); }
};

namespace detail {

class DisjointSets {
 public:
  std::int32_t make() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    return parent_.back();
  }

  std::int32_t find(std::int32_t v) {
    std::int32_t root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
      const auto next = parent_[v];
      parent_[v] = root;
      v = next;
    }
    return root;
  }

  // The smaller root wins so a component's root is its earliest provisional
  // label.
  void join(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::int32_t> parent_;
};

}  // namespace detail

/// Two-pass union-find labeling.
inline ComponentLabels label_components(const BinaryMask& mask,
                                        Connectivity connectivity = Connectivity::Eight) {
  const int w = mask.width();
  const int h = mask.height();
  ComponentLabels out{Plane<std::int32_t>(w, h, 0), 0};
  auto& lab = out.labels;
  const bool eight = connectivity == Connectivity::Eight;

  detail::DisjointSets sets;
  sets.make();  // slot 0 is background

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.test(x, y)) continue;
      std::int32_t current = 0;
      auto merge = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w) return;
        const auto l = lab(nx, ny);
        if (l == 0) return;
        if (current == 0)
          current = l;
        else
          sets.join(current, l);
      };
      merge(x - 1, y);
      merge(x, y - 1);
      if (eight) {
        merge(x - 1, y - 1);
        merge(x + 1, y - 1);
      }
      lab(x, y) = current != 0 ? current : sets.make();
    }
  }

  // Second pass: compact ids in order of first encounter.
  std::vector<std::int32_t> remap(sets.size(), 0);
  for (auto& l : lab.values()) {
    if (l == 0) continue;
    const auto root = sets.find(l);
    if (remap[root] == 0) remap[root] = ++out.count;
    l = remap[root];
  }
  return out;
}

struct SecondMoments {
  double mxx = 0.0;
  double myy = 0.0;
  double mxy = 0.0;
};

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;
};

struct BlobMeasurements {
  std::size_t area = 0;
  double perimeter = 0.0;
  Point2 centroid;
  /// Convex hull of pixel edge midpoints.
  double hull_area = 0.0;
  /// Convex hull of pixel centers; zero iff the pixels are collinear.
  double center_hull_area = 0.0;
  /// Central moments normalised by area (pixel^2).
  SecondMoments moments;
  BoundingBox bbox;
};

namespace detail {

struct HullPoint {
  double x;
  double y;
};

inline double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Area of the convex hull (Andrew's monotone chain + shoelace).
inline double convex_hull_area(std::vector<HullPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const HullPoint& a, const HullPoint& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) return 0.0;

  std::vector<HullPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);

  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

struct RowSpan {
  int y;
  int x_left;
  int x_right;
};

// Sums are taken relative to each component's first pixel so that every
// shape quantity is bit-identical under integer translation.
struct ComponentAccumulator {
  bool seen = false;
  int origin_x = 0;
  int origin_y = 0;
  std::int64_t n = 0;
  std::int64_t sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::int64_t trans_axis = 0;      // horizontal + vertical transitions
  std::int64_t trans_diagonal = 0;  // both diagonal directions
  BoundingBox bbox;
  std::vector<RowSpan> rows;

  void add(int x, int y) {
    if (!seen) {
      seen = true;
      origin_x = x;
      origin_y = y;
      bbox = {x, y, x, y};
    }
    const std::int64_t dx = x - origin_x;
    const std::int64_t dy = y - origin_y;
    ++n;
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    bbox.min_x = std::min(bbox.min_x, x);
    bbox.max_x = std::max(bbox.max_x, x);
    bbox.max_y = std::max(bbox.max_y, y);
    if (rows.empty() || rows.back().y != y)
      rows.push_back({y, x, x});
    else
      rows.back().x_right = std::max(rows.back().x_right, x);
  }

  BlobMeasurements finish() const {
    BlobMeasurements m;
    m.area = static_cast<std::size_t>(n);
    const double nd = static_cast<double>(n);
    const double mean_x = static_cast<double>(sx) / nd;
    const double mean_y = static_cast<double>(sy) / nd;
    m.centroid = {origin_x + mean_x, origin_y + mean_y};
    m.moments.mxx = (static_cast<double>(sxx) - static_cast<double>(sx) * mean_x) / nd;
    m.moments.myy = (static_cast<double>(syy) - static_cast<double>(sy) * mean_y) / nd;
    m.moments.mxy = (static_cast<double>(sxy) - static_cast<double>(sx) * mean_y) / nd;
    m.moments.mxx = std::max(m.moments.mxx, 0.0);
    m.moments.myy = std::max(m.moments.myy, 0.0);

    m.perimeter = std::numbers::pi / 8.0 *
                  (static_cast<double>(trans_axis) +
                   static_cast<double>(trans_diagonal) / std::numbers::sqrt2);

    std::vector<HullPoint> midpoints;
    std::vector<HullPoint> centers;
    midpoints.reserve(rows.size() * 6);
    centers.reserve(rows.size() * 2);
    for (const auto& r : rows) {
      const double y = r.y - origin_y;
      const double xl = r.x_left - origin_x;
      const double xr = r.x_right - origin_x;
      centers.push_back({xl, y});
      centers.push_back({xr, y});
      midpoints.push_back({xl - 0.5, y});
      midpoints.push_back({xr + 0.5, y});
      midpoints.push_back({xl, y - 0.5});
      midpoints.push_back({xl, y + 0.5});
      midpoints.push_back({xr, y - 0.5});
      midpoints.push_back({xr, y + 0.5});
    }
    m.hull_area = convex_hull_area(std::move(midpoints));
    m.center_hull_area = convex_hull_area(std::move(centers));
    m.bbox = bbox;
    return m;
  }
};

}  // namespace detail

/// Measures every component in one sweep; element i describes label i + 1.
inline std::vector<BlobMeasurements> measure_all(const ComponentLabels& labels) {
  const auto& lab = labels.labels;
  const int w = lab.width();
  const int h = lab.height();
  std::vector<detail::ComponentAccumulator> acc(static_cast<std::size_t>(labels.count));

  auto other = [&](int x, int y, std::int32_t id) {
    return !lab.contains(x, y) || lab(x, y) != id;
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto id = lab(x, y);
      if (id == 0) continue;
      auto& a = acc[static_cast<std::size_t>(id - 1)];
      a.add(x, y);
      a.trans_axis += other(x - 1, y, id) + other(x + 1, y, id) + other(x, y - 1, id) +
                      other(x, y + 1, id);
      a.trans_diagonal += other(x - 1, y - 1, id) + other(x + 1, y - 1, id) +
                          other(x - 1, y + 1, id) + other(x + 1, y + 1, id);
    }
  }

  std::vector<BlobMeasurements> out;
  out.reserve(acc.size());
  for (const auto& a : acc) out.push_back(a.finish());
  return out;
}

inline BlobMeasurements measure(const ComponentLabels& labels, std::int32_t id) {
  if (id < 1 || id > labels.count)
    fail(Errc::NotFound, "component id " + std::to_string(id) + " not in [1, " +
                             std::to_string(labels.count) + "]");
  // Restrict to the component before measuring so cost is one sweep.
  ComponentLabels single{Plane<std::int32_t>(labels.width(), labels.height(), 0), 1};
  auto src = labels.labels.values();
  auto dst = single.labels.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == id ? 1 : 0;
  return measure_all(single).front();
}

inline double circularity(const BlobMeasurements& m) {
  if (!(m.perimeter > 0.0)) fail(Errc::DegenerateBlob, "zero perimeter");
  return 4.0 * std::numbers::pi * static_cast<double>(m.area) / (m.perimeter * m.perimeter);
}

inline double convexity(const BlobMeasurements& m) {
  if (!(m.center_hull_area > 0.0) || !(m.hull_area > 0.0))
    fail(Errc::DegenerateBlob, "collinear blob has no convex hull");
  return static_cast<double>(m.area) / m.hull_area;
}

inline double inertia_ratio(const BlobMeasurements& m) {
  if (m.area < 2) fail(Errc::DegenerateBlob, "inertia needs at least two pixels");
  const double a = m.moments.mxx;
  const double b = m.moments.myy;
  const double c = m.moments.mxy;
  double lo, hi;
  if (c == 0.0) {
    lo = std::min(a, b);
    hi = std::max(a, b);
  } else {
    const double mean = (a + b) / 2.0;
    const double radius = std::hypot((a - b) / 2.0, c);
    lo = mean - radius;
    hi = mean + radius;
  }
  if (!(hi > 0.0)) return 0.0;
  return std::clamp(lo / hi, 0.0, 1.0);
}

struct BlobKeypoint {
  Point2 centroid;
  /// Equivalent-circle diameter, 2*sqrt(area/pi).
  double diameter_s = 0.0;
  std::size_t area = 0;
  double circularity = 0.0;
  double convexity = 0.0;
  double inertia_ratio = 0.0;
};

struct BlobFilterParams {
  std::size_t min_area = 80;
  /// Unset means a quarter of the frame area.
  std::optional<std::size_t> max_area;
  double min_circularity = 0.5;
  double min_convexity = 0.7;
  double min_inertia_ratio = 0.3;

  void validate() const {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (min_area < 1) fail(Errc::ConfigError, "min_area must be >= 1");
    if (max_area && *max_area < min_area)
      fail(Errc::ConfigError, "max_area must be >= min_area");
    if (!unit(min_circularity)) fail(Errc::ConfigError, "min_circularity must be in [0,1]");
    if (!unit(min_convexity)) fail(Errc::ConfigError, "min_convexity must be in [0,1]");
    if (!unit(min_inertia_ratio)) fail(Errc::ConfigError, "min_inertia_ratio must be in [0,1]");
  }

  std::size_t effective_max_area(int width, int height) const noexcept {
    return max_area.value_or(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) /
                             4);
  }
};

/// Keypoint for a measured blob, or nothing when a shape metric is undefined.
inline std::optional<BlobKeypoint> make_keypoint(const BlobMeasurements& m) {
  if (m.area < 2 || !(m.perimeter > 0.0) || !(m.center_hull_area > 0.0)) return std::nullopt;
  BlobKeypoint kp;
  kp.centroid = m.centroid;
  kp.area = m.area;
  kp.diameter_s = 2.0 * std::sqrt(static_cast<double>(m.area) / std::numbers::pi);
  kp.circularity = circularity(m);
  kp.convexity = convexity(m);
  kp.inertia_ratio = inertia_ratio(m);
  return kp;
}

inline bool passes(const BlobKeypoint& kp, const BlobFilterParams& params, std::size_t max_area) {
  return kp.area >= params.min_area && kp.area <= max_area &&
         kp.circularity >= params.min_circularity && kp.convexity >= params.min_convexity &&
         kp.inertia_ratio >= params.min_inertia_ratio;
}

/// Head keypoints: components passing every filter, in label order.
inline std::vector<BlobKeypoint> detect_blobs(const BinaryMask& mask,
                                              const BlobFilterParams& params = {},
                                              Connectivity connectivity = Connectivity::Eight) {
  params.validate();
  const auto max_area = params.effective_max_area(mask.width(), mask.height());
  const auto labels = label_components(mask, connectivity);
  std::vector<BlobKeypoint> out;
  for (const auto& m : measure_all(labels)) {
    if (m.area < params.min_area || m.area > max_area) continue;
    auto kp = make_keypoint(m);
    if (kp && passes(*kp, params, max_area)) out.push_back(*kp);
  }
  return out;
}

}  // namespace headcount
