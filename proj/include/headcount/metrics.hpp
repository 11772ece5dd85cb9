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

// Count accuracy against ground truth, and the run report.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "headcount/error.hpp"
#include "headcount/line_counter.hpp"

namespace headcount {

using Json = nlohmann::ordered_json;

struct GroundTruth {
  std::uint64_t true_in = 0;
  std::uint64_t true_out = 0;
  std::uint64_t true_total = 0;

  GroundTruth() = default;
  GroundTruth(std::uint64_t in, std::uint64_t out) : true_in(in), true_out(out), true_total(in + out) {}

  void validate() const {
    if (true_total != true_in + true_out)
      fail(Errc::ConfigError, "true_total must equal true_in + true_out");
  }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// count / true_count * 100. Over-counting yields values above 100; an
/// empty scene counted as empty is 100.
inline double accuracy_pct(std::uint64_t count, std::uint64_t true_count) {
  if (true_count == 0) {
    if (count == 0) return 100.0;
    fail(Errc::UndefinedAccuracy,
         "true count is 0 but " + std::to_string(count) + " were counted");
  }
  return static_cast<double>(count) / static_cast<double>(true_count) * 100.0;
}

/// Presentation rounding (half away from zero) to `decimals` places.
inline double round_display(double value, int decimals = 2) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

struct Accuracies {
  double in = 0.0;
  double out = 0.0;
  double total = 0.0;

  friend bool operator==(const Accuracies&, const Accuracies&) = default;
};

inline Accuracies accuracies(const Counters& c, const GroundTruth& t) {
  return {accuracy_pct(c.in_count(), t.true_in), accuracy_pct(c.out_count(), t.true_out),
          accuracy_pct(c.total_count(), t.true_total)};
}

struct CountReport {
  Counters counters;
  std::vector<CrossEvent> events;
  std::optional<GroundTruth> ground_truth;
  /// Present iff ground_truth is.
  std::optional<Accuracies> accuracy;
  /// Effective configuration of the run.
  Json params = Json::object();

  friend bool operator==(const CountReport&, const CountReport&) = default;
};

inline CountReport build_report(const Counters& counters, std::vector<CrossEvent> events,
                                const std::optional<GroundTruth>& truth, Json params) {
  CountReport r;
  r.counters = counters;
  r.events = std::move(events);
  r.params = std::move(params);
  if (truth) {
    truth->validate();
    r.ground_truth = *truth;
    r.accuracy = accuracies(counters, *truth);
  }
  return r;
}

inline Json to_json(const GroundTruth& t) {
  return Json{{"true_in", t.true_in}, {"true_out", t.true_out}, {"true_total", t.true_total}};
}

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::ConfigError, std::string("missing key '") + key + "'");
  return j.at(key);
}

inline std::uint64_t require_count(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    fail(Errc::ConfigError, std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline double require_number(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number()) fail(Errc::ConfigError, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

inline GroundTruth ground_truth_from_json(const Json& j) {
  GroundTruth t;
  t.true_in = detail::require_count(j, "true_in");
  t.true_out = detail::require_count(j, "true_out");
  t.true_total = j.contains("true_total") ? detail::require_count(j, "true_total")
                                          : t.true_in + t.true_out;
  t.validate();
  return t;
}

inline Json to_json(const CountReport& r) {
  Json j;
  j["in"] = r.counters.in_count();
  j["out"] = r.counters.out_count();
  j["total"] = r.counters.total_count();
  if (r.ground_truth) {
    j["true_in"] = r.ground_truth->true_in;
    j["true_out"] = r.ground_truth->true_out;
    j["true_total"] = r.ground_truth->true_total;
  }
  if (r.accuracy) {
    j["in_accuracy"] = r.accuracy->in;
    j["out_accuracy"] = r.accuracy->out;
    j["tc_accuracy"] = r.accuracy->total;
  }
  Json events = Json::array();
  for (const auto& e : r.events)
    events.push_back(Json{{"frame", e.frame}, {"track_id", e.track_id},
                          {"direction", std::string(to_string(e.direction))}});
  j["events"] = std::move(events);
  j["params"] = r.params;
  return j;
}

inline CountReport report_from_json(const Json& j) {
  using detail::require_count;
  CountReport r;
  const auto in = require_count(j, "in");
  const auto out = require_count(j, "out");
  if (require_count(j, "total") != in + out) fail(Errc::ConfigError, "total must equal in + out");
  r.counters = Counters(in, out);

  if (j.contains("true_in") || j.contains("true_out") || j.contains("true_total"))
    r.ground_truth = ground_truth_from_json(j);
  if (j.contains("in_accuracy") || j.contains("out_accuracy") || j.contains("tc_accuracy")) {
    r.accuracy = Accuracies{detail::require_number(j, "in_accuracy"),
                            detail::require_number(j, "out_accuracy"),
                            detail::require_number(j, "tc_accuracy")};
  }
  if (r.accuracy.has_value() != r.ground_truth.has_value())
    fail(Errc::ConfigError, "accuracy fields require ground-truth fields and vice versa");

  const auto& events = detail::require(j, "events");
  if (!events.is_array()) fail(Errc::ConfigError, "'events' must be an array");
  for (const auto& e : events) {
    const auto& dir = detail::require(e, "direction");
    if (!dir.is_string() || (dir != "IN" && dir != "OUT"))
      fail(Errc::ConfigError, "event direction must be \"IN\" or \"OUT\"");
    r.events.push_back(CrossEvent{require_count(e, "frame"), require_count(e, "track_id"),
                                  parse_direction(dir.get<std::string>())});
  }
  r.params = j.contains("params") ? j.at("params") : Json::object();
  return r;
}

}  // namespace headcount
