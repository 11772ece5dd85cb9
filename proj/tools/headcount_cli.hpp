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

// `headcount` command line: count | synth | eval.
//
// Exit codes: 0 success, 1 I/O or input data, 2 configuration/validation.
// stdout carries exactly one JSON document on success; diagnostics go to
// stderr.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "headcount/headcount.hpp"

namespace headcount::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;

inline int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigError:
    case Errc::UndefinedAccuracy:
    case Errc::PreconditionViolation:
      return kExitConfig;
    default:
      return kExitIo;
  }
}

namespace detail {

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(Errc::ConfigError, path.string() + ": " + e.what());
  }
}

inline LinePair parse_lines(const std::string& text) {
  double a = 0, b = 0;
  char comma = 0;
  std::istringstream ss(text);
  if (!(ss >> a >> comma >> b) || comma != ',' || !(ss >> std::ws).eof())
    fail(Errc::ConfigError, "--lines expects Y1,Y2, got '" + text + "'");
  return LinePair(a, b);
}

inline std::pair<int, int> parse_geometry(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream ss(text);
  if (!(ss >> w >> x >> h) || (x != 'x' && x != 'X') || !(ss >> std::ws).eof() || w <= 0 || h <= 0)
    fail(Errc::ConfigError, "--raw expects WxH, got '" + text + "'");
  return {w, h};
}

inline std::string frame_name(std::size_t index) {
  std::ostringstream ss;
  ss << std::setw(6) << std::setfill('0') << index << ".pgm";
  return ss.str();
}

struct CountArgs {
  std::string input;
  std::string raw;
  std::string lines;
  bool invert = false;
  double alpha = 0, min_circularity = 0, min_convexity = 0, min_inertia = 0, max_match_dist = 0;
  double threshold = 0;
  std::size_t warmup = 0, min_area = 0, max_missed = 0;
  int morph_radius = 0;
  std::string truth;
  std::string annotate;
  std::string config;
};

struct SynthArgs {
  std::string spec;
  std::string out;
  std::string lines;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string report;
  std::string truth;
};

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bidirectional people counting over grayscale frame sequences", "headcount"};
  app.require_subcommand(1);

  detail::CountArgs ca;
  auto* count = app.add_subcommand("count", "Count IN/OUT crossings in a frame sequence");
  count->add_option("--input", ca.input, "Directory of numbered PGM frames or a raw file")->required();
  count->add_option("--raw", ca.raw, "Raw input geometry WxH");
  auto* o_lines = count->add_option("--lines", ca.lines, "Counting rows Y1,Y2 (IN line first)");
  auto* o_invert = count->add_flag("--invert-direction", ca.invert, "Treat upward traversal as IN");
  auto* o_alpha = count->add_option("--alpha", ca.alpha, "Background learning rate");
  auto* o_threshold = count->add_option("--threshold", ca.threshold, "Foreground threshold");
  auto* o_warmup = count->add_option("--warmup", ca.warmup, "Frames used only to learn the background");
  auto* o_morph = count->add_option("--morph-radius", ca.morph_radius, "Opening radius (0 disables)");
  auto* o_min_area = count->add_option("--min-area", ca.min_area, "Minimum blob area in pixels");
  auto* o_circ = count->add_option("--min-circularity", ca.min_circularity);
  auto* o_conv = count->add_option("--min-convexity", ca.min_convexity);
  auto* o_inertia = count->add_option("--min-inertia", ca.min_inertia);
  auto* o_dist = count->add_option("--max-match-dist", ca.max_match_dist, "Tracker gate in pixels");
  auto* o_missed = count->add_option("--max-missed", ca.max_missed, "Frames a track may coast");
  count->add_option("--truth", ca.truth, "Ground-truth JSON for accuracy");
  count->add_option("--annotate", ca.annotate, "Write annotated frames to this directory");
  count->add_option("--config", ca.config, "JSON config file; flags override it");

  detail::SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Render a synthetic scene and its ground truth");
  synth->add_option("--spec", sa.spec, "Scene spec JSON")->required();
  synth->add_option("--out", sa.out, "Output directory")->required();
  auto* o_seed = synth->add_option("--seed", sa.seed, "Override the scene seed");
  auto* o_synth_lines = synth->add_option("--lines", sa.lines, "Counting rows Y1,Y2 for truth.json");

  detail::EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Accuracy of a count report against ground truth");
  eval->add_option("--report", ea.report, "Report JSON from `count`")->required();
  eval->add_option("--truth", ea.truth, "Ground-truth JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "headcount: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (count->parsed()) {
      PipelineConfig cfg;
      if (!ca.config.empty()) cfg = pipeline_config_from_json(detail::read_json_file(ca.config));
      if (o_lines->count()) cfg.lines = detail::parse_lines(ca.lines);
      if (o_invert->count()) cfg.invert_direction = ca.invert;
      if (o_alpha->count()) cfg.background.alpha = ca.alpha;
      if (o_threshold->count()) cfg.background.threshold = ca.threshold;
      if (o_warmup->count()) cfg.background.warmup = ca.warmup;
      if (o_morph->count()) cfg.background.morph_radius = ca.morph_radius;
      if (o_min_area->count()) cfg.blob.min_area = ca.min_area;
      if (o_circ->count()) cfg.blob.min_circularity = ca.min_circularity;
      if (o_conv->count()) cfg.blob.min_convexity = ca.min_convexity;
      if (o_inertia->count()) cfg.blob.min_inertia_ratio = ca.min_inertia;
      if (o_dist->count()) cfg.tracker.max_match_distance = ca.max_match_dist;
      if (o_missed->count()) cfg.tracker.max_missed = ca.max_missed;
      cfg.validate();

      std::optional<GroundTruth> truth;
      if (!ca.truth.empty()) truth = ground_truth_from_json(detail::read_json_file(ca.truth));

      SequenceSpec seq_spec;
      seq_spec.source = ca.input;
      if (!ca.raw.empty()) std::tie(seq_spec.width, seq_spec.height) = detail::parse_geometry(ca.raw);
      else if (std::filesystem::is_regular_file(seq_spec.source))
        fail(Errc::ConfigError, "raw input file needs --raw WxH");
      auto frames = FrameSequence::open(seq_spec);

      if (!ca.annotate.empty()) std::filesystem::create_directories(ca.annotate);
      Pipeline pipeline(cfg);
      while (auto frame = frames.next()) {
        pipeline.process_frame(*frame);
        if (!ca.annotate.empty())
          write_annotated(*frame, pipeline.last_keypoints(), *pipeline.config().lines,
                          std::filesystem::path(ca.annotate) / detail::frame_name(frame->index()));
      }
      out << to_json(pipeline.report(truth)).dump(2) << '\n';
      return kExitOk;
    }

    if (synth->parsed()) {
      const auto doc = detail::read_json_file(sa.spec);
      auto scene = scene_from_json(doc);
      if (o_seed->count()) scene.seed = sa.seed;
      scene.validate();

      LinePair lines(scene.height / 3.0, 2.0 * scene.height / 3.0);
      if (doc.contains("lines"))
        lines = LinePair(headcount::detail::require_number(doc.at("lines"), "in_y"),
                         headcount::detail::require_number(doc.at("lines"), "out_y"));
      if (o_synth_lines->count()) lines = detail::parse_lines(sa.lines);

      const std::filesystem::path dir(sa.out);
      std::filesystem::create_directories(dir);
      for (std::size_t i = 0; i < scene.frames; ++i)
        write_frame(dir / detail::frame_name(i), render_frame(scene, i));

      const auto truth = to_json(ground_truth_events(scene, lines).truth);
      std::ofstream tf(dir / "truth.json", std::ios::trunc);
      if (!(tf << truth.dump(2) << '\n')) fail(Errc::IoError, "cannot write truth.json");
      out << truth.dump(2) << '\n';
      return kExitOk;
    }

    if (eval->parsed()) {
      const auto report = report_from_json(detail::read_json_file(ea.report));
      const auto truth = ground_truth_from_json(detail::read_json_file(ea.truth));
      const auto acc = accuracies(report.counters, truth);
      Json j{{"in_accuracy", round_display(acc.in)},
             {"out_accuracy", round_display(acc.out)},
             {"tc_accuracy", round_display(acc.total)}};
      out << j.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "headcount: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "headcount: " << e.what() << '\n';
    return kExitIo;
  } catch (const Json::exception& e) {
    err << "headcount: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace headcount::cli
