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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "headcount_cli.hpp"
#include "support.hpp"

namespace headcount {
namespace {

namespace fs = std::filesystem;
using testing_support::scenes_dir;
using testing_support::scratch_dir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Renders a scene into `name` once per test binary.
fs::path rendered(const std::string& scene, const std::string& name) {
  const auto dir = scratch_dir(name);
  const auto r = cli({"synth", "--spec", (scenes_dir() / scene).string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return dir;
}

TEST(CliSynth, WritesFramesAndTruth) {
  const auto dir = rendered("simultaneous.json", "cli_synth");
  EXPECT_TRUE(fs::exists(dir / "000000.pgm"));
  EXPECT_TRUE(fs::exists(dir / "000119.pgm"));
  EXPECT_FALSE(fs::exists(dir / "000120.pgm"));
  const auto truth = Json::parse(slurp(dir / "truth.json"));
  EXPECT_EQ(truth["true_in"], 2);
  EXPECT_EQ(truth["true_out"], 0);
}

TEST(CliSynth, ByteIdenticalAcrossRuns) {
  const auto a = rendered("simultaneous.json", "cli_synth_a");
  const auto b = rendered("simultaneous.json", "cli_synth_b");
  for (const char* f : {"000000.pgm", "000055.pgm", "000119.pgm", "truth.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(CliSynth, ZeroFramesIsConfigError) {
  const auto dir = scratch_dir("cli_synth_zero");
  write_text(dir / "spec.json",
             R"({"width": 64, "height": 48, "frames": 0, "background_intensity": 60, "actors": []})");
  const auto r = cli({"synth", "--spec", (dir / "spec.json").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliCount, BalancedSceneIsExact) {
  const auto dir = rendered("eight_each_way.json", "cli_eight_each_way");
  const auto r = cli({"count", "--input", dir.string(), "--lines", "80,160", "--truth",
                      (dir / "truth.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["in"], 8);
  EXPECT_EQ(j["out"], 8);
  EXPECT_EQ(j["total"], 16);
  EXPECT_EQ(j["in_accuracy"], 100.0);
  EXPECT_EQ(j["out_accuracy"], 100.0);
  EXPECT_EQ(j["tc_accuracy"], 100.0);
  EXPECT_EQ(j["params"]["lines"]["in_y"], 80.0);
}

TEST(CliCount, EmptyDirectoryFailsCleanly) {
  const auto dir = scratch_dir("cli_empty");
  const auto r = cli({"count", "--input", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("empty sequence"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliCount, ReversedLinesAreConfigError) {
  const auto dir = rendered("simultaneous.json", "cli_badlines");
  const auto r = cli({"count", "--input", dir.string(), "--lines", "300,180"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliCount, BadFlagsAreConfigErrors) {
  EXPECT_EQ(cli({"count"}).code, 2);
  EXPECT_EQ(cli({"count", "--input", "x", "--lines", "80"}).code, 2);
  EXPECT_EQ(cli({"count", "--input", "x", "--alpha", "abc"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
}

TEST(CliCount, RawFileNeedsGeometry) {
  const auto dir = scratch_dir("cli_raw");
  write_text(dir / "clip.raw", std::string(64 * 48 * 2, '\x3c'));
  EXPECT_EQ(cli({"count", "--input", (dir / "clip.raw").string()}).code, 2);
  const auto r = cli({"count", "--input", (dir / "clip.raw").string(), "--raw", "64x48"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["total"], 0);
  EXPECT_EQ(cli({"count", "--input", (dir / "clip.raw").string(), "--raw", "64x47"}).code, 1);
}

TEST(CliCount, AnnotateWritesOneFramePerInput) {
  const auto dir = rendered("simultaneous.json", "cli_annotate_in");
  const auto ann = scratch_dir("cli_annotate_out");
  const auto r = cli({"count", "--input", dir.string(), "--annotate", ann.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(ann)) n += e.path().extension() == ".pgm";
  EXPECT_EQ(n, 120u);
  // Default lines for 240 rows are 80 and 160.
  const auto f = load_frame(ann / "000000.pgm");
  EXPECT_EQ(f(5, 80), 255);
  EXPECT_EQ(f(5, 160), 255);
}

TEST(CliCount, FlagsOverrideConfigFile) {
  const auto dir = rendered("simultaneous.json", "cli_config");
  write_text(dir / "cfg.json", R"({"lines": {"in_y": 80, "out_y": 160}, "invert_direction": true,
                                   "background": {"warmup": 20}})");
  auto r = cli({"count", "--input", dir.string(), "--config", (dir / "cfg.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["out"], 2);
  EXPECT_EQ(j["params"]["background"]["warmup"], 20);

  r = cli({"count", "--input", dir.string(), "--config", (dir / "cfg.json").string(), "--warmup", "30"});
  j = Json::parse(r.out);
  EXPECT_EQ(j["params"]["background"]["warmup"], 30);

  write_text(dir / "bad.json", R"({"lines": {"in_y": 80, "out_y": 160}, "bogus": 1})");
  EXPECT_EQ(cli({"count", "--input", dir.string(), "--config", (dir / "bad.json").string()}).code, 2);
  write_text(dir / "broken.json", "{not json");
  EXPECT_EQ(cli({"count", "--input", dir.string(), "--config", (dir / "broken.json").string()}).code, 2);
}

TEST(CliEval, Accuracies) {
  const auto dir = scratch_dir("cli_eval");
  write_text(dir / "report.json", R"({"in": 45, "out": 48, "total": 93, "events": []})");
  write_text(dir / "truth.json", R"({"true_in": 48, "true_out": 48})");
  auto r = cli({"eval", "--report", (dir / "report.json").string(), "--truth", (dir / "truth.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["in_accuracy"], 93.75);
  EXPECT_EQ(j["out_accuracy"], 100.0);
  EXPECT_EQ(j["tc_accuracy"], 96.88);

  write_text(dir / "zero.json", R"({"true_in": 0, "true_out": 48})");
  r = cli({"eval", "--report", (dir / "report.json").string(), "--truth", (dir / "zero.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(cli({"eval", "--report", (dir / "missing.json").string(), "--truth",
                 (dir / "truth.json").string()}).code,
            1);
}

}  // namespace
}  // namespace headcount
