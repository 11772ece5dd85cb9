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
#include <random>
#include <set>
#include <sstream>

#include "headcount/frame_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace headcount {
namespace {

using testing_support::scratch_dir;

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

Frame random_frame(int w, int h, std::mt19937& rng) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w * h));
  for (auto& v : data) v = static_cast<std::uint8_t>(px(rng));
  return Frame(w, h, std::move(data));
}

TEST(Pgm, ReadsAllZeroFrame) {
  std::string bytes = "P5\n4 4\n255\n" + std::string(16, '\0');
  std::istringstream in(bytes);
  const auto f = read_pgm(in);
  EXPECT_EQ(f.width(), 4);
  EXPECT_EQ(f.height(), 4);
  for (auto v : f.values()) EXPECT_EQ(v, 0);
}

TEST(Pgm, HeaderCommentsAreSkipped) {
  std::string bytes = "P5\n# made by hand\n2 1\n# max\n255\n";
  bytes += '\x07';
  bytes += '\xff';
  std::istringstream in(bytes);
  const auto f = read_pgm(in);
  EXPECT_EQ(f(0, 0), 7);
  EXPECT_EQ(f(1, 0), 255);
}

TEST(Pgm, AsciiMagicIsParseError) {
  std::istringstream in("P2\n2 2\n255\n0 0 0 0\n");
  try {
    read_pgm(in);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
  }
}

TEST(Pgm, SixteenBitMaxvalUnsupported) {
  std::istringstream in("P5\n2 2\n65535\n" + std::string(8, '\0'));
  try {
    read_pgm(in);
    FAIL() << "expected UnsupportedFormat";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedFormat);
  }
}

TEST(Pgm, MalformedHeadersAreParseErrors) {
  for (std::string bytes : {"P5\n", "P5\n4\n", "P5\nx 4\n255\n", "P5\n2 2\n255\n\x01\x02"}) {
    std::istringstream in(bytes);
    try {
      read_pgm(in);
      FAIL() << "accepted: " << bytes;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ParseError) << bytes;
    }
  }
}

TEST(Pgm, WriteThenLoadIsIdentity) {
  const auto dir = scratch_dir("pgm_roundtrip");
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> side(1, 40);
    const auto f = random_frame(trial == 0 ? 16 : side(rng), trial == 0 ? 16 : side(rng), rng);
    const auto path = dir / "f.pgm";
    write_frame(path, f);
    const auto g = load_frame(path);
    EXPECT_EQ(g.width(), f.width());
    EXPECT_EQ(g.height(), f.height());
    EXPECT_TRUE(std::ranges::equal(g.values(), f.values()));
  }
}

TEST(Pgm, MissingFileIsIoError) {
  try {
    load_frame("/nonexistent/frame.pgm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
}

TEST(Pgm, UnwritablePathIsIoError) {
  try {
    write_frame("/nonexistent/dir/frame.pgm", Frame(8, 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
}

TEST(Sequence, DirectoryFramesInNumericOrder) {
  const auto dir = scratch_dir("seq_dir");
  write_frame(dir / "0002.pgm", Frame(8, 8, 2));
  write_frame(dir / "0001.pgm", Frame(8, 8, 1));
  write_bytes(dir / "notes.txt", "ignored");
  auto seq = FrameSequence::open({dir});
  ASSERT_EQ(seq.size(), 2u);
  auto a = seq.next();
  auto b = seq.next();
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->index(), 0u);
  EXPECT_EQ(b->index(), 1u);
  EXPECT_EQ((*a)(0, 0), 1);
  EXPECT_EQ((*b)(0, 0), 2);
  EXPECT_FALSE(seq.next());
}

TEST(Sequence, NumericNotLexicographicOrder) {
  const auto dir = scratch_dir("seq_numeric");
  for (int i : {10, 9, 1, 100}) write_frame(dir / (std::to_string(i) + ".pgm"), Frame(8, 8, static_cast<std::uint8_t>(i)));
  auto seq = FrameSequence::open({dir});
  std::vector<int> got;
  std::size_t expected_index = 0;
  while (auto f = seq.next()) {
    EXPECT_EQ(f->index(), expected_index++);
    got.push_back((*f)(0, 0));
  }
  EXPECT_EQ(got, (std::vector<int>{1, 9, 10, 100}));
}

TEST(Sequence, EmptyDirectory) {
  const auto dir = scratch_dir("seq_empty");
  try {
    FrameSequence::open({dir});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptySequence);
    EXPECT_NE(std::string(e.what()).find("empty sequence"), std::string::npos);
  }
}

TEST(Sequence, RawFileSplitsIntoFrames) {
  const auto dir = scratch_dir("seq_raw");
  std::string bytes;
  for (int k = 0; k < 3; ++k) bytes += std::string(64 * 48, static_cast<char>(k + 1));
  write_bytes(dir / "clip.raw", bytes);
  auto seq = FrameSequence::open({dir / "clip.raw", 64, 48});
  EXPECT_EQ(seq.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    auto f = seq.next();
    ASSERT_TRUE(f);
    EXPECT_EQ(f->index(), k);
    EXPECT_EQ(f->width(), 64);
    EXPECT_EQ((*f)(63, 47), k + 1);
  }
  EXPECT_FALSE(seq.next());
}

TEST(Sequence, RawMisalignedIsTruncated) {
  const auto dir = scratch_dir("seq_trunc");
  write_bytes(dir / "clip.raw", std::string(100, 'x'));
  try {
    FrameSequence::open({dir / "clip.raw", 64, 48});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TruncatedStream);
  }
}

TEST(Sequence, MissingSourceIsIoError) {
  try {
    FrameSequence::open({"/nonexistent/source"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
}

TEST(Annotate, LinesOnlyTouchTheirRows) {
  const Frame in(32, 32, 17);
  const auto out = annotate(in, {}, LinePair(10, 20));
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      EXPECT_EQ(out(x, y), (y == 10 || y == 20) ? 255 : 17) << x << "," << y;
  EXPECT_EQ(in(0, 10), 17);  // input untouched
}

TEST(Annotate, RingMatchesMidpointOracle) {
  for (int r = 0; r <= 40; ++r) {
    const auto got = circle_offsets(r);
    std::set<std::pair<int, int>> got_set(got.begin(), got.end());
    const auto expected = r == 0 ? std::set<std::pair<int, int>>{{0, 0}} : oracle::midpoint_ring(r);
    EXPECT_EQ(got_set, expected) << "radius " << r;
  }
}

TEST(Annotate, DiameterFourRingAtCenterOfBlackFrame) {
  const Frame in(16, 16, 0);
  BlobKeypoint kp;
  kp.centroid = {8, 8};
  kp.diameter_s = 4;
  const auto out = annotate(in, std::span(&kp, 1), LinePair(0, 15));
  std::set<std::pair<int, int>> lit;
  for (int y = 1; y < 15; ++y)
    for (int x = 0; x < 16; ++x)
      if (out(x, y) == 255) lit.insert({x - 8, y - 8});
  EXPECT_EQ(lit, oracle::midpoint_ring(2));
}

TEST(Annotate, CentroidOutsideFrameRejected) {
  BlobKeypoint kp;
  kp.centroid = {40, 3};
  kp.diameter_s = 4;
  try {
    annotate(Frame(16, 16), std::span(&kp, 1), LinePair(2, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PreconditionViolation);
  }
}

TEST(Annotate, WriteAnnotatedRoundTrips) {
  const auto dir = scratch_dir("annotate");
  const Frame in(32, 24, 5);
  write_annotated(in, {}, LinePair(4, 8), dir / "a.pgm");
  const auto back = load_frame(dir / "a.pgm");
  EXPECT_EQ(back(3, 4), 255);
  EXPECT_EQ(back(3, 5), 5);
  EXPECT_THROW(write_annotated(in, {}, LinePair(4, 8), "/nonexistent/x/a.pgm"), Error);
}

}  // namespace
}  // namespace headcount
