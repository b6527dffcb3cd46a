// Copyright 2026 The Terracurric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "terracurric/genome.hpp"
#include "terracurric/heightmap.hpp"
#include "test_support.hpp"

namespace terracurric {
namespace {

TEST(NormalizeTest, AffineMapOntoUnitInterval) {
  const Grid g(2, 2, {0.0, 5.0, 10.0, 5.0});
  const Grid n = normalize(g);
  EXPECT_EQ(n.values, (std::vector<double>{0.0, 0.5, 1.0, 0.5}));
}

TEST(NormalizeTest, ConstantGridIsFlat) {
  const Grid n = normalize(Grid(2, 2, {3.0, 3.0, 3.0, 3.0}));
  EXPECT_EQ(n.values, (std::vector<double>{0.0, 0.0, 0.0, 0.0}));
}

TEST(NormalizeTest, EmptyGridIsADimensionError) { EXPECT_THROW(normalize(Grid{}), DimensionError); }

TEST(NormalizeTest, PerlinOutputLandsInUnitInterval) {
  for (int i = 0; i < 100; ++i) {
    Rng rng = make_rng(1, "normalize-perlin", {static_cast<std::uint64_t>(i)});
    const Grid raw = generate_raw(random_genome(GeneratorKind::perlin, rng), 32);
    const Grid n = normalize(raw);
    for (double v : n.values) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(NormalizeTest, Idempotent) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    Grid g = testing::random_grid(7, 5, rng);
    for (double& v : g.values) v = v * 40.0 - 13.0;
    const Grid once = normalize(g);
    EXPECT_EQ(normalize(once), once);
  }
}

TEST(HeightmapTest, RejectsInvariantViolations) {
  EXPECT_THROW(Heightmap(Grid(2, 5, 0.0)), DimensionError);
  EXPECT_THROW(Heightmap(Grid(3, 3, 1.5)), DomainError);
  EXPECT_THROW(Heightmap(Grid(3, 3, 0.0), 0.0), DomainError);
  EXPECT_NO_THROW(Heightmap(Grid(3, 3, 1.0), 2.0));
}

TEST(WindowsTest, CountsMatchFormula) {
  EXPECT_EQ(windows(256, 256, 30, 2).size(), 114u * 114u);
  EXPECT_EQ(windows(3, 3, 3, 1).size(), 1u);
  EXPECT_EQ(windows(4, 4, 3, 2).size(), 1u);
  for (std::size_t w = 3; w < 20; w += 3)
    for (std::size_t h = 3; h < 20; h += 4)
      for (std::size_t k = 1; k <= std::min(w, h); ++k)
        for (std::size_t s = 1; s < 5; ++s)
          EXPECT_EQ(windows(w, h, k, s).size(), ((h - k) / s + 1) * ((w - k) / s + 1));
}

TEST(WindowsTest, RowMajorOrderAndFit) {
  const auto ws = windows(7, 5, 3, 2);
  ASSERT_EQ(ws.size(), 2u * 3u);
  EXPECT_EQ(ws[0], (Window{0, 0, 3}));
  EXPECT_EQ(ws[1], (Window{0, 2, 3}));
  EXPECT_EQ(ws[3], (Window{2, 0, 3}));
  for (const auto& w : ws) {
    EXPECT_LE(w.row0 + w.k, 5u);
    EXPECT_LE(w.col0 + w.k, 7u);
  }
}

TEST(WindowsTest, OversizedKernelIsADimensionError) {
  EXPECT_THROW(windows(10, 10, 11, 1), DimensionError);
  EXPECT_THROW(windows(10, 10, 3, 0), DimensionError);
}

TEST(PgmTest, AllZeroPayload) {
  const std::string bytes = encode_pgm(testing::flat(256, 256));
  const std::string header = "P5\n# vscale=3\n256 256\n65535\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  const std::string payload = bytes.substr(header.size());
  ASSERT_EQ(payload.size(), 131072u);
  EXPECT_EQ(payload.find_first_not_of('\0'), std::string::npos);
}

TEST(PgmTest, UnitHeightStoresMaxWord) {
  const std::string bytes = encode_pgm(Heightmap(Grid(3, 3, 1.0)));
  EXPECT_EQ(static_cast<unsigned char>(bytes[bytes.size() - 2]), 0xff);
  EXPECT_EQ(static_cast<unsigned char>(bytes[bytes.size() - 1]), 0xff);
}

TEST(PgmTest, RoundTripWithinOneQuantum) {
  const auto path = (std::filesystem::temp_directory_path() / "terracurric_roundtrip.pgm").string();
  for (int i = 0; i < 10; ++i) {
    Rng rng = make_rng(3, "pgm", {static_cast<std::uint64_t>(i)});
    const Heightmap hm = generate(random_genome(GeneratorKind::perlin, rng), 64, 2.25);
    write_pgm(hm, path);
    const Heightmap back = read_pgm(path);
    ASSERT_EQ(back.width(), hm.width());
    ASSERT_EQ(back.height(), hm.height());
    EXPECT_EQ(back.vertical_scale(), 2.25);
    for (std::size_t j = 0; j < hm.values().size(); ++j)
      ASSERT_LE(std::fabs(back.values()[j] - hm.values()[j]), 1.0 / 65535.0);
  }
  std::filesystem::remove(path);
}

TEST(PgmTest, MalformedInputsAreFormatErrors) {
  const std::string good = encode_pgm(testing::flat(4, 3));
  EXPECT_NO_THROW(decode_pgm(good));
  EXPECT_THROW(decode_pgm("P2\n4 3\n65535\n"), FormatError);
  EXPECT_THROW(decode_pgm("P5\n4 x\n65535\n"), FormatError);
  EXPECT_THROW(decode_pgm("P5\n4 3\n255\n" + std::string(12, '\0')), FormatError);
  EXPECT_THROW(decode_pgm(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(decode_pgm("P5\n# vscale=abc\n4 3\n65535\n" + std::string(24, '\0')), FormatError);
}

TEST(PgmTest, ForeignCommentsAreSkipped) {
  const Heightmap hm = decode_pgm("P5\n# made elsewhere\n3 3\n# another\n65535\n" + std::string(18, '\0'));
  EXPECT_EQ(hm.width(), 3u);
  EXPECT_EQ(hm.vertical_scale(), kDefaultVerticalScale);
}

}  // namespace
}  // namespace terracurric
