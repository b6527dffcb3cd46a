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
#include <cstdint>
#include <string>
#include <vector>

#include "terracurric/features.hpp"
#include "test_support.hpp"

namespace terracurric {
namespace {

Grid window3(std::vector<double> v) { return Grid(3, 3, std::move(v)); }

const Window kWhole3{0, 0, 3};

TEST(WindowStatsTest, Tri) {
  EXPECT_EQ(window_tri(window3({0, 0, 0, 0, 1, 0, 0, 0, 0}), kWhole3), 1.0);
  EXPECT_EQ(window_tri(window3(std::vector<double>(9, 0.7)), kWhole3), 0.0);
  EXPECT_EQ(window_tri(window3({0, 0, 0, 0, 0.5, 1, 1, 1, 1}), kWhole3), 0.5);
}

TEST(WindowStatsTest, Tpi) {
  EXPECT_EQ(window_tpi(window3({0, 0, 0, 0, 1, 0, 0, 0, 0}), kWhole3), 1.0);
  EXPECT_EQ(window_tpi(window3(std::vector<double>(9, 0.25)), kWhole3), 0.0);
  EXPECT_EQ(window_tpi(window3({1, 1, 1, 1, 0, 1, 1, 1, 1}), kWhole3), -1.0);
}

TEST(WindowStatsTest, Roughness) {
  EXPECT_EQ(window_roughness(window3({0, 1, 0, 1, 0.5, 1, 0, 1, 0}), kWhole3), 0.5);
  EXPECT_EQ(window_roughness(window3(std::vector<double>(9, 0.4)), kWhole3), 0.0);
}

TEST(WindowStatsTest, EvenKernelCentreUsesFloor) {
  // 4x4 window: centre at (2, 2).
  Grid g(4, 4, 0.0);
  g.at(2, 2) = 1.0;
  EXPECT_EQ(window_roughness(g, {0, 0, 4}), 1.0);
  EXPECT_DOUBLE_EQ(window_tri(g, {0, 0, 4}), 1.0);
}

TEST(WindowStatsTest, RoughnessDominatesTriAndAbsTpi) {
  Rng rng(100);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 2, 7));
    const Grid g = testing::random_grid(k, k, rng);
    const Window w{0, 0, k};
    const double rough = window_roughness(g, w);
    ASSERT_GE(rough, window_tri(g, w));
    ASSERT_GE(rough, std::fabs(window_tpi(g, w)));
  }
}

TEST(DescribeTest, FlatMapIsZero) {
  const Heightmap hm = testing::flat(40, 40);
  for (FeatureKind k : {FeatureKind::TRI, FeatureKind::TPI, FeatureKind::Roughness})
    EXPECT_EQ(describe(hm, {k, 30, 2}), 0.0);
}

TEST(DescribeTest, SingleSpikeMatchesEnumeration) {
  // Spike at (4,4) of an 8x8 map, k=3, stride 1: 36 windows, the spike is the
  // centre of one and a neighbour in eight.
  Grid g(8, 8, 0.0);
  g.at(4, 4) = 1.0;
  const auto naive = testing::naive_describe(g, 3, 1);
  EXPECT_DOUBLE_EQ(describe(g, {FeatureKind::TRI, 3, 1}), (1.0 + 8.0 / 8.0) / 36.0);
  EXPECT_DOUBLE_EQ(describe(g, {FeatureKind::TPI, 3, 1}), (1.0 + 8.0 / 8.0) / 36.0);
  EXPECT_DOUBLE_EQ(describe(g, {FeatureKind::Roughness, 3, 1}), 9.0 / 36.0);
  EXPECT_DOUBLE_EQ(describe(g, {FeatureKind::TRI, 3, 1}), naive.tri);
  EXPECT_DOUBLE_EQ(describe(g, {FeatureKind::Roughness, 3, 1}), naive.roughness);
}

TEST(DescribeTest, MatchesNaiveOracleOnRandomRasters) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Grid g = testing::random_grid(16, 16, rng);
    for (std::size_t k : {2u, 3u, 5u, 8u}) {
      for (std::size_t s : {1u, 2u, 3u}) {
        const auto naive = testing::naive_describe(g, k, s);
        ASSERT_NEAR(describe(g, {FeatureKind::TRI, k, s}), naive.tri, 1e-12);
        ASSERT_NEAR(describe(g, {FeatureKind::TPI, k, s}), naive.abs_tpi, 1e-12);
        ASSERT_NEAR(describe(g, {FeatureKind::Roughness, k, s}), naive.roughness, 1e-12);
      }
    }
  }
}

TEST(DescribeTest, PositivelyHomogeneous) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Grid g = testing::random_grid(24, 20, rng);
    Grid half = g;
    for (double& v : half.values) v *= 0.5;
    EXPECT_EQ(describe(half, {FeatureKind::TRI, 5, 2}), 0.5 * describe(g, {FeatureKind::TRI, 5, 2}));
    EXPECT_EQ(describe(half, {FeatureKind::Roughness, 5, 2}), 0.5 * describe(g, {FeatureKind::Roughness, 5, 2}));
    EXPECT_NEAR(describe(half, {FeatureKind::TPI, 5, 2}), 0.5 * describe(g, {FeatureKind::TPI, 5, 2}), 1e-15);
    const double alpha = uniform_real(rng, 0.0, 3.0);
    Grid scaled = g;
    for (double& v : scaled.values) v *= alpha;
    for (FeatureKind k : {FeatureKind::TRI, FeatureKind::TPI, FeatureKind::Roughness})
      EXPECT_NEAR(describe(scaled, {k, 4, 3}), alpha * describe(g, {k, 4, 3}), 1e-12);
  }
}

TEST(DescribeTest, TranslationInvariant) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    Grid g = testing::random_grid(20, 20, rng);
    Grid shifted = g;
    for (double& v : shifted.values) v += 0.75;
    for (FeatureKind k : {FeatureKind::TRI, FeatureKind::TPI, FeatureKind::Roughness})
      EXPECT_NEAR(describe(shifted, {k, 6, 2}), describe(g, {k, 6, 2}), 1e-12);
  }
}

TEST(DescribeTest, NonNegative) {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const Grid g = testing::random_grid(12, 12, rng);
    for (FeatureKind k : {FeatureKind::TRI, FeatureKind::TPI, FeatureKind::Roughness})
      EXPECT_GE(describe(g, {k, 3, 2}), 0.0);
  }
}

TEST(DescribeTest, OversizedKernelIsADimensionError) {
  EXPECT_THROW(describe(testing::flat(20, 20), {FeatureKind::TRI, 30, 2}), DimensionError);
}

TEST(PearsonTest, ClosedFormValues) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, {-1, -2, -3}), -1.0);
  // cov = 3, sxx = 2, syy = 14/3
  EXPECT_NEAR(pearson(x, {1, 2, 4}), 3.0 / std::sqrt(28.0 / 3.0), 1e-15);
  EXPECT_NEAR(pearson(x, {1, 2, 4}), 0.98198, 1e-5);
}

TEST(PearsonTest, Errors) {
  EXPECT_THROW(pearson({1, 1, 1}, {1, 2, 3}), CorrelationError);
  EXPECT_THROW(pearson({1, 2}, {1, 2, 3}), DimensionError);
  EXPECT_THROW(pearson({1}, {1}), DimensionError);
}

TEST(CorrelationMatrixTest, SymmetricUnitDiagonalAndCsv) {
  Rng rng(12);
  std::vector<Heightmap> corpus;
  std::vector<double> difficulty;
  for (int i = 0; i < 12; ++i) {
    corpus.push_back(Heightmap::from_raw(testing::random_grid(20, 20, rng)));
    difficulty.push_back(uniform_real(rng, 0.0, 1.0));
  }
  const std::vector<FeatureDescriptor> ds{{FeatureKind::TRI, 5, 2}, {FeatureKind::TPI, 5, 2}, {FeatureKind::Roughness, 3, 1}};
  const auto m = correlation_matrix(corpus, difficulty, ds);
  ASSERT_EQ(m.names, (std::vector<std::string>{"TRI_k5", "TPI_k5", "Roughness_k3", "difficulty"}));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(m.at(i, i), 1.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(m.at(i, j), m.at(j, i), 1e-12);
  }
  const std::string csv = to_csv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "TRI_k5,TPI_k5,Roughness_k3,difficulty");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(CorrelationMatrixTest, IdenticalTerrainsHaveUndefinedCorrelation) {
  Rng rng(1);
  const Heightmap hm = Heightmap::from_raw(testing::random_grid(10, 10, rng));
  EXPECT_THROW(correlation_matrix({hm, hm, hm}, {0.1, 0.2, 0.3}, {{FeatureKind::TRI, 3, 1}}), CorrelationError);
}

}  // namespace
}  // namespace terracurric
