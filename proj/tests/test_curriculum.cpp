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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "terracurric/curriculum.hpp"
#include "test_support.hpp"

namespace terracurric {
namespace {

FeaturePair unit_pair() {
  FeaturePair p;
  p.ranges = {FeatureRange{0.0, 1.0}, FeatureRange{0.0, 1.0}};
  return p;
}

Archive random_archive(std::size_t cells, std::uint64_t seed, std::size_t resolution = 32) {
  Rng rng(seed);
  Archive a(unit_pair(), "perlin", resolution);
  while (a.occupied() < cells)
    a.insert(a.make_cell(random_genome(GeneratorKind::perlin, rng),
                         {uniform_real(rng, 0, 1), uniform_real(rng, 0, 1)}, uniform_real(rng, 0, 1)));
  return a;
}

// Fitness rises linearly with training and ignores the terrain.
class LinearLearner final : public Learner {
 public:
  explicit LinearLearner(double epochs_to_master) : scale_(epochs_to_master) {}
  void train(const Heightmap&, int epochs) override { epochs_ += epochs; }
  double evaluate(const Heightmap&) const override { return std::min(1.0, static_cast<double>(epochs_) / scale_); }
  long epochs_trained() const override { return epochs_; }

 private:
  double scale_;
  long epochs_ = 0;
};

class ThrowingLearner final : public Learner {
 public:
  void train(const Heightmap&, int epochs) override { epochs_ += epochs; }
  double evaluate(const Heightmap&) const override {
    if (epochs_ > 100) throw std::runtime_error("learner diverged");
    return 1.0;
  }
  long epochs_trained() const override { return epochs_; }

 private:
  long epochs_ = 0;
};

TEST(SelectNextTest, PrefersHighestPriorFitness) {
  const GpModel m({{{0, 0}, 0.5}, {{3, 4}, 0.9}, {{10, 1}, 0.2}}, GpConfig{});
  EXPECT_EQ(select_next(m, {{0, 0}, {3, 4}, {10, 1}}), (BinIndex{3, 4}));
  EXPECT_EQ(select_next(m, {{0, 0}, {10, 1}}), (BinIndex{0, 0}));
}

TEST(SelectNextTest, TiesGoToTheLowestBin) {
  const GpModel m({{{7, 2}, 0.5}, {{2, 9}, 0.5}, {{2, 3}, 0.5}}, GpConfig{});
  EXPECT_EQ(select_next(m, {{7, 2}, {2, 9}, {2, 3}}), (BinIndex{2, 3}));
}

TEST(SelectNextTest, ExhaustedWhenEmpty) {
  const GpModel m({{{0, 0}, 0.5}}, GpConfig{});
  EXPECT_THROW(select_next(m, {}), CurriculumExhausted);
}

TEST(SelectNextTest, InvariantToAConstantShift) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::map<BinIndex, double> prior, shifted;
    std::vector<BinIndex> bins;
    const double shift = uniform_real(rng, -0.3, 0.3);
    while (prior.size() < 25) {
      const BinIndex b{static_cast<std::size_t>(uniform_int(rng, 0, 49)), static_cast<std::size_t>(uniform_int(rng, 0, 49))};
      if (prior.count(b)) continue;
      const double f = uniform_real(rng, 0.4, 0.6);
      prior[b] = f;
      shifted[b] = f + shift;
      bins.push_back(b);
    }
    GpModel a(prior, GpConfig{}), b(shifted, GpConfig{});
    for (int k = 0; k < 3; ++k) {
      const double y = uniform_real(rng, 0, 1);
      a.observe(bins[static_cast<std::size_t>(k)], y);
      b.observe(bins[static_cast<std::size_t>(k)], y + shift);
    }
    EXPECT_EQ(select_next(a, bins), select_next(b, bins));
  }
}

TEST(PruneEasierTest, Examples) {
  const GpModel m({{{0, 0}, 0.9}, {{1, 1}, 0.5}, {{2, 2}, 0.2}, {{3, 3}, 0.5}}, GpConfig{});
  EXPECT_EQ(prune_easier(m, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {1, 1}),
            (std::vector<BinIndex>{{2, 2}, {3, 3}}));
  EXPECT_TRUE(prune_easier(m, {{0, 0}}, {0, 0}).empty());
}

TEST(PruneEasierTest, ObservationRaisesTheReference) {
  // A success on a hard bin removes the nearby bins that the prior rated easier.
  GpModel m({{{10, 10}, 0.2}, {{11, 10}, 0.3}, {{40, 40}, 0.1}}, GpConfig{});
  m.observe({10, 10}, 1.0);
  const auto left = prune_easier(m, {{10, 10}, {11, 10}, {40, 40}}, {10, 10});
  EXPECT_EQ(left, (std::vector<BinIndex>{{40, 40}}));
}

TEST(CurriculumTest, SingleTerrain) {
  const Archive a = random_archive(1, 2);
  LinearLearner learner(200.0);
  const auto t = run_curriculum(a, learner, GpConfig{});
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.entries[0].bin, a.cells().front()->bin);
  EXPECT_EQ(t.entries[0].epoch, 200);  // 0.9 reached after 180, evaluated in rounds of 40
  EXPECT_GE(t.entries[0].observed_fitness, 0.9);
  EXPECT_EQ(t.final_hardest(), feature_distance(*a.cells().front(), a.pair()));
}

TEST(CurriculumTest, EasiestTerrainFirst) {
  Archive a(unit_pair(), "perlin", 32);
  a.insert(a.make_cell(PerlinGenome{}, {0.9, 0.9}, 0.8));
  a.insert(a.make_cell(PerlinGenome{}, {0.1, 0.1}, 0.05));
  a.insert(a.make_cell(PerlinGenome{}, {0.5, 0.2}, 0.5));
  LinearLearner learner(1000.0);
  const auto t = run_curriculum(a, learner, GpConfig{});
  ASSERT_FALSE(t.entries.empty());
  EXPECT_EQ(t.entries[0].bin, (BinIndex{5, 5}));
}

TEST(CurriculumTest, TracesAreMonotoneAndTerminate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Archive a = random_archive(60, seed);
    CapabilityLearner learner({0.02, 2.5e-4, 20, 5}, seed);
    const CurriculumOptions opt{40, 4000, 20};
    const auto t = run_curriculum(a, learner, GpConfig{}, opt);
    ASSERT_FALSE(t.entries.empty());
    EXPECT_LE(t.entries.size(), a.occupied());
    EXPECT_LE(t.entries.back().epoch, opt.max_epochs);
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
      EXPECT_GT(t.entries[i].epoch, t.entries[i - 1].epoch);
      EXPECT_GE(t.entries[i].hardest_distance, t.entries[i - 1].hardest_distance);
    }
    std::vector<BinIndex> seen;
    for (const auto& e : t.entries) seen.push_back(e.bin);
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
  }
}

TEST(CurriculumTest, Deterministic) {
  const Archive a = random_archive(40, 3);
  CapabilityLearner l1({0.02, 2.5e-4, 20, 5}, 9), l2({0.02, 2.5e-4, 20, 5}, 9);
  const auto t1 = run_curriculum(a, l1, GpConfig{}, {40, 3000, 20});
  const auto t2 = run_curriculum(a, l2, GpConfig{}, {40, 3000, 20});
  EXPECT_EQ(to_csv(t1), to_csv(t2));
}

TEST(CurriculumTest, LearnerFailureKeepsThePartialTrace) {
  const Archive a = random_archive(30, 4);
  ThrowingLearner learner;
  try {
    run_curriculum(a, learner, GpConfig{}, {40, 30000, 5});
    FAIL() << "expected CurriculumError";
  } catch (const CurriculumError& e) {
    EXPECT_EQ(e.trace.entries.size(), 2u);
    EXPECT_NE(std::string(e.what()).find("learner diverged"), std::string::npos);
  }
}

TEST(CurriculumTest, EmptyArchive) {
  LinearLearner learner(10.0);
  EXPECT_THROW(run_curriculum(Archive(unit_pair(), "perlin", 32), learner, GpConfig{}), ConfigError);
}

TEST(ClassicTest, EveryFifthByRoughness) {
  Archive a(unit_pair(), "perlin", 32);
  for (double r : {0.81, 0.61, 0.41, 0.21}) a.insert(a.make_cell(PerlinGenome{}, {r, 0.5}, 0.5));
  EXPECT_EQ(classic_order(a), (std::vector<BinIndex>{{10, 25}}));
  for (double r : {0.52, 0.56, 0.63, 0.66, 0.72, 0.76}) a.insert(a.make_cell(PerlinGenome{}, {r, 0.1}, 0.5));
  ASSERT_EQ(a.occupied(), 10u);
  const auto order = classic_order(a);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0], (BinIndex{10, 25}));  // 0.21
  EXPECT_EQ(order[1], (BinIndex{31, 5}));   // sixth smallest: 0.63
}

TEST(ClassicTest, TraceFollowsTheOrder) {
  const Archive a = random_archive(23, 8);
  LinearLearner learner(100.0);
  const auto t = classic_cl(a, learner, GpConfig{});
  const auto order = classic_order(a);
  ASSERT_EQ(t.entries.size(), order.size());
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(t.entries[i].bin, order[i]);
}

TEST(TraceCsvTest, Format) {
  CurriculumTrace t;
  t.entries.push_back({40, 0.5, {3, 4}, 0.95});
  t.entries.push_back({120, 0.75, {10, 2}, 0.25});
  EXPECT_EQ(to_csv(t), "epoch,hardest_distance,bin_i,bin_j,observed_fitness\n40,0.5,3,4,0.95\n120,0.75,10,2,0.25\n");
}

TEST(CurriculumConfigTest, JsonOverridesDefaults) {
  const auto c = curriculum_config_from_json(nlohmann::json::parse(
      R"({"rho": 0.3, "kappa": 0.1, "max_epochs": 500, "learner": {"gain": 0.001}})"));
  EXPECT_EQ(c.gp.rho, 0.3);
  EXPECT_EQ(c.gp.kappa, 0.1);
  EXPECT_EQ(c.gp.alpha, 0.9);
  EXPECT_EQ(c.options.max_epochs, 500);
  EXPECT_EQ(c.learner.gain, 0.001);
  EXPECT_EQ(c.learner.base_capability, 0.02);
  EXPECT_THROW(curriculum_config_from_json(nlohmann::json::parse(R"({"alpha": 1.5})")), ConfigError);
  EXPECT_THROW(curriculum_config_from_json(nlohmann::json::parse(R"({"rho": "wide"})")), ConfigError);
}

}  // namespace
}  // namespace terracurric
