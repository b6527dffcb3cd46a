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

#include <array>
#include <cmath>
#include <vector>

#include "terracurric/gp.hpp"
#include "terracurric/rng.hpp"
#include "test_support.hpp"

namespace terracurric {
namespace {

TEST(MaternTest, Values) {
  const MaternKernel k{0.4, 2.5};
  EXPECT_EQ(k(0.0), 1.0);
  EXPECT_NEAR(k(0.4), (1.0 + std::sqrt(5.0) + 5.0 / 3.0) * std::exp(-std::sqrt(5.0)), 1e-15);
  EXPECT_NEAR(MaternKernel({1.0, 0.5})(2.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(MaternKernel({1.0, 1.5})(1.0), (1.0 + std::sqrt(3.0)) * std::exp(-std::sqrt(3.0)), 1e-15);
  EXPECT_THROW(MaternKernel({0.4, 2.0}).validate(), ConfigError);
  EXPECT_THROW(MaternKernel({0.0, 2.5}).validate(), ConfigError);
}

TEST(GaussianProcessTest, NoObservationsReturnsThePrior) {
  const GaussianProcess<2> gp({0.4, 2.5}, 0.001);
  const Posterior p = gp.posterior({0.3, 0.7}, 0.42);
  EXPECT_EQ(p.mean, 0.42);
  EXPECT_EQ(p.variance, 1.0);
}

TEST(GaussianProcessTest, InterpolatesWithTinyNoise) {
  Rng rng(4);
  GaussianProcess<2> gp({0.4, 2.5}, 1e-12);
  std::vector<std::array<double, 2>> xs;
  std::vector<double> ys, priors;
  for (int i = 0; i < 6; ++i) {
    xs.push_back({0.2 * i, uniform_real(rng, 0, 1)});
    ys.push_back(uniform_real(rng, 0, 1));
    priors.push_back(uniform_real(rng, 0, 1));
    gp.add(xs.back(), ys.back(), priors.back());
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Posterior p = gp.posterior(xs[i], priors[i]);
    EXPECT_NEAR(p.mean, ys[i], 1e-6);
    EXPECT_NEAR(p.variance, 0.0, 1e-6);
  }
}

template <std::size_t Dim>
void check_against_dense(std::uint64_t seed) {
  Rng rng(seed);
  const double rho = uniform_real(rng, 0.2, 0.8), noise = uniform_real(rng, 1e-3, 0.1);
  GaussianProcess<Dim> gp({rho, 2.5}, noise);
  std::vector<std::array<double, Dim>> xs;
  std::vector<double> ys, priors;
  const int n = static_cast<int>(uniform_int(rng, 1, 20));
  for (int i = 0; i < n; ++i) {
    std::array<double, Dim> x{};
    for (double& v : x) v = uniform_real(rng, 0, 1);
    xs.push_back(x);
    ys.push_back(uniform_real(rng, 0, 1));
    priors.push_back(uniform_real(rng, 0, 1));
    gp.add(x, ys.back(), priors.back());
  }
  for (int q = 0; q < 10; ++q) {
    std::array<double, Dim> x{};
    for (double& v : x) v = uniform_real(rng, 0, 1);
    const double prior = uniform_real(rng, 0, 1);
    const auto [mean, var] = testing::dense_posterior(xs, ys, priors, x, prior, rho, noise);
    const Posterior p = gp.posterior(x, prior);
    ASSERT_NEAR(p.mean, mean, 1e-9);
    ASSERT_NEAR(p.variance, std::max(0.0, var), 1e-9);
    ASSERT_LE(p.variance, 1.0 + 1e-12);
    ASSERT_GE(p.variance, 0.0);
  }
}

TEST(GaussianProcessTest, MatchesDenseOracle1D) {
  for (std::uint64_t s = 0; s < 100; ++s) check_against_dense<1>(s);
}

TEST(GaussianProcessTest, MatchesDenseOracle2D) {
  for (std::uint64_t s = 0; s < 100; ++s) check_against_dense<2>(1000 + s);
}

TEST(GaussianProcessTest, VarianceShrinksWithData) {
  GaussianProcess<2> gp({0.4, 2.5}, 0.001);
  double prev = gp.posterior({0.5, 0.5}, 0.0).variance;
  for (double x : {0.9, 0.7, 0.55, 0.5}) {
    gp.add({x, 0.5}, 0.3, 0.0);
    const double v = gp.posterior({0.5, 0.5}, 0.0).variance;
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(GaussianProcessTest, SingularSystemIsANumericalError) {
  GaussianProcess<1> gp({0.4, 2.5}, 1e-300);
  gp.add({0.5}, 0.2, 0.0);
  EXPECT_THROW(gp.add({0.5}, 0.3, 0.0), NumericalError);
  EXPECT_EQ(gp.size(), 1u);
  EXPECT_NEAR(gp.posterior({0.5}, 0.0).mean, 0.2, 1e-12);
}

TEST(GaussianProcessTest, InvalidNoise) {
  EXPECT_THROW(GaussianProcess<2>({0.4, 2.5}, 0.0), ConfigError);
}

}  // namespace
}  // namespace terracurric
