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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

inline constexpr std::int64_t kMaxGeneratorSeed = 2147483647;

struct DiamondSquareGenome {
  std::int64_t seed = 0;
  std::array<double, 4> corners{0.0, 0.0, 0.0, 0.0};  // each in [-1, 1]
  double Z = 0.0;                                      // percentile bound, [0, 50]
  int D = 1;                                           // level, [1, 10]

  friend bool operator==(const DiamondSquareGenome&, const DiamondSquareGenome&) = default;
};

inline void validate(const DiamondSquareGenome& g) {
  if (g.seed < 0 || g.seed > kMaxGeneratorSeed) throw GenomeError("diamond-square: seed out of range");
  for (double c : g.corners)
    if (!(c >= -1.0 && c <= 1.0)) throw GenomeError("diamond-square: corner outside [-1,1]");
  if (!(g.Z >= 0.0 && g.Z <= 50.0)) throw GenomeError("diamond-square: Z outside [0,50]");
  if (g.D < 1 || g.D > 10) throw GenomeError("diamond-square: D outside [1,10]");
}

/// Half-width of the random offset range after `steps` completed
/// diamond+square iterations: 1 / (steps * D + 1).
inline double offset_bound(int steps, int level) { return 1.0 / (static_cast<double>(steps) * level + 1.0); }

/// Smallest 2^n + 1 that is >= resolution.
inline std::size_t diamond_square_side(std::size_t resolution) {
  std::size_t side = 2;
  while (side + 1 < resolution) side *= 2;
  return side + 1;
}

/// One midpoint displacement: value = percent / 100 * avg + offset.
struct DisplacementDraw {
  int steps = 0;         // iterations completed before this draw
  double offset = 0.0;   // R
  double bound = 0.0;    // |R| <= bound
  double percent = 0.0;  // P
};

struct IgnoreDraws {
  void operator()(const DisplacementDraw&) const {}
};

/// Diamond-square midpoint displacement on a (2^n + 1)-sided grid, cropped to
/// resolution x resolution. Each midpoint becomes (P / 100) * avg + R with
/// P ~ U[Z, 100 - Z] and R ~ U[-b, b], b = offset_bound(steps, D), where
/// `steps` counts the iterations already completed (the first pass draws from
/// [-1, 1]). `observe` sees every draw.
template <typename Observer = IgnoreDraws>
Grid diamond_square(const DiamondSquareGenome& g, std::size_t resolution, Observer&& observe = {}) {
  validate(g);
  if (resolution < 2) throw DimensionError("diamond-square: resolution must be >= 2");
  const std::size_t n = diamond_square_side(resolution);
  Grid grid(n, n, 0.0);
  grid.at(0, 0) = g.corners[0];
  grid.at(0, n - 1) = g.corners[1];
  grid.at(n - 1, 0) = g.corners[2];
  grid.at(n - 1, n - 1) = g.corners[3];

  Rng rng = make_rng(static_cast<std::uint64_t>(g.seed), "diamond-square");
  const double p_lo = g.Z;
  const double p_hi = 100.0 - g.Z;
  int steps = 0;

  auto displace = [&](double avg) {
    const double bound = offset_bound(steps, g.D);
    const double percent = p_lo < p_hi ? uniform_real(rng, p_lo, p_hi) : p_lo;
    const double offset = uniform_real(rng, -bound, bound);
    observe(DisplacementDraw{steps, offset, bound, percent});
    return percent / 100.0 * avg + offset;
  };

  for (std::size_t step = n - 1; step > 1; step /= 2) {
    const std::size_t half = step / 2;
    // Diamond step: centre of every square.
    for (std::size_t r = 0; r + step < n; r += step)
      for (std::size_t c = 0; c + step < n; c += step) {
        const double avg =
            (grid.at(r, c) + grid.at(r, c + step) + grid.at(r + step, c) + grid.at(r + step, c + step)) / 4.0;
        grid.at(r + half, c + half) = displace(avg);
      }
    // Square step: centre of every diamond; edge diamonds have three points.
    for (std::size_t r = 0; r < n; r += half) {
      for (std::size_t c = (r / half) % 2 == 0 ? half : 0; c < n; c += step) {
        double sum = 0.0;
        int count = 0;
        if (r >= half) { sum += grid.at(r - half, c); ++count; }
        if (r + half < n) { sum += grid.at(r + half, c); ++count; }
        if (c >= half) { sum += grid.at(r, c - half); ++count; }
        if (c + half < n) { sum += grid.at(r, c + half); ++count; }
        grid.at(r, c) = displace(sum / count);
      }
    }
    ++steps;
  }

  Grid out(resolution, resolution);
  for (std::size_t r = 0; r < resolution; ++r)
    for (std::size_t c = 0; c < resolution; ++c) out.at(r, c) = grid.at(r, c);
  return out;
}

}  // namespace terracurric
