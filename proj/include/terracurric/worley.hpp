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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "terracurric/diamond_square.hpp"
#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

struct WorleyGenome {
  std::int64_t seed = 0;
  int N = 16;      // feature points, [2, 400]
  int D_idx = 0;   // index into ascending distances, [0, N/4]

  friend bool operator==(const WorleyGenome&, const WorleyGenome&) = default;
};

inline void validate(const WorleyGenome& g) {
  if (g.seed < 0 || g.seed > kMaxGeneratorSeed) throw GenomeError("worley: seed out of range");
  if (g.N < 2 || g.N > 400) throw GenomeError("worley: N outside [2,400]");
  if (g.D_idx < 0 || g.D_idx > g.N / 4) throw GenomeError("worley: D_idx outside [0,N/4]");
}

struct FeaturePoint {
  double row = 0.0;
  double col = 0.0;
};

/// Seeded feature points on integer cell positions.
inline std::vector<FeaturePoint> worley_points(const WorleyGenome& g, std::size_t resolution) {
  Rng rng = make_rng(static_cast<std::uint64_t>(g.seed), "worley");
  const auto hi = static_cast<long long>(resolution) - 1;
  std::vector<FeaturePoint> pts(static_cast<std::size_t>(g.N));
  for (auto& p : pts) {
    p.row = static_cast<double>(uniform_int(rng, 0, hi));
    p.col = static_cast<double>(uniform_int(rng, 0, hi));
  }
  return pts;
}

/// Cell value = Euclidean distance to the (index+1)-th nearest feature point.
inline Grid worley_distances(const std::vector<FeaturePoint>& points, int index, std::size_t resolution) {
  if (index < 0 || static_cast<std::size_t>(index) >= points.size())
    throw GenomeError("worley: nearest-point index must be < N");
  Grid out(resolution, resolution);
  std::vector<double> d2(points.size());
  const auto nth = d2.begin() + index;
  for (std::size_t r = 0; r < resolution; ++r)
    for (std::size_t c = 0; c < resolution; ++c) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double dr = static_cast<double>(r) - points[i].row;
        const double dc = static_cast<double>(c) - points[i].col;
        d2[i] = dr * dr + dc * dc;
      }
      std::nth_element(d2.begin(), nth, d2.end());
      out.at(r, c) = std::sqrt(*nth);
    }
  return out;
}

inline Grid worley(const WorleyGenome& g, std::size_t resolution) {
  validate(g);
  return worley_distances(worley_points(g, resolution), g.D_idx, resolution);
}

}  // namespace terracurric
