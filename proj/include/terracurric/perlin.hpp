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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>

#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

/// Fractal Brownian motion over Perlin gradient noise.
struct PerlinGenome {
  double scale = 50.0;        // [1, 100]
  int octaves = 4;            // [1, 9]
  double persistence = 0.5;   // [0.1, 0.9]
  double lacunarity = 2.0;    // [1, 3]
  int seed = 0;               // [0, 100]

  friend bool operator==(const PerlinGenome&, const PerlinGenome&) = default;
};

inline void validate(const PerlinGenome& g) {
  if (!(g.scale >= 1.0 && g.scale <= 100.0)) throw GenomeError("perlin: scale outside [1,100]");
  if (g.octaves < 1 || g.octaves > 9) throw GenomeError("perlin: octaves outside [1,9]");
  if (!(g.persistence >= 0.1 && g.persistence <= 0.9)) throw GenomeError("perlin: persistence outside [0.1,0.9]");
  if (!(g.lacunarity >= 1.0 && g.lacunarity <= 3.0)) throw GenomeError("perlin: lacunarity outside [1,3]");
  if (g.seed < 0 || g.seed > 100) throw GenomeError("perlin: seed outside [0,100]");
}

/// Classic permutation-table gradient noise. Gradients are the four diagonals
/// (+-1, +-1), which keeps the output inside [-1, 1]; integer lattice points
/// evaluate to exactly 0.
class PerlinLattice {
 public:
  explicit PerlinLattice(std::uint64_t seed) {
    std::array<int, 256> p{};
    std::iota(p.begin(), p.end(), 0);
    Rng rng = make_rng(seed, "perlin-permutation");
    for (std::size_t i = p.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(i)));
      std::swap(p[i], p[j]);
    }
    for (std::size_t i = 0; i < 512; ++i) perm_[i] = p[i & 255];
  }

  double operator()(double x, double y) const {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const int xi = static_cast<int>(static_cast<long long>(fx) & 255);
    const int yi = static_cast<int>(static_cast<long long>(fy) & 255);
    const double dx = x - fx;
    const double dy = y - fy;
    const double u = fade(dx);
    const double v = fade(dy);

    const int aa = perm_[perm_[xi] + yi];
    const int ab = perm_[perm_[xi] + yi + 1];
    const int ba = perm_[perm_[xi + 1] + yi];
    const int bb = perm_[perm_[xi + 1] + yi + 1];

    const double x0 = lerp(u, grad(aa, dx, dy), grad(ba, dx - 1.0, dy));
    const double x1 = lerp(u, grad(ab, dx, dy - 1.0), grad(bb, dx - 1.0, dy - 1.0));
    return lerp(v, x0, x1);
  }

 private:
  static double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }
  static double lerp(double t, double a, double b) { return a + t * (b - a); }
  static double grad(int hash, double x, double y) {
    switch (hash & 3) {
      case 0: return x + y;
      case 1: return -x + y;
      case 2: return x - y;
      default: return -x - y;
    }
  }

  std::array<int, 512> perm_{};
};

/// sum_{o < octaves} persistence^o * noise(x * lacunarity^o / scale, y * lacunarity^o / scale)
inline double perlin_fbm(const PerlinLattice& noise, double x, double y, const PerlinGenome& g) {
  double total = 0.0;
  double amplitude = 1.0;
  double frequency = 1.0 / g.scale;
  for (int o = 0; o < g.octaves; ++o) {
    total += amplitude * noise(x * frequency, y * frequency);
    amplitude *= g.persistence;
    frequency *= g.lacunarity;
  }
  return total;
}

inline double perlin_fbm(double x, double y, const PerlinGenome& g) {
  return perlin_fbm(PerlinLattice(static_cast<std::uint64_t>(g.seed)), x, y, g);
}

/// Raw (unnormalized) fBM raster; x runs along columns, y along rows.
inline Grid perlin_grid(const PerlinGenome& g, std::size_t resolution) {
  validate(g);
  const PerlinLattice noise(static_cast<std::uint64_t>(g.seed));
  Grid out(resolution, resolution);
  for (std::size_t r = 0; r < resolution; ++r)
    for (std::size_t c = 0; c < resolution; ++c)
      out.at(r, c) = perlin_fbm(noise, static_cast<double>(c), static_cast<double>(r), g);
  return out;
}

}  // namespace terracurric
