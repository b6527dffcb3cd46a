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
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include <nlohmann/json.hpp>

#include "terracurric/cppn.hpp"
#include "terracurric/diamond_square.hpp"
#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/perlin.hpp"
#include "terracurric/rng.hpp"
#include "terracurric/worley.hpp"

namespace terracurric {

using Genome = std::variant<PerlinGenome, DiamondSquareGenome, WorleyGenome, CppnGenome>;

enum class GeneratorKind { perlin, diamond_square, worley, cppn };

inline constexpr std::array<GeneratorKind, 4> kGeneratorKinds{GeneratorKind::perlin, GeneratorKind::diamond_square,
                                                              GeneratorKind::worley, GeneratorKind::cppn};

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::perlin: return "perlin";
    case GeneratorKind::diamond_square: return "diamond-square";
    case GeneratorKind::worley: return "worley";
    case GeneratorKind::cppn: return "cppn";
  }
  return "perlin";
}

inline std::string supported_kinds() { return "perlin, diamond-square, worley, cppn"; }

inline GeneratorKind parse_generator_kind(std::string_view s) {
  for (GeneratorKind k : kGeneratorKinds)
    if (to_string(k) == s) return k;
  throw ConfigError("unknown generator kind '" + std::string(s) + "' (supported: " + supported_kinds() + ")");
}

inline GeneratorKind kind_of(const Genome& g) { return static_cast<GeneratorKind>(g.index()); }

inline void validate(const Genome& g) {
  std::visit([](const auto& v) { validate(v); }, g);
}

/// Unnormalized raster for any genome.
inline Grid generate_raw(const Genome& g, std::size_t resolution) {
  if (resolution < 3) throw DimensionError("resolution must be >= 3");
  return std::visit(
      [resolution](const auto& v) -> Grid {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PerlinGenome>) return perlin_grid(v, resolution);
        else if constexpr (std::is_same_v<T, DiamondSquareGenome>) return diamond_square(v, resolution);
        else if constexpr (std::is_same_v<T, WorleyGenome>) return worley(v, resolution);
        else return cppn_grid(v, resolution);
      },
      g);
}

/// Deterministic genome expansion into a normalized heightmap.
inline Heightmap generate(const Genome& g, std::size_t resolution = 256,
                          double vertical_scale = kDefaultVerticalScale) {
  return Heightmap::from_raw(generate_raw(g, resolution), vertical_scale);
}

// ---------------------------------------------------------------------------
// Mutation of the parameterized noise genomes.

struct GeneSpec {
  double lo = 0.0;
  double hi = 1.0;
  bool integer = false;

  double range() const { return hi - lo; }
};

/// Applies a perturbation and projects back onto the gene's range; integer
/// genes are rounded.
inline double perturb_gene(double value, double delta, const GeneSpec& spec) {
  double v = value + delta;
  if (spec.integer) v = std::round(v);
  return std::clamp(v, spec.lo, spec.hi);
}

struct NoiseMutationConfig {
  double probability = 0.35;     // per gene
  double sigma_fraction = 0.1;   // stddev as a fraction of the gene's range
};

struct MutationConfig {
  NoiseMutationConfig noise;
  CppnMutationConfig cppn;
};

namespace genes {
inline constexpr GeneSpec perlin_scale{1.0, 100.0, false};
inline constexpr GeneSpec perlin_octaves{1.0, 9.0, true};
inline constexpr GeneSpec perlin_persistence{0.1, 0.9, false};
inline constexpr GeneSpec perlin_lacunarity{1.0, 3.0, false};
inline constexpr GeneSpec perlin_seed{0.0, 100.0, true};
inline constexpr GeneSpec ds_corner{-1.0, 1.0, false};
inline constexpr GeneSpec ds_Z{0.0, 50.0, false};
inline constexpr GeneSpec ds_D{1.0, 10.0, true};
inline constexpr GeneSpec generator_seed{0.0, static_cast<double>(kMaxGeneratorSeed), true};
inline constexpr GeneSpec worley_N{2.0, 400.0, true};
inline GeneSpec worley_D_idx(int n) { return {0.0, static_cast<double>(n / 4), true}; }
}  // namespace genes

namespace detail {

inline double mutate_gene(double value, const GeneSpec& spec, Rng& rng, const NoiseMutationConfig& cfg) {
  if (!bernoulli(rng, cfg.probability)) return value;
  return perturb_gene(value, normal(rng, cfg.sigma_fraction * spec.range()), spec);
}

// Seeds have no metric meaning, so a selected seed gene is redrawn.
inline std::int64_t mutate_seed(std::int64_t value, const GeneSpec& spec, Rng& rng, const NoiseMutationConfig& cfg) {
  if (!bernoulli(rng, cfg.probability)) return value;
  return uniform_int(rng, static_cast<long long>(spec.lo), static_cast<long long>(spec.hi));
}

}  // namespace detail

inline PerlinGenome mutate(PerlinGenome g, Rng& rng, const NoiseMutationConfig& cfg = {}) {
  g.scale = detail::mutate_gene(g.scale, genes::perlin_scale, rng, cfg);
  g.octaves = static_cast<int>(detail::mutate_gene(g.octaves, genes::perlin_octaves, rng, cfg));
  g.persistence = detail::mutate_gene(g.persistence, genes::perlin_persistence, rng, cfg);
  g.lacunarity = detail::mutate_gene(g.lacunarity, genes::perlin_lacunarity, rng, cfg);
  g.seed = static_cast<int>(detail::mutate_seed(g.seed, genes::perlin_seed, rng, cfg));
  return g;
}

inline DiamondSquareGenome mutate(DiamondSquareGenome g, Rng& rng, const NoiseMutationConfig& cfg = {}) {
  g.seed = detail::mutate_seed(g.seed, genes::generator_seed, rng, cfg);
  for (double& c : g.corners) c = detail::mutate_gene(c, genes::ds_corner, rng, cfg);
  g.Z = detail::mutate_gene(g.Z, genes::ds_Z, rng, cfg);
  g.D = static_cast<int>(detail::mutate_gene(g.D, genes::ds_D, rng, cfg));
  return g;
}

inline WorleyGenome mutate(WorleyGenome g, Rng& rng, const NoiseMutationConfig& cfg = {}) {
  g.seed = detail::mutate_seed(g.seed, genes::generator_seed, rng, cfg);
  g.N = static_cast<int>(detail::mutate_gene(g.N, genes::worley_N, rng, cfg));
  // D_idx's range depends on N, so it is re-projected even when not selected.
  const GeneSpec d_spec = genes::worley_D_idx(g.N);
  g.D_idx = static_cast<int>(perturb_gene(detail::mutate_gene(g.D_idx, d_spec, rng, cfg), 0.0, d_spec));
  return g;
}

inline Genome mutate(const Genome& g, Rng& rng, const MutationConfig& cfg = {}) {
  return std::visit(
      [&](const auto& v) -> Genome {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CppnGenome>) return mutate_cppn(v, rng, cfg.cppn);
        else return mutate(v, rng, cfg.noise);
      },
      g);
}

inline Genome random_genome(GeneratorKind kind, Rng& rng) {
  switch (kind) {
    case GeneratorKind::perlin: {
      PerlinGenome g;
      g.scale = uniform_real(rng, 1.0, 100.0);
      g.octaves = static_cast<int>(uniform_int(rng, 1, 9));
      g.persistence = uniform_real(rng, 0.1, 0.9);
      g.lacunarity = uniform_real(rng, 1.0, 3.0);
      g.seed = static_cast<int>(uniform_int(rng, 0, 100));
      return g;
    }
    case GeneratorKind::diamond_square: {
      DiamondSquareGenome g;
      g.seed = uniform_int(rng, 0, kMaxGeneratorSeed);
      for (double& c : g.corners) c = uniform_real(rng, -1.0, 1.0);
      g.Z = uniform_real(rng, 0.0, 50.0);
      g.D = static_cast<int>(uniform_int(rng, 1, 10));
      return g;
    }
    case GeneratorKind::worley: {
      WorleyGenome g;
      g.seed = uniform_int(rng, 0, kMaxGeneratorSeed);
      g.N = static_cast<int>(uniform_int(rng, 2, 400));
      g.D_idx = static_cast<int>(uniform_int(rng, 0, g.N / 4));
      return g;
    }
    case GeneratorKind::cppn:
      return random_cppn(rng);
  }
  throw ConfigError("unknown generator kind");
}

// ---------------------------------------------------------------------------
// JSON: {"kind": "<kind>", ...per-kind fields}.

inline nlohmann::json to_json(const Genome& genome) {
  using nlohmann::json;
  return std::visit(
      [](const auto& g) -> json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PerlinGenome>) {
          return json{{"kind", "perlin"}, {"scale", g.scale}, {"octaves", g.octaves},
                      {"persistence", g.persistence}, {"lacunarity", g.lacunarity}, {"seed", g.seed}};
        } else if constexpr (std::is_same_v<T, DiamondSquareGenome>) {
          return json{{"kind", "diamond-square"}, {"seed", g.seed}, {"corners", g.corners}, {"Z", g.Z}, {"D", g.D}};
        } else if constexpr (std::is_same_v<T, WorleyGenome>) {
          return json{{"kind", "worley"}, {"seed", g.seed}, {"N", g.N}, {"D_idx", g.D_idx}};
        } else {
          json nodes = json::array();
          for (const auto& n : g.nodes) nodes.push_back({{"id", n.id}, {"activation", to_string(n.activation)}});
          json conns = json::array();
          for (const auto& c : g.connections)
            conns.push_back({{"source", c.source}, {"target", c.target}, {"weight", c.weight},
                             {"enabled", c.enabled}, {"innovation", c.innovation}});
          return json{{"kind", "cppn"}, {"nodes", nodes}, {"connections", conns},
                      {"innovation_counter", g.innovation_counter}};
        }
      },
      genome);
}

inline Genome genome_from_json(const nlohmann::json& j) {
  try {
    switch (parse_generator_kind(j.at("kind").get<std::string>())) {
      case GeneratorKind::perlin: {
        PerlinGenome g;
        g.scale = j.at("scale").get<double>();
        g.octaves = j.at("octaves").get<int>();
        g.persistence = j.at("persistence").get<double>();
        g.lacunarity = j.at("lacunarity").get<double>();
        g.seed = j.at("seed").get<int>();
        validate(g);
        return g;
      }
      case GeneratorKind::diamond_square: {
        DiamondSquareGenome g;
        g.seed = j.at("seed").get<std::int64_t>();
        g.corners = j.at("corners").get<std::array<double, 4>>();
        g.Z = j.at("Z").get<double>();
        g.D = j.at("D").get<int>();
        validate(g);
        return g;
      }
      case GeneratorKind::worley: {
        WorleyGenome g;
        g.seed = j.at("seed").get<std::int64_t>();
        g.N = j.at("N").get<int>();
        g.D_idx = j.at("D_idx").get<int>();
        validate(g);
        return g;
      }
      case GeneratorKind::cppn: {
        CppnGenome g;
        for (const auto& n : j.at("nodes"))
          g.nodes.push_back({n.at("id").get<int>(), parse_activation(n.at("activation").get<std::string>())});
        for (const auto& c : j.at("connections"))
          g.connections.push_back({c.at("source").get<int>(), c.at("target").get<int>(), c.at("weight").get<double>(),
                                   c.at("enabled").get<bool>(), c.at("innovation").get<int>()});
        g.innovation_counter = j.at("innovation_counter").get<int>();
        validate(g);
        return g;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw GenomeError(std::string("genome json: ") + e.what());
  } catch (const ConfigError& e) {
    throw GenomeError(e.what());
  }
  throw GenomeError("genome json: unknown kind");
}

}  // namespace terracurric
