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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "terracurric/difficulty.hpp"
#include "terracurric/errors.hpp"
#include "terracurric/features.hpp"
#include "terracurric/genome.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/parallel.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

inline constexpr std::size_t kBinsPerAxis = 50;

struct FeatureRange {
  double min = 0.0;
  double max = 1.0;

  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

/// The two archive axes and the value range binned along each.
struct FeaturePair {
  FeatureDescriptor f1{FeatureKind::Roughness, 30, 2};
  FeatureDescriptor f2{FeatureKind::TPI, 30, 2};
  std::array<FeatureRange, 2> ranges{};

  void validate() const {
    f1.validate();
    f2.validate();
    if (f1.kind == f2.kind) throw ConfigError("feature pair must use two distinct descriptor kinds");
    for (const auto& r : ranges)
      if (!(r.max > r.min) || !std::isfinite(r.min) || !std::isfinite(r.max))
        throw ConfigError("feature range must satisfy max > min");
  }

  friend bool operator==(const FeaturePair&, const FeaturePair&) = default;
};

using Features = std::array<double, 2>;

struct BinIndex {
  std::size_t i = 0;
  std::size_t j = 0;

  friend auto operator<=>(const BinIndex&, const BinIndex&) = default;
};

inline std::size_t bin_of(double f, const FeatureRange& r, std::size_t bins = kBinsPerAxis) {
  if (!std::isfinite(f)) throw DomainError("bin_index: non-finite feature value");
  const double t = std::floor((f - r.min) / (r.max - r.min) * static_cast<double>(bins));
  return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
}

/// Out-of-range values clamp to the edge bins; the range maximum lands in the
/// last bin.
inline BinIndex bin_index(const Features& f, const std::array<FeatureRange, 2>& ranges,
                          std::size_t bins = kBinsPerAxis) {
  for (const auto& r : ranges)
    if (!(r.max > r.min)) throw ConfigError("bin_index: degenerate feature range");
  return {bin_of(f[0], ranges[0], bins), bin_of(f[1], ranges[1], bins)};
}

struct ArchiveCell {
  Genome genome;
  Features features{};
  double difficulty = 0.0;
  BinIndex bin;
};

enum class InsertOutcome { placed, replaced, rejected };

/// 50 x 50 MAP-Elites grid. Cells keep genomes only; rasters are regenerated
/// on demand with the archive's resolution and vertical scale.
class Archive {
 public:
  Archive(FeaturePair pair, std::string generator_kind, std::size_t resolution,
          double vertical_scale = kDefaultVerticalScale)
      : pair_(std::move(pair)),
        generator_kind_(std::move(generator_kind)),
        resolution_(resolution),
        vertical_scale_(vertical_scale),
        cells_(kBinsPerAxis * kBinsPerAxis) {
    pair_.validate();
    if (resolution_ < 3) throw ConfigError("archive resolution must be >= 3");
  }

  const FeaturePair& pair() const { return pair_; }
  const std::string& generator_kind() const { return generator_kind_; }
  std::size_t resolution() const { return resolution_; }
  double vertical_scale() const { return vertical_scale_; }

  static constexpr std::size_t capacity() { return kBinsPerAxis * kBinsPerAxis; }

  const std::optional<ArchiveCell>& at(BinIndex b) const { return cells_.at(b.i * kBinsPerAxis + b.j); }

  std::size_t occupied() const {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.has_value(); }));
  }

  bool empty() const { return occupied() == 0; }

  /// Occupied cells in row-major bin order.
  std::vector<const ArchiveCell*> cells() const {
    std::vector<const ArchiveCell*> out;
    for (const auto& c : cells_)
      if (c) out.push_back(&*c);
    return out;
  }

  ArchiveCell make_cell(Genome genome, const Features& features, double difficulty) const {
    return {std::move(genome), features, difficulty, bin_index(features, pair_.ranges)};
  }

  /// Empty bin: placed. Occupied bin: the candidate replaces the incumbent
  /// only if strictly less difficult.
  InsertOutcome insert(ArchiveCell cell) {
    if (!(cell.difficulty >= 0.0 && cell.difficulty <= 1.0)) throw DomainError("insert: difficulty outside [0,1]");
    if (cell.bin != bin_index(cell.features, pair_.ranges)) throw DomainError("insert: bin does not match features");
    auto& slot = cells_[cell.bin.i * kBinsPerAxis + cell.bin.j];
    if (!slot) {
      slot = std::move(cell);
      return InsertOutcome::placed;
    }
    if (cell.difficulty < slot->difficulty) {
      slot = std::move(cell);
      return InsertOutcome::replaced;
    }
    return InsertOutcome::rejected;
  }

  void erase(BinIndex b) { cells_.at(b.i * kBinsPerAxis + b.j).reset(); }

  Heightmap terrain(const ArchiveCell& c) const { return generate(c.genome, resolution_, vertical_scale_); }

 private:
  FeaturePair pair_;
  std::string generator_kind_;
  std::size_t resolution_;
  double vertical_scale_;
  std::vector<std::optional<ArchiveCell>> cells_;
};

/// Occupied bins as a percentage of the 2500-bin grid.
inline double coverage(std::size_t occupied) {
  return 100.0 * static_cast<double>(occupied) / static_cast<double>(Archive::capacity());
}

inline double coverage(const Archive& a) { return coverage(a.occupied()); }

inline Features describe_pair(const Heightmap& hm, const FeaturePair& pair) {
  return {describe(hm, pair.f1), describe(hm, pair.f2)};
}

// ---------------------------------------------------------------------------
// Evolution.

struct EvolutionConfig {
  int generations = 5000;
  int init_pop = 100;
  int batch = 20;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (generations < 0) throw ConfigError("evolution: generations must be >= 0");
    if (init_pop < 1) throw ConfigError("evolution: init_pop must be >= 1");
    if (batch < 1) throw ConfigError("evolution: batch must be >= 1");
  }
};

struct EvolveOptions {
  std::size_t resolution = 256;
  double vertical_scale = kDefaultVerticalScale;
  double capability = EvaluatorConfig{}.capability;
  unsigned jobs = 1;
  MutationConfig mutation;
  std::function<void(int generation, const Archive&)> on_generation;
};

/// Evaluation failure annotated with the identity of the offending terrain.
struct EvolutionError : EvaluatorError {
  using EvaluatorError::EvaluatorError;
};

namespace detail {

struct Offspring {
  Genome genome;
  Features features{};
  double difficulty = 0.0;
};

inline void evaluate_offspring(Offspring& o, const FeaturePair& pair, const Evaluator& evaluator,
                               const EvolveOptions& opt, std::uint64_t stream_seed, const std::string& identity) {
  try {
    const Heightmap hm = generate(o.genome, opt.resolution, opt.vertical_scale);
    o.features = describe_pair(hm, pair);
    o.difficulty = evaluator.evaluate(hm, opt.capability, stream_seed);
    if (!(o.difficulty >= 0.0 && o.difficulty <= 1.0))
      throw EvaluatorError("difficulty outside [0,1]: " + format_double(o.difficulty));
  } catch (const std::exception& e) {
    throw EvolutionError(identity + ": " + e.what());
  }
}

}  // namespace detail

/// MAP-Elites: init_pop random genomes, then `generations` rounds of `batch`
/// uniformly chosen parents, mutated, evaluated in parallel and inserted in
/// offspring order. Every random draw comes from a stream keyed by
/// (master_seed, phase, generation, index), so the result does not depend on
/// opt.jobs.
inline Archive evolve(GeneratorKind kind, const FeaturePair& pair, const EvolutionConfig& cfg,
                      const Evaluator& evaluator, const EvolveOptions& opt = {}) {
  cfg.validate();
  Archive archive(pair, std::string(to_string(kind)), opt.resolution, opt.vertical_scale);
  const std::uint64_t seed = cfg.master_seed;

  std::vector<detail::Offspring> init(static_cast<std::size_t>(cfg.init_pop));
  parallel_for(init.size(), opt.jobs, [&](std::size_t i) {
    Rng rng = make_rng(seed, "init-genome", {i});
    init[i].genome = random_genome(kind, rng);
    detail::evaluate_offspring(init[i], pair, evaluator, opt, derive_seed(seed, "init-eval", {i}),
                               "initial genome " + std::to_string(i));
  });
  for (auto& o : init) archive.insert(archive.make_cell(std::move(o.genome), o.features, o.difficulty));
  if (opt.on_generation) opt.on_generation(-1, archive);

  std::vector<detail::Offspring> batch(static_cast<std::size_t>(cfg.batch));
  for (int gen = 0; gen < cfg.generations; ++gen) {
    const auto parents = archive.cells();
    const auto g = static_cast<std::uint64_t>(gen);
    parallel_for(batch.size(), opt.jobs, [&](std::size_t i) {
      Rng rng = make_rng(seed, "offspring", {g, i});
      const auto pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(parents.size()) - 1));
      batch[i].genome = mutate(parents[pick]->genome, rng, opt.mutation);
      detail::evaluate_offspring(batch[i], pair, evaluator, opt, derive_seed(seed, "offspring-eval", {g, i}),
                                 "generation " + std::to_string(gen) + " offspring " + std::to_string(i));
    });
    for (auto& o : batch) archive.insert(archive.make_cell(std::move(o.genome), o.features, o.difficulty));
    if (opt.on_generation) opt.on_generation(gen, archive);
  }
  return archive;
}

/// Removes every cell whose regenerated terrain fails check_terrain.
inline Archive prune_impossible(const Archive& a, const TraversabilityConfig& tc, unsigned jobs = 1) {
  tc.validate();
  const auto cells = a.cells();
  std::vector<char> keep(cells.size(), 0);
  parallel_for(cells.size(), jobs, [&](std::size_t i) { keep[i] = check_terrain(a.terrain(*cells[i]), tc) ? 1 : 0; });
  Archive out(a.pair(), a.generator_kind(), a.resolution(), a.vertical_scale());
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (keep[i]) out.insert(*cells[i]);
  return out;
}

/// Per bin, the least difficult cell across all inputs (first input wins ties).
inline Archive combine(const std::vector<Archive>& archives, std::string label = "combined") {
  if (archives.empty()) throw ConfigError("combine: no archives given");
  const Archive& first = archives.front();
  Archive out(first.pair(), std::move(label), first.resolution(), first.vertical_scale());
  for (const auto& a : archives) {
    if (!(a.pair() == first.pair())) throw ConfigError("combine: archives use different feature pairs or ranges");
    if (a.resolution() != first.resolution() || a.vertical_scale() != first.vertical_scale())
      throw ConfigError("combine: archives use different terrain resolution or vertical scale");
    for (const ArchiveCell* c : a.cells()) out.insert(*c);
  }
  return out;
}

/// Shared feature ranges from a pooled random corpus: [0, 99th percentile]
/// per feature. Genome i is drawn from kinds[i % kinds.size()].
inline std::array<FeatureRange, 2> calibrate_ranges(const FeatureDescriptor& f1, const FeatureDescriptor& f2,
                                                    const std::vector<GeneratorKind>& kinds, std::size_t samples,
                                                    std::size_t resolution, std::uint64_t seed, unsigned jobs = 1) {
  if (kinds.empty() || samples == 0) throw ConfigError("calibrate_ranges: need generator kinds and samples");
  std::vector<double> a(samples), b(samples);
  parallel_for(samples, jobs, [&](std::size_t i) {
    Rng rng = make_rng(seed, "calibration", {i});
    const Heightmap hm = generate(random_genome(kinds[i % kinds.size()], rng), resolution);
    a[i] = describe(hm, f1);
    b[i] = describe(hm, f2);
  });
  auto p99 = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(v.size())));
    return v[std::max<std::size_t>(rank, 1) - 1];
  };
  std::array<FeatureRange, 2> out{FeatureRange{0.0, p99(a)}, FeatureRange{0.0, p99(b)}};
  for (const auto& r : out)
    if (!(r.max > 0.0)) throw ConfigError("calibrate_ranges: degenerate calibration corpus");
  return out;
}

// ---------------------------------------------------------------------------
// Serialization.

inline nlohmann::json to_json(const FeatureDescriptor& d) {
  return {{"kind", to_string(d.kind)}, {"kernel", d.kernel}, {"stride", d.stride}};
}

inline FeatureDescriptor descriptor_from_json(const nlohmann::json& j) {
  FeatureDescriptor d;
  d.kind = parse_feature_kind(j.at("kind").get<std::string>());
  d.kernel = j.value("kernel", std::size_t{30});
  d.stride = j.value("stride", std::size_t{2});
  d.validate();
  return d;
}

inline nlohmann::json to_json(const FeaturePair& p) {
  return {{"f1", to_json(p.f1)},
          {"f2", to_json(p.f2)},
          {"ranges", {{p.ranges[0].min, p.ranges[0].max}, {p.ranges[1].min, p.ranges[1].max}}}};
}

inline FeaturePair feature_pair_from_json(const nlohmann::json& j) {
  FeaturePair p;
  p.f1 = descriptor_from_json(j.at("f1"));
  p.f2 = descriptor_from_json(j.at("f2"));
  const auto& r = j.at("ranges");
  for (std::size_t i = 0; i < 2; ++i) p.ranges[i] = {r.at(i).at(0).get<double>(), r.at(i).at(1).get<double>()};
  p.validate();
  return p;
}

inline nlohmann::json to_json(const Archive& a) {
  nlohmann::json cells = nlohmann::json::array();
  for (const ArchiveCell* c : a.cells())
    cells.push_back({{"bin", {c->bin.i, c->bin.j}},
                     {"genome", to_json(c->genome)},
                     {"features", {c->features[0], c->features[1]}},
                     {"difficulty", c->difficulty}});
  return {{"feature_pair", to_json(a.pair())},
          {"generator_kind", a.generator_kind()},
          {"resolution", a.resolution()},
          {"vertical_scale", a.vertical_scale()},
          {"bins", kBinsPerAxis},
          {"cells", cells}};
}

inline Archive archive_from_json(const nlohmann::json& j) {
  try {
    if (j.value("bins", kBinsPerAxis) != kBinsPerAxis) throw FormatError("archive: only 50x50 archives are supported");
    Archive a(feature_pair_from_json(j.at("feature_pair")), j.at("generator_kind").get<std::string>(),
              j.at("resolution").get<std::size_t>(), j.value("vertical_scale", kDefaultVerticalScale));
    for (const auto& c : j.at("cells")) {
      ArchiveCell cell{genome_from_json(c.at("genome")),
                       {c.at("features").at(0).get<double>(), c.at("features").at(1).get<double>()},
                       c.at("difficulty").get<double>(),
                       {c.at("bin").at(0).get<std::size_t>(), c.at("bin").at(1).get<std::size_t>()}};
      if (cell.bin.i >= kBinsPerAxis || cell.bin.j >= kBinsPerAxis) throw FormatError("archive: bin out of range");
      if (a.at(cell.bin)) throw FormatError("archive: duplicate bin");
      a.insert(std::move(cell));
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("archive json: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("archive json: ") + e.what());
  }
}

/// 50x50 binary PPM. Unoccupied bins are black; occupied bins are grey,
/// darker for fitter (less difficult) terrain. x follows the first feature,
/// y the second with the origin at the bottom-left.
inline std::string heatmap_ppm(const Archive& a) {
  std::string out = "P6\n" + std::to_string(kBinsPerAxis) + " " + std::to_string(kBinsPerAxis) + "\n255\n";
  for (std::size_t y = 0; y < kBinsPerAxis; ++y) {
    for (std::size_t x = 0; x < kBinsPerAxis; ++x) {
      const auto& cell = a.at({x, kBinsPerAxis - 1 - y});
      unsigned char v = 0;
      if (cell) v = static_cast<unsigned char>(std::lround(255.0 - 215.0 * fitness(cell->difficulty)));
      out.append(3, static_cast<char>(v));
    }
  }
  return out;
}

}  // namespace terracurric
