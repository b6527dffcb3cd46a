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
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "terracurric/archive.hpp"
#include "terracurric/difficulty.hpp"
#include "terracurric/errors.hpp"
#include "terracurric/gp.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

struct GpConfig {
  double rho = 0.4;         // kernel length scale on normalized bin coordinates
  double alpha = 0.9;       // success threshold, fraction of max fitness 1.0
  double kappa = 0.05;      // exploration weight on posterior stddev
  double noise_var = 0.001;
  double matern_nu = 2.5;

  void validate() const {
    if (!(rho > 0.0)) throw ConfigError("gp: rho must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("gp: alpha must lie in (0,1]");
    if (!(kappa >= 0.0)) throw ConfigError("gp: kappa must be >= 0");
    if (!(noise_var > 0.0)) throw ConfigError("gp: noise_var must be > 0");
    MaternKernel{rho, matern_nu}.validate();
  }
};

/// Bin coordinates scaled onto [0,1]^2.
inline std::array<double, 2> normalized_bin(BinIndex b) {
  constexpr double last = static_cast<double>(kBinsPerAxis - 1);
  return {static_cast<double>(b.i) / last, static_cast<double>(b.j) / last};
}

/// Posterior over archive bins with the archive's own fitness map as the
/// prior mean.
class GpModel {
 public:
  GpModel(std::map<BinIndex, double> prior, const GpConfig& cfg)
      : prior_(std::move(prior)), cfg_(cfg), gp_((cfg.validate(), MaternKernel{cfg.rho, cfg.matern_nu}), cfg.noise_var) {}

  GpModel(const Archive& a, const GpConfig& cfg) : GpModel(prior_from(a), cfg) {}

  static std::map<BinIndex, double> prior_from(const Archive& a) {
    std::map<BinIndex, double> prior;
    for (const ArchiveCell* c : a.cells()) prior[c->bin] = fitness(c->difficulty);
    return prior;
  }

  double prior(BinIndex b) const {
    const auto it = prior_.find(b);
    if (it == prior_.end()) throw DomainError("gp: bin has no prior fitness");
    return it->second;
  }

  void observe(BinIndex b, double observed_fitness) { gp_.add(normalized_bin(b), observed_fitness, prior(b)); }

  Posterior posterior(BinIndex b) const { return gp_.posterior(normalized_bin(b), prior(b)); }

  std::size_t observations() const { return gp_.size(); }
  const GpConfig& config() const { return cfg_; }

 private:
  std::map<BinIndex, double> prior_;
  GpConfig cfg_;
  GaussianProcess<2> gp_;
};

/// argmax of mean + kappa * stddev; ties go to the lexicographically lowest bin.
inline BinIndex select_next(const GpModel& m, const std::vector<BinIndex>& remaining) {
  if (remaining.empty()) throw CurriculumExhausted();
  std::optional<BinIndex> best;
  double best_score = 0.0;
  for (const BinIndex& b : remaining) {
    const Posterior p = m.posterior(b);
    const double score = p.mean + m.config().kappa * p.stddev();
    if (!best || score > best_score || (score == best_score && b < *best)) {
      best = b;
      best_score = score;
    }
  }
  return *best;
}

/// Drops `just_trained` and every bin whose posterior mean fitness exceeds
/// that of `just_trained`.
inline std::vector<BinIndex> prune_easier(const GpModel& m, const std::vector<BinIndex>& remaining,
                                          BinIndex just_trained) {
  const double reference = m.posterior(just_trained).mean;
  std::vector<BinIndex> out;
  for (const BinIndex& b : remaining) {
    if (b == just_trained) continue;
    if (m.posterior(b).mean > reference) continue;
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Learners.

class Learner {
 public:
  virtual ~Learner() = default;
  virtual void train(const Heightmap& terrain, int epochs) = 0;
  /// Fitness in [0,1]; must not change the learner's state.
  virtual double evaluate(const Heightmap& terrain) const = 0;
  virtual long epochs_trained() const = 0;
};

/// Desk-scale learner whose walking capability grows linearly with training:
/// capability = base + gain * epochs. Evaluation runs the proxy walker with a
/// stream keyed by (seed, epochs trained).
class CapabilityLearner final : public Learner {
 public:
  struct Config {
    double base_capability = 0.02;  // meters
    double gain = 2.5e-5;           // meters per epoch
    int attempts = 20;
    int best_of = 5;
  };

  CapabilityLearner(Config cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {
    if (!(cfg_.base_capability >= 0.0) || !(cfg_.gain >= 0.0)) throw ConfigError("learner: negative capability or gain");
    eval_cfg_.attempts = cfg_.attempts;
    eval_cfg_.best_of = cfg_.best_of;
    eval_cfg_.validate();
  }

  void train(const Heightmap& /*terrain*/, int epochs) override {
    if (epochs < 0) throw DomainError("learner: negative epoch count");
    epochs_ += epochs;
  }

  double evaluate(const Heightmap& terrain) const override {
    EvaluatorConfig c = eval_cfg_;
    c.capability = capability();
    Rng rng(derive_seed(seed_, "learner-eval", {static_cast<std::uint64_t>(epochs_)}));
    return fitness(proxy_difficulty(terrain, c, rng));
  }

  long epochs_trained() const override { return epochs_; }
  double capability() const { return cfg_.base_capability + cfg_.gain * static_cast<double>(epochs_); }

 private:
  Config cfg_;
  std::uint64_t seed_;
  EvaluatorConfig eval_cfg_;
  long epochs_ = 0;
};

// ---------------------------------------------------------------------------
// Curriculum runs.

struct CurriculumOptions {
  int epochs_per_round = 40;
  long max_epochs = 30000;
  int eval_cap = 100;

  void validate() const {
    if (epochs_per_round < 1) throw ConfigError("curriculum: epochs_per_round must be >= 1");
    if (max_epochs < 1) throw ConfigError("curriculum: max_epochs must be >= 1");
    if (eval_cap < 1) throw ConfigError("curriculum: eval_cap must be >= 1");
  }
};

struct TraceEntry {
  long epoch = 0;
  double hardest_distance = 0.0;  // running max over successfully traversed terrains
  BinIndex bin;
  double observed_fitness = 0.0;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct CurriculumTrace {
  std::vector<TraceEntry> entries;

  double final_hardest() const { return entries.empty() ? 0.0 : entries.back().hardest_distance; }
};

/// Learner failure, carrying the trace recorded before it.
struct CurriculumError : std::runtime_error {
  CurriculumError(const std::string& what, CurriculumTrace partial)
      : std::runtime_error(what), trace(std::move(partial)) {}
  CurriculumTrace trace;
};

/// Euclidean distance of a cell's features from the origin, each feature
/// expressed in units of its archive range.
inline double feature_distance(const ArchiveCell& c, const FeaturePair& pair) {
  const double a = c.features[0] / (pair.ranges[0].max - pair.ranges[0].min);
  const double b = c.features[1] / (pair.ranges[1].max - pair.ranges[1].min);
  return std::hypot(a, b);
}

namespace detail {

struct Attempt {
  double fitness = 0.0;
  bool traversed = false;
};

// Train-then-evaluate rounds until the success threshold, the evaluation cap
// or the epoch budget is hit. Always trains at least once.
inline Attempt train_on(Learner& learner, const Heightmap& hm, double threshold, const CurriculumOptions& opt) {
  Attempt a;
  int evaluations = 0;
  do {
    const long budget = opt.max_epochs - learner.epochs_trained();
    learner.train(hm, static_cast<int>(std::min<long>(opt.epochs_per_round, budget)));
    a.fitness = learner.evaluate(hm);
    ++evaluations;
  } while (a.fitness < threshold && evaluations < opt.eval_cap && learner.epochs_trained() < opt.max_epochs);
  a.traversed = a.fitness >= threshold;
  return a;
}

}  // namespace detail

/// Map-based curriculum: GP selection over the archive, pruning of terrains
/// estimated easier than the one just trained on. Ends when no terrain is
/// left or the epoch budget is spent.
inline CurriculumTrace run_curriculum(const Archive& archive, Learner& learner, const GpConfig& cfg,
                                      const CurriculumOptions& opt = {}) {
  cfg.validate();
  opt.validate();
  if (archive.empty()) throw ConfigError("curriculum: archive is empty");
  GpModel model(archive, cfg);
  std::vector<BinIndex> remaining;
  for (const ArchiveCell* c : archive.cells()) remaining.push_back(c->bin);

  CurriculumTrace trace;
  double hardest = 0.0;
  try {
    while (!remaining.empty() && learner.epochs_trained() < opt.max_epochs) {
      const BinIndex bin = select_next(model, remaining);
      const ArchiveCell& cell = *archive.at(bin);
      const detail::Attempt a = detail::train_on(learner, archive.terrain(cell), cfg.alpha, opt);
      if (a.traversed) hardest = std::max(hardest, feature_distance(cell, archive.pair()));
      model.observe(bin, a.fitness);
      remaining = prune_easier(model, remaining, bin);
      trace.entries.push_back({learner.epochs_trained(), hardest, bin, a.fitness});
    }
  } catch (const std::exception& e) {
    throw CurriculumError(std::string("curriculum: ") + e.what(), trace);
  }
  return trace;
}

/// Sort key for the single-feature baseline: the roughness axis value when
/// the archive has one, otherwise roughness recomputed from the terrain.
inline double roughness_of(const Archive& a, const ArchiveCell& c) {
  if (a.pair().f1.kind == FeatureKind::Roughness) return c.features[0];
  if (a.pair().f2.kind == FeatureKind::Roughness) return c.features[1];
  return describe(a.terrain(c), FeatureDescriptor{FeatureKind::Roughness, 30, 2});
}

/// Terrains of the classic baseline: cells sorted by ascending roughness
/// (ties by bin), taking every `stride`-th.
inline std::vector<BinIndex> classic_order(const Archive& archive, std::size_t stride = 5) {
  std::vector<std::pair<double, BinIndex>> keyed;
  for (const ArchiveCell* c : archive.cells()) keyed.emplace_back(roughness_of(archive, *c), c->bin);
  std::sort(keyed.begin(), keyed.end());
  std::vector<BinIndex> order;
  for (std::size_t i = 0; i < keyed.size(); i += stride) order.push_back(keyed[i].second);
  return order;
}

/// Classic curriculum baseline: fixed roughness-sorted sequence, no GP and no
/// pruning, same per-terrain stopping rule.
inline CurriculumTrace classic_cl(const Archive& archive, Learner& learner, const GpConfig& cfg,
                                  const CurriculumOptions& opt = {}) {
  cfg.validate();
  opt.validate();
  if (archive.empty()) throw ConfigError("curriculum: archive is empty");
  CurriculumTrace trace;
  double hardest = 0.0;
  try {
    for (const BinIndex& bin : classic_order(archive)) {
      if (learner.epochs_trained() >= opt.max_epochs) break;
      const ArchiveCell& cell = *archive.at(bin);
      const detail::Attempt a = detail::train_on(learner, archive.terrain(cell), cfg.alpha, opt);
      if (a.traversed) hardest = std::max(hardest, feature_distance(cell, archive.pair()));
      trace.entries.push_back({learner.epochs_trained(), hardest, bin, a.fitness});
    }
  } catch (const std::exception& e) {
    throw CurriculumError(std::string("curriculum: ") + e.what(), trace);
  }
  return trace;
}

inline void write_csv(std::ostream& os, const CurriculumTrace& t) {
  os << "epoch,hardest_distance,bin_i,bin_j,observed_fitness\n";
  for (const auto& e : t.entries)
    os << e.epoch << ',' << format_double(e.hardest_distance) << ',' << e.bin.i << ',' << e.bin.j << ','
       << format_double(e.observed_fitness) << '\n';
}

inline std::string to_csv(const CurriculumTrace& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

// ---------------------------------------------------------------------------
// Run configuration JSON: GpConfig fields, loop limits and learner settings.

struct CurriculumRunConfig {
  GpConfig gp;
  CurriculumOptions options;
  CapabilityLearner::Config learner;
};

inline CurriculumRunConfig curriculum_config_from_json(const nlohmann::json& j) {
  CurriculumRunConfig c;
  try {
    c.gp.rho = j.value("rho", c.gp.rho);
    c.gp.alpha = j.value("alpha", c.gp.alpha);
    c.gp.kappa = j.value("kappa", c.gp.kappa);
    c.gp.noise_var = j.value("noise_var", c.gp.noise_var);
    c.gp.matern_nu = j.value("matern_nu", c.gp.matern_nu);
    c.options.epochs_per_round = j.value("epochs_per_round", c.options.epochs_per_round);
    c.options.max_epochs = j.value("max_epochs", c.options.max_epochs);
    c.options.eval_cap = j.value("eval_cap", c.options.eval_cap);
    if (j.contains("learner")) {
      const auto& l = j.at("learner");
      c.learner.base_capability = l.value("base_capability", c.learner.base_capability);
      c.learner.gain = l.value("gain", c.learner.gain);
      c.learner.attempts = l.value("attempts", c.learner.attempts);
      c.learner.best_of = l.value("best_of", c.learner.best_of);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("curriculum config: ") + e.what());
  }
  c.gp.validate();
  c.options.validate();
  return c;
}

}  // namespace terracurric
