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

// Command-line front end: generate, evolve, analyze, combine, curriculum,
// heatmap. Exit codes: 0 success, 1 runtime/data failure, 2 usage/config error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "terracurric.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace terracurric;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Configuration problems detected before any output is written.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError("cannot parse " + path + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_file(path.string(), j.dump(2) + "\n"); }

fs::path sidecar_path(const fs::path& p) {
  fs::path s = p;
  return s.replace_extension(".json");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  if (!dir.empty()) fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create directory " + dir.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::int64_t seed = 0;
  std::size_t resolution = 256;
  double vscale = kDefaultVerticalScale;
  double capability = EvaluatorConfig{}.capability;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  const GeneratorKind kind = parse_generator_kind(a.kind);
  if (a.resolution < 3) throw UsageError("--resolution must be >= 3");
  if (!(a.vscale > 0.0)) throw UsageError("--vscale must be > 0");
  const fs::path out(a.out);
  ensure_dir(out.parent_path());

  const auto seed = static_cast<std::uint64_t>(a.seed);
  Rng rng = make_rng(seed, "cli-generate");
  const Genome genome = random_genome(kind, rng);
  const Heightmap hm = generate(genome, a.resolution, a.vscale);
  const ProxyWalkerEvaluator evaluator;
  const double difficulty = evaluator.evaluate(hm, a.capability, derive_seed(seed, "cli-generate-eval"));

  write_pgm(hm, out.string());
  write_json(sidecar_path(out), json{{"genome", to_json(genome)},
                                     {"resolution", a.resolution},
                                     {"vertical_scale", a.vscale},
                                     {"capability", a.capability},
                                     {"difficulty", difficulty}});
  return 0;
}

// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::vector<GeneratorKind> kinds;
  FeaturePair pair;
  bool ranges_given = false;
  std::size_t calibration_samples = 1000;
  EvolutionConfig evolution;
  std::size_t resolution = 256;
  double vertical_scale = kDefaultVerticalScale;
  TraversabilityConfig traversability;
  EvaluatorConfig evaluator;
  std::string evaluator_command;
  bool prune = true;
  fs::path output_dir;
};

ExperimentConfig parse_experiment(const json& j, std::optional<std::uint64_t> seed_override,
                                  const std::string& out_override) {
  ExperimentConfig c;
  try {
    if (j.contains("generators")) {
      for (const auto& k : j.at("generators")) c.kinds.push_back(parse_generator_kind(k.get<std::string>()));
    } else {
      c.kinds.push_back(parse_generator_kind(j.at("generator").get<std::string>()));
    }
    if (c.kinds.empty()) throw UsageError("config: no generator kinds");

    const json features = j.value("features", json::object());
    if (features.contains("f1")) c.pair.f1 = descriptor_from_json(features.at("f1"));
    if (features.contains("f2")) c.pair.f2 = descriptor_from_json(features.at("f2"));
    if (features.contains("ranges")) {
      const auto& r = features.at("ranges");
      for (std::size_t i = 0; i < 2; ++i) c.pair.ranges[i] = {r.at(i).at(0).get<double>(), r.at(i).at(1).get<double>()};
      c.ranges_given = true;
      c.pair.validate();
    } else {
      c.pair.ranges = {FeatureRange{0.0, 1.0}, FeatureRange{0.0, 1.0}};
      c.pair.validate();
    }
    c.calibration_samples = j.value("calibration", json::object()).value("samples", c.calibration_samples);

    const json evo = j.value("evolution", json::object());
    c.evolution.generations = evo.value("generations", c.evolution.generations);
    c.evolution.init_pop = evo.value("init_pop", c.evolution.init_pop);
    c.evolution.batch = evo.value("batch", c.evolution.batch);
    if (seed_override) {
      c.evolution.master_seed = *seed_override;
    } else if (j.contains("seed")) {
      c.evolution.master_seed = j.at("seed").get<std::uint64_t>();
    } else {
      throw UsageError("config: a seed is required (config \"seed\" or --seed)");
    }
    c.evolution.validate();

    c.resolution = j.value("resolution", c.resolution);
    c.vertical_scale = j.value("vertical_scale", c.vertical_scale);
    if (c.resolution < 3) throw UsageError("config: resolution must be >= 3");
    if (!(c.vertical_scale > 0.0)) throw UsageError("config: vertical_scale must be > 0");

    const json ev = j.value("evaluator", json::object());
    c.evaluator.attempts = ev.value("attempts", c.evaluator.attempts);
    c.evaluator.best_of = ev.value("best_of", c.evaluator.best_of);
    c.evaluator.robot_height = ev.value("robot_height", c.evaluator.robot_height);
    c.evaluator.capability = ev.value("capability", c.evaluator.capability);
    c.evaluator_command = ev.value("command", std::string());
    c.evaluator.validate();

    const json tr = j.value("traversability", json::object());
    c.traversability = TraversabilityConfig::for_robot(c.evaluator.robot_height, tr.value("k", std::size_t{26}));
    c.traversability.threshold = tr.value("threshold", c.traversability.threshold);
    c.traversability.validate();
    if (c.traversability.k > c.resolution) throw UsageError("config: traversability k exceeds resolution");
    if (c.pair.f1.kernel > c.resolution || c.pair.f2.kernel > c.resolution)
      throw UsageError("config: feature kernel exceeds resolution");
    c.prune = j.value("prune", true);

    c.output_dir = out_override.empty() ? fs::path(j.value("output_dir", std::string("."))) : fs::path(out_override);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return c;
}

int cmd_evolve(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_dir,
               unsigned jobs) {
  const ExperimentConfig c = parse_experiment(load_json(config_path), seed, out_dir);
  ensure_dir(c.output_dir);

  FeaturePair pair = c.pair;
  if (!c.ranges_given)
    pair.ranges = calibrate_ranges(pair.f1, pair.f2, c.kinds, c.calibration_samples, c.resolution,
                                   derive_seed(c.evolution.master_seed, "calibration"), jobs);

  std::unique_ptr<Evaluator> evaluator;
  if (c.evaluator_command.empty())
    evaluator = std::make_unique<ProxyWalkerEvaluator>(c.evaluator);
  else
    evaluator = std::make_unique<SubprocessEvaluator>(c.evaluator_command, c.output_dir / ".evaluator");

  EvolveOptions opt;
  opt.resolution = c.resolution;
  opt.vertical_scale = c.vertical_scale;
  opt.capability = c.evaluator.capability;
  opt.jobs = jobs;

  json report = json::object();
  std::vector<Archive> archives;
  for (GeneratorKind kind : c.kinds) {
    EvolutionConfig evo = c.evolution;
    evo.master_seed = derive_seed(c.evolution.master_seed, to_string(kind));
    Archive evolved = evolve(kind, pair, evo, *evaluator, opt);
    const std::size_t before = evolved.occupied();
    Archive archive = c.prune ? prune_impossible(evolved, c.traversability, jobs) : std::move(evolved);
    const std::string name(to_string(kind));
    write_json(c.output_dir / ("archive_" + name + ".json"), to_json(archive));
    write_file((c.output_dir / ("heatmap_" + name + ".ppm")).string(), heatmap_ppm(archive));
    report[name] = {{"occupied", archive.occupied()}, {"occupied_before_prune", before},
                    {"coverage_percent", coverage(archive)}};
    std::cout << name << " coverage " << format_double(coverage(archive)) << "% (" << archive.occupied() << "/"
              << Archive::capacity() << ")\n";
    if (c.prune && before > 0 && archive.empty())
      std::cerr << "warning: traversability check removed every " << name
                << " terrain; lower vertical_scale or raise traversability.threshold\n";
    archives.push_back(std::move(archive));
  }
  if (archives.size() > 1) {
    const Archive combined = combine(archives);
    write_json(c.output_dir / "archive_combined.json", to_json(combined));
    write_file((c.output_dir / "heatmap_combined.ppm").string(), heatmap_ppm(combined));
    report["combined"] = {{"occupied", combined.occupied()}, {"coverage_percent", coverage(combined)}};
    std::cout << "combined coverage " << format_double(coverage(combined)) << "% (" << combined.occupied() << "/"
              << Archive::capacity() << ")\n";
  }
  write_json(c.output_dir / "coverage.json", report);
  return 0;
}

// ---------------------------------------------------------------------------

std::vector<FeatureDescriptor> parse_descriptors(const std::string& spec, std::size_t stride) {
  std::vector<FeatureDescriptor> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    FeatureDescriptor d;
    d.stride = stride;
    const auto colon = item.find(':');
    try {
      d.kind = parse_feature_kind(item.substr(0, colon));
      if (colon != std::string::npos) d.kernel = std::stoul(item.substr(colon + 1));
      d.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError("bad descriptor '" + item + "': " + e.what());
    }
    out.push_back(d);
  }
  if (out.empty()) throw UsageError("no descriptors given");
  return out;
}

int cmd_analyze(const std::string& corpus_dir, const std::string& descriptors, std::size_t stride,
                const std::string& out_csv) {
  const auto descs = parse_descriptors(descriptors, stride);
  if (!fs::is_directory(corpus_dir)) throw UsageError("corpus directory not found: " + corpus_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(corpus_dir))
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<Heightmap> corpus;
  std::vector<double> difficulty;
  for (const auto& f : files) {
    const json side = json::parse(read_file(sidecar_path(f).string()));
    corpus.push_back(read_pgm(f.string()));
    difficulty.push_back(side.at("difficulty").get<double>());
  }
  if (corpus.size() < 2) throw std::runtime_error("corpus needs at least two terrains, found " + std::to_string(corpus.size()));
  const CorrelationMatrix m = correlation_matrix(corpus, difficulty, descs);
  const fs::path out(out_csv);
  ensure_dir(out.parent_path());
  write_file(out.string(), to_csv(m));
  return 0;
}

// ---------------------------------------------------------------------------

Archive load_archive(const std::string& path) { return archive_from_json(json::parse(read_file(path))); }

int cmd_combine(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<Archive> archives;
  for (const auto& p : inputs) archives.push_back(load_archive(p));
  const Archive combined = combine(archives);
  const fs::path out(out_path);
  ensure_dir(out.parent_path());
  write_json(out, to_json(combined));
  fs::path ppm = out;
  write_file(ppm.replace_extension(".ppm").string(), heatmap_ppm(combined));
  std::cout << "combined coverage " << format_double(coverage(combined)) << "% (" << combined.occupied() << "/"
            << Archive::capacity() << ")\n";
  return 0;
}

int cmd_heatmap(const std::string& archive_path, const std::string& out_path) {
  const Archive a = load_archive(archive_path);
  const fs::path out(out_path);
  ensure_dir(out.parent_path());
  write_file(out.string(), heatmap_ppm(a));
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_curriculum(const std::string& archive_path, const std::string& config_path, std::optional<std::uint64_t> seed,
                   bool baseline, const std::string& out_csv) {
  json cfg_json = config_path.empty() ? json::object() : load_json(config_path);
  CurriculumRunConfig cfg;
  try {
    cfg = curriculum_config_from_json(cfg_json);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (!seed) {
    if (!cfg_json.contains("seed")) throw UsageError("a seed is required (--seed or config \"seed\")");
    seed = cfg_json.at("seed").get<std::uint64_t>();
  }
  const Archive archive = load_archive(archive_path);
  if (archive.empty()) throw std::runtime_error("archive is empty: " + archive_path);
  const fs::path out(out_csv);
  ensure_dir(out.parent_path());

  CapabilityLearner learner(cfg.learner, *seed);
  const CurriculumTrace trace = baseline ? classic_cl(archive, learner, cfg.gp, cfg.options)
                                         : run_curriculum(archive, learner, cfg.gp, cfg.options);
  write_file(out.string(), to_csv(trace));
  std::cout << (baseline ? "classic" : "map-based") << " curriculum: " << trace.entries.size() << " terrains, "
            << learner.epochs_trained() << " epochs, final hardest distance " << format_double(trace.final_hardest())
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural terrain curricula: MAP-Elites terrain archives and GP-guided traversal"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "Maximum worker threads")->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Expand a random genome into a heightmap (PGM + JSON sidecar)");
  generate_cmd->add_option("--kind", gen.kind, "Generator kind: " + supported_kinds())->required();
  generate_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  generate_cmd->add_option("--resolution", gen.resolution, "Raster side in cells");
  generate_cmd->add_option("--vscale", gen.vscale, "Meters per normalized height unit");
  generate_cmd->add_option("--capability", gen.capability, "Proxy walker capability (m) for the sidecar difficulty");
  generate_cmd->add_option("--out", gen.out, "Output PGM path")->required();

  std::string config_path, out_dir, out_path, archive_path, corpus_dir, descriptors = "TRI:30,TPI:30,Roughness:30";
  std::optional<std::uint64_t> seed;
  std::size_t stride = 2;
  bool baseline = false;
  std::vector<std::string> inputs;

  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve, prune and export MAP-Elites terrain archives");
  evolve_cmd->add_option("--config", config_path, "Experiment config JSON")->required();
  evolve_cmd->add_option("--seed", seed, "Override the config seed");
  evolve_cmd->add_option("--out-dir", out_dir, "Override the config output directory");

  auto* analyze_cmd = app.add_subcommand("analyze", "Correlate descriptors with difficulty over a PGM corpus");
  analyze_cmd->add_option("--corpus", corpus_dir, "Directory of PGM files with JSON difficulty sidecars")->required();
  analyze_cmd->add_option("--descriptors", descriptors, "Comma list of KIND:kernel, e.g. TRI:30,TPI:10");
  analyze_cmd->add_option("--stride", stride, "Window stride")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--out", out_path, "Output CSV")->required();

  auto* combine_cmd = app.add_subcommand("combine", "Merge archives, keeping the fittest cell per bin");
  combine_cmd->add_option("archives", inputs, "Archive JSON files")->required();
  combine_cmd->add_option("--out", out_path, "Output archive JSON (heatmap written alongside)")->required();

  auto* curriculum_cmd = app.add_subcommand("curriculum", "Run a curriculum over an archive and emit its trace CSV");
  curriculum_cmd->add_option("--archive", archive_path, "Archive JSON")->required();
  curriculum_cmd->add_option("--config", config_path, "Curriculum config JSON");
  curriculum_cmd->add_option("--seed", seed, "Learner seed");
  curriculum_cmd->add_flag("--baseline", baseline, "Classic roughness-sorted curriculum instead of GP traversal");
  curriculum_cmd->add_option("--out", out_path, "Output trace CSV")->required();

  auto* heatmap_cmd = app.add_subcommand("heatmap", "Render an archive as a 50x50 fitness PPM");
  heatmap_cmd->add_option("--archive", archive_path, "Archive JSON")->required();
  heatmap_cmd->add_option("--out", out_path, "Output PPM")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate_cmd) return cmd_generate(gen);
    if (*evolve_cmd) return cmd_evolve(config_path, seed, out_dir, jobs);
    if (*analyze_cmd) return cmd_analyze(corpus_dir, descriptors, stride, out_path);
    if (*combine_cmd) return cmd_combine(inputs, out_path);
    if (*curriculum_cmd) return cmd_curriculum(archive_path, config_path, seed, baseline, out_path);
    if (*heatmap_cmd) return cmd_heatmap(archive_path, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
