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
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

struct EvaluatorConfig {
  int attempts = 20;
  int best_of = 5;
  double robot_height = 1.75;  // meters
  double capability = 0.1;     // largest climbable single-cell rise, meters

  void validate() const {
    if (attempts < 1) throw ConfigError("evaluator: attempts must be >= 1");
    if (best_of < 1 || best_of > attempts) throw ConfigError("evaluator: best_of must lie in [1, attempts]");
    if (!(robot_height > 0.0)) throw ConfigError("evaluator: robot_height must be > 0");
    if (!(capability >= 0.0)) throw ConfigError("evaluator: capability must be >= 0");
  }
};

struct TraversabilityConfig {
  std::size_t k = 26;                 // approx. robot step length in cells
  double threshold = 1.75 / 3.0;      // max incline in meters

  static TraversabilityConfig for_robot(double robot_height, std::size_t k = 26) { return {k, robot_height / 3.0}; }

  void validate() const {
    if (k < 2) throw ConfigError("traversability: k must be >= 2");
    if (!(threshold > 0.0)) throw ConfigError("traversability: threshold must be > 0");
  }
};

namespace detail {

// Sliding extreme over windows of length k along a strided 1-D sequence.
template <typename Cmp>
void sliding_extreme(const double* in, std::size_t n, std::size_t stride, std::size_t k, double* out, Cmp better) {
  for (std::size_t i = 0; i + k <= n; ++i) {
    double best = in[i * stride];
    for (std::size_t j = 1; j < k; ++j) {
      const double v = in[(i + j) * stride];
      if (better(v, best)) best = v;
    }
    out[i] = best;
  }
}

}  // namespace detail

/// Largest (max - min) height in meters over every k x k window at stride 1.
inline double max_window_rise(const Heightmap& hm, std::size_t k) {
  if (k < 1 || k > hm.width() || k > hm.height()) throw DimensionError("traversability window exceeds raster");
  const std::size_t W = hm.width(), H = hm.height();
  const std::size_t nc = W - k + 1, nr = H - k + 1;
  const double* data = hm.values().data();
  // Separable: row-wise extremes first, then column-wise over those.
  std::vector<double> row_max(H * nc), row_min(H * nc);
  for (std::size_t r = 0; r < H; ++r) {
    detail::sliding_extreme(data + r * W, W, 1, k, row_max.data() + r * nc, std::greater<>());
    detail::sliding_extreme(data + r * W, W, 1, k, row_min.data() + r * nc, std::less<>());
  }
  std::vector<double> col_max(nr), col_min(nr);
  double worst = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    detail::sliding_extreme(row_max.data() + c, H, nc, k, col_max.data(), std::greater<>());
    detail::sliding_extreme(row_min.data() + c, H, nc, k, col_min.data(), std::less<>());
    for (std::size_t r = 0; r < nr; ++r) worst = std::max(worst, col_max[r] - col_min[r]);
  }
  return worst * hm.vertical_scale();
}

/// Impossible-terrain check: true iff no k x k window spans a height range
/// above the threshold.
inline bool check_terrain(const Heightmap& hm, const TraversabilityConfig& c) {
  c.validate();
  return max_window_rise(hm, c.k) <= c.threshold;
}

/// Fraction of a row a walker of the given capability covers starting at
/// column 0 and moving in +column direction; it stops at the first step whose
/// rise exceeds the capability.
inline double walk_row(const Heightmap& hm, std::size_t row, double capability) {
  const std::size_t W = hm.width();
  std::size_t steps = 0;
  while (steps + 1 < W && hm.meters(row, steps + 1) - hm.meters(row, steps) <= capability) ++steps;
  return static_cast<double>(steps) / static_cast<double>(W - 1);
}

/// Deterministic stand-in for a physics rollout: `attempts` walks from random
/// start rows; difficulty = 1 - mean of the best `best_of` distances.
inline double proxy_difficulty(const Heightmap& hm, const EvaluatorConfig& c, Rng& rng) {
  c.validate();
  std::vector<double> distances(static_cast<std::size_t>(c.attempts));
  for (auto& d : distances) {
    const auto row = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(hm.height()) - 1));
    d = walk_row(hm, row, c.capability);
  }
  std::partial_sort(distances.begin(), distances.begin() + c.best_of, distances.end(), std::greater<>());
  const double best = std::accumulate(distances.begin(), distances.begin() + c.best_of, 0.0) / c.best_of;
  return std::clamp(1.0 - best, 0.0, 1.0);
}

inline double fitness(double difficulty) {
  if (!(difficulty >= 0.0 && difficulty <= 1.0)) throw DomainError("fitness: difficulty outside [0,1]");
  return 1.0 - difficulty;
}

// ---------------------------------------------------------------------------
// Evaluator contract.

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  /// Difficulty in [0,1]. `stream_seed` identifies the private random stream
  /// of this evaluation; implementations must be safe to call concurrently.
  virtual double evaluate(const Heightmap& hm, double capability, std::uint64_t stream_seed) const = 0;
};

class ProxyWalkerEvaluator final : public Evaluator {
 public:
  explicit ProxyWalkerEvaluator(EvaluatorConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  double evaluate(const Heightmap& hm, double capability, std::uint64_t stream_seed) const override {
    EvaluatorConfig c = cfg_;
    c.capability = capability;
    Rng rng(stream_seed);
    return proxy_difficulty(hm, c, rng);
  }

  const EvaluatorConfig& config() const { return cfg_; }

 private:
  EvaluatorConfig cfg_;
};

/// Drives an external evaluator process over a line-delimited protocol.
/// Each request is "<pgm path> <capability>\n"; the reply is one line holding
/// a decimal difficulty in [0,1]. Requests are serialized.
class SubprocessEvaluator final : public Evaluator {
 public:
  SubprocessEvaluator(const std::string& command, std::filesystem::path scratch_dir)
      : scratch_(std::move(scratch_dir)) {
    std::filesystem::create_directories(scratch_);
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) throw EvaluatorError("evaluator: pipe() failed");
    pid_ = fork();
    if (pid_ < 0) throw EvaluatorError("evaluator: fork() failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    signal(SIGPIPE, SIG_IGN);
    request_ = fdopen(to_child[1], "w");
    reply_ = fdopen(from_child[0], "r");
    if (!request_ || !reply_) throw EvaluatorError("evaluator: fdopen() failed");
  }

  SubprocessEvaluator(const SubprocessEvaluator&) = delete;
  SubprocessEvaluator& operator=(const SubprocessEvaluator&) = delete;

  ~SubprocessEvaluator() override {
    if (request_) std::fclose(request_);
    if (reply_) std::fclose(reply_);
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
    }
  }

  double evaluate(const Heightmap& hm, double capability, std::uint64_t stream_seed) const override {
    std::lock_guard lock(mu_);
    const auto path = scratch_ / ("terrain_" + std::to_string(stream_seed) + ".pgm");
    write_pgm(hm, path.string());
    const std::string line = path.string() + " " + format_double(capability) + "\n";
    if (std::fputs(line.c_str(), request_) == EOF || std::fflush(request_) != 0)
      throw EvaluatorError("evaluator: failed to send request");
    std::string reply;
    for (int ch = std::fgetc(reply_); ch != EOF && ch != '\n'; ch = std::fgetc(reply_))
      reply.push_back(static_cast<char>(ch));
    std::filesystem::remove(path);
    while (!reply.empty() && (reply.back() == '\r' || reply.back() == ' ')) reply.pop_back();
    double value = 0.0;
    auto [p, ec] = std::from_chars(reply.data(), reply.data() + reply.size(), value);
    if (reply.empty() || ec != std::errc() || p != reply.data() + reply.size())
      throw EvaluatorError("evaluator: malformed reply '" + reply + "'");
    if (!(value >= 0.0 && value <= 1.0)) throw EvaluatorError("evaluator: difficulty outside [0,1]: " + reply);
    return value;
  }

 private:
  std::filesystem::path scratch_;
  pid_t pid_ = -1;
  std::FILE* request_ = nullptr;
  std::FILE* reply_ = nullptr;
  mutable std::mutex mu_;
};

}  // namespace terracurric
