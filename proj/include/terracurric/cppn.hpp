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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"
#include "terracurric/rng.hpp"

namespace terracurric {

enum class Activation { sigmoid, gaussian, sine, identity };

inline constexpr std::array<Activation, 4> kActivations{Activation::sigmoid, Activation::gaussian,
                                                        Activation::sine, Activation::identity};

inline std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::gaussian: return "gaussian";
    case Activation::sine: return "sine";
    case Activation::identity: return "identity";
  }
  return "identity";
}

inline Activation parse_activation(std::string_view s) {
  for (Activation a : kActivations)
    if (to_string(a) == s) return a;
  throw GenomeError("cppn: unknown activation '" + std::string(s) + "'");
}

inline double activate(Activation a, double x) {
  switch (a) {
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::gaussian: return std::exp(-x * x);
    case Activation::sine: return std::sin(x);
    case Activation::identity: return x;
  }
  return x;
}

struct CppnNode {
  int id = 0;
  Activation activation = Activation::identity;

  friend bool operator==(const CppnNode&, const CppnNode&) = default;
};

struct CppnConnection {
  int source = 0;
  int target = 0;
  double weight = 0.0;
  bool enabled = true;
  int innovation = 0;

  friend bool operator==(const CppnConnection&, const CppnConnection&) = default;
};

/// Feed-forward CPPN. Node ids 0, 1, 2 are the row, column and bias inputs;
/// id 3 is the height output; hidden nodes use ids >= 4.
struct CppnGenome {
  static constexpr int kRowInput = 0;
  static constexpr int kColInput = 1;
  static constexpr int kBiasInput = 2;
  static constexpr int kOutput = 3;
  static constexpr int kInputCount = 3;

  std::vector<CppnNode> nodes;
  std::vector<CppnConnection> connections;
  int innovation_counter = 0;

  static bool is_input(int id) { return id >= 0 && id < kInputCount; }

  bool has_node(int id) const {
    return std::any_of(nodes.begin(), nodes.end(), [id](const CppnNode& n) { return n.id == id; });
  }

  int next_node_id() const {
    int id = kOutput;
    for (const auto& n : nodes) id = std::max(id, n.id);
    return id + 1;
  }

  friend bool operator==(const CppnGenome&, const CppnGenome&) = default;
};

struct CppnMutationConfig {
  double weight_perturb_prob = 0.8;
  double weight_sigma = 0.5;
  double weight_reset_prob = 0.1;
  double add_connection_prob = 0.1;
  double add_node_prob = 0.05;
  int add_connection_attempts = 20;
};

namespace detail {

// Topological order over non-input nodes using every connection (enabled or
// not); nullopt when the graph has a cycle.
inline std::optional<std::vector<int>> topological_order(const CppnGenome& g) {
  std::unordered_map<int, int> indegree;
  std::unordered_map<int, std::vector<int>> out_edges;
  for (const auto& n : g.nodes) indegree[n.id] = 0;
  for (const auto& c : g.connections) {
    ++indegree[c.target];
    out_edges[c.source].push_back(c.target);
  }
  std::vector<int> ready;
  for (const auto& n : g.nodes)
    if (indegree[n.id] == 0) ready.push_back(n.id);
  std::vector<int> order;
  while (!ready.empty()) {
    // Smallest id first keeps the order independent of hash-map iteration.
    const auto it = std::min_element(ready.begin(), ready.end());
    const int id = *it;
    ready.erase(it);
    order.push_back(id);
    for (int t : out_edges[id])
      if (--indegree[t] == 0) ready.push_back(t);
  }
  if (order.size() != g.nodes.size()) return std::nullopt;
  return order;
}

inline bool creates_cycle(const CppnGenome& g, int source, int target) {
  if (source == target) return true;
  // Adding source->target closes a cycle iff target already reaches source.
  std::vector<int> stack{target};
  std::vector<int> seen;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (id == source) return true;
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
    seen.push_back(id);
    for (const auto& c : g.connections)
      if (c.source == id) stack.push_back(c.target);
  }
  return false;
}

}  // namespace detail

inline void validate(const CppnGenome& g) {
  for (int id = 0; id <= CppnGenome::kOutput; ++id)
    if (!g.has_node(id)) throw GenomeError("cppn: missing input/output node " + std::to_string(id));
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].id < 0) throw GenomeError("cppn: negative node id");
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j)
      if (g.nodes[i].id == g.nodes[j].id) throw GenomeError("cppn: duplicate node id");
  }
  for (const auto& c : g.connections) {
    if (!g.has_node(c.source) || !g.has_node(c.target))
      throw GenomeError("cppn: connection references a missing node");
    if (CppnGenome::is_input(c.target)) throw GenomeError("cppn: connection into an input node");
    if (c.source == CppnGenome::kOutput) throw GenomeError("cppn: connection out of the output node");
    if (!std::isfinite(c.weight)) throw GenomeError("cppn: non-finite weight");
  }
  if (!detail::topological_order(g)) throw GenomeError("cppn: cycle detected");
}

/// Evaluation plan resolved once per genome so rasters do not re-sort the graph.
class CompiledCppn {
 public:
  explicit CompiledCppn(const CppnGenome& g) {
    validate(g);
    const auto order = *detail::topological_order(g);
    std::unordered_map<int, std::size_t> slot;
    for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = i;
    activations_.resize(order.size());
    incoming_.resize(order.size());
    for (const auto& n : g.nodes) activations_[slot[n.id]] = n.activation;
    for (const auto& c : g.connections)
      if (c.enabled) incoming_[slot[c.target]].push_back({slot[c.source], c.weight});
    row_ = slot[CppnGenome::kRowInput];
    col_ = slot[CppnGenome::kColInput];
    bias_ = slot[CppnGenome::kBiasInput];
    output_ = slot[CppnGenome::kOutput];
    values_.resize(order.size());
  }

  double operator()(double row_norm, double col_norm) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i == row_) {
        values_[i] = row_norm;
      } else if (i == col_) {
        values_[i] = col_norm;
      } else if (i == bias_) {
        values_[i] = 1.0;
      } else {
        double sum = 0.0;
        for (const auto& [src, w] : incoming_[i]) sum += w * values_[src];
        values_[i] = activate(activations_[i], sum);
      }
    }
    return values_[output_];
  }

 private:
  struct Edge {
    std::size_t source;
    double weight;
  };
  std::vector<Activation> activations_;
  std::vector<std::vector<Edge>> incoming_;
  std::vector<double> values_;
  std::size_t row_ = 0, col_ = 0, bias_ = 0, output_ = 0;
};

inline double cppn_eval(const CppnGenome& g, double row_norm, double col_norm) {
  CompiledCppn net(g);
  return net(row_norm, col_norm);
}

/// Raw CPPN raster; rows and columns are mapped onto [-1, 1].
inline Grid cppn_grid(const CppnGenome& g, std::size_t resolution) {
  if (resolution < 2) throw DimensionError("cppn: resolution must be >= 2");
  CompiledCppn net(g);
  Grid out(resolution, resolution);
  const double denom = static_cast<double>(resolution - 1);
  for (std::size_t r = 0; r < resolution; ++r)
    for (std::size_t c = 0; c < resolution; ++c)
      out.at(r, c) = net(-1.0 + 2.0 * static_cast<double>(r) / denom, -1.0 + 2.0 * static_cast<double>(c) / denom);
  return out;
}

inline Activation random_activation(Rng& rng) {
  return kActivations[static_cast<std::size_t>(uniform_int(rng, 0, kActivations.size() - 1))];
}

/// Minimal topology: the three inputs fully connected to the output.
inline CppnGenome random_cppn(Rng& rng) {
  CppnGenome g;
  g.nodes = {{CppnGenome::kRowInput, Activation::identity},
             {CppnGenome::kColInput, Activation::identity},
             {CppnGenome::kBiasInput, Activation::identity},
             {CppnGenome::kOutput, random_activation(rng)}};
  for (int src = 0; src < CppnGenome::kInputCount; ++src)
    g.connections.push_back({src, CppnGenome::kOutput, uniform_real(rng, -1.0, 1.0), true, g.innovation_counter++});
  return g;
}

/// NEAT-style structural and weight mutation. The result is always acyclic.
inline CppnGenome mutate_cppn(CppnGenome g, Rng& rng, const CppnMutationConfig& cfg = {}) {
  if (bernoulli(rng, cfg.weight_perturb_prob)) {
    for (auto& c : g.connections) {
      if (bernoulli(rng, cfg.weight_reset_prob))
        c.weight = uniform_real(rng, -1.0, 1.0);
      else
        c.weight += normal(rng, cfg.weight_sigma);
    }
  }

  if (bernoulli(rng, cfg.add_connection_prob)) {
    std::vector<int> sources, targets;
    for (const auto& n : g.nodes) {
      if (n.id != CppnGenome::kOutput) sources.push_back(n.id);
      if (!CppnGenome::is_input(n.id)) targets.push_back(n.id);
    }
    for (int attempt = 0; attempt < cfg.add_connection_attempts; ++attempt) {
      const int s = sources[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(sources.size()) - 1))];
      const int t = targets[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(targets.size()) - 1))];
      const bool exists = std::any_of(g.connections.begin(), g.connections.end(),
                                      [&](const CppnConnection& c) { return c.source == s && c.target == t; });
      if (exists || detail::creates_cycle(g, s, t)) continue;
      g.connections.push_back({s, t, uniform_real(rng, -1.0, 1.0), true, g.innovation_counter++});
      break;
    }
  }

  if (bernoulli(rng, cfg.add_node_prob)) {
    std::vector<std::size_t> enabled;
    for (std::size_t i = 0; i < g.connections.size(); ++i)
      if (g.connections[i].enabled) enabled.push_back(i);
    if (!enabled.empty()) {
      const std::size_t pick =
          enabled[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(enabled.size()) - 1))];
      const CppnConnection split = g.connections[pick];
      g.connections[pick].enabled = false;
      const int id = g.next_node_id();
      g.nodes.push_back({id, random_activation(rng)});
      g.connections.push_back({split.source, id, 1.0, true, g.innovation_counter++});
      g.connections.push_back({id, split.target, split.weight, true, g.innovation_counter++});
    }
  }
  return g;
}

}  // namespace terracurric
