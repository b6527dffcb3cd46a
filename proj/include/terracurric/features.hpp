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
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "terracurric/errors.hpp"
#include "terracurric/heightmap.hpp"

namespace terracurric {

enum class FeatureKind { TRI, TPI, Roughness };

inline std::string_view to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::TRI: return "TRI";
    case FeatureKind::TPI: return "TPI";
    case FeatureKind::Roughness: return "Roughness";
  }
  return "TRI";
}

inline FeatureKind parse_feature_kind(std::string_view s) {
  if (s == "TRI") return FeatureKind::TRI;
  if (s == "TPI") return FeatureKind::TPI;
  if (s == "Roughness") return FeatureKind::Roughness;
  throw ConfigError("unknown feature kind '" + std::string(s) + "' (supported: TRI, TPI, Roughness)");
}

struct FeatureDescriptor {
  FeatureKind kind = FeatureKind::TRI;
  std::size_t kernel = 30;
  std::size_t stride = 2;

  void validate() const {
    if (kernel < 2) throw ConfigError("feature kernel must be >= 2");
    if (stride < 1) throw ConfigError("feature stride must be >= 1");
  }

  /// e.g. "TRI_k30".
  std::string name() const { return std::string(to_string(kind)) + "_k" + std::to_string(kernel); }

  friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

// ---------------------------------------------------------------------------
// Per-window statistics. The k x k generalization of the 8-neighbour
// definitions: centre at (k/2, k/2), statistics over the other k*k - 1 cells.

namespace detail {

template <typename Fn>
void for_each_neighbour(GridView g, const Window& w, Fn&& fn) {
  const std::size_t cr = w.row0 + w.k / 2;
  const std::size_t cc = w.col0 + w.k / 2;
  for (std::size_t r = w.row0; r < w.row0 + w.k; ++r)
    for (std::size_t c = w.col0; c < w.col0 + w.k; ++c)
      if (r != cr || c != cc) fn(g.at(r, c));
}

inline double window_center(GridView g, const Window& w) { return g.at(w.row0 + w.k / 2, w.col0 + w.k / 2); }

inline void check_window(GridView g, const Window& w) {
  if (w.k < 2) throw DimensionError("window must be at least 2x2");
  if (w.row0 + w.k > g.height || w.col0 + w.k > g.width) throw DimensionError("window exceeds raster");
}

}  // namespace detail

/// Mean absolute difference between the centre and its neighbours.
inline double window_tri(GridView g, const Window& w) {
  detail::check_window(g, w);
  const double center = detail::window_center(g, w);
  double sum = 0.0;
  detail::for_each_neighbour(g, w, [&](double v) { sum += std::abs(center - v); });
  return sum / static_cast<double>(w.k * w.k - 1);
}

/// Centre minus the mean of its neighbours (signed).
inline double window_tpi(GridView g, const Window& w) {
  detail::check_window(g, w);
  const double center = detail::window_center(g, w);
  double sum = 0.0;
  detail::for_each_neighbour(g, w, [&](double v) { sum += v; });
  return center - sum / static_cast<double>(w.k * w.k - 1);
}

/// Maximum absolute difference between the centre and its neighbours.
inline double window_roughness(GridView g, const Window& w) {
  detail::check_window(g, w);
  const double center = detail::window_center(g, w);
  double best = 0.0;
  detail::for_each_neighbour(g, w, [&](double v) { best = std::max(best, std::abs(center - v)); });
  return best;
}

/// Map-level descriptor: mean per-window value over every window at the
/// descriptor's stride (|TPI| for TPI). TPI sums come from a summed-area
/// table; TRI and Roughness scan each window. Reduction order is fixed.
inline double describe(GridView g, const FeatureDescriptor& d) {
  d.validate();
  const auto wins = windows(g.width, g.height, d.kernel, d.stride);
  const double neighbours = static_cast<double>(d.kernel * d.kernel - 1);
  double total = 0.0;

  if (d.kind == FeatureKind::TPI) {
    const std::size_t W = g.width + 1;
    std::vector<double> sat(W * (g.height + 1), 0.0);
    for (std::size_t r = 0; r < g.height; ++r) {
      double row_sum = 0.0;
      for (std::size_t c = 0; c < g.width; ++c) {
        row_sum += g.at(r, c);
        sat[(r + 1) * W + (c + 1)] = sat[r * W + (c + 1)] + row_sum;
      }
    }
    for (const auto& w : wins) {
      const std::size_t r0 = w.row0, c0 = w.col0, r1 = w.row0 + w.k, c1 = w.col0 + w.k;
      const double window_sum = sat[r1 * W + c1] - sat[r0 * W + c1] - sat[r1 * W + c0] + sat[r0 * W + c0];
      const double center = detail::window_center(g, w);
      total += std::abs(center - (window_sum - center) / neighbours);
    }
  } else if (d.kind == FeatureKind::TRI) {
    for (const auto& w : wins) total += window_tri(g, w);
  } else {
    for (const auto& w : wins) total += window_roughness(g, w);
  }
  return total / static_cast<double>(wins.size());
}

inline double describe(const Heightmap& hm, const FeatureDescriptor& d) { return describe(hm.view(), d); }

// ---------------------------------------------------------------------------
// Correlation analysis.

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("pearson: sequences differ in length");
  if (x.size() < 2) throw DimensionError("pearson: need at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw CorrelationError("pearson: zero variance, correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // symmetric, unit diagonal

  double at(std::size_t i, std::size_t j) const { return values[i][j]; }
};

/// Pairwise Pearson correlations among named columns.
inline CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                            const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw DimensionError("correlation_matrix: names/columns mismatch");
  const std::size_t n = columns.size();
  CorrelationMatrix m{names, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double r = pearson(columns[i], columns[j]);
      m.values[i][j] = m.values[j][i] = (i == j) ? 1.0 : r;
    }
  }
  return m;
}

/// Descriptor columns over a labelled corpus plus a trailing "difficulty" column.
inline CorrelationMatrix correlation_matrix(const std::vector<Heightmap>& corpus,
                                            const std::vector<double>& difficulty,
                                            const std::vector<FeatureDescriptor>& descriptors) {
  if (corpus.size() != difficulty.size()) throw DimensionError("correlation_matrix: corpus/labels mismatch");
  if (corpus.size() < 2) throw DimensionError("correlation_matrix: corpus needs at least two samples");
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (const auto& d : descriptors) {
    names.push_back(d.name());
    std::vector<double> col;
    col.reserve(corpus.size());
    for (const auto& hm : corpus) col.push_back(describe(hm, d));
    columns.push_back(std::move(col));
  }
  names.emplace_back("difficulty");
  columns.push_back(difficulty);
  return correlation_matrix(names, columns);
}

/// Header row of column names, then the matrix rows.
inline void write_csv(std::ostream& os, const CorrelationMatrix& m) {
  for (std::size_t i = 0; i < m.names.size(); ++i) os << (i ? "," : "") << m.names[i];
  os << '\n';
  for (const auto& row : m.values) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(row[j]);
    os << '\n';
  }
}

inline std::string to_csv(const CorrelationMatrix& m) {
  std::ostringstream os;
  write_csv(os, m);
  return os.str();
}

}  // namespace terracurric
