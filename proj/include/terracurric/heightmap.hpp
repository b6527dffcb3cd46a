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
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "terracurric/errors.hpp"

namespace terracurric {

inline constexpr double kDefaultVerticalScale = 3.0;

/// Plain row-major scalar raster. Generators produce these before
/// normalization; no value range is implied.
struct Grid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), values(w * h, fill) {}
  Grid(std::size_t w, std::size_t h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {
    if (values.size() != width * height)
      throw DimensionError("grid value count does not match width*height");
  }

  double& at(std::size_t row, std::size_t col) { return values[row * width + col]; }
  double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
  bool empty() const { return values.empty(); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Non-owning view over a row-major raster.
struct GridView {
  std::span<const double> values;
  std::size_t width = 0;
  std::size_t height = 0;

  GridView() = default;
  GridView(std::span<const double> v, std::size_t w, std::size_t h) : values(v), width(w), height(h) {
    if (v.size() != w * h) throw DimensionError("view size does not match width*height");
  }
  GridView(const Grid& g) : GridView(g.values, g.width, g.height) {}  // NOLINT: implicit by intent

  double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
};

/// Affine map of a raster onto [0,1]: min -> 0, max -> 1. Constant rasters map
/// to all zeros (flat ground).
inline Grid normalize(const Grid& raw) {
  if (raw.empty() || raw.width == 0 || raw.height == 0) throw DimensionError("normalize: empty grid");
  const auto [lo_it, hi_it] = std::minmax_element(raw.values.begin(), raw.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("normalize: non-finite height");
  Grid out(raw.width, raw.height, 0.0);
  const double span = hi - lo;
  if (span > 0.0) {
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
      // Clamp guards the last-ulp overshoot of (v - lo) / span.
      out.values[i] = std::clamp((raw.values[i] - lo) / span, 0.0, 1.0);
    }
  }
  return out;
}

/// Immutable raster of normalized heights in [0,1]. `vertical_scale` is the
/// height in meters that a normalized value of 1.0 corresponds to.
class Heightmap {
 public:
  explicit Heightmap(Grid grid, double vertical_scale = kDefaultVerticalScale)
      : grid_(std::move(grid)), vertical_scale_(vertical_scale) {
    if (grid_.width < 3 || grid_.height < 3) throw DimensionError("heightmap must be at least 3x3");
    if (grid_.values.size() != grid_.width * grid_.height)
      throw DimensionError("heightmap value count does not match width*height");
    if (!(vertical_scale_ > 0.0) || !std::isfinite(vertical_scale_))
      throw DomainError("vertical_scale must be positive");
    for (double v : grid_.values)
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("heightmap values must lie in [0,1]");
  }

  /// Normalizes `raw` and wraps it.
  static Heightmap from_raw(const Grid& raw, double vertical_scale = kDefaultVerticalScale) {
    return Heightmap(normalize(raw), vertical_scale);
  }

  std::size_t width() const { return grid_.width; }
  std::size_t height() const { return grid_.height; }
  double vertical_scale() const { return vertical_scale_; }
  double at(std::size_t row, std::size_t col) const { return grid_.at(row, col); }
  double meters(std::size_t row, std::size_t col) const { return grid_.at(row, col) * vertical_scale_; }
  std::span<const double> values() const { return grid_.values; }
  const Grid& grid() const { return grid_; }
  GridView view() const { return GridView(grid_); }

  friend bool operator==(const Heightmap&, const Heightmap&) = default;

 private:
  Grid grid_;
  double vertical_scale_;
};

struct Window {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t k = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Number of windows of size k at the given stride along one axis.
inline std::size_t window_count(std::size_t extent, std::size_t k, std::size_t stride) {
  return (extent - k) / stride + 1;
}

/// All k x k windows whose top-left corner lies on the stride lattice and that
/// fit entirely inside a width x height raster, in row-major order.
inline std::vector<Window> windows(std::size_t width, std::size_t height, std::size_t k, std::size_t stride) {
  if (k < 1) throw DimensionError("window size must be >= 1");
  if (stride < 1) throw DimensionError("stride must be >= 1");
  if (k > width || k > height) throw DimensionError("window size exceeds raster dimensions");
  const std::size_t nr = window_count(height, k, stride);
  const std::size_t nc = window_count(width, k, stride);
  std::vector<Window> out;
  out.reserve(nr * nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out.push_back({i * stride, j * stride, k});
  return out;
}

inline std::vector<Window> windows(const Heightmap& hm, std::size_t k, std::size_t stride) {
  return windows(hm.width(), hm.height(), k, stride);
}

// ---------------------------------------------------------------------------
// 16-bit binary PGM ("P5", maxval 65535, big-endian samples). The vertical
// scale travels in a "# vscale=<float>" comment line.

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string encode_pgm(const Heightmap& hm) {
  std::string out = "P5\n# vscale=" + format_double(hm.vertical_scale()) + "\n" +
                    std::to_string(hm.width()) + " " + std::to_string(hm.height()) + "\n65535\n";
  out.reserve(out.size() + hm.values().size() * 2);
  for (double v : hm.values()) {
    const auto word = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    out.push_back(static_cast<char>(word >> 8));
    out.push_back(static_cast<char>(word & 0xff));
  }
  return out;
}

inline Heightmap decode_pgm(const std::string& data) {
  std::size_t pos = 0;
  double vscale = kDefaultVerticalScale;

  auto skip_space_and_comments = [&] {
    while (pos < data.size()) {
      const char c = data[pos];
      if (c == '#') {
        const std::size_t eol = data.find('\n', pos);
        const std::string line = data.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        constexpr std::string_view key = "# vscale=";
        if (line.rfind(key, 0) == 0) {
          const char* first = line.data() + key.size();
          const char* last = line.data() + line.size();
          while (last > first && (last[-1] == '\r' || last[-1] == ' ')) --last;
          auto [p, ec] = std::from_chars(first, last, vscale);
          if (ec != std::errc() || p != last) throw FormatError("pgm: malformed vscale comment");
        }
        pos = eol == std::string::npos ? data.size() : eol + 1;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&]() -> std::size_t {
    skip_space_and_comments();
    std::size_t value = 0;
    const char* first = data.data() + pos;
    const char* last = data.data() + data.size();
    auto [p, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || p == first) throw FormatError("pgm: malformed header");
    pos += static_cast<std::size_t>(p - first);
    return value;
  };

  if (data.size() < 2 || data[0] != 'P' || data[1] != '5') throw FormatError("pgm: missing P5 magic");
  pos = 2;
  const std::size_t width = read_uint();
  const std::size_t height = read_uint();
  const std::size_t maxval = read_uint();
  if (maxval != 65535) throw FormatError("pgm: maxval must be 65535");
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos])))
    throw FormatError("pgm: malformed header");
  ++pos;
  if (width == 0 || height == 0) throw FormatError("pgm: zero dimension");
  const std::size_t n = width * height;
  if (data.size() - pos < n * 2) throw FormatError("pgm: truncated payload");

  Grid grid(width, height, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hi = static_cast<unsigned char>(data[pos + 2 * i]);
    const auto lo = static_cast<unsigned char>(data[pos + 2 * i + 1]);
    grid.values[i] = static_cast<double>((hi << 8) | lo) / 65535.0;
  }
  try {
    return Heightmap(std::move(grid), vscale);
  } catch (const std::exception& e) {
    throw FormatError(std::string("pgm: ") + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

inline void write_pgm(const Heightmap& hm, const std::string& path) { write_file(path, encode_pgm(hm)); }

inline Heightmap read_pgm(const std::string& path) { return decode_pgm(read_file(path)); }

}  // namespace terracurric
