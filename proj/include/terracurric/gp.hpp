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
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "terracurric/errors.hpp"

namespace terracurric {

/// Matern covariance with unit signal variance, so k(x, x) = 1.
/// nu is one of 0.5, 1.5, 2.5.
struct MaternKernel {
  double length_scale = 0.4;
  double nu = 2.5;

  void validate() const {
    if (!(length_scale > 0.0)) throw ConfigError("matern: length scale must be > 0");
    if (nu != 0.5 && nu != 1.5 && nu != 2.5) throw ConfigError("matern: nu must be 0.5, 1.5 or 2.5");
  }

  double operator()(double distance) const {
    const double d = distance / length_scale;
    if (nu == 0.5) return std::exp(-d);
    if (nu == 1.5) {
      const double s = std::sqrt(3.0) * d;
      return (1.0 + s) * std::exp(-s);
    }
    const double s = std::sqrt(5.0) * d;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
  }

  template <std::size_t Dim>
  double operator()(const std::array<double, Dim>& a, const std::array<double, Dim>& b) const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return (*this)(std::sqrt(d2));
  }
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;

  double stddev() const { return std::sqrt(variance); }
};

/// GP regression on residuals from a caller-supplied prior mean:
///   mean(x) = prior(x) + k*^T (K + noise I)^-1 (y - prior(X))
///   var(x)  = k(x,x) - k*^T (K + noise I)^-1 k*
template <std::size_t Dim>
class GaussianProcess {
 public:
  using Point = std::array<double, Dim>;

  GaussianProcess(MaternKernel kernel, double noise_var) : kernel_(kernel), noise_var_(noise_var) {
    kernel_.validate();
    if (!(noise_var_ > 0.0)) throw ConfigError("gp: noise variance must be > 0");
  }

  /// Records an observation y at x whose prior mean is `prior`. On a
  /// factorization failure the observation is discarded.
  void add(const Point& x, double y, double prior) {
    points_.push_back(x);
    residuals_.push_back(y - prior);
    try {
      refactor();
    } catch (const NumericalError&) {
      points_.pop_back();
      residuals_.pop_back();
      if (!points_.empty()) refactor();
      throw;
    }
  }

  std::size_t size() const { return points_.size(); }
  const MaternKernel& kernel() const { return kernel_; }

  Posterior posterior(const Point& x, double prior) const {
    const double kxx = kernel_(x, x);
    if (points_.empty()) return {prior, kxx};
    Eigen::VectorXd k_star(static_cast<Eigen::Index>(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) k_star[static_cast<Eigen::Index>(i)] = kernel_(x, points_[i]);
    const double mean = prior + k_star.dot(alpha_);
    const Eigen::VectorXd v = chol_.matrixL().solve(k_star);
    return {mean, std::max(0.0, kxx - v.squaredNorm())};
  }

 private:
  void refactor() {
    const auto n = static_cast<Eigen::Index>(points_.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j)
        K(i, j) = K(j, i) = kernel_(points_[static_cast<std::size_t>(i)], points_[static_cast<std::size_t>(j)]);
    K.diagonal().array() += noise_var_;
    chol_.compute(K);
    if (chol_.info() != Eigen::Success) throw NumericalError("gp: kernel matrix is not positive definite");
    const Eigen::Map<const Eigen::VectorXd> r(residuals_.data(), n);
    alpha_ = chol_.solve(r);
  }

  MaternKernel kernel_;
  double noise_var_;
  std::vector<Point> points_;
  std::vector<double> residuals_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
};

}  // namespace terracurric
