// Copyright 2026 The hteb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hteb/error.hpp"
#include "hteb/vector_ops.hpp"

namespace hteb::eval {

struct LbfgsOptions {
  std::size_t max_iterations = 200;
  std::size_t history = 10;
  double gradient_tolerance = 1e-4;  // on the max-norm of the gradient
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Objective returning f(x) and writing the gradient into `grad`.
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

/// Limited-memory BFGS with a backtracking Armijo line search.
inline LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double> x, const LbfgsOptions& opt = {}) {
  const std::size_t n = x.size();
  std::vector<double> g(n), g_new(n), d(n), x_new(n);
  double fx = f(x, g);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
  };
  LbfgsResult r;
  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    if (max_abs(g) < opt.gradient_tolerance) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    d = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y_hist[k][i];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (auto& e : d) e *= gamma;
    } else {
      const double scale = 1.0 / std::max(1.0, norm(g));
      for (auto& e : d) e *= scale;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    for (auto& e : d) e = -e;
    double slope = dot(g, d);
    if (slope >= 0.0) {  // not a descent direction; restart from steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }
    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > opt.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double improvement = fx - f_new;
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (improvement <= 1e-15 * std::max(1.0, std::abs(fx))) {
      r.converged = max_abs(g) < opt.gradient_tolerance;
      ++r.iterations;
      break;
    }
  }
  r.x = std::move(x);
  r.value = fx;
  return r;
}

/// Multinomial logistic regression: minimises sum of cross-entropy plus
/// ||W||^2 / (2C); the intercepts are not penalised. Weights start at zero.
class LogisticRegression {
 public:
  explicit LogisticRegression(double c = 1.0, LbfgsOptions opt = {}) : c_(c), opt_(opt) {}

  void fit(const std::vector<Vector>& x, const std::vector<std::string>& y) {
    if (x.size() != y.size()) throw Error(Errc::kLengthMismatch, "features and labels differ in length");
    if (x.empty()) throw Error(Errc::kEmptyInput, "no training data");
    classes_ = y;
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
    if (classes_.size() < 2) throw Error(Errc::kSingleClass, "training data has one class");
    dim_ = x.front().size();
    for (const auto& row : x) {
      if (row.size() != dim_) throw Error(Errc::kDimensionMismatch, "ragged training features");
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < classes_.size(); ++k) index[classes_[k]] = k;
    std::vector<std::size_t> yi;
    for (const auto& label : y) yi.push_back(index.at(label));

    const std::size_t kc = classes_.size();
    const std::size_t stride = dim_ + 1;  // weights then intercept, per class
    const Objective objective = [&](const std::vector<double>& w, std::vector<double>& grad) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double loss = 0.0;
      std::vector<double> z(kc);
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < kc; ++k) {
          const double* wk = &w[k * stride];
          double s = wk[dim_];
          for (std::size_t j = 0; j < dim_; ++j) s += wk[j] * x[i][j];
          z[k] = s;
        }
        const double zmax = *std::max_element(z.begin(), z.end());
        double denom = 0.0;
        for (double v : z) denom += std::exp(v - zmax);
        const double lse = zmax + std::log(denom);
        loss += lse - z[yi[i]];
        for (std::size_t k = 0; k < kc; ++k) {
          const double p = std::exp(z[k] - lse) - (k == yi[i] ? 1.0 : 0.0);
          double* gk = &grad[k * stride];
          for (std::size_t j = 0; j < dim_; ++j) gk[j] += p * x[i][j];
          gk[dim_] += p;
        }
      }
      for (std::size_t k = 0; k < kc; ++k) {
        for (std::size_t j = 0; j < dim_; ++j) {
          const double wkj = w[k * stride + j];
          loss += 0.5 * wkj * wkj / c_;
          grad[k * stride + j] += wkj / c_;
        }
      }
      return loss;
    };
    auto result = minimize_lbfgs(objective, std::vector<double>(kc * stride, 0.0), opt_);
    weights_ = std::move(result.x);
    iterations_ = result.iterations;
  }

  std::string predict(const Vector& x) const {
    if (x.size() != dim_) throw Error(Errc::kDimensionMismatch, "feature dimension differs from training");
    std::size_t best = 0;
    double best_z = -INFINITY;
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      const double* wk = &weights_[k * (dim_ + 1)];
      double s = wk[dim_];
      for (std::size_t j = 0; j < dim_; ++j) s += wk[j] * x[j];
      if (s > best_z) {
        best_z = s;
        best = k;
      }
    }
    return classes_[best];
  }

  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double c_;
  LbfgsOptions opt_;
  std::vector<std::string> classes_;
  std::size_t dim_ = 0;
  std::vector<double> weights_;
  std::size_t iterations_ = 0;
};

}  // namespace hteb::eval
