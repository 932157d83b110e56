// Copyright 2026 The Monophily Authors.
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

// Limited-memory BFGS with a backtracking Armijo line search. Fully
// deterministic: no randomized starts, fixed evaluation order.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "monophily/error.hpp"

namespace monophily {

struct LbfgsOptions {
  int max_iter = 500;
  double grad_tol = 1e-8;  // stop when max |gradient| <= grad_tol
  int history = 10;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0;
  double grad_norm = 0;  // max-norm at x
  int iterations = 0;
  bool converged = false;
};

// `objective(x, grad)` returns f(x) and writes the gradient into `grad`.
template <class Objective>
LbfgsResult minimize_lbfgs(Objective&& objective, std::vector<double> x0,
                           const LbfgsOptions& opts = {}) {
  const std::size_t n = x0.size();
  auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };
  auto max_abs = [](const std::vector<double>& a) {
    double m = 0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
  };

  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n);
  double f = objective(std::span<const double>(res.x), std::span<double>(g));
  if (!std::isfinite(f)) throw NumericError("non-finite objective at start");

  struct Pair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> dir(n), x_new(n), g_new(n), alpha_buf;

  for (int it = 0; it < opts.max_iter; ++it) {
    res.grad_norm = max_abs(g);
    if (res.grad_norm <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    // Two-loop recursion for dir = -H g.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
    alpha_buf.assign(memory.size(), 0.0);
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha_buf[k] = memory[k].rho * dot(memory[k].s, dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, dir);
      for (std::size_t i = 0; i < n; ++i) {
        dir[i] += (alpha_buf[k] - beta) * memory[k].s[i];
      }
    }
    double slope = dot(g, dir);
    if (!(slope < 0)) {
      // Lost descent; restart from steepest descent.
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = dot(g, dir);
    }

    double step = memory.empty() ? 1.0 / std::max(1.0, std::sqrt(-slope)) : 1.0;
    double f_new = 0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + step * dir[i];
      f_new = objective(std::span<const double>(x_new), std::span<double>(g_new));
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) break;  // no further decrease representable

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - res.x[i];
      p.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(p.s, p.y);
    res.x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (memory.size() > static_cast<std::size_t>(opts.history)) {
        memory.pop_front();
      }
    }
  }
  res.value = f;
  res.grad_norm = max_abs(g);
  if (res.grad_norm <= opts.grad_tol) res.converged = true;
  return res;
}

}  // namespace monophily
