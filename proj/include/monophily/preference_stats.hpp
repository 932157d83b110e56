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

// Homophily and monophily estimators on a class degree sequence.
//
// Model I treats each node's same-class degree as Binom(d_i, h_r); its MLE
// intercept is logit of the homophily index. Model II lets the per-node
// preference vary with Var = phi_r * h_r * (1 - h_r), so that
//
//   Var[D_in | d_i] = d_i h_r (1 - h_r) (1 + (d_i - 1) phi_r),
//
// and phi_r is estimated by Williams' quasi-likelihood iteration, which
// reweights nodes by w_i = 1 / (1 + phi (d_i - 1)) until the weighted
// Pearson statistic matches its degrees of freedom.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "monophily/error.hpp"
#include "monophily/graph.hpp"
#include "monophily/random.hpp"
#include "monophily/special.hpp"

namespace monophily {

// Sum of same-class degree over sum of degree for the class.
inline double homophily_index(const ClassDegreeSequence& seq) {
  std::uint64_t in = 0;
  std::uint64_t total = 0;
  for (const auto& e : seq.entries) {
    in += e.in_class;
    total += e.total();
  }
  if (total == 0) {
    throw DegenerateInputError("class has no edges; homophily undefined");
  }
  return static_cast<double>(in) / static_cast<double>(total);
}

struct Model1Fit {
  LabelCode class_id = 0;
  double h_hat = 0;
  double beta0_mle = 0;
  double x2 = 0;  // Pearson statistic, sum of squared standardized residuals
  long dof = 0;   // nodes used - 1
  double p_value = 1;
  std::size_t nodes_used = 0;
  std::size_t zero_degree_skipped = 0;
};

// Binomial GLM with intercept only, plus the Pearson goodness-of-fit test
// against chi-square(n - 1). Nodes with d_i = 0 carry no residual and are
// left out (counted in zero_degree_skipped).
inline Model1Fit fit_model1(const ClassDegreeSequence& seq) {
  Model1Fit fit;
  fit.class_id = seq.class_id;
  std::uint64_t in = 0;
  std::uint64_t total = 0;
  for (const auto& e : seq.entries) {
    if (e.total() == 0) {
      ++fit.zero_degree_skipped;
      continue;
    }
    ++fit.nodes_used;
    in += e.in_class;
    total += e.total();
  }
  if (fit.nodes_used < 2) {
    throw DegenerateInputError(
        "Model I fit needs at least two nodes with nonzero degree");
  }
  fit.h_hat = static_cast<double>(in) / static_cast<double>(total);
  if (in == 0 || in == total) {
    throw DegenerateInputError(
        "perfect separation: homophily index is 0 or 1, residuals undefined");
  }
  fit.beta0_mle = logit(fit.h_hat);
  const double h = fit.h_hat;
  for (const auto& e : seq.entries) {
    const double d = e.total();
    if (d == 0) continue;
    const double r = e.in_class - d * h;
    fit.x2 += r * r / (d * h * (1 - h));
  }
  fit.dof = static_cast<long>(fit.nodes_used) - 1;
  fit.p_value = chi_square_sf(fit.x2, fit.dof);
  return fit;
}

struct WilliamsOptions {
  double alpha = 0.001;
  int max_iter = 100;
  // Stop once |X^2 - dof| <= closeness * dof.
  double closeness = 1e-4;
};

struct DispersionFit {
  LabelCode class_id = 0;
  Model1Fit model1;
  double beta0_mqe = 0;
  double h_mqe = 0;
  double phi_hat = 0;
  int iterations = 0;
  bool converged = false;
  bool significant = false;  // Model I rejected at alpha
  bool clamped = false;      // a phi update went negative and was set to 0
  std::vector<double> x2_trace;
};

inline DispersionFit fit_williams(const ClassDegreeSequence& seq,
                                  const WilliamsOptions& opts = {}) {
  if (!(opts.alpha > 0 && opts.alpha < 1)) {
    throw ArgumentError("alpha must lie in (0, 1)");
  }
  if (opts.max_iter < 0 || !(opts.closeness > 0)) {
    throw ArgumentError("max_iter must be >= 0 and closeness > 0");
  }
  DispersionFit fit;
  fit.class_id = seq.class_id;
  fit.model1 = fit_model1(seq);
  fit.beta0_mqe = fit.model1.beta0_mle;
  fit.h_mqe = fit.model1.h_hat;
  fit.x2_trace.push_back(fit.model1.x2);
  fit.significant = fit.model1.p_value < opts.alpha;
  if (!fit.significant) {
    fit.converged = true;
    return fit;
  }

  std::vector<double> d;
  std::vector<double> y;
  for (const auto& e : seq.entries) {
    if (e.total() == 0) continue;
    d.push_back(e.total());
    y.push_back(e.in_class);
  }
  const std::size_t n = d.size();
  const double dof = static_cast<double>(fit.model1.dof);

  double beta = fit.model1.beta0_mle;
  double h = logistic(beta);
  std::vector<double> v(n);
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) v[i] = d[i] * h * (1 - h);

  double phi = 0;
  {
    double sum_v = 0;
    for (double vi : v) sum_v += vi;
    const double q = 1.0 / sum_v;
    double denom = 0;
    for (std::size_t i = 0; i < n; ++i) denom += (d[i] - 1) * (1 - v[i] * q);
    phi = denom > 0 ? (fit.model1.x2 - dof) / denom : 0.0;
  }
  if (!(phi > 0)) {
    fit.clamped = true;
    fit.phi_hat = 0;
    return fit;
  }

  for (int t = 0; t < opts.max_iter; ++t) {
    double num = 0;
    double den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1.0 / (1.0 + phi * (d[i] - 1));
      num += w[i] * (v[i] * beta + y[i] - d[i] * h);
      den += w[i] * v[i];
    }
    beta = num / den;
    h = logistic(beta);
    double x2 = 0;
    double sum_wv = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = d[i] * h * (1 - h);
      const double r = y[i] - d[i] * h;
      x2 += w[i] * r * r / v[i];
      sum_wv += w[i] * v[i];
    }
    if (!std::isfinite(x2)) {
      throw NumericError("non-finite goodness-of-fit statistic");
    }
    fit.x2_trace.push_back(x2);
    fit.iterations = t + 1;
    fit.beta0_mqe = beta;
    fit.h_mqe = h;
    fit.phi_hat = phi;
    if (std::fabs(x2 - dof) <= opts.closeness * dof) {
      fit.converged = true;
      return fit;
    }
    const double q = 1.0 / sum_wv;
    double top = x2;
    double bottom = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double lev = 1 - w[i] * v[i] * q;
      top -= w[i] * lev;
      bottom += w[i] * (d[i] - 1) * lev;
    }
    const double next = bottom > 0 ? top / bottom : 0.0;
    if (!(next > 0)) {
      fit.clamped = true;
      fit.phi_hat = 0;
      return fit;
    }
    phi = next;
  }
  return fit;
}

struct NullPreferenceSample {
  std::vector<double> samples;  // replicate-major, one ratio per used node
  std::size_t replicate_count = 0;
  std::size_t nodes_per_replicate = 0;
  std::size_t zero_degree_skipped = 0;
  std::uint64_t seed = 0;
};

// Same-class fraction d_in / d_i per node with nonzero degree.
inline std::vector<double> observed_preferences(const ClassDegreeSequence& seq) {
  std::vector<double> out;
  out.reserve(seq.entries.size());
  for (const auto& e : seq.entries) {
    if (e.total() > 0) {
      out.push_back(static_cast<double>(e.in_class) / e.total());
    }
  }
  return out;
}

// Draws D ~ Binom(d_i, h_hat) for each node and replicate and records
// D / d_i: the homophily-only null for the observed preference spread.
inline NullPreferenceSample sample_null_preferences(
    const ClassDegreeSequence& seq, std::size_t replicates,
    std::uint64_t seed) {
  if (replicates < 1) throw ArgumentError("replicates must be >= 1");
  const double h = homophily_index(seq);
  NullPreferenceSample out;
  out.replicate_count = replicates;
  out.seed = seed;
  for (const auto& e : seq.entries) {
    if (e.total() == 0) {
      ++out.zero_degree_skipped;
    } else {
      ++out.nodes_per_replicate;
    }
  }
  out.samples.reserve(replicates * out.nodes_per_replicate);
  Rng rng = make_rng(seed, "null-preferences");
  for (std::size_t r = 0; r < replicates; ++r) {
    for (const auto& e : seq.entries) {
      const auto d = e.total();
      if (d == 0) continue;
      std::binomial_distribution<std::uint32_t> draw(d, h);
      out.samples.push_back(static_cast<double>(draw(rng)) / d);
    }
  }
  return out;
}

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) return 0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Population variance (divides by n).
inline double sample_variance(std::span<const double> xs) {
  if (xs.empty()) return 0;
  const double m = sample_mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

struct Histogram {
  std::vector<double> edges;    // bins + 1 edges over [0, 1]
  std::vector<double> density;  // integrates to 1
};

inline Histogram preference_histogram(std::span<const double> ratios,
                                      std::size_t bins) {
  if (bins == 0) throw ArgumentError("histogram needs at least one bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  }
  h.density.assign(bins, 0.0);
  if (ratios.empty()) return h;
  for (double r : ratios) {
    auto b = static_cast<std::size_t>(r * static_cast<double>(bins));
    if (b >= bins) b = bins - 1;
    h.density[b] += 1.0;
  }
  const double scale = static_cast<double>(bins) / ratios.size();
  for (auto& x : h.density) x *= scale;
  return h;
}

inline nlohmann::json to_json(const DispersionFit& fit,
                              const std::string& class_name) {
  return nlohmann::json{
      {"class", class_name},
      {"h_hat", fit.model1.h_hat},
      {"beta0_mle", fit.model1.beta0_mle},
      {"beta0_mqe", fit.beta0_mqe},
      {"h_mqe", fit.h_mqe},
      {"phi_hat", fit.phi_hat},
      {"x2", fit.model1.x2},
      {"dof", fit.model1.dof},
      {"p_value", fit.model1.p_value},
      {"significant", fit.significant},
      {"iterations", fit.iterations},
      {"converged", fit.converged},
      {"clamped", fit.clamped},
      {"nodes_used", fit.model1.nodes_used},
      {"zero_degree_skipped", fit.model1.zero_degree_skipped},
  };
}

}  // namespace monophily
