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

// Relational classifiers for a binary attribute. Training labels are
// encoded +1 for the positive class (F in the gender experiments) and -1
// for every other class.
//
// Score direction differs by method family and is carried on the result:
//   baseline, mv1, mv2, zgl   higher score = more likely class -1
//   link_lr, link_nb          higher score = more likely class +1
// AUC routines read ScoreVector::high to orient themselves.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "monophily/error.hpp"
#include "monophily/graph.hpp"
#include "monophily/lbfgs.hpp"
#include "monophily/special.hpp"

namespace monophily {

class TrainTestSplit {
 public:
  TrainTestSplit() = default;

  // Checks train and test are disjoint, nonempty and labeled, and that
  // together they cover every labeled node of `g`.
  TrainTestSplit(const LabeledGraph& g, std::vector<NodeId> train,
                 std::vector<NodeId> test, LabelCode positive_class)
      : train_(std::move(train)),
        test_(std::move(test)),
        positive_class_(positive_class),
        sign_(g.node_count(), 0) {
    if (train_.empty() || test_.empty()) {
      throw ArgumentError("train and test sets must both be nonempty");
    }
    std::vector<char> seen(g.node_count(), 0);
    for (NodeId v : train_) {
      CheckNode(g, v, seen);
      sign_[v] = g.label(v) == positive_class_ ? 1 : -1;
    }
    for (NodeId v : test_) CheckNode(g, v, seen);
    if (train_.size() + test_.size() != g.labeled_count()) {
      throw ArgumentError("train and test must cover every labeled node");
    }
    for (NodeId v : train_) {
      (sign_[v] > 0 ? positive_train_ : negative_train_) += 1;
    }
  }

  const std::vector<NodeId>& train() const noexcept { return train_; }
  const std::vector<NodeId>& test() const noexcept { return test_; }
  LabelCode positive_class() const noexcept { return positive_class_; }

  // +1 / -1 for training nodes, 0 for everything else.
  int sign(NodeId v) const { return sign_.at(v); }
  std::size_t positive_train() const noexcept { return positive_train_; }
  std::size_t negative_train() const noexcept { return negative_train_; }

 private:
  static void CheckNode(const LabeledGraph& g, NodeId v,
                        std::vector<char>& seen) {
    if (v >= g.node_count()) throw ArgumentError("split node out of range");
    if (!g.labeled(v)) throw ArgumentError("split node is unlabeled");
    if (seen[v]) throw ArgumentError("train and test overlap or repeat");
    seen[v] = 1;
  }

  std::vector<NodeId> train_;
  std::vector<NodeId> test_;
  LabelCode positive_class_ = 0;
  std::vector<std::int8_t> sign_;
  std::size_t positive_train_ = 0;
  std::size_t negative_train_ = 0;
};

enum class HighScores { kPositive, kNegative };

struct ScoreVector {
  std::string method;
  HighScores high = HighScores::kNegative;
  std::vector<NodeId> nodes;  // the split's test nodes, in split order
  std::vector<double> scores;
  std::vector<bool> fallback;  // scored by the class-proportion baseline
  std::size_t fallback_count = 0;
  bool converged = true;
  int iterations = 0;
};

namespace detail {

inline ScoreVector EmptyScores(const std::string& method, HighScores high,
                               const TrainTestSplit& split) {
  ScoreVector out;
  out.method = method;
  out.high = high;
  out.nodes = split.test();
  out.scores.assign(out.nodes.size(), 0.0);
  out.fallback.assign(out.nodes.size(), false);
  return out;
}

// (#negative - #positive) / (#negative + #positive) over the training set.
inline double TrainProportionScore(const TrainTestSplit& split) {
  const double neg = static_cast<double>(split.negative_train());
  const double pos = static_cast<double>(split.positive_train());
  return (neg - pos) / (neg + pos);
}

// Shared tail of both majority votes: `weights[u]` gives (negative,
// positive) evidence for test node u.
template <class Weigh>
ScoreVector MajorityVote(const std::string& method,
                         const TrainTestSplit& split, Weigh&& weigh) {
  ScoreVector out = EmptyScores(method, HighScores::kNegative, split);
  const double prior = TrainProportionScore(split);
  for (std::size_t k = 0; k < out.nodes.size(); ++k) {
    auto [neg, pos] = weigh(out.nodes[k]);
    if (neg + pos == 0) {
      out.scores[k] = prior;
      out.fallback[k] = true;
      ++out.fallback_count;
    } else {
      out.scores[k] = (static_cast<double>(neg) - static_cast<double>(pos)) /
                      (static_cast<double>(neg) + static_cast<double>(pos));
    }
  }
  return out;
}

}  // namespace detail

// Every test node gets the training-set class balance.
inline ScoreVector baseline_scores(const LabeledGraph& /*g*/,
                                   const TrainTestSplit& split) {
  ScoreVector out = detail::EmptyScores("baseline", HighScores::kNegative, split);
  std::fill(out.scores.begin(), out.scores.end(),
            detail::TrainProportionScore(split));
  return out;
}

// 1-hop majority vote (wvRN, one pass): label balance among a node's
// training neighbors; no-evidence nodes fall back to the baseline.
inline ScoreVector mv1_scores(const LabeledGraph& g, const TrainTestSplit& split,
                              Orientation orientation = Orientation::kOut) {
  return detail::MajorityVote(
      "mv1", split, [&](NodeId u) -> std::pair<std::uint64_t, std::uint64_t> {
        std::uint64_t neg = 0;
        std::uint64_t pos = 0;
        for (NodeId v : g.neighbors(u, orientation)) {
          const int s = split.sign(v);
          if (s > 0) ++pos;
          if (s < 0) ++neg;
        }
        return {neg, pos};
      });
}

// 2-hop majority vote: training nodes weighted by the number of length-2
// paths from u. The closed walk u -> v -> u never counts because u is a
// test node and carries no label.
inline ScoreVector mv2_scores(const LabeledGraph& g, const TrainTestSplit& split,
                              Orientation orientation = Orientation::kOut) {
  return detail::MajorityVote(
      "mv2", split, [&](NodeId u) -> std::pair<std::uint64_t, std::uint64_t> {
        std::uint64_t neg = 0;
        std::uint64_t pos = 0;
        for (NodeId v : g.neighbors(u, orientation)) {
          for (NodeId w : g.neighbors(v, orientation)) {
            if (w == u) continue;
            const int s = split.sign(w);
            if (s > 0) ++pos;
            if (s < 0) ++neg;
          }
        }
        return {neg, pos};
      });
}

struct ZglOptions {
  double tol = 1e-8;
  int max_sweeps = 10000;
};

// Harmonic-function propagation: training nodes are clamped (+1 class at
// -1, the rest at +1, matching the majority-vote direction) and every
// other node converges to the mean of its neighbors. Solved with
// Gauss-Seidel sweeps until the largest harmonic residual is <= tol.
// Directed graphs use weak (either-direction) adjacency.
inline ScoreVector zgl_scores(const LabeledGraph& graph,
                              const TrainTestSplit& split,
                              const ZglOptions& opts = {}) {
  const LabeledGraph undirected =
      graph.directed() ? graph.to_undirected() : LabeledGraph{};
  const LabeledGraph& g = graph.directed() ? undirected : graph;
  const std::size_t n = g.node_count();
  const double prior = detail::TrainProportionScore(split);

  std::vector<double> f(n, prior);
  std::vector<NodeId> free_nodes;
  for (NodeId v = 0; v < n; ++v) {
    const int s = split.sign(v);
    if (s != 0) {
      f[v] = -static_cast<double>(s);
    } else if (g.degree(v) > 0) {
      free_nodes.push_back(v);
    }
  }

  auto neighbor_mean = [&](NodeId v) {
    double sum = 0;
    auto row = g.out_neighbors(v);
    for (NodeId w : row) sum += f[w];
    return sum / static_cast<double>(row.size());
  };
  auto max_residual = [&]() {
    double r = 0;
    for (NodeId v : free_nodes) r = std::max(r, std::fabs(f[v] - neighbor_mean(v)));
    return r;
  };

  ScoreVector out = detail::EmptyScores("zgl", HighScores::kNegative, split);
  out.converged = false;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double change = 0;
    for (NodeId v : free_nodes) {
      const double next = neighbor_mean(v);
      change = std::max(change, std::fabs(next - f[v]));
      f[v] = next;
    }
    out.iterations = sweep + 1;
    if (change <= opts.tol && max_residual() <= opts.tol) {
      out.converged = true;
      break;
    }
  }
  if (free_nodes.empty()) out.converged = true;
  for (std::size_t k = 0; k < out.nodes.size(); ++k) {
    const NodeId u = out.nodes[k];
    out.scores[k] = f[u];
    if (g.degree(u) == 0) {
      out.fallback[k] = true;
      ++out.fallback_count;
    }
  }
  return out;
}

struct LinkOptions {
  double gain_c = 1e6;  // inverse regularization strength
  // Directed graphs: kOut uses rows (whom a node nominates) as features,
  // kIn uses columns (who nominates the node).
  Orientation features = Orientation::kOut;
  int max_iter = 500;
  double grad_tol = 1e-8;
};

struct LinkModel {
  std::vector<double> weights;  // one per node of the graph
  double intercept = 0;
  double gain_c = 0;
  Orientation features = Orientation::kOut;
  int iterations = 0;
  bool converged = false;
};

// L2-regularized logistic regression on adjacency rows:
//   min 1/2 |beta|^2 + C * sum_train log(1 + exp(-y_i (X_i beta + beta_0)))
// The intercept is unpenalized. Internally the objective is divided by C,
// which leaves the minimizer unchanged; the gradient tolerance applies to
// that scaled objective. Starts from zero.
inline LinkModel link_lr_fit(const LabeledGraph& g, const TrainTestSplit& split,
                             const LinkOptions& opts = {}) {
  if (!(opts.gain_c > 0)) throw ArgumentError("gain C must be positive");
  const std::size_t n = g.node_count();
  const auto& train = split.train();
  const double inv_c = 1.0 / opts.gain_c;
  std::vector<double> margin(train.size());

  // x = [beta_0 .. beta_{n-1}, intercept]
  auto objective = [&](std::span<const double> x, std::span<double> grad) {
    double f = 0;
    for (std::size_t j = 0; j < n; ++j) {
      f += 0.5 * inv_c * x[j] * x[j];
      grad[j] = inv_c * x[j];
    }
    grad[n] = 0;
    for (std::size_t k = 0; k < train.size(); ++k) {
      const NodeId i = train[k];
      double z = x[n];
      for (NodeId j : g.neighbors(i, opts.features)) z += x[j];
      const double y = split.sign(i);
      f += softplus(-y * z);
      // d/dz softplus(-y z) = -y * logistic(-y z)
      const double r = -y * logistic(-y * z);
      for (NodeId j : g.neighbors(i, opts.features)) grad[j] += r;
      grad[n] += r;
    }
    return f;
  };

  LbfgsOptions lo;
  lo.max_iter = opts.max_iter;
  lo.grad_tol = opts.grad_tol;
  auto res = minimize_lbfgs(objective, std::vector<double>(n + 1, 0.0), lo);
  for (double v : res.x) {
    if (!std::isfinite(v)) throw NumericError("LINK solver diverged");
  }
  LinkModel model;
  model.intercept = res.x[n];
  res.x.pop_back();
  model.weights = std::move(res.x);
  model.gain_c = opts.gain_c;
  model.features = opts.features;
  model.iterations = res.iterations;
  model.converged = res.converged;
  return model;
}

// Linear predictor X_u beta + beta_0 per test node (higher = class +1).
inline ScoreVector link_lr_scores(const LinkModel& model, const LabeledGraph& g,
                                  const TrainTestSplit& split) {
  if (model.weights.size() != g.node_count()) {
    throw ArgumentError("LINK model was fit on a graph of another size");
  }
  ScoreVector out = detail::EmptyScores("link_lr", HighScores::kPositive, split);
  out.converged = model.converged;
  out.iterations = model.iterations;
  for (std::size_t k = 0; k < out.nodes.size(); ++k) {
    double z = model.intercept;
    for (NodeId j : g.neighbors(out.nodes[k], model.features)) {
      z += model.weights[j];
    }
    out.scores[k] = z;
  }
  return out;
}

inline ScoreVector link_lr_scores(const LabeledGraph& g,
                                  const TrainTestSplit& split,
                                  const LinkOptions& opts = {}) {
  return link_lr_scores(link_lr_fit(g, split, opts), g, split);
}

struct NaiveBayesOptions {
  Orientation features = Orientation::kOut;
  // Drop the terms that vanish when class sizes dwarf degrees.
  bool sparse_approximation = false;
};

// Naive Bayes on adjacency-row features with +1 (Laplace) smoothing.
// For feature node i, d_iF / d_iM count the positive / negative training
// nodes whose feature i is set. The score is the log likelihood ratio of
// class +1 against class -1:
//   log(nF/nM) + N log((nM+2)/(nF+2)) + sum_i log((nF-d_iF+1)/(nM-d_iM+1))
//     + sum_{i: x_ui = 1} log((d_iF+1)/(d_iM+1) * (nM-d_iM+1)/(nF-d_iF+1))
inline ScoreVector link_nb_scores(const LabeledGraph& g,
                                  const TrainTestSplit& split,
                                  const NaiveBayesOptions& opts = {}) {
  const std::size_t n = g.node_count();
  const double nf = static_cast<double>(split.positive_train());
  const double nm = static_cast<double>(split.negative_train());
  // Feature i of node j is A_ji (rows) or A_ij (columns); the training
  // nodes with feature i set are i's in-neighbors or out-neighbors.
  const Orientation reverse =
      opts.features == Orientation::kIn ? Orientation::kOut : Orientation::kIn;
  std::vector<double> d_f(n, 0.0);
  std::vector<double> d_m(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(i, reverse)) {
      const int s = split.sign(j);
      if (s > 0) d_f[i] += 1;
      if (s < 0) d_m[i] += 1;
    }
  }

  std::vector<double> present(n);
  double constant = 0;
  if (opts.sparse_approximation) {
    constant = std::log(nf / nm) + static_cast<double>(n) * std::log(nf / nm) +
               static_cast<double>(n) * std::log((nm + 2) / (nf + 2));
    for (NodeId i = 0; i < n; ++i) {
      present[i] = std::log((d_f[i] + 1) / (d_m[i] + 1)) + std::log(nm / nf);
    }
  } else {
    constant = std::log(nf / nm) +
               static_cast<double>(n) * std::log((nm + 2) / (nf + 2));
    for (NodeId i = 0; i < n; ++i) {
      const double absent = std::log((nf - d_f[i] + 1) / (nm - d_m[i] + 1));
      constant += absent;
      present[i] = std::log((d_f[i] + 1) / (d_m[i] + 1)) - absent;
    }
  }

  ScoreVector out = detail::EmptyScores("link_nb", HighScores::kPositive, split);
  for (std::size_t k = 0; k < out.nodes.size(); ++k) {
    double s = constant;
    for (NodeId i : g.neighbors(out.nodes[k], opts.features)) s += present[i];
    out.scores[k] = s;
  }
  return out;
}

}  // namespace monophily
