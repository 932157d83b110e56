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

// Cross-validation harness: uniform random labeled samples of exact size,
// rank-based AUC, and the fraction x fold x method sweep. Every fold draws
// its split from an RNG substream keyed by (seed, fraction index, fold
// index) and all methods see the same split, so a report is a pure
// function of (graph, config) regardless of how many workers ran it.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "monophily/classifiers.hpp"
#include "monophily/error.hpp"
#include "monophily/graph.hpp"
#include "monophily/random.hpp"

namespace monophily {

// Exact-size uniform split: ceil(fraction * N) labeled nodes go to train.
// Splits missing a class on either side are redrawn, at most 100 times.
inline TrainTestSplit sample_split(const LabeledGraph& g, double fraction,
                                   Rng& rng, LabelCode positive_class = 0) {
  if (!(fraction > 0 && fraction < 1)) {
    throw ArgumentError("label fraction must lie in (0, 1)");
  }
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.labeled(v)) pool.push_back(v);
  }
  const std::size_t n = pool.size();
  // The epsilon keeps e.g. 0.3 * 10 from rounding up to 4.
  const auto train_size = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (train_size < 1 || train_size >= n) {
    throw ArgumentError("label fraction leaves train or test empty");
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<NodeId> order = pool;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<NodeId> train(order.begin(), order.begin() + train_size);
    std::vector<NodeId> test(order.begin() + train_size, order.end());
    auto has_both = [&](const std::vector<NodeId>& side) {
      bool pos = false;
      bool neg = false;
      for (NodeId v : side) {
        (g.label(v) == positive_class ? pos : neg) = true;
      }
      return pos && neg;
    };
    if (!has_both(train) || !has_both(test)) continue;
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return TrainTestSplit(g, std::move(train), std::move(test), positive_class);
  }
  throw StructuralError(
      "could not draw a split with both classes in train and test after 100 "
      "attempts");
}

// FNV-1a over the training ids; lets reports show that methods shared a
// split.
inline std::uint64_t split_hash(const TrainTestSplit& split) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (NodeId v : split.train()) {
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

// Mann-Whitney AUC: P(score of a random positive > score of a random
// negative) + P(tie) / 2. Average ranks handle ties.
inline double auc(std::span<const double> scores,
                  const std::vector<bool>& is_positive) {
  if (scores.size() != is_positive.size()) {
    throw ArgumentError("scores and truth differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (is_positive[order[k]]) {
        rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw StructuralError("AUC needs both classes among the scored nodes");
  }
  const double p = static_cast<double>(positives);
  return (rank_sum - p * (p + 1) / 2) / (p * static_cast<double>(negatives));
}

// AUC of a ScoreVector against the graph's labels, oriented by the
// vector's score direction.
inline double auc(const ScoreVector& scores, const LabeledGraph& g,
                  LabelCode positive_class) {
  std::vector<bool> truth(scores.nodes.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const bool is_pos = g.label(scores.nodes[k]) == positive_class;
    truth[k] = scores.high == HighScores::kPositive ? is_pos : !is_pos;
  }
  return auc(scores.scores, truth);
}

struct ClassWeightedAuc {
  double positive_vs_rest = 0;  // class +1 ranked by the score toward +1
  double negative_vs_rest = 0;  // class -1 ranked by the score toward -1
  double weighted = 0;          // weights = training class counts
};

// One-vs-rest AUC per class, averaged with training-count weights. With
// two classes and one score axis both one-vs-rest AUCs are the same
// number, so `weighted` equals the plain AUC.
inline ClassWeightedAuc class_weighted_auc(const ScoreVector& scores,
                                           const LabeledGraph& g,
                                           const TrainTestSplit& split) {
  ScoreVector toward_pos = scores;
  ScoreVector toward_neg = scores;
  if (scores.high == HighScores::kNegative) {
    for (auto& s : toward_pos.scores) s = -s;
  } else {
    for (auto& s : toward_neg.scores) s = -s;
  }
  toward_pos.high = HighScores::kPositive;
  toward_neg.high = HighScores::kNegative;
  ClassWeightedAuc out;
  out.positive_vs_rest = auc(toward_pos, g, split.positive_class());
  out.negative_vs_rest = auc(toward_neg, g, split.positive_class());
  const double wp = static_cast<double>(split.positive_train());
  const double wn = static_cast<double>(split.negative_train());
  out.weighted =
      (wp * out.positive_vs_rest + wn * out.negative_vs_rest) / (wp + wn);
  return out;
}

enum class Method { kBaseline, kMv1, kMv2, kZgl, kLinkLr, kLinkNb };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::kBaseline:
      return "baseline";
    case Method::kMv1:
      return "mv1";
    case Method::kMv2:
      return "mv2";
    case Method::kZgl:
      return "zgl";
    case Method::kLinkLr:
      return "link_lr";
    case Method::kLinkNb:
      return "link_nb";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  for (Method m : {Method::kBaseline, Method::kMv1, Method::kMv2, Method::kZgl,
                   Method::kLinkLr, Method::kLinkNb}) {
    if (s == to_string(m)) return m;
  }
  throw ArgumentError("unknown method '" + s +
                      "' (baseline, mv1, mv2, zgl, link_lr, link_nb)");
}

struct ScoringOptions {
  // Neighbor direction for mv1 / mv2 and feature direction for LINK on
  // directed graphs.
  Orientation orientation = Orientation::kOut;
  ZglOptions zgl;
  LinkOptions link;
  bool nb_sparse_approximation = false;
};

inline ScoreVector score_nodes(Method method, const LabeledGraph& g,
                               const TrainTestSplit& split,
                               const ScoringOptions& opts = {}) {
  switch (method) {
    case Method::kBaseline:
      return baseline_scores(g, split);
    case Method::kMv1:
      return mv1_scores(g, split, opts.orientation);
    case Method::kMv2:
      return mv2_scores(g, split, opts.orientation);
    case Method::kZgl:
      return zgl_scores(g, split, opts.zgl);
    case Method::kLinkLr: {
      LinkOptions lo = opts.link;
      lo.features = opts.orientation;
      return link_lr_scores(g, split, lo);
    }
    case Method::kLinkNb:
      return link_nb_scores(g, split,
                            {opts.orientation, opts.nb_sparse_approximation});
  }
  throw ArgumentError("unknown method");
}

struct ExperimentConfig {
  std::vector<double> label_fractions{0.1, 0.2, 0.3, 0.4, 0.5,
                                      0.6, 0.7, 0.8, 0.9};
  int folds = 10;
  std::vector<Method> methods{Method::kBaseline, Method::kMv1, Method::kMv2,
                              Method::kZgl,      Method::kLinkLr,
                              Method::kLinkNb};
  std::uint64_t seed = 0;
  LabelCode positive_class = 0;
  ScoringOptions scoring;
  int jobs = 1;

  void validate() const {
    if (label_fractions.empty()) {
      throw ConfigError("fractions", "need at least one label fraction");
    }
    for (double f : label_fractions) {
      if (!(f > 0 && f < 1)) {
        throw ConfigError("fractions", "fractions must lie in (0, 1)");
      }
    }
    if (folds < 1) throw ConfigError("folds", "must be >= 1");
    if (methods.empty()) throw ConfigError("methods", "need at least one");
    if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
  }
};

struct FoldResult {
  double fraction = 0;
  int fold = 0;
  std::uint64_t split_hash = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<std::optional<double>> auc;  // per config method
  std::vector<std::string> errors;         // per config method, "" if ok
};

struct CellSummary {
  Method method = Method::kBaseline;
  double fraction = 0;
  double mean_auc = 0;
  double std_auc = 0;  // population standard deviation over folds
  std::vector<double> fold_aucs;
  std::size_t failed_folds = 0;
};

struct EvalReport {
  std::string graph_id;
  std::uint64_t seed = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::vector<std::pair<std::string, std::size_t>> class_sizes;
  std::vector<Method> methods;
  std::vector<double> fractions;
  int folds = 0;
  std::vector<FoldResult> fold_results;
  std::vector<CellSummary> cells;  // method-major, then fraction
  bool complete = true;
  std::vector<std::string> warnings;

  const CellSummary& cell(Method m, double fraction) const {
    for (const auto& c : cells) {
      if (c.method == m && std::fabs(c.fraction - fraction) < 1e-12) return c;
    }
    throw ArgumentError(std::string("no cell for ") + to_string(m));
  }
};

namespace detail {

inline FoldResult RunFold(const LabeledGraph& g, const ExperimentConfig& cfg,
                          std::size_t fraction_index, int fold) {
  FoldResult r;
  r.fraction = cfg.label_fractions[fraction_index];
  r.fold = fold;
  r.auc.assign(cfg.methods.size(), std::nullopt);
  r.errors.assign(cfg.methods.size(), "");
  Rng rng = make_rng(cfg.seed, "split",
                     {fraction_index, static_cast<std::uint64_t>(fold)});
  TrainTestSplit split;
  try {
    split = sample_split(g, r.fraction, rng, cfg.positive_class);
  } catch (const Error& e) {
    for (auto& err : r.errors) err = std::string("split: ") + e.what();
    return r;
  }
  r.split_hash = split_hash(split);
  r.train_size = split.train().size();
  r.test_size = split.test().size();
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    try {
      auto scores = score_nodes(cfg.methods[m], g, split, cfg.scoring);
      r.auc[m] = auc(scores, g, cfg.positive_class);
    } catch (const Error& e) {
      r.errors[m] = e.what();
    }
  }
  return r;
}

}  // namespace detail

inline EvalReport run_experiment(const LabeledGraph& g,
                                 const ExperimentConfig& cfg,
                                 const std::string& graph_id = "graph") {
  cfg.validate();
  EvalReport report;
  report.graph_id = graph_id;
  report.seed = cfg.seed;
  report.node_count = g.node_count();
  report.edge_count = g.edge_count();
  for (std::size_t c = 0; c < g.dictionary().size(); ++c) {
    report.class_sizes.emplace_back(g.dictionary().name(static_cast<LabelCode>(c)),
                                    g.class_size(static_cast<LabelCode>(c)));
  }
  report.methods = cfg.methods;
  report.fractions = cfg.label_fractions;
  report.folds = cfg.folds;

  const std::size_t nf = cfg.label_fractions.size();
  const std::size_t tasks = nf * static_cast<std::size_t>(cfg.folds);
  report.fold_results.resize(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < tasks; t = next++) {
      report.fold_results[t] =
          detail::RunFold(g, cfg, t / cfg.folds, static_cast<int>(t % cfg.folds));
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), tasks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (std::size_t fi = 0; fi < nf; ++fi) {
      CellSummary cell;
      cell.method = cfg.methods[m];
      cell.fraction = cfg.label_fractions[fi];
      for (int f = 0; f < cfg.folds; ++f) {
        const auto& r = report.fold_results[fi * cfg.folds + f];
        if (r.auc[m]) {
          cell.fold_aucs.push_back(*r.auc[m]);
        } else {
          ++cell.failed_folds;
          report.complete = false;
          report.warnings.push_back(
              std::string(to_string(cell.method)) + " fraction " +
              std::to_string(cell.fraction) + " fold " + std::to_string(f) +
              ": " + r.errors[m]);
        }
      }
      if (!cell.fold_aucs.empty()) {
        double sum = 0;
        for (double a : cell.fold_aucs) sum += a;
        cell.mean_auc = sum / static_cast<double>(cell.fold_aucs.size());
        double ss = 0;
        for (double a : cell.fold_aucs) {
          ss += (a - cell.mean_auc) * (a - cell.mean_auc);
        }
        cell.std_auc = std::sqrt(ss / static_cast<double>(cell.fold_aucs.size()));
      } else {
        cell.mean_auc = std::nan("");
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["graph"] = r.graph_id;
  j["seed"] = r.seed;
  j["node_count"] = r.node_count;
  j["edge_count"] = r.edge_count;
  nlohmann::json sizes = nlohmann::json::object();
  for (const auto& [name, n] : r.class_sizes) sizes[name] = n;
  j["class_sizes"] = sizes;
  j["folds"] = r.folds;
  j["fractions"] = r.fractions;
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : r.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"method", to_string(c.method)},
                     {"fraction", c.fraction},
                     {"mean_auc", std::isfinite(c.mean_auc)
                                      ? nlohmann::json(c.mean_auc)
                                      : nlohmann::json(nullptr)},
                     {"std_auc", c.std_auc},
                     {"fold_auc", c.fold_aucs},
                     {"failed_folds", c.failed_folds}});
  }
  j["cells"] = cells;
  nlohmann::json splits = nlohmann::json::array();
  for (const auto& f : r.fold_results) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(f.split_hash));
    splits.push_back({{"fraction", f.fraction},
                      {"fold", f.fold},
                      {"split_hash", hex},
                      {"train_size", f.train_size},
                      {"test_size", f.test_size}});
  }
  j["splits"] = splits;
  j["complete"] = r.complete;
  j["warnings"] = r.warnings;
  return j;
}

// Long format: graph,method,fraction,fold,auc (one row per completed fold).
inline std::string to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "graph,method,fraction,fold,auc\n";
  char buf[64];
  for (std::size_t m = 0; m < r.methods.size(); ++m) {
    for (const auto& f : r.fold_results) {
      if (!f.auc[m]) continue;
      std::snprintf(buf, sizeof buf, "%.17g", *f.auc[m]);
      char frac[32];
      std::snprintf(frac, sizeof frac, "%g", f.fraction);
      out << r.graph_id << ',' << to_string(r.methods[m]) << ',' << frac << ','
          << f.fold << ',' << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace monophily
