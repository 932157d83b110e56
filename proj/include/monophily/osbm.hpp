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

// Overdispersed stochastic block model. Each node draws a same-block and
// an other-block affinity from Beta laws with mean p and variance
// phi * p * (1 - p); edges are then realized block pair by block pair with
// Chung-Lu probabilities so that the expected degrees implied by the
// affinities are (approximately) preserved.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "monophily/error.hpp"
#include "monophily/graph.hpp"
#include "monophily/random.hpp"

namespace monophily {

struct BlockRates {
  double p_in = 0;
  double p_out = 0;
  bool p_out_at_boundary = false;  // p_out == 0: blocks never connect
};

// Largest lambda for which resolve_rates gives p_out >= 0.
inline double max_feasible_lambda(std::span<const std::size_t> blocks) {
  double n = 0;
  double sq = 0;
  for (auto b : blocks) {
    n += static_cast<double>(b);
    sq += static_cast<double>(b) * static_cast<double>(b);
  }
  return n * n / sq;
}

// Rates that keep the overall mean degree at `mean_degree` while the
// same-block rate is `lambda` times the uniform rate mean_degree / N.
inline BlockRates resolve_rates(std::span<const std::size_t> blocks,
                                double mean_degree, double lambda) {
  if (blocks.size() < 2) throw ConfigError("blocks", "need at least 2 blocks");
  if (!(lambda >= 1)) throw ConfigError("lambda", "must be >= 1");
  if (!(mean_degree > 0)) throw ConfigError("mean_degree", "must be > 0");
  double n = 0;
  double sq = 0;
  for (auto b : blocks) {
    if (b == 0) throw ConfigError("blocks", "block sizes must be positive");
    n += static_cast<double>(b);
    sq += static_cast<double>(b) * static_cast<double>(b);
  }
  BlockRates r;
  r.p_in = lambda * mean_degree / n;
  // sum_i n_i * sum_{j != i} n_j = N^2 - sum_i n_i^2
  r.p_out = (mean_degree * n - r.p_in * sq) / (n * n - sq);
  const double lambda_max = n * n / sq;
  if (lambda == lambda_max) r.p_out = 0;
  if (r.p_out < 0) {
    // Rounding can leave a tiny negative value exactly at the boundary.
    if (r.p_out > -1e-15) {
      r.p_out = 0;
    } else {
      throw ConfigError("lambda", "p_out would be negative; maximal feasible "
                                  "lambda is " +
                                      std::to_string(lambda_max));
    }
  }
  r.p_out_at_boundary = r.p_out == 0;
  if (!(r.p_in < 1)) {
    throw ConfigError("lambda", "resolved p_in = " + std::to_string(r.p_in) +
                                    " is not below 1");
  }
  return r;
}

struct BetaParams {
  double alpha = 0;
  double beta = 0;
};

// Beta law with mean p and variance phi * p * (1 - p).
inline BetaParams beta_params(double p, double phi) {
  if (!(p > 0 && p < 1)) throw ConfigError("p", "mean must lie in (0, 1)");
  if (!(phi > 0 && phi < 1)) {
    throw ConfigError("phi", "dispersion must lie in (0, 1)");
  }
  const double scale = (1.0 / phi) * (1.0 - phi);
  return {p * scale, (1.0 - p) * scale};
}

struct OsbmConfig {
  std::vector<std::size_t> block_sizes;
  // Block label names; defaults to "0", "1", ...
  std::vector<std::string> block_labels;
  // Either explicit rates...
  std::optional<double> p_in;
  std::optional<double> p_out;
  // ...or lambda with the target mean degree.
  std::optional<double> lambda;
  std::optional<double> mean_degree;
  double phi_in = 0;
  double phi_out = 0;
  std::uint64_t seed = 0;
  bool allow_self_loops = false;

  std::size_t node_count() const {
    return std::accumulate(block_sizes.begin(), block_sizes.end(),
                           std::size_t{0});
  }

  std::vector<std::string> labels() const {
    if (!block_labels.empty()) return block_labels;
    std::vector<std::string> out;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      out.push_back(std::to_string(b));
    }
    return out;
  }

  BlockRates rates() const {
    validate();
    if (lambda) return resolve_rates(block_sizes, *mean_degree, *lambda);
    return {*p_in, *p_out, *p_out == 0};
  }

  void validate() const {
    if (block_sizes.size() < 2) {
      throw ConfigError("blocks", "need at least 2 blocks");
    }
    for (auto b : block_sizes) {
      if (b == 0) throw ConfigError("blocks", "block sizes must be positive");
    }
    if (!block_labels.empty()) {
      if (block_labels.size() != block_sizes.size()) {
        throw ConfigError("labels", "need one label per block");
      }
      auto sorted = block_labels;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ConfigError("labels", "block labels must be distinct");
      }
    }
    const bool explicit_rates = p_in.has_value() || p_out.has_value();
    const bool via_lambda = lambda.has_value() || mean_degree.has_value();
    if (explicit_rates == via_lambda) {
      throw ConfigError("p_in", "give either p_in and p_out, or lambda and "
                                "mean_degree");
    }
    if (explicit_rates) {
      if (!p_in || !p_out) {
        throw ConfigError(p_in ? "p_out" : "p_in", "missing");
      }
      if (!(*p_in > 0 && *p_in < 1)) {
        throw ConfigError("p_in", "must lie in (0, 1)");
      }
      if (!(*p_out >= 0 && *p_out < 1)) {
        throw ConfigError("p_out", "must lie in [0, 1)");
      }
    } else if (!lambda || !mean_degree) {
      throw ConfigError(lambda ? "mean_degree" : "lambda", "missing");
    }
    if (!(phi_in >= 0 && phi_in < 1)) {
      throw ConfigError("phi_in", "must lie in [0, 1)");
    }
    if (!(phi_out >= 0 && phi_out < 1)) {
      throw ConfigError("phi_out", "must lie in [0, 1)");
    }
  }

  static OsbmConfig from_json(const nlohmann::json& j) {
    OsbmConfig c;
    auto get_double = [&j](const char* key) -> std::optional<double> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      if (!j.at(key).is_number()) throw ConfigError(key, "must be a number");
      return j.at(key).get<double>();
    };
    if (!j.is_object()) throw ConfigError("<root>", "config must be an object");
    if (!j.contains("blocks") || !j.at("blocks").is_array()) {
      throw ConfigError("blocks", "required array of block sizes");
    }
    for (const auto& b : j.at("blocks")) {
      if (!b.is_number_integer() || b.get<long long>() <= 0) {
        throw ConfigError("blocks", "block sizes must be positive integers");
      }
      c.block_sizes.push_back(b.get<std::size_t>());
    }
    if (j.contains("labels")) {
      for (const auto& l : j.at("labels")) {
        if (!l.is_string()) throw ConfigError("labels", "must be strings");
        c.block_labels.push_back(l.get<std::string>());
      }
    }
    c.p_in = get_double("p_in");
    c.p_out = get_double("p_out");
    c.lambda = get_double("lambda");
    c.mean_degree = get_double("mean_degree");
    c.phi_in = get_double("phi_in").value_or(0.0);
    c.phi_out = get_double("phi_out").value_or(0.0);
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_integer()) {
        throw ConfigError("seed", "must be an integer");
      }
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("allow_self_loops")) {
      if (!j.at("allow_self_loops").is_boolean()) {
        throw ConfigError("allow_self_loops", "must be a boolean");
      }
      c.allow_self_loops = j.at("allow_self_loops").get<bool>();
    }
    c.validate();
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["blocks"] = block_sizes;
    j["labels"] = labels();
    if (p_in) j["p_in"] = *p_in;
    if (p_out) j["p_out"] = *p_out;
    if (lambda) j["lambda"] = *lambda;
    if (mean_degree) j["mean_degree"] = *mean_degree;
    j["phi_in"] = phi_in;
    j["phi_out"] = phi_out;
    j["seed"] = seed;
    j["allow_self_loops"] = allow_self_loops;
    return j;
  }
};

// The four homophily x monophily regimes on two blocks of 1000 nodes with
// mean degree 40: "none", "monophily", "homophily", "both". Homophily uses
// lambda = 1.5; monophily sets phi_in = phi_out = 0.2.
inline OsbmConfig osbm_preset(const std::string& name, std::uint64_t seed) {
  OsbmConfig c;
  c.block_sizes = {1000, 1000};
  c.block_labels = {"F", "M"};
  c.mean_degree = 40;
  c.seed = seed;
  bool homophily = false;
  bool monophily = false;
  if (name == "none") {
  } else if (name == "monophily") {
    monophily = true;
  } else if (name == "homophily") {
    homophily = true;
  } else if (name == "both") {
    homophily = monophily = true;
  } else {
    throw ConfigError("preset", "unknown preset '" + name +
                                    "' (none, monophily, homophily, both)");
  }
  c.lambda = homophily ? 1.5 : 1.0;
  c.phi_in = c.phi_out = monophily ? 0.2 : 0.0;
  return c;
}

struct PreferenceDraw {
  std::vector<std::size_t> block_sizes;
  std::vector<std::size_t> block_of;  // per node
  std::vector<double> p_in;           // same-block affinity per node
  std::vector<double> p_out;          // other-block affinity per node

  std::size_t node_count() const { return block_of.size(); }

  std::size_t complement_size(std::size_t node) const {
    return std::accumulate(block_sizes.begin(), block_sizes.end(),
                           std::size_t{0}) -
           block_sizes[block_of[node]];
  }

  double expected_in_degree(std::size_t node) const {
    return p_in[node] * static_cast<double>(block_sizes[block_of[node]]);
  }

  double expected_out_degree(std::size_t node) const {
    return p_out[node] * static_cast<double>(complement_size(node));
  }
};

namespace detail {

// Affinity sampler for one side; phi == 0 (or p == 0) gives a constant.
class AffinitySampler {
 public:
  AffinitySampler(double p, double phi) : p_(p) {
    if (phi > 0 && p > 0) {
      auto bp = beta_params(p, phi);
      beta_.emplace(bp.alpha, bp.beta);
    }
  }

  double operator()(Rng& rng) { return beta_ ? (*beta_)(rng) : p_; }

 private:
  double p_;
  std::optional<BetaDistribution> beta_;
};

}  // namespace detail

// Nodes are laid out block by block: block 0 holds ids 0..n_0-1, etc.
inline PreferenceDraw draw_preferences(const OsbmConfig& config) {
  const BlockRates rates = config.rates();
  PreferenceDraw draw;
  draw.block_sizes = config.block_sizes;
  const std::size_t n = config.node_count();
  draw.block_of.reserve(n);
  draw.p_in.reserve(n);
  draw.p_out.reserve(n);
  for (std::size_t b = 0; b < config.block_sizes.size(); ++b) {
    Rng rng = make_rng(config.seed, "osbm-preferences", {b});
    detail::AffinitySampler in(rates.p_in, config.phi_in);
    detail::AffinitySampler out(rates.p_out, config.phi_out);
    for (std::size_t i = 0; i < config.block_sizes[b]; ++i) {
      draw.block_of.push_back(b);
      draw.p_in.push_back(in(rng));
      draw.p_out.push_back(out(rng));
    }
  }
  return draw;
}

// Probability of the edge (i, j) given the affinity draw, clamped to 1.
inline double osbm_edge_probability(const PreferenceDraw& draw,
                                    const BlockRates& rates, std::size_t i,
                                    std::size_t j) {
  const std::size_t r = draw.block_of[i];
  const std::size_t s = draw.block_of[j];
  double p = 0;
  if (r == s) {
    const double nr = static_cast<double>(draw.block_sizes[r]);
    p = draw.expected_in_degree(i) * draw.expected_in_degree(j) /
        (nr * nr * rates.p_in);
  } else {
    if (rates.p_out == 0) return 0;
    p = draw.expected_out_degree(i) * draw.expected_out_degree(j) /
        (static_cast<double>(draw.complement_size(i)) *
         static_cast<double>(draw.complement_size(j)) * rates.p_out);
  }
  return std::min(1.0, p);
}

// Realizes one graph from a fixed affinity draw. Each block pair (r <= s)
// has its own RNG substream derived from `edge_seed`. LabeledGraph is
// simple, so self-loops drawn under allow_self_loops go to `self_loops`.
inline LabeledGraph realize_osbm_edges(const OsbmConfig& config,
                                       const PreferenceDraw& draw,
                                       std::uint64_t edge_seed,
                                       std::vector<NodeId>* self_loops = nullptr) {
  const BlockRates rates = config.rates();
  const std::size_t k = config.block_sizes.size();
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t b = 0; b < k; ++b) {
    start[b + 1] = start[b] + config.block_sizes[b];
  }
  std::vector<LabeledGraph::Edge> edges;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t s = r; s < k; ++s) {
      Rng rng = make_rng(edge_seed, "osbm-edges", {r, s});
      for (std::size_t i = start[r]; i < start[r + 1]; ++i) {
        const std::size_t j0 = r == s ? i : start[s];
        for (std::size_t j = j0; j < start[s + 1]; ++j) {
          if (i == j && !config.allow_self_loops) continue;
          const double p = osbm_edge_probability(draw, rates, i, j);
          if (p > 0 && unif(rng) < p) {
            if (i == j) {
              if (self_loops) self_loops->push_back(static_cast<NodeId>(i));
            } else {
              edges.emplace_back(static_cast<NodeId>(i),
                                 static_cast<NodeId>(j));
            }
          }
        }
      }
    }
  }
  auto dict = LabelDictionary::FromNames(config.labels());
  const auto names = config.labels();
  std::vector<LabelCode> labels(draw.node_count());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    labels[v] = dict.code(names[draw.block_of[v]]);
  }
  return LabeledGraph::Build(draw.node_count(), std::move(edges),
                             std::move(labels), std::move(dict), false);
}

struct OsbmSample {
  LabeledGraph graph;
  PreferenceDraw draw;
  BlockRates rates;
  std::vector<NodeId> self_loops;  // only with allow_self_loops
  std::vector<std::string> warnings;
};

inline OsbmSample sample_osbm(const OsbmConfig& config) {
  OsbmSample out;
  out.rates = config.rates();
  if (out.rates.p_out_at_boundary) {
    out.warnings.push_back(
        "p_out = 0: no edges between blocks, the graph is disconnected");
  }
  out.draw = draw_preferences(config);
  out.graph = realize_osbm_edges(config, out.draw,
                                 derive_seed(config.seed, "osbm-edge-seed"),
                                 &out.self_loops);
  return out;
}

}  // namespace monophily
