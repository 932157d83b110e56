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

// Acceptance run: prints one [PASS] / [FAIL] / [SKIP] line per criterion
// and exits nonzero if any criterion fails.
//
//   acceptance [path/to/monophily]
//
// The CLI path enables the end-to-end reproducibility check. The Amherst
// check runs only when MONOPHILY_AMHERST_EDGES and MONOPHILY_AMHERST_LABELS
// point at an edge list and a label CSV (see README).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "monophily/monophily.hpp"
#include "test_support.hpp"

using namespace monophily;
using monophily::testing::BetaBinomialSequence;
using monophily::testing::BinomialSequence;
using monophily::testing::SequenceFrom;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kFail;
  std::string detail;
};

Outcome Pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Outcome Fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Outcome Skip(std::string d) { return {Outcome::kSkip, std::move(d)}; }
Outcome Check(bool ok, std::string d) { return ok ? Pass(d) : Fail(d); }

std::string Fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ------------------------------------------------------------------ 1

Outcome MleIdentity() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint32_t> nodes(2, 200), deg(1, 300);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = nodes(rng);
    std::vector<std::uint32_t> in(n), total(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      total[i] = deg(rng);
      in[i] = std::uniform_int_distribution<std::uint32_t>(0, total[i])(rng);
    }
    in[0] = 0;
    in[1] = total[1];
    auto seq = SequenceFrom(in, total);
    auto fit = fit_model1(seq);
    worst = std::max(worst,
                     std::fabs(logistic(fit.beta0_mle) - homophily_index(seq)));
  }
  return Check(worst <= 1e-12, Fmt("max |logistic(b0) - h| = %.3g", worst));
}

// ------------------------------------------------------------------ 2

Outcome Calibration() {
  int rejected = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    auto fit = fit_model1(BinomialSequence(500, 20, 80, 0.4, 7000 + r));
    if (fit.p_value < 0.05) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / reps;
  return Check(rate >= 0.03 && rate <= 0.07,
               Fmt("rejection rate at 0.05 = %.3f over 1000 replicates", rate));
}

// ------------------------------------------------------------------ 3

Outcome PhiRecovery() {
  std::string detail;
  bool ok = true;
  for (double phi : {0.05, 0.15, 0.3}) {
    int inside = 0;
    for (int s = 0; s < 50; ++s) {
      auto fit = fit_williams(BetaBinomialSequence(
          2000, 100, 0.5, phi, 90000 + static_cast<int>(phi * 1000) * 100 + s));
      if (std::fabs(fit.phi_hat - phi) <= 0.2 * phi) ++inside;
    }
    ok = ok && inside >= 45;
    detail += Fmt("phi=%.2f: %.0f/50 within 20%%; ", phi, inside);
  }
  return Check(ok, detail);
}

// ------------------------------------------------------------------ 4

Outcome MomentPreservation() {
  std::string detail;
  bool ok = true;

  // preference moments at 10^4 draws per block
  OsbmConfig c;
  c.block_sizes = {10000, 10000};
  c.block_labels = {"F", "M"};
  c.p_in = 0.1;
  c.p_out = 0.05;
  c.phi_in = 0.2;
  c.phi_out = 0.1;
  c.seed = 404;
  auto draw = draw_preferences(c);
  auto check_moments = [&](const std::vector<double>& xs, double p, double phi,
                           const char* name) {
    const double n = static_cast<double>(xs.size());
    const double mean = sample_mean(xs);
    const double var = sample_variance(xs);
    const double target = phi * p * (1 - p);
    const double sigma = std::sqrt(target / n);
    const bool good = std::fabs(mean - p) <= 3 * sigma &&
                      std::fabs(var - target) <= 0.1 * target;
    ok = ok && good;
    detail += std::string(name) +
              Fmt(" mean %.4f (%.1f sd) var rel err %.3f; ", mean,
                  (mean - p) / sigma, (var - target) / target);
  };
  for (std::size_t b = 0; b < 2; ++b) {
    std::vector<double> pin, pout;
    for (std::size_t v = 0; v < draw.node_count(); ++v) {
      if (draw.block_of[v] != b) continue;
      pin.push_back(draw.p_in[v]);
      pout.push_back(draw.p_out[v]);
    }
    check_moments(pin, 0.1, 0.2, b == 0 ? "F in" : "M in");
    check_moments(pout, 0.05, 0.1, b == 0 ? "F out" : "M out");
  }

  // realized degrees over 50 graphs from one fixed preference draw
  OsbmConfig d;
  d.block_sizes = {1000, 1000};
  d.block_labels = {"F", "M"};
  d.p_in = 0.1;
  d.p_out = 0.05;
  d.phi_in = d.phi_out = 0.02;
  d.seed = 405;
  const auto rates = d.rates();
  const auto fixed = draw_preferences(d);
  const std::size_t n = fixed.node_count();
  const int reps = 50;
  std::vector<double> in_sum(n, 0.0), out_sum(n, 0.0);
  for (int r = 0; r < reps; ++r) {
    auto g = realize_osbm_edges(d, fixed, derive_seed(405, "degree-check", {std::uint64_t(r)}));
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId u : g.out_neighbors(v)) {
        (g.label(u) == g.label(v) ? in_sum : out_sum)[v] += 1;
      }
    }
  }
  // Against d_i = p_i n_r the match is only approximate: the realized
  // mean is d_i * sum_j p_j / (n p), off by O(1/sqrt(n)) for the whole
  // block. The exact conditional mean is sum_j P(edge i j).
  std::size_t in_ok = 0, out_literal = 0, exact_in_ok = 0, exact_out_ok = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const double din = fixed.expected_in_degree(v);
    const double dout = fixed.expected_out_degree(v);
    double mean_in = 0, var_in = 0, mean_out = 0, var_out = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == v) continue;
      const double p = osbm_edge_probability(fixed, rates, v, j);
      if (fixed.block_of[j] == fixed.block_of[v]) {
        mean_in += p;
        var_in += p * (1 - p);
      } else {
        mean_out += p;
        var_out += p * (1 - p);
      }
    }
    const double m_in = in_sum[v] / reps;
    const double m_out = out_sum[v] / reps;
    // Bernoulli sums: the variance is at most the mean
    if (std::fabs(m_in - din) <= 3 * std::sqrt(din / reps)) ++in_ok;
    if (std::fabs(m_out - dout) <= 3 * std::sqrt(dout / reps)) ++out_literal;
    if (std::fabs(m_in - mean_in) <= 3 * std::sqrt(var_in / reps)) ++exact_in_ok;
    if (std::fabs(m_out - mean_out) <= 3 * std::sqrt(var_out / reps)) {
      ++exact_out_ok;
    }
  }
  const double nd = static_cast<double>(n);
  ok = ok && in_ok >= 0.95 * nd && exact_in_ok >= 0.95 * nd &&
       exact_out_ok >= 0.95 * nd;
  detail += Fmt("in-class degree within 3 SE of p_i n_r: %.3f; exact "
                "conditional mean in %.3f out %.3f; ",
                in_ok / nd, exact_in_ok / nd, exact_out_ok / nd);
  detail += Fmt("(out-class vs p_i (N - n_r), not gated: %.3f); ",
                out_literal / nd);

  // phi = 0, p_in = p_out: Erdos-Renyi mean degree
  const int seeds = 20;
  const std::size_t nn = 600;
  const double p = 0.05;
  double mean_deg = 0;
  for (int s = 0; s < seeds; ++s) {
    OsbmConfig e;
    e.block_sizes = {300, 300};
    e.p_in = e.p_out = p;
    e.seed = 500 + s;
    auto g = sample_osbm(e).graph;
    mean_deg += 2.0 * g.edge_count() / nn / seeds;
  }
  const double pairs = nn * (nn - 1) / 2.0;
  const double sd = 2 * std::sqrt(pairs * p * (1 - p)) / nn / std::sqrt(seeds);
  const bool er_ok = std::fabs(mean_deg - (nn - 1) * p) <= 3 * sd;
  ok = ok && er_ok;
  detail += Fmt("ER mean degree %.3f vs %.3f", mean_deg, (nn - 1) * p);
  return Check(ok, detail);
}

// ------------------------------------------------------------------ 5

Outcome Bifurcation() {
  const std::vector<Method> methods{Method::kMv1, Method::kZgl, Method::kMv2,
                                    Method::kLinkLr};
  std::string detail;
  bool ok = true;
  for (const char* preset : {"none", "homophily", "monophily", "both"}) {
    auto g = preprocess(sample_osbm(osbm_preset(preset, 2017)).graph).graph;
    ExperimentConfig cfg;
    cfg.label_fractions = {0.5};
    cfg.folds = 10;
    cfg.methods = methods;
    cfg.seed = 31;
    auto report = run_experiment(g, cfg, preset);
    detail += std::string(preset) + ":";
    const std::string name = preset;
    for (Method m : methods) {
      const double a = report.cell(m, 0.5).mean_auc;
      detail += std::string(" ") + to_string(m) + Fmt("=%.3f", a);
      const bool chance = a >= 0.45 && a <= 0.55;
      const bool strong = a > 0.7;
      const bool two_hop = m == Method::kMv2 || m == Method::kLinkLr;
      if (name == "none") ok = ok && chance;
      if (name == "homophily" || name == "both") ok = ok && strong;
      if (name == "monophily") ok = ok && (two_hop ? strong : chance);
    }
    ok = ok && report.complete;
    detail += "; ";
  }
  return Check(ok, detail);
}

// ------------------------------------------------------------------ 6

LabeledGraph RandomSmallGraph(std::mt19937_64& rng, std::size_t n, bool directed) {
  std::bernoulli_distribution edge(0.35), female(0.5);
  std::vector<LabeledGraph::Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j && (directed || i < j) && edge(rng)) edges.emplace_back(i, j);
    }
  }
  std::vector<LabelCode> labels(n);
  for (auto& l : labels) l = female(rng) ? 0 : 1;
  labels[0] = 0;
  labels[1] = 1;
  return LabeledGraph::Build(n, edges, labels,
                             LabelDictionary::FromNames({"F", "M"}), directed);
}

TrainTestSplit RandomSplit(const LabeledGraph& g, std::mt19937_64& rng,
                           double fraction) {
  std::bernoulli_distribution coin(fraction);
  for (;;) {
    std::vector<NodeId> train, test;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      (coin(rng) ? train : test).push_back(v);
    }
    if (train.empty() || test.empty()) continue;
    bool f = false, m = false;
    for (NodeId v : train) (g.label(v) == 0 ? f : m) = true;
    if (f && m) return TrainTestSplit(g, train, test, 0);
  }
}

Outcome OracleEquivalence() {
  std::mt19937_64 rng(6060);
  double mv2_err = 0, nb_err = 0, zgl_res = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rep % 8;
    const bool directed = rep % 2 == 1;
    auto g = RandomSmallGraph(rng, n, directed);
    auto split = RandomSplit(g, rng, 0.5);
    auto a = [&](NodeId u, NodeId v) { return g.has_edge(u, v) ? 1.0 : 0.0; };
    const double nf = split.positive_train(), nm = split.negative_train();

    auto mv2 = mv2_scores(g, split);
    auto nb = link_nb_scores(g, split);
    for (std::size_t k = 0; k < mv2.nodes.size(); ++k) {
      const NodeId u = mv2.nodes[k];
      double neg = 0, pos = 0;
      for (NodeId w = 0; w < n; ++w) {
        if (w == u || split.sign(w) == 0) continue;
        double paths = 0;
        for (NodeId v = 0; v < n; ++v) paths += a(u, v) * a(v, w);
        (split.sign(w) > 0 ? pos : neg) += paths;
      }
      const double expect =
          neg + pos == 0 ? (nm - nf) / (nm + nf) : (neg - pos) / (neg + pos);
      mv2_err = std::max(mv2_err, std::fabs(mv2.scores[k] - expect));

      double lf = std::log(nf / (nf + nm)), lm = std::log(nm / (nf + nm));
      for (NodeId i = 0; i < n; ++i) {
        double cf = 0, cm = 0;
        for (NodeId j : split.train()) {
          if (a(j, i) > 0) (split.sign(j) > 0 ? cf : cm) += 1;
        }
        const double pf = (cf + 1) / (nf + 2), pm = (cm + 1) / (nm + 2);
        lf += std::log(a(u, i) > 0 ? pf : 1 - pf);
        lm += std::log(a(u, i) > 0 ? pm : 1 - pm);
      }
      nb_err = std::max(nb_err, std::fabs(nb.scores[k] - (lf - lm)));
    }
  }
  // ZGL residuals on larger random graphs
  std::bernoulli_distribution edge(0.08);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 60;
    std::vector<LabeledGraph::Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (edge(rng)) edges.emplace_back(i, j);
      }
    }
    std::vector<LabelCode> labels(n);
    for (NodeId v = 0; v < n; ++v) labels[v] = v % 2;
    auto g = LabeledGraph::Build(n, edges, labels,
                                 LabelDictionary::FromNames({"F", "M"}), false);
    auto split = RandomSplit(g, rng, 0.3);
    auto s = zgl_scores(g, split);
    std::vector<double> f(n, 0.0);
    for (NodeId v : split.train()) f[v] = -split.sign(v);
    for (std::size_t k = 0; k < s.nodes.size(); ++k) f[s.nodes[k]] = s.scores[k];
    for (NodeId v : s.nodes) {
      if (g.degree(v) == 0) continue;
      double mean = 0;
      for (NodeId w : g.out_neighbors(v)) mean += f[w];
      zgl_res = std::max(zgl_res, std::fabs(f[v] - mean / g.degree(v)));
    }
  }
  // mv2 counts are integers, so equality is exact; the naive Bayes sums
  // are compared to round-off.
  return Check(mv2_err == 0 && nb_err <= 1e-9 && zgl_res <= 1e-8,
               Fmt("mv2 max err %.3g, naive Bayes max err %.3g, ZGL max "
                   "residual %.3g",
                   mv2_err, nb_err, zgl_res));
}

// ------------------------------------------------------------------ 7

Outcome RegularizationInsensitivity() {
  auto g = preprocess(sample_osbm(osbm_preset("monophily", 77)).graph).graph;
  Rng rng = make_rng(77, "split", {0, 0});
  auto split = sample_split(g, 0.5, rng);
  double lo = 1, hi = 0;
  std::string detail;
  for (double c : {1.0, 1e2, 1e4, 1e6}) {
    LinkOptions opts;
    opts.gain_c = c;
    auto s = link_lr_scores(g, split, opts);
    const double a = auc(s, g, 0);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    detail += Fmt("C=%g auc %.4f; ", c, a);
  }
  detail += Fmt("spread %.4f", hi - lo);
  return Check(hi - lo < 0.02, detail);
}

// ------------------------------------------------------------------ 8

Outcome Amherst() {
  const char* edges = std::getenv("MONOPHILY_AMHERST_EDGES");
  const char* labels = std::getenv("MONOPHILY_AMHERST_LABELS");
  if (!edges || !labels) {
    return Skip("MONOPHILY_AMHERST_EDGES / MONOPHILY_AMHERST_LABELS not set");
  }
  const char* female_env = std::getenv("MONOPHILY_AMHERST_FEMALE");
  const char* male_env = std::getenv("MONOPHILY_AMHERST_MALE");
  const std::string female = female_env ? female_env : "F";
  const std::string male = male_env ? male_env : "M";
  auto raw = io::read_graph(edges, labels, false);
  auto g = preprocess(raw).graph;
  const LabelCode fc = g.dictionary().code(female);
  const LabelCode mc = g.dictionary().code(male);
  auto ff = fit_williams(class_degree_sequence(g, fc, Orientation::kUndirected));
  auto fm = fit_williams(class_degree_sequence(g, mc, Orientation::kUndirected));
  bool ok = std::fabs(ff.model1.h_hat - 0.55) <= 0.01 &&
            std::fabs(ff.phi_hat - 0.04) <= 0.01 &&
            std::fabs(fm.model1.h_hat - 0.51) <= 0.01 &&
            std::fabs(fm.phi_hat - 0.04) <= 0.01 && ff.model1.p_value < 1e-3 &&
            fm.model1.p_value < 1e-3;
  ExperimentConfig cfg;
  cfg.label_fractions = {0.5};
  cfg.methods = {Method::kLinkLr, Method::kMv2, Method::kMv1, Method::kZgl};
  cfg.seed = 41;
  cfg.positive_class = fc;
  auto r = run_experiment(g, cfg, "amherst");
  const double link = r.cell(Method::kLinkLr, 0.5).mean_auc;
  const double mv2 = r.cell(Method::kMv2, 0.5).mean_auc;
  const double mv1 = r.cell(Method::kMv1, 0.5).mean_auc;
  const double zgl = r.cell(Method::kZgl, 0.5).mean_auc;
  ok = ok && link > mv2 && mv2 > std::max(mv1, zgl);
  return Check(ok, Fmt("F h %.3f phi %.3f, M h %.3f phi %.3f; ",
                       ff.model1.h_hat, ff.phi_hat, fm.model1.h_hat,
                       fm.phi_hat) +
                       Fmt("auc link %.3f mv2 %.3f mv1 %.3f zgl %.3f", link,
                           mv2, mv1, zgl));
}

// ------------------------------------------------------------------ 9

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome Reproducibility(const std::string& cli) {
  // library level: same seed, same bytes, any job count
  auto g = preprocess(sample_osbm(osbm_preset("both", 9)).graph).graph;
  ExperimentConfig cfg;
  cfg.label_fractions = {0.2, 0.5, 0.8};
  cfg.folds = 3;
  cfg.seed = 99;
  auto a = run_experiment(g, cfg, "g");
  cfg.jobs = 4;
  auto b = run_experiment(g, cfg, "g");
  bool ok = to_json(a).dump() == to_json(b).dump() && to_csv(a) == to_csv(b);
  std::string detail = ok ? "library reports identical" : "library reports differ";
  if (cli.empty()) return Check(ok, detail + "; CLI path not given");

  const fs::path work = fs::temp_directory_path() /
                        ("monophily_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string w = work.string();
  ok = ok && run("generate --preset both --seed 5 --out " + w + "/gen");
  const std::string in = "--edges " + w + "/gen/graph.tsv --labels " + w +
                         "/gen/labels.csv --fractions 10:90:40 --folds 4 "
                         "--seed 123 --null-sample 3 ";
  ok = ok && run("evaluate " + in + "--out " + w + "/r1");
  ok = ok && run("evaluate " + in + "--jobs 3 --out " + w + "/r2");
  for (const char* f :
       {"graph.report.json", "graph.report.csv", "graph.null_sample.json"}) {
    const auto x = Slurp(work / "r1" / f);
    ok = ok && !x.empty() && x == Slurp(work / "r2" / f);
  }
  fs::remove_all(work);
  return Check(ok, detail + (ok ? "; CLI evaluate reports byte-identical"
                                : "; CLI evaluate reports differ or failed"));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "MLE identity", 1, MleIdentity},
      {2, "Model I test calibration", 30, Calibration},
      {3, "dispersion recovery", 120, PhiRecovery},
      {4, "oSBM moment and degree preservation", 60, MomentPreservation},
      {5, "four-regime bifurcation", 600, Bifurcation},
      {6, "oracle equivalence", 30, OracleEquivalence},
      {7, "regularization insensitivity", 120, RegularizationInsensitivity},
      {8, "Amherst estimates and method ranking", 1e9, Amherst},
      {9, "reproducibility", 1e9, [&cli] { return Reproducibility(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (o.kind == Outcome::kPass && secs > c.budget_s) {
      o = Fail(o.detail + Fmt("; over the %.0f s budget", c.budget_s));
    }
    const char* tag = o.kind == Outcome::kPass   ? "PASS"
                      : o.kind == Outcome::kSkip ? "SKIP"
                                                 : "FAIL";
    if (o.kind == Outcome::kFail) ++failed;
    std::printf("[%s] %d %s (%.2f s): %s\n", tag, c.id, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
