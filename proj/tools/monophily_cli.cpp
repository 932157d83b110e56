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

// monophily: command-line front end.
//
//   monophily fit        --edges g.tsv --labels g.csv [--directed --orientation in]
//   monophily generate   --preset both --seed 7 --out dir
//   monophily classify   --edges g.tsv --labels g.csv --method mv2 --out dir
//   monophily evaluate   --edges g.tsv --labels g.csv --fractions 10:90:10 --out dir
//   monophily null-sample --edges g.tsv --labels g.csv --replicates 100 --out dir
//
// Options given on the command line beat keys in --config, which beat the
// built-in defaults. Every command that writes to --out also writes a
// manifest.json holding the resolved configuration and SHA-256 digests of
// its inputs and outputs.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "monophily/monophily.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace monophily;

namespace {

std::string Sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) !=
      1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string UtcNow() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects what a run read and wrote, then writes manifest.json last.
class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv)
      : command_(std::move(command)), started_(UtcNow()) {
    for (int i = 0; i < argc; ++i) argv_.push_back(argv[i]);
  }

  void AddInput(const fs::path& path) {
    inputs_.push_back({{"path", path.string()}, {"sha256", Sha256(ReadFile(path))}});
  }

  // Atomic write into `dir`, recorded by file name.
  void Write(const fs::path& dir, const std::string& name,
             const std::string& contents) {
    io::write_file_atomic(dir / name, contents);
    outputs_.push_back({{"path", name}, {"sha256", Sha256(contents)}});
  }

  void Finish(const fs::path& dir, const json& config, std::uint64_t seed,
              bool complete) {
    json j;
    j["command"] = command_;
    j["argv"] = argv_;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["config"] = config;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["complete"] = complete;
    j["started_at"] = started_;
    j["finished_at"] = UtcNow();
    io::write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::string started_;
  json inputs_ = json::array();
  json outputs_ = json::array();
};

json LoadConfig(const std::string& path) {
  if (path.empty()) return json::object();
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", path + ": not a JSON object");
  return j;
}

// Fills `value` from the config file unless the flag was given.
template <class T>
void FromConfig(const CLI::Option* opt, const json& cfg, const char* key,
                T& value) {
  if (opt->count() > 0 || !cfg.contains(key)) return;
  try {
    value = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("bad value in config: ") + e.what());
  }
}

struct GraphInputs {
  std::vector<std::string> edges;
  std::vector<std::string> labels;
  std::string format = "edgelist";
  bool directed = false;
  bool raw = false;
  CLI::Option* format_opt = nullptr;
  CLI::Option* directed_opt = nullptr;
  CLI::Option* raw_opt = nullptr;

  void Register(CLI::App* app) {
    app->add_option("--edges", edges, "edge list (or matrix) file; repeatable")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--labels", labels, "label CSV, one per --edges")
        ->required()
        ->check(CLI::ExistingFile);
    format_opt = app->add_option("--format", format, "edgelist or matrix")
                     ->check(CLI::IsMember({"edgelist", "matrix"}));
    directed_opt = app->add_flag("--directed", directed, "treat edges as arcs");
    raw_opt = app->add_flag(
        "--raw", raw,
        "skip restriction to labeled nodes and the largest component");
  }

  void Resolve(const json& cfg) {
    FromConfig(format_opt, cfg, "format", format);
    FromConfig(directed_opt, cfg, "directed", directed);
    FromConfig(raw_opt, cfg, "raw", raw);
    if (edges.size() != labels.size()) {
      throw ArgumentError("need one --labels file per --edges file");
    }
  }

  json ToJson() const {
    return {{"format", format}, {"directed", directed}, {"raw", raw}};
  }
};

struct NamedGraph {
  std::string id;
  LabeledGraph graph;
};

std::vector<NamedGraph> LoadGraphs(const GraphInputs& in, Manifest* manifest) {
  std::vector<NamedGraph> out;
  for (std::size_t i = 0; i < in.edges.size(); ++i) {
    auto g = io::read_graph(in.edges[i], in.labels[i], in.directed,
                            in.format == "matrix" ? io::EdgeFormat::kMatrix
                                                  : io::EdgeFormat::kEdgeList);
    if (!in.raw) g = preprocess(g).graph;
    if (manifest) {
      manifest->AddInput(in.edges[i]);
      manifest->AddInput(in.labels[i]);
    }
    out.push_back({fs::path(in.edges[i]).stem().string(), std::move(g)});
  }
  return out;
}

Orientation ResolveOrientation(const std::string& name, bool directed) {
  if (name.empty()) return directed ? Orientation::kOut : Orientation::kUndirected;
  return parse_orientation(name);
}

// Fits on `g` with orientation `o`; a directed graph asked for the
// undirected view is symmetrized first.
ClassDegreeSequence SequenceFor(const LabeledGraph& g, LabelCode c,
                                Orientation o) {
  if (o == Orientation::kUndirected && g.directed()) {
    return class_degree_sequence(g.to_undirected(), c, o);
  }
  if (o != Orientation::kUndirected && !g.directed()) {
    return class_degree_sequence(g, c, Orientation::kOut);
  }
  return class_degree_sequence(g, c, o);
}

LabelCode PositiveClass(const LabeledGraph& g, const std::string& name) {
  if (g.dictionary().size() < 2) {
    throw StructuralError("classification needs at least two classes");
  }
  return name.empty() ? 0 : g.dictionary().code(name);
}

// "10:90:10" (percent start:stop:step) or "10,50,90" (percent list).
std::vector<double> ParseFractions(const std::string& spec) {
  std::vector<double> out;
  auto number = [&spec](const std::string& tok) {
    try {
      std::size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("fractions", "cannot parse '" + spec + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(number(tok));
    if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0]) {
      throw ConfigError("fractions", "expected start:stop:step in percent");
    }
    // integer stepping avoids accumulating 0.1 + 0.1 + ...
    const auto steps =
        static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      out.push_back((parts[0] + static_cast<double>(k) * parts[2]) / 100.0);
    }
  } else {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(number(tok) / 100.0);
  }
  return out;
}

std::vector<Method> ParseMethods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

json HistogramJson(const Histogram& h) {
  return {{"edges", h.edges}, {"density", h.density}};
}

json NullSampleJson(const LabeledGraph& g, Orientation o,
                    std::size_t replicates, std::size_t bins,
                    std::uint64_t seed) {
  json classes = json::array();
  for (std::size_t c = 0; c < g.dictionary().size(); ++c) {
    const auto code = static_cast<LabelCode>(c);
    auto seq = SequenceFor(g, code, o);
    json entry{{"class", g.dictionary().name(code)}};
    try {
      auto obs = observed_preferences(seq);
      auto null = sample_null_preferences(
          seq, replicates, derive_seed(seed, "null-sample", {c}));
      entry["h_hat"] = homophily_index(seq);
      entry["replicates"] = null.replicate_count;
      entry["nodes"] = null.nodes_per_replicate;
      entry["zero_degree_skipped"] = null.zero_degree_skipped;
      entry["observed"] = {{"mean", sample_mean(obs)},
                           {"variance", sample_variance(obs)},
                           {"histogram", HistogramJson(preference_histogram(obs, bins))}};
      entry["null"] = {{"mean", sample_mean(null.samples)},
                       {"variance", sample_variance(null.samples)},
                       {"histogram",
                        HistogramJson(preference_histogram(null.samples, bins))}};
    } catch (const DegenerateInputError& e) {
      entry["error"] = e.what();
    }
    classes.push_back(entry);
  }
  return {{"orientation", to_string(o)}, {"seed", seed}, {"classes", classes}};
}

unsigned DefaultJobs() {
  if (const char* env = std::getenv("MONOPHILY_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring MONOPHILY_JOBS='" << env << "'\n";
  }
  return 1;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  GraphInputs graphs;
  std::string config;
  std::string orientation;
  double alpha = 0.001;
  int max_iter = 100;
  double closeness = 1e-4;
  std::string out;
  CLI::Option* orientation_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* max_iter_opt = nullptr;
  CLI::Option* closeness_opt = nullptr;
};

int RunFit(FitArgs& a, int argc, char** argv) {
  const json cfg = LoadConfig(a.config);
  a.graphs.Resolve(cfg);
  FromConfig(a.orientation_opt, cfg, "orientation", a.orientation);
  FromConfig(a.alpha_opt, cfg, "alpha", a.alpha);
  FromConfig(a.max_iter_opt, cfg, "max_iter", a.max_iter);
  FromConfig(a.closeness_opt, cfg, "closeness", a.closeness);
  const WilliamsOptions opts{a.alpha, a.max_iter, a.closeness};

  Manifest manifest("fit", argc, argv);
  auto graphs = LoadGraphs(a.graphs, a.out.empty() ? nullptr : &manifest);
  std::string lines;
  bool ok = true;
  for (const auto& [id, g] : graphs) {
    const Orientation o = ResolveOrientation(a.orientation, g.directed());
    for (std::size_t c = 0; c < g.dictionary().size(); ++c) {
      const auto code = static_cast<LabelCode>(c);
      json row;
      try {
        row = to_json(fit_williams(SequenceFor(g, code, o), opts),
                      g.dictionary().name(code));
      } catch (const DegenerateInputError& e) {
        row = {{"class", g.dictionary().name(code)}, {"error", e.what()}};
        ok = false;
      }
      row["graph"] = id;
      row["orientation"] = to_string(o);
      lines += row.dump() + "\n";
    }
  }
  if (a.out.empty()) {
    std::cout << lines;
  } else {
    fs::create_directories(a.out);
    manifest.Write(a.out, "fit.jsonl", lines);
    json resolved = a.graphs.ToJson();
    resolved["orientation"] = a.orientation;
    resolved["alpha"] = a.alpha;
    resolved["max_iter"] = a.max_iter;
    resolved["closeness"] = a.closeness;
    manifest.Finish(a.out, resolved, 0, ok);
  }
  return ok ? 0 : 1;
}

// ----------------------------------------------------------- generate

struct GenerateArgs {
  std::string preset;
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

int RunGenerate(GenerateArgs& a, int argc, char** argv) {
  if (a.preset.empty() == a.config.empty()) {
    throw ArgumentError("give exactly one of --preset or --config");
  }
  Manifest manifest("generate", argc, argv);
  OsbmConfig config;
  if (!a.preset.empty()) {
    config = osbm_preset(a.preset, a.seed);
  } else {
    config = OsbmConfig::from_json(LoadConfig(a.config));
    manifest.AddInput(a.config);
    if (a.seed_opt->count() > 0) config.seed = a.seed;
  }
  auto sample = sample_osbm(config);
  for (const auto& w : sample.warnings) std::cerr << "warning: " << w << "\n";
  const auto& g = sample.graph;

  json summary;
  summary["nodes"] = g.node_count();
  summary["edges"] = g.edge_count();
  summary["mean_degree"] =
      2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
  summary["p_in"] = sample.rates.p_in;
  summary["p_out"] = sample.rates.p_out;
  summary["self_loops_dropped"] = sample.self_loops.size();
  json classes = json::array();
  for (std::size_t c = 0; c < g.dictionary().size(); ++c) {
    const auto code = static_cast<LabelCode>(c);
    try {
      auto fit = fit_williams(
          class_degree_sequence(g, code, Orientation::kUndirected));
      classes.push_back(to_json(fit, g.dictionary().name(code)));
    } catch (const DegenerateInputError& e) {
      classes.push_back({{"class", g.dictionary().name(code)}, {"error", e.what()}});
    }
  }
  summary["classes"] = classes;

  fs::create_directories(a.out);
  std::ostringstream edges, labels;
  io::write_edge_list(edges, g);
  io::write_labels(labels, g);
  manifest.Write(a.out, "graph.tsv", edges.str());
  manifest.Write(a.out, "labels.csv", labels.str());
  manifest.Write(a.out, "config.json", config.to_json().dump(2) + "\n");
  manifest.Write(a.out, "summary.json", summary.dump(2) + "\n");
  manifest.Finish(a.out, config.to_json(), config.seed, true);

  std::cout << "nodes " << g.node_count() << "  edges " << g.edge_count()
            << "  mean degree " << summary["mean_degree"].get<double>() << "\n";
  for (const auto& c : classes) {
    if (c.contains("error")) {
      std::cout << "class " << c["class"].get<std::string>() << ": "
                << c["error"].get<std::string>() << "\n";
    } else {
      std::cout << "class " << c["class"].get<std::string>() << ": h_hat "
                << c["h_hat"].get<double>() << "  phi_hat "
                << c["phi_hat"].get<double>() << "\n";
    }
  }
  return 0;
}

// ------------------------------------------------- classify / evaluate

struct ScoringArgs {
  std::string orientation;
  double gain_c = 1e6;
  bool nb_sparse = false;
  std::string positive_class;
  CLI::Option* orientation_opt = nullptr;
  CLI::Option* gain_c_opt = nullptr;
  CLI::Option* nb_sparse_opt = nullptr;
  CLI::Option* positive_opt = nullptr;

  void Register(CLI::App* app) {
    orientation_opt = app->add_option(
        "--orientation", orientation,
        "neighbor / feature direction on directed graphs: in or out");
    gain_c_opt = app->add_option("--gain-c", gain_c,
                                 "LINK inverse regularization strength");
    nb_sparse_opt = app->add_flag("--nb-sparse", nb_sparse,
                                  "LINK naive Bayes sparse approximation");
    positive_opt = app->add_option(
        "--positive-class", positive_class,
        "class scored as +1 (default: first class in sorted order)");
  }

  void Resolve(const json& cfg) {
    FromConfig(orientation_opt, cfg, "orientation", orientation);
    FromConfig(gain_c_opt, cfg, "gain_c", gain_c);
    FromConfig(nb_sparse_opt, cfg, "nb_sparse", nb_sparse);
    FromConfig(positive_opt, cfg, "positive_class", positive_class);
  }

  ScoringOptions Options(bool directed) const {
    ScoringOptions s;
    s.orientation = directed ? ResolveOrientation(orientation, true)
                             : Orientation::kOut;
    if (s.orientation == Orientation::kUndirected) {
      throw ArgumentError("scoring orientation must be in or out");
    }
    s.link.gain_c = gain_c;
    s.nb_sparse_approximation = nb_sparse;
    return s;
  }

  json ToJson() const {
    return {{"orientation", orientation},
            {"gain_c", gain_c},
            {"nb_sparse", nb_sparse},
            {"positive_class", positive_class}};
  }
};

struct ClassifyArgs {
  GraphInputs graphs;
  ScoringArgs scoring;
  std::string config;
  std::string method = "link_lr";
  double fraction = 50;
  int fold = 0;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* method_opt = nullptr;
  CLI::Option* fraction_opt = nullptr;
  CLI::Option* fold_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int RunClassify(ClassifyArgs& a, int argc, char** argv) {
  const json cfg = LoadConfig(a.config);
  a.graphs.Resolve(cfg);
  a.scoring.Resolve(cfg);
  FromConfig(a.method_opt, cfg, "method", a.method);
  FromConfig(a.fraction_opt, cfg, "fraction", a.fraction);
  FromConfig(a.fold_opt, cfg, "fold", a.fold);
  FromConfig(a.seed_opt, cfg, "seed", a.seed);
  const Method method = parse_method(a.method);

  Manifest manifest("classify", argc, argv);
  auto graphs = LoadGraphs(a.graphs, &manifest);
  fs::create_directories(a.out);
  for (const auto& [id, g] : graphs) {
    const LabelCode pos = PositiveClass(g, a.scoring.positive_class);
    // Same substream as fold `fold` of a single-fraction evaluate run.
    Rng rng = make_rng(a.seed, "split", {0, static_cast<std::uint64_t>(a.fold)});
    auto split = sample_split(g, a.fraction / 100.0, rng, pos);
    auto scores = score_nodes(method, g, split, a.scoring.Options(g.directed()));
    std::ostringstream csv;
    csv << "node_id,method,score,fallback_flag\n";
    char buf[40];
    for (std::size_t k = 0; k < scores.nodes.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", scores.scores[k]);
      csv << g.external_id(scores.nodes[k]) << ',' << to_string(method) << ','
          << buf << ',' << (scores.fallback[k] ? 1 : 0) << '\n';
    }
    manifest.Write(a.out, id + ".scores.csv", csv.str());
    std::cout << id << " " << to_string(method) << " auc "
              << auc(scores, g, pos) << "  test nodes " << scores.nodes.size()
              << "  fallback " << scores.fallback_count << "\n";
  }
  json resolved = a.graphs.ToJson();
  resolved.update(a.scoring.ToJson());
  resolved["method"] = a.method;
  resolved["fraction"] = a.fraction;
  resolved["fold"] = a.fold;
  manifest.Finish(a.out, resolved, a.seed, true);
  return 0;
}

struct EvaluateArgs {
  GraphInputs graphs;
  ScoringArgs scoring;
  std::string config;
  std::vector<std::string> methods{"baseline", "mv1", "mv2",
                                   "zgl",      "link_lr", "link_nb"};
  std::string fractions = "10:90:10";
  int folds = 10;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t null_sample = 0;
  std::size_t bins = 20;
  std::string out;
  CLI::Option* methods_opt = nullptr;
  CLI::Option* fractions_opt = nullptr;
  CLI::Option* folds_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* null_opt = nullptr;
  CLI::Option* bins_opt = nullptr;
};

int RunEvaluate(EvaluateArgs& a, int argc, char** argv) {
  const json cfg = LoadConfig(a.config);
  a.graphs.Resolve(cfg);
  a.scoring.Resolve(cfg);
  FromConfig(a.methods_opt, cfg, "methods", a.methods);
  FromConfig(a.fractions_opt, cfg, "fractions", a.fractions);
  FromConfig(a.folds_opt, cfg, "folds", a.folds);
  FromConfig(a.seed_opt, cfg, "seed", a.seed);
  FromConfig(a.jobs_opt, cfg, "jobs", a.jobs);
  FromConfig(a.null_opt, cfg, "null_sample", a.null_sample);
  FromConfig(a.bins_opt, cfg, "bins", a.bins);

  ExperimentConfig exp;
  exp.label_fractions = ParseFractions(a.fractions);
  exp.folds = a.folds;
  exp.methods = ParseMethods(a.methods);
  exp.seed = a.seed;
  exp.jobs = static_cast<int>(a.jobs);
  exp.validate();

  Manifest manifest("evaluate", argc, argv);
  auto graphs = LoadGraphs(a.graphs, &manifest);
  fs::create_directories(a.out);
  bool complete = true;
  for (const auto& [id, g] : graphs) {
    exp.positive_class = PositiveClass(g, a.scoring.positive_class);
    exp.scoring = a.scoring.Options(g.directed());
    auto report = run_experiment(g, exp, id);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    complete = complete && report.complete;
    manifest.Write(a.out, id + ".report.json", to_json(report).dump(2) + "\n");
    manifest.Write(a.out, id + ".report.csv", to_csv(report));
    if (a.null_sample > 0) {
      const Orientation o =
          g.directed() ? exp.scoring.orientation : Orientation::kUndirected;
      manifest.Write(a.out, id + ".null_sample.json",
                     NullSampleJson(g, o, a.null_sample, a.bins, a.seed).dump(2) +
                         "\n");
    }
    for (const auto& c : report.cells) {
      std::printf("%s %-8s %4.0f%%  auc %.4f +- %.4f\n", id.c_str(),
                  to_string(c.method), 100 * c.fraction, c.mean_auc, c.std_auc);
    }
  }
  json resolved = a.graphs.ToJson();
  resolved.update(a.scoring.ToJson());
  resolved["methods"] = a.methods;
  resolved["fractions"] = exp.label_fractions;
  resolved["folds"] = a.folds;
  resolved["null_sample"] = a.null_sample;
  resolved["bins"] = a.bins;
  // jobs is left out: it cannot change the results
  manifest.Finish(a.out, resolved, a.seed, complete);
  return complete ? 0 : 3;
}

// -------------------------------------------------------- null-sample

struct NullArgs {
  GraphInputs graphs;
  std::string config;
  std::string orientation;
  std::size_t replicates = 100;
  std::size_t bins = 20;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* orientation_opt = nullptr;
  CLI::Option* replicates_opt = nullptr;
  CLI::Option* bins_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int RunNull(NullArgs& a, int argc, char** argv) {
  const json cfg = LoadConfig(a.config);
  a.graphs.Resolve(cfg);
  FromConfig(a.orientation_opt, cfg, "orientation", a.orientation);
  FromConfig(a.replicates_opt, cfg, "replicates", a.replicates);
  FromConfig(a.bins_opt, cfg, "bins", a.bins);
  FromConfig(a.seed_opt, cfg, "seed", a.seed);

  Manifest manifest("null-sample", argc, argv);
  auto graphs = LoadGraphs(a.graphs, &manifest);
  fs::create_directories(a.out);
  for (const auto& [id, g] : graphs) {
    const Orientation o = ResolveOrientation(a.orientation, g.directed());
    manifest.Write(a.out, id + ".null_sample.json",
                   NullSampleJson(g, o, a.replicates, a.bins, a.seed).dump(2) +
                       "\n");
  }
  json resolved = a.graphs.ToJson();
  resolved["orientation"] = a.orientation;
  resolved["replicates"] = a.replicates;
  resolved["bins"] = a.bins;
  manifest.Finish(a.out, resolved, a.seed, true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homophily and monophily in attributed networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit Model I and the dispersion "
                                            "model per class");
  fit.graphs.Register(fit_cmd);
  fit_cmd->add_option("--config", fit.config, "JSON file with option values");
  fit.orientation_opt = fit_cmd->add_option(
      "--orientation", fit.orientation, "undirected, in or out");
  fit.alpha_opt = fit_cmd->add_option("--alpha", fit.alpha,
                                      "significance level of the Model I test");
  fit.max_iter_opt = fit_cmd->add_option("--max-iter", fit.max_iter);
  fit.closeness_opt = fit_cmd->add_option(
      "--closeness", fit.closeness, "relative stop band around the dof");
  fit_cmd->add_option("--out", fit.out, "output directory (default: stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "sample an oSBM graph");
  gen_cmd->add_option("--preset", gen.preset, "none, monophily, homophily, both");
  gen_cmd->add_option("--config", gen.config, "oSBM JSON config")
      ->check(CLI::ExistingFile);
  gen.seed_opt = gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out)->required();

  ClassifyArgs cls;
  auto* cls_cmd = app.add_subcommand("classify", "score one split");
  cls.graphs.Register(cls_cmd);
  cls.scoring.Register(cls_cmd);
  cls_cmd->add_option("--config", cls.config, "JSON file with option values");
  cls.method_opt = cls_cmd->add_option(
      "--method", cls.method, "baseline, mv1, mv2, zgl, link_lr, link_nb");
  cls.fraction_opt = cls_cmd->add_option("--fraction", cls.fraction,
                                         "labeled percentage");
  cls.fold_opt = cls_cmd->add_option("--fold", cls.fold);
  cls.seed_opt = cls_cmd->add_option("--seed", cls.seed);
  cls_cmd->add_option("--out", cls.out)->required();

  EvaluateArgs ev;
  ev.jobs = DefaultJobs();
  auto* ev_cmd = app.add_subcommand("evaluate", "cross-validated AUC curves");
  ev.graphs.Register(ev_cmd);
  ev.scoring.Register(ev_cmd);
  ev_cmd->add_option("--config", ev.config, "JSON file with option values");
  ev.methods_opt = ev_cmd->add_option("--methods", ev.methods)->delimiter(',');
  ev.fractions_opt = ev_cmd->add_option(
      "--fractions", ev.fractions, "percent start:stop:step or a,b,c");
  ev.folds_opt = ev_cmd->add_option("--folds", ev.folds);
  ev.seed_opt = ev_cmd->add_option("--seed", ev.seed);
  ev.jobs_opt = ev_cmd->add_option("--jobs", ev.jobs,
                                   "worker threads (env MONOPHILY_JOBS)");
  ev.null_opt = ev_cmd->add_option(
      "--null-sample", ev.null_sample,
      "also write null preference histograms with this many replicates");
  ev.bins_opt = ev_cmd->add_option("--bins", ev.bins);
  ev_cmd->add_option("--out", ev.out)->required();

  NullArgs nul;
  auto* nul_cmd = app.add_subcommand(
      "null-sample", "observed vs binomial-null preference histograms");
  nul.graphs.Register(nul_cmd);
  nul_cmd->add_option("--config", nul.config, "JSON file with option values");
  nul.orientation_opt = nul_cmd->add_option("--orientation", nul.orientation);
  nul.replicates_opt = nul_cmd->add_option("--replicates", nul.replicates);
  nul.bins_opt = nul_cmd->add_option("--bins", nul.bins);
  nul.seed_opt = nul_cmd->add_option("--seed", nul.seed);
  nul_cmd->add_option("--out", nul.out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) return RunFit(fit, argc, argv);
    if (*gen_cmd) return RunGenerate(gen, argc, argv);
    if (*cls_cmd) return RunClassify(cls, argc, argv);
    if (*ev_cmd) return RunEvaluate(ev, argc, argv);
    if (*nul_cmd) return RunNull(nul, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
