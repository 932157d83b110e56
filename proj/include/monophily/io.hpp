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

// Text formats:
//   edge list  one edge per line, two whitespace-separated integer ids,
//              lines starting with '#' ignored
//   labels     CSV with header `node_id,label`; empty label = missing
//   matrix     dense 0/1 adjacency rows (FB100-style dumps), node ids are
//              row indices

#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monophily/error.hpp"
#include "monophily/graph.hpp"

namespace monophily::io {

using EdgeRecords = std::vector<std::pair<ExternalId, ExternalId>>;
using LabelRecords = std::map<ExternalId, std::optional<std::string>>;

namespace detail {

inline std::string_view Trim(std::string_view s) {
  const char* ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<ExternalId> ParseId(std::string_view tok) {
  ExternalId v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
  return v;
}

inline std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace detail

inline EdgeRecords read_edge_list(std::istream& in,
                                  const std::string& source = "<edges>") {
  EdgeRecords edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::Trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tokens = detail::SplitWhitespace(body);
    if (tokens.size() != 2) {
      throw ParseError(source, lineno,
                       "expected 2 ids, found " + std::to_string(tokens.size()));
    }
    auto a = detail::ParseId(tokens[0]);
    auto b = detail::ParseId(tokens[1]);
    if (!a || !b) {
      throw ParseError(source, lineno, "unparsable node id");
    }
    edges.emplace_back(*a, *b);
  }
  return edges;
}

inline LabelRecords read_labels(std::istream& in,
                                const std::string& source = "<labels>") {
  LabelRecords labels;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::Trim(line);
    if (body.empty()) continue;
    if (!header_seen) {
      if (body != "node_id,label") {
        throw ParseError(source, lineno, "expected header 'node_id,label'");
      }
      header_seen = true;
      continue;
    }
    auto comma = body.find(',');
    if (comma == std::string_view::npos ||
        body.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(source, lineno, "expected 2 fields");
    }
    auto id = detail::ParseId(detail::Trim(body.substr(0, comma)));
    if (!id) throw ParseError(source, lineno, "unparsable node id");
    auto label = detail::Trim(body.substr(comma + 1));
    auto [it, inserted] = labels.emplace(
        *id, label.empty() ? std::nullopt
                           : std::optional<std::string>(std::string(label)));
    if (!inserted) {
      throw ParseError(source, lineno,
                       "duplicate node id " + std::to_string(*id));
    }
  }
  if (!header_seen) throw ParseError(source, 0, "missing header");
  return labels;
}

// Dense 0/1 rows; entry (i, j) = 1 is an edge i -> j.
inline EdgeRecords read_dense_matrix(std::istream& in,
                                     const std::string& source = "<matrix>") {
  EdgeRecords edges;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  ExternalId row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::Trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tokens = detail::SplitWhitespace(body);
    if (row == 0) width = tokens.size();
    if (tokens.size() != width) {
      throw ParseError(source, lineno,
                       "row has " + std::to_string(tokens.size()) +
                           " entries, expected " + std::to_string(width));
    }
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      if (tokens[j] == "1") {
        edges.emplace_back(row, static_cast<ExternalId>(j));
      } else if (tokens[j] != "0") {
        throw ParseError(source, lineno, "matrix entries must be 0 or 1");
      }
    }
    ++row;
  }
  if (static_cast<std::size_t>(row) != width) {
    throw ParseError(source, lineno, "matrix is not square");
  }
  return edges;
}

inline EdgeRecords read_edge_list(const std::filesystem::path& path) {
  auto in = detail::OpenOrThrow(path);
  return read_edge_list(in, path.string());
}

inline LabelRecords read_labels(const std::filesystem::path& path) {
  auto in = detail::OpenOrThrow(path);
  return read_labels(in, path.string());
}

inline EdgeRecords read_dense_matrix(const std::filesystem::path& path) {
  auto in = detail::OpenOrThrow(path);
  return read_dense_matrix(in, path.string());
}

enum class EdgeFormat { kEdgeList, kMatrix };

inline LabeledGraph read_graph(const std::filesystem::path& edges,
                               const std::filesystem::path& labels,
                               bool directed,
                               EdgeFormat format = EdgeFormat::kEdgeList) {
  auto records = format == EdgeFormat::kMatrix ? read_dense_matrix(edges)
                                               : read_edge_list(edges);
  return load_graph(records, read_labels(labels), directed);
}

// Writes with external ids so output round-trips through load_graph.
inline void write_edge_list(std::ostream& out, const LabeledGraph& g) {
  out << "# " << (g.directed() ? "directed" : "undirected") << " "
      << g.node_count() << " nodes " << g.edge_count() << " edges\n";
  for (auto [u, v] : g.edges()) {
    out << g.external_id(u) << '\t' << g.external_id(v) << '\n';
  }
}

inline void write_labels(std::ostream& out, const LabeledGraph& g) {
  out << "node_id,label\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.external_id(v) << ',';
    if (g.labeled(v)) out << g.dictionary().name(g.label(v));
    out << '\n';
  }
}

// Writes to a sibling temp file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace monophily::io
