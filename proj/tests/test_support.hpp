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

// Data generators shared by the unit and acceptance suites. They build
// degree sequences directly from the binomial / beta-binomial laws with
// standard-library distributions, independent of the library's own
// generator code.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "monophily/graph.hpp"

namespace monophily::testing {

inline ClassDegreeSequence SequenceFrom(const std::vector<std::uint32_t>& in,
                                        const std::vector<std::uint32_t>& total) {
  ClassDegreeSequence seq;
  seq.class_id = 0;
  seq.class_size = in.size();
  seq.complement_size = in.size();
  for (std::size_t i = 0; i < in.size(); ++i) {
    seq.entries.push_back(
        {static_cast<NodeId>(i), in[i], total[i] - in[i]});
  }
  return seq;
}

// D_in ~ Binom(d_i, h) with d_i drawn uniformly from [d_lo, d_hi].
inline ClassDegreeSequence BinomialSequence(std::size_t n, std::uint32_t d_lo,
                                            std::uint32_t d_hi, double h,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> deg(d_lo, d_hi);
  std::vector<std::uint32_t> in(n), total(n);
  for (std::size_t i = 0; i < n; ++i) {
    total[i] = deg(rng);
    in[i] = std::binomial_distribution<std::uint32_t>(total[i], h)(rng);
  }
  return SequenceFrom(in, total);
}

// Per-node preference p_i ~ Beta with mean h and variance phi h (1 - h),
// then D_in ~ Binom(d, p_i).
inline ClassDegreeSequence BetaBinomialSequence(std::size_t n, std::uint32_t d,
                                                double h, double phi,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double scale = (1 - phi) / phi;
  std::gamma_distribution<double> ga(h * scale), gb((1 - h) * scale);
  std::vector<std::uint32_t> in(n), total(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ga(rng);
    const double y = gb(rng);
    const double p = x / (x + y);
    in[i] = std::binomial_distribution<std::uint32_t>(d, p)(rng);
  }
  return SequenceFrom(in, total);
}

}  // namespace monophily::testing
