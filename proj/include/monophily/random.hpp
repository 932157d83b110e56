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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace monophily {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to turn (seed, stream ids...) into
// well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed of a named substream. Every random consumer derives its own engine
// this way, so results do not depend on call order or thread schedule.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                                 std::initializer_list<std::uint64_t> ids = {}) {
  std::uint64_t s = mix64(seed ^ mix64(hash_name(stream)));
  for (auto id : ids) s = mix64(s ^ mix64(id + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed, std::string_view stream,
                    std::initializer_list<std::uint64_t> ids = {}) {
  return Rng(derive_seed(seed, stream, ids));
}

// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b). The standard
// gamma sampler handles shapes below one.
class BetaDistribution {
 public:
  BetaDistribution(double a, double b) : x_(a, 1.0), y_(b, 1.0) {}

  template <class Engine>
  double operator()(Engine& rng) {
    double x = x_(rng);
    double y = y_(rng);
    double s = x + y;
    // Both gammas can underflow to zero for tiny shapes; the limit is a
    // point mass at 1 with probability a / (a + b).
    if (s == 0.0) {
      double a = x_.alpha();
      double b = y_.alpha();
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < a / (a + b)
                 ? 1.0
                 : 0.0;
    }
    return x / s;
  }

 private:
  std::gamma_distribution<double> x_;
  std::gamma_distribution<double> y_;
};

}  // namespace monophily
