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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "monophily/special.hpp"

using namespace monophily;
using Catch::Approx;

namespace {

// Independent oracle: integrate the chi-square density from x to x + 400
// with composite Simpson's rule.
double ChiSquareTailByQuadrature(double x, int dof) {
  const double k = 0.5 * dof;
  auto pdf = [k](double t) {
    return std::exp((k - 1) * std::log(t) - t / 2 - k * std::log(2.0) -
                    std::lgamma(k));
  };
  const int steps = 400000;
  const double a = x;
  const double b = x + 400;
  const double h = (b - a) / steps;
  double s = pdf(a) + pdf(b);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * pdf(a + i * h);
  return s * h / 3;
}

}  // namespace

TEST_CASE("logistic and logit are inverse") {
  for (double p : {1e-9, 0.1, 0.37, 0.5, 0.9, 1 - 1e-9}) {
    CHECK(logistic(logit(p)) == Approx(p).epsilon(1e-12));
  }
  CHECK(logistic(-800) >= 0);
  CHECK(logistic(800) == 1.0);
  CHECK(softplus(1000) == Approx(1000));
  CHECK(softplus(-1000) >= 0);
}

TEST_CASE("chi_square_sf at zero is one") {
  for (long dof : {1L, 2L, 7L, 999L}) CHECK(chi_square_sf(0, dof) == 1.0);
}

TEST_CASE("chi_square_sf matches quadrature") {
  CHECK(ChiSquareTailByQuadrature(3.841, 1) == Approx(0.0500).margin(5e-4));
  CHECK(ChiSquareTailByQuadrature(8, 1) == Approx(0.00468).margin(1e-4));
  CHECK(chi_square_sf(3.841, 1) == Approx(0.0500).margin(5e-4));
  CHECK(chi_square_sf(8, 1) == Approx(0.00468).margin(1e-4));
  for (auto [x, dof] : {std::pair{3.841, 1}, {8.0, 1}, {0.5, 3}, {10.0, 10},
                        {30.0, 10}, {2.0, 5}}) {
    CHECK(chi_square_sf(x, dof) ==
          Approx(ChiSquareTailByQuadrature(x, dof)).margin(1e-9));
  }
}

TEST_CASE("chi_square_sf frozen reference values") {
  // Reference values from an independent double-precision implementation.
  CHECK(chi_square_sf(8, 1) == Approx(0.004677734981047276).margin(1e-10));
  CHECK(chi_square_sf(3.841, 1) == Approx(0.050013683763956804).margin(1e-10));
  CHECK(chi_square_sf(1000, 999) == Approx(0.48513148927490146).margin(1e-10));
  CHECK(chi_square_sf(1200, 999) == Approx(1.112935044825893e-05).margin(1e-10));
  CHECK(chi_square_sf(150, 100) == Approx(0.0009039320423540184).margin(1e-10));
  // dof = 2 has the closed form exp(-x / 2).
  for (double x : {0.1, 1.0, 2.0, 7.5, 40.0}) {
    CHECK(chi_square_sf(x, 2) == Approx(std::exp(-x / 2)).margin(1e-12));
  }
}

TEST_CASE("chi_square_sf decreases in x") {
  for (long dof : {1L, 3L, 20L, 500L}) {
    double prev = chi_square_sf(0, dof);
    for (double x = 0.25; x < 3.0 * dof + 40; x += 0.25) {
      const double p = chi_square_sf(x, dof);
      if (prev < 1e-300) break;
      // far left of the mode the tail rounds to exactly 1
      if (prev < 1 - 1e-12) {
        CHECK(p < prev);
      } else {
        CHECK(p <= prev);
      }
      CHECK(p >= 0);
      prev = p;
    }
  }
}

TEST_CASE("chi_square_sf argument checks") {
  CHECK_THROWS_AS(chi_square_sf(1, 0), ArgumentError);
  CHECK_THROWS_AS(chi_square_sf(-1, 3), ArgumentError);
}
