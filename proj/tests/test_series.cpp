// Copyright 2026 The eprqpt Authors
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

#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "eprqpt/epr.hpp"
#include "eprqpt/error.hpp"

using namespace eprqpt;

namespace {

// int_0^t e^{-a u} (t - u)^{k-1} / (k-1)! du as a power series in a.
double shifted_power_series(double a, double t, int k) {
  long double sum = 0.0L, term = 1.0L;
  for (int j = 1; j <= k; ++j) term *= static_cast<long double>(t) / j;  // t^k / k!
  for (int m = 0; m < 2000; ++m) {
    sum += term;
    term *= -static_cast<long double>(a) * t / (m + k + 1);
    if (std::abs(term) < 1e-30L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Resummed series: Q0 + x (e^{(a+x)t} - 1) / (a+x), times e^{-E~ t}.
double closed_log_value(double er, double ec, double pibar, double kout, double t) {
  const double a = er - ec, x = -kout * pibar, q0 = (1 - 2 * pibar) / (1 - pibar);
  const double g = a + x;
  const double body = q0 + (g == 0.0 ? x * t : x * std::expm1(g * t) / g);
  return -er * t + std::log(std::abs(body));
}

}  // namespace

TEST_CASE("simplex integral against the incomplete gamma function") {
  for (double a : {-3.0, -0.4, -1e-3}) {
    for (double t : {0.5, 2.0, 7.0}) {
      for (int k : {1, 2, 5, 17, 60}) {
        const double b = -a;
        const double expected = boost::math::gamma_p(k, b * t) / std::pow(b, k);
        CAPTURE(a);
        CAPTURE(t);
        CAPTURE(k);
        CHECK(simplex_integral_scaled(a, t, k) == doctest::Approx(expected).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("simplex integral for positive a is scaled by e^{-a t}") {
  for (double a : {1e-3, 0.7, 4.0}) {
    for (double t : {0.5, 3.0}) {
      for (int k : {1, 3, 12}) {
        CHECK(simplex_integral_scaled(a, t, k) ==
              doctest::Approx(shifted_power_series(a, t, k)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("simplex integral at a = 0 is t^k / k!") {
  CHECK(simplex_integral_scaled(0.0, 2.0, 3) == doctest::Approx(8.0 / 6.0).epsilon(1e-15));
  CHECK(simplex_integral_scaled(0.0, 0.0, 3) == 0.0);
  CHECK_THROWS_AS(simplex_integral_scaled(0.0, 1.0, 0), Error);
}

TEST_CASE("series reconstruction matches its resummation") {
  struct Case {
    double er, ec, pibar, kout, t;
  };
  const Case cases[] = {
      {-1.0, -0.8, 0.1, -2.0, 1.0},  {-1.0, -0.8, 0.1, -2.0, 6.0}, {-2.0, -1.0, 0.02, -3.0, 4.0},
      {-0.5, -1.5, 0.05, -1.0, 3.0}, {-1.0, -1.0, 0.2, 0.5, 2.0},  {-1.0, -0.9, 0.1, 1.0, 5.0},
  };
  for (const auto& c : cases) {
    const SeriesValue s = series_reconstruction(c.er, c.ec, c.pibar, c.kout, c.t);
    CAPTURE(c.t);
    CAPTURE(c.kout);
    CHECK(s.log_abs == doctest::Approx(closed_log_value(c.er, c.ec, c.pibar, c.kout, c.t)).epsilon(1e-10));
    CHECK(s.last_term_ratio <= 1e-12);
  }
}

TEST_CASE("no coupling leaves the bare reservoir term") {
  const SeriesValue s = series_reconstruction(-2.0, -1.0, 0.25, 0.0, 3.0);
  CHECK(s.terms == 1);
  CHECK(s.log_abs == doctest::Approx(6.0 + std::log(0.5 / 0.75)).epsilon(1e-14));
}

TEST_CASE("late-time series energy is the cavity energy shifted by pibar K_out") {
  const double ec = -1.0, pibar = 0.01, kout = -3.0;
  CHECK(series_energy(-0.5, ec, pibar, kout, 30.0) == doctest::Approx(ec + pibar * kout).epsilon(1e-6));
  // Reservoir below the coupled cavity level.
  CHECK(series_energy(-2.0, ec, pibar, kout, 30.0) == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("truncation failure is reported") {
  try {
    series_reconstruction(-1.0, -0.5, 0.3, -20.0, 10.0, 5);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTruncationNotConverged);
  }
  CHECK_THROWS_AS(series_reconstruction(-1.0, -0.5, 1.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(series_energy(-1.0, -0.5, 0.1, -1.0, 1e-4), Error);
}
