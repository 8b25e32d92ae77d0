// Copyright 2026 The hcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Closed-form references computed independently of the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace hcap::testing {

using Complex = std::complex<long double>;

/// lim_{y -> inf} Re[z (g(z) - z)] at z = iy, the coefficient of 1/z in the
/// expansion of a mapping-out function g. Two Richardson steps in 1/y^2.
inline double capacity_from_map(const std::function<Complex(Complex)>& g, long double y0 = 1e3L) {
  auto c = [&](long double y) {
    const Complex z(0.0L, y);
    return (z * (g(z) - z)).real();
  };
  const long double a = c(y0);
  const long double b = c(2 * y0);
  const long double d = c(4 * y0);
  const long double ab = (4 * b - a) / 3;
  const long double bd = (4 * d - b) / 3;
  return static_cast<double>((16 * bd - ab) / 15);
}

/// g for the slit {x0 + iy : 0 < y <= h}: sqrt((z - x0)^2 + h^2) with the
/// branch that keeps H in H.
inline Complex slit_map(Complex z, long double x0, long double h) {
  const Complex w = z - x0;
  return std::sqrt(w - Complex(0, h)) * std::sqrt(w + Complex(0, h));
}

inline Complex disk_map(Complex z, long double c, long double r) { return z + r * r / (z - c); }

inline double cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic KS critical value at level 0.01.
inline double ks_critical_01(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// Poisson kernel mass of [a, b] seen from x + iy in H.
inline double poisson_mass(double x, double y, double a, double b) {
  return (std::atan((b - x) / y) - std::atan((a - x) / y)) / std::numbers::pi;
}

}  // namespace hcap::testing
