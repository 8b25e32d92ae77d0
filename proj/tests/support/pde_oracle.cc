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


#include "pde_oracle.h"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcap::testing {
namespace {

// Uniform nodes on [0, fine] then geometric steps up to far.
std::vector<double> half_axis(double h, double fine, double far, double growth) {
  std::vector<double> v;
  const int n = static_cast<int>(std::lround(fine / h));
  for (int i = 0; i <= n; ++i) v.push_back(i * h);
  double step = h;
  while (v.back() < far) {
    step *= growth;
    v.push_back(std::min(far, v.back() + step));
  }
  return v;
}

std::size_t locate(const std::vector<double>& v, double x) {
  auto it = std::upper_bound(v.begin(), v.end(), x);
  if (it == v.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - v.begin()) - 1, v.size() - 2);
}

}  // namespace

double PdeSolution::at(Point z) const {
  const std::size_t i = locate(xs_, z.re);
  const std::size_t j = locate(ys_, z.im);
  const double tx = (z.re - xs_[i]) / (xs_[i + 1] - xs_[i]);
  const double ty = (z.im - ys_[j]) / (ys_[j + 1] - ys_[j]);
  const std::size_t nx = xs_.size();
  auto u = [&](std::size_t a, std::size_t b) { return u_[b * nx + a]; };
  return (1 - tx) * (1 - ty) * u(i, j) + tx * (1 - ty) * u(i + 1, j) + (1 - tx) * ty * u(i, j + 1) +
         tx * ty * u(i + 1, j + 1);
}

PdeSolution solve_hitting_pde(const Hull& f, const SlitDomain& k, const PdeGrid& g) {
  const std::vector<double> pos = half_axis(g.h, g.fine_x, g.far, g.growth);
  std::vector<double> xs;
  for (std::size_t i = pos.size(); i-- > 1;) xs.push_back(-pos[i]);
  xs.insert(xs.end(), pos.begin(), pos.end());
  const std::vector<double> ys = half_axis(g.h, g.fine_y, g.far, g.growth);
  const auto nx = static_cast<int>(xs.size());
  const auto ny = static_cast<int>(ys.size());
  const double tol = 1e-9;

  // Node classes: -1 Dirichlet, >= 0 unknown index. Slit j is unknown
  // `free_count + j` and owns all its nodes.
  std::vector<int> index(static_cast<std::size_t>(nx) * ny, -1);
  std::vector<double> value(index.size(), 0.0);
  std::vector<int> slit_of(index.size(), -1);
  int free_count = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t p = static_cast<std::size_t>(j) * nx + i;
      const Point z{xs[i], ys[j]};
      if (j == 0 || j == ny - 1 || i == 0 || i == nx - 1) continue;
      if (!f.is_empty() && dist_to_hull(f, z) <= tol) {
        value[p] = z.im;
        continue;
      }
      for (std::size_t s = 0; s < k.size(); ++s) {
        if (k[s].distance(z) <= tol) slit_of[p] = static_cast<int>(s);
      }
      if (slit_of[p] < 0) index[p] = free_count++;
    }
  }
  for (std::size_t p = 0; p < index.size(); ++p) {
    if (slit_of[p] >= 0) index[p] = free_count + slit_of[p];
  }
  const int unknowns = free_count + static_cast<int>(k.size());

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  auto couple = [&](std::size_t p, std::size_t q, double c) {
    const int a = index[p];
    if (a < 0) return;
    const int b = index[q];
    if (b == a) return;
    trip.emplace_back(a, a, c);
    if (b >= 0) {
      trip.emplace_back(a, b, -c);
    } else {
      rhs(a) += c * value[q];
    }
  };
  for (int j = 1; j < ny - 1; ++j) {
    const double dy = 0.5 * (ys[j + 1] - ys[j - 1]);
    for (int i = 1; i < nx - 1; ++i) {
      const double dx = 0.5 * (xs[i + 1] - xs[i - 1]);
      const std::size_t p = static_cast<std::size_t>(j) * nx + i;
      couple(p, p + 1, dy / (xs[i + 1] - xs[i]));
      couple(p, p - 1, dy / (xs[i] - xs[i - 1]));
      couple(p, p + nx, dx / (ys[j + 1] - ys[j]));
      couple(p, p - nx, dx / (ys[j] - ys[j - 1]));
    }
  }
  Eigen::SparseMatrix<double> a(unknowns, unknowns);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pde oracle: factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs);

  std::vector<double> u(index.size());
  for (std::size_t p = 0; p < index.size(); ++p) u[p] = index[p] >= 0 ? x(index[p]) : value[p];
  std::vector<double> slits;
  for (std::size_t s = 0; s < k.size(); ++s) slits.push_back(x(free_count + static_cast<int>(s)));
  return PdeSolution(xs, ys, std::move(u), std::move(slits));
}

PdeReference extrapolated_hitting_pde(const Hull& f, const SlitDomain& k, const std::vector<Point>& probes,
                                      const PdeGrid& grid) {
  const PdeGrid& coarse = grid;
  PdeGrid fine = grid;
  fine.h = 0.5 * grid.h;
  const PdeSolution a = solve_hitting_pde(f, k, coarse);
  const PdeSolution b = solve_hitting_pde(f, k, fine);
  PdeReference r;
  for (const Point& z : probes) {
    r.values.push_back(2.0 * b.at(z) - a.at(z));
    r.discretization_error = std::max(r.discretization_error, std::abs(b.at(z) - a.at(z)));
  }
  for (std::size_t s = 0; s < k.size(); ++s) {
    r.slit_values.push_back(2.0 * b.slit_value(s) - a.slit_value(s));
    r.discretization_error = std::max(r.discretization_error, std::abs(b.slit_value(s) - a.slit_value(s)));
  }
  return r;
}

}  // namespace hcap::testing
