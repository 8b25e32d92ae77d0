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

#include "hcap/raster.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hcap/errors.h"

namespace hcap {
namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas (Felzenszwalb and Huttenlocher), in place.
void squared_distance_1d(std::vector<double>& f) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(f.size());
  std::vector<double> d(f.size());
  std::vector<int> v(f.size());
  std::vector<double> z(f.size() + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  auto cross = [&](int q, int p) { return ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p); };
  for (int q = 1; q < n; ++q) {
    double s = cross(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = cross(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
  }
  f = d;
}

// Squared distance in cell units from every cell to the nearest set cell.
std::vector<double> squared_distance_transform(const GridMask& m) {
  const int nx = m.nx();
  const int ny = m.ny();
  std::vector<double> g(static_cast<std::size_t>(nx) * ny);
  std::vector<double> line;
  for (int j = 0; j < ny; ++j) {
    line.assign(static_cast<std::size_t>(nx), 0.0);
    for (int i = 0; i < nx; ++i) line[i] = m.at(i, j) ? 0.0 : kFar;
    squared_distance_1d(line);
    for (int i = 0; i < nx; ++i) g[static_cast<std::size_t>(j) * nx + i] = line[i];
  }
  for (int i = 0; i < nx; ++i) {
    line.assign(static_cast<std::size_t>(ny), 0.0);
    for (int j = 0; j < ny; ++j) line[j] = g[static_cast<std::size_t>(j) * nx + i];
    squared_distance_1d(line);
    for (int j = 0; j < ny; ++j) g[static_cast<std::size_t>(j) * nx + i] = line[j];
  }
  return g;
}

double directed(const GridMask& a, const std::vector<double>& dist_to_b) {
  double worst = 0.0;
  for (int j = 0; j < a.ny(); ++j) {
    for (int i = 0; i < a.nx(); ++i) {
      if (a.at(i, j)) worst = std::max(worst, dist_to_b[static_cast<std::size_t>(j) * a.nx() + i]);
    }
  }
  return worst;
}

}  // namespace

GridMask::GridMask(double x_lo, double resolution, int nx, int ny)
    : x_lo_(x_lo), res_(resolution), nx_(nx), ny_(ny) {
  if (!(resolution > 0.0) || nx <= 0 || ny <= 0) throw PreconditionError("grid mask: bad shape");
  if (static_cast<double>(nx) * ny > 4e7) throw PreconditionError("grid mask: more than 4e7 cells");
  cells_.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
}

GridMask GridMask::covering(double x_lo, double x_hi, double y_hi, double resolution) {
  if (!(resolution > 0.0) || !(x_hi > x_lo) || !(y_hi > 0.0)) throw PreconditionError("grid mask: bad window");
  const int nx = static_cast<int>(std::ceil((x_hi - x_lo) / resolution));
  const int ny = static_cast<int>(std::ceil(y_hi / resolution));
  return GridMask(x_lo, resolution, nx, ny);
}

std::int64_t GridMask::count() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0});
}

bool GridMask::same_shape(const GridMask& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && x_lo_ == o.x_lo_ && res_ == o.res_;
}

GridMask& GridMask::operator&=(const GridMask& o) {
  if (!same_shape(o)) throw PreconditionError("grid mask: shape mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] &= o.cells_[i];
  return *this;
}

GridMask& GridMask::operator|=(const GridMask& o) {
  if (!same_shape(o)) throw PreconditionError("grid mask: shape mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] |= o.cells_[i];
  return *this;
}

GridMask rasterize(const Hull& h, const GridMask& shape) {
  GridMask m = shape;
  const double half_diag = 0.5 * std::sqrt(2.0) * shape.resolution();
  for (int j = 0; j < m.ny(); ++j) {
    for (int i = 0; i < m.nx(); ++i) {
      m.set(i, j, !h.is_empty() && dist_to_hull(h, m.center(i, j)) <= half_diag);
    }
  }
  return m;
}

GridMask free_cells(const Hull& h, const GridMask& shape) {
  GridMask m = shape;
  const double half_diag = 0.5 * std::sqrt(2.0) * shape.resolution();
  for (int j = 0; j < m.ny(); ++j) {
    for (int i = 0; i < m.nx(); ++i) {
      const Point c = m.center(i, j);
      m.set(i, j, c.im > half_diag && (h.is_empty() || dist_to_hull(h, c) > half_diag));
    }
  }
  return m;
}

double hausdorff(const GridMask& a, const GridMask& b) {
  if (!a.same_shape(b)) throw PreconditionError("hausdorff: shape mismatch");
  const bool ea = a.count() == 0;
  const bool eb = b.count() == 0;
  if (ea && eb) return 0.0;
  if (ea || eb) return std::numeric_limits<double>::infinity();
  const double ab = directed(a, squared_distance_transform(b));
  const double ba = directed(b, squared_distance_transform(a));
  return std::sqrt(std::max(ab, ba)) * a.resolution();
}

double hausdorff_to_hull(const GridMask& mask, const Hull& h) { return hausdorff(mask, rasterize(h, mask)); }

}  // namespace hcap
