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

// Cell masks over a window [x_lo, x_lo + nx * res] x [0, ny * res].

#pragma once

#include <cstdint>
#include <vector>

#include "hcap/geometry.h"

namespace hcap {

class GridMask {
 public:
  GridMask() = default;
  GridMask(double x_lo, double resolution, int nx, int ny);

  /// Window covering [x_lo, x_hi] x [0, y_hi] at the given resolution.
  static GridMask covering(double x_lo, double x_hi, double y_hi, double resolution);

  double x_lo() const { return x_lo_; }
  double resolution() const { return res_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Point center(int i, int j) const { return {x_lo_ + (i + 0.5) * res_, (j + 0.5) * res_}; }
  bool at(int i, int j) const { return cells_[index(i, j)] != 0; }
  void set(int i, int j, bool v = true) { cells_[index(i, j)] = v ? 1 : 0; }
  std::int64_t count() const;
  bool same_shape(const GridMask& o) const;

  GridMask& operator&=(const GridMask& o);
  GridMask& operator|=(const GridMask& o);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }

  double x_lo_ = 0.0;
  double res_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Cells whose square meets F (center within half a diagonal of F).
GridMask rasterize(const Hull& h, const GridMask& shape);

/// Cells whose square lies inside H \ F (center farther than half a
/// diagonal from F and from R).
GridMask free_cells(const Hull& h, const GridMask& shape);

/// Hausdorff distance between the cell-center sets of two same-shape masks;
/// infinity when exactly one is empty, 0 when both are.
double hausdorff(const GridMask& a, const GridMask& b);

/// Hausdorff distance between a mask and the rasterization of h.
double hausdorff_to_hull(const GridMask& mask, const Hull& h);

}  // namespace hcap
