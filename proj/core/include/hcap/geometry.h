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

// Geometry of hulls in the upper half-plane H, parallel slit domains and
// the small probe shapes (balls, rectangles) the samplers need.
//
// Every distance returned here is either exact or certified to a relative
// tolerance of 1e-9; walk-on-spheres radii are only unbiased when the
// distance never overshoots the true one by more than that.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hcap {

struct Point {
  double re = 0.0;
  double im = 0.0;

  friend Point operator+(Point a, Point b) { return {a.re + b.re, a.im + b.im}; }
  friend Point operator-(Point a, Point b) { return {a.re - b.re, a.im - b.im}; }
  friend Point operator*(double s, Point p) { return {s * p.re, s * p.im}; }
  friend Point operator/(Point p, double s) { return {p.re / s, p.im / s}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double abs(Point p) { return std::hypot(p.re, p.im); }

/// Distance from p to the closed segment [a, b].
double segment_distance(Point p, Point a, Point b);

// ---------------------------------------------------------------------------
// Ridge profiles

enum class ProfileKind { kLorentzian, kGaussian, kTable, kConstant };

/// Height function f >= 0 of a Ridge hull {xi + i eta : 0 < eta <= f(xi)}.
///
/// Lorentzian: height / (1 + ((xi - center) / width)^2)
/// Gaussian:   height * exp(-((xi - center) / width)^2 / 2)
/// Table:      piecewise linear through (xs[k], heights[k]), zero outside
/// Constant:   height everywhere (a horizontal strip; infinite capacity)
struct RidgeProfile {
  ProfileKind kind = ProfileKind::kLorentzian;
  double height = 1.0;
  double center = 0.0;
  double width = 1.0;
  std::vector<double> xs;
  std::vector<double> heights;

  static RidgeProfile lorentzian(double height, double center, double width);
  static RidgeProfile gaussian(double height, double center, double width);
  static RidgeProfile table(std::vector<double> xs, std::vector<double> heights);
  static RidgeProfile constant(double height);

  double operator()(double xi) const;
  double max_height() const;
  /// Global bounds on |f'| and |f''| (smooth kinds only).
  double slope_bound() const;
  double curvature_bound() const;
  /// Horizontal range outside of which f < level; nullopt when f never
  /// decays (Constant).
  std::optional<std::pair<double, double>> support_above(double level) const;
};

// ---------------------------------------------------------------------------
// Hull catalog

class Hull;

struct EmptyHull {};

/// {base + i y : 0 < y <= height}
struct VerticalSlit {
  double base = 0.0;
  double height = 1.0;
};

/// H intersected with the closed disk of the given radius about a real center.
struct HalfDisk {
  double center = 0.0;
  double radius = 1.0;
};

struct Ridge {
  RidgeProfile profile;
};

/// Zero-thickness polygonal curve. A hull when its first vertex is on R and
/// the curve does not enclose anything; validate_hull checks the rest.
struct Polyline {
  std::vector<Point> vertices;
};

struct HullUnion {
  std::vector<Hull> parts;
};

struct Shifted {
  double offset = 0.0;
  std::shared_ptr<const Hull> inner;
};

struct Scaled {
  double factor = 1.0;
  std::shared_ptr<const Hull> inner;
};

class Hull {
 public:
  using Variant = std::variant<EmptyHull, VerticalSlit, HalfDisk, Ridge, Polyline,
                               HullUnion, Shifted, Scaled>;

  Hull() = default;

  static Hull empty() { return Hull(EmptyHull{}); }
  static Hull vertical_slit(double base, double height);
  static Hull half_disk(double center, double radius);
  static Hull ridge(RidgeProfile profile);
  static Hull polyline(std::vector<Point> vertices);
  static Hull union_of(std::vector<Hull> parts);
  static Hull shifted(Hull inner, double offset);
  static Hull scaled(Hull inner, double factor);

  const Variant& variant() const { return v_; }
  bool is_empty() const { return std::holds_alternative<EmptyHull>(v_); }

  /// Short human-readable description, e.g. "vertical_slit(base=0, height=1)".
  std::string describe() const;

 private:
  explicit Hull(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

bool contains(const Hull& h, Point z);
double dist_to_hull(const Hull& h, Point z);
double sup_im(const Hull& h);

/// Horizontal extent of a bounded hull; nullopt for Empty and unbounded ridges.
std::optional<std::pair<double, double>> horizontal_extent(const Hull& h);

/// A finite window [lo, hi] that holds every part of h taller than `level`.
std::pair<double, double> horizontal_window(const Hull& h, double level);

/// Draws a point of F (uniform-ish over the variant's natural parametrization).
/// `uniform` must return doubles in [0, 1).
std::optional<Point> sample_hull_point(const Hull& h, const std::function<double()>& uniform);

struct HullDiagnostics {
  bool pass = true;
  std::string message;
  std::optional<Point> offending_cell;
  double resolution = 0.0;
  std::int64_t cells = 0;
};

/// Grid flood-fill certifier for the hull axioms at the given resolution:
/// H \ F must be grid-connected to infinity, and every grid component of F
/// must touch R (otherwise the sphere complement of H \ F is disconnected).
/// A pass is evidence at this resolution, not a proof.
HullDiagnostics validate_hull(const Hull& h, double grid_resolution);

/// True when sampled points of `inner` all lie in `outer` (up to `tol`).
bool hull_contained_in(const Hull& inner, const Hull& outer, int samples,
                       std::uint64_t seed, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Slits, balls, rectangles

/// Horizontal segment [x_lo, x_hi] + i y.
struct Slit {
  double y = 1.0;
  double x_lo = 0.0;
  double x_hi = 1.0;

  double length() const { return x_hi - x_lo; }
  double distance(Point z) const;
};

/// Parallel slit half-plane D = H minus the union of disjoint slits.
class SlitDomain {
 public:
  SlitDomain() = default;
  /// Throws PreconditionError when slits overlap, touch, or leave H.
  explicit SlitDomain(std::vector<Slit> slits);

  const std::vector<Slit>& slits() const { return slits_; }
  std::size_t size() const { return slits_.size(); }
  bool empty() const { return slits_.empty(); }
  const Slit& operator[](std::size_t j) const { return slits_[j]; }
  double max_height() const;

 private:
  std::vector<Slit> slits_;
};

double slit_gap(const Slit& a, const Slit& b);

/// Lower bound on dist(C, F) (sampling along C, 1-Lipschitz correction).
double slit_hull_distance(const Slit& c, const Hull& h);

struct Ball {
  Point center;
  double radius = 1.0;
};

struct Rect {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

  bool inside(Point z) const {
    return z.re > x_lo && z.re < x_hi && z.im > y_lo && z.im < y_hi;
  }
  /// Distance from an interior point to the boundary.
  double inner_distance(Point z) const;
  /// Closest boundary point to z.
  Point project(Point z) const;
  double perimeter() const { return 2.0 * ((x_hi - x_lo) + (y_hi - y_lo)); }
};

}  // namespace hcap
