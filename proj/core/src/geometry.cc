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

#include "hcap/geometry.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "hcap/errors.h"

namespace hcap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContainsTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

double table_value(const RidgeProfile& p, double xi) {
  const auto& xs = p.xs;
  if (xi < xs.front() || xi > xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), xi);
  if (it == xs.end()) return p.heights.back();
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  const double t = (xi - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - t) * p.heights[k - 1] + t * p.heights[k];
}

// Graph of a table profile as a polyline, including the vertical drops at
// the ends of the support.
std::vector<Point> table_graph(const RidgeProfile& p) {
  std::vector<Point> g;
  g.reserve(p.xs.size() + 2);
  g.push_back({p.xs.front(), 0.0});
  for (std::size_t k = 0; k < p.xs.size(); ++k) g.push_back({p.xs[k], p.heights[k]});
  g.push_back({p.xs.back(), 0.0});
  return g;
}

double polyline_distance(const std::vector<Point>& v, Point z) {
  if (v.size() == 1) return abs(z - v.front());
  double best = kInf;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    best = std::min(best, segment_distance(z, v[k], v[k + 1]));
  }
  return best;
}

// Branch and bound on g(xi) = |z - (xi, f(xi))|^2 with the quadratic lower
// bound min(g(a), g(b)) - G (b - a)^2 / 8, where G bounds |g''| globally.
// The nearest graph point lies within |xi - re z| <= im z - f(re z).
double smooth_ridge_distance(const RidgeProfile& p, Point z) {
  const double fx = p(z.re);
  if (z.im <= fx) return 0.0;
  const double reach = z.im - fx;
  const double curvature =
      2.0 + 2.0 * p.slope_bound() * p.slope_bound() +
      2.0 * p.curvature_bound() * std::max(z.im, p.max_height());
  auto g = [&](double xi) {
    const double dx = xi - z.re;
    const double dy = p(xi) - z.im;
    return dx * dx + dy * dy;
  };

  struct Interval {
    double a, b, ga, gb;
  };
  constexpr int kInitialPieces = 32;
  constexpr double kRelTol = 2e-9;  // on squared distance
  std::vector<Interval> stack;
  stack.reserve(128);
  double best = reach * reach;
  const double lo = z.re - reach;
  const double step = 2.0 * reach / kInitialPieces;
  double prev_x = lo;
  double prev_g = g(lo);
  best = std::min(best, prev_g);
  for (int k = 1; k <= kInitialPieces; ++k) {
    const double x = lo + step * k;
    const double gx = g(x);
    best = std::min(best, gx);
    stack.push_back({prev_x, x, prev_g, gx});
    prev_x = x;
    prev_g = gx;
  }
  const double min_width = 1e-15 * std::max(1.0, std::abs(z.re));
  int guard = 0;
  while (!stack.empty() && guard++ < 200000) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double w = iv.b - iv.a;
    const double lower = std::min(iv.ga, iv.gb) - curvature * w * w / 8.0;
    if (lower >= best * (1.0 - kRelTol) || w < min_width) continue;
    const double m = 0.5 * (iv.a + iv.b);
    const double gm = g(m);
    best = std::min(best, gm);
    stack.push_back({iv.a, m, iv.ga, gm});
    stack.push_back({m, iv.b, gm, iv.gb});
  }
  return std::sqrt(best);
}

double ridge_distance(const RidgeProfile& p, Point z) {
  switch (p.kind) {
    case ProfileKind::kConstant:
      return std::max(0.0, z.im - p.height);
    case ProfileKind::kTable:
      if (z.im <= p(z.re)) return 0.0;
      return polyline_distance(table_graph(p), z);
    case ProfileKind::kLorentzian:
    case ProfileKind::kGaussian:
      return smooth_ridge_distance(p, z);
  }
  return kInf;
}

}  // namespace

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.re - a.re;
  const double dy = b.im - a.im;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.re - a.re) * dx + (p.im - a.im) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  return std::hypot(p.re - (a.re + t * dx), p.im - (a.im + t * dy));
}

// ---------------------------------------------------------------------------
// RidgeProfile

RidgeProfile RidgeProfile::lorentzian(double height, double center, double width) {
  require(height >= 0.0 && std::isfinite(height), "lorentzian ridge: height must be finite and >= 0");
  require(width > 0.0 && std::isfinite(width), "lorentzian ridge: width must be > 0");
  RidgeProfile p;
  p.kind = ProfileKind::kLorentzian;
  p.height = height;
  p.center = center;
  p.width = width;
  return p;
}

RidgeProfile RidgeProfile::gaussian(double height, double center, double width) {
  require(height >= 0.0 && std::isfinite(height), "gaussian ridge: height must be finite and >= 0");
  require(width > 0.0 && std::isfinite(width), "gaussian ridge: width must be > 0");
  RidgeProfile p;
  p.kind = ProfileKind::kGaussian;
  p.height = height;
  p.center = center;
  p.width = width;
  return p;
}

RidgeProfile RidgeProfile::table(std::vector<double> xs, std::vector<double> heights) {
  require(xs.size() >= 2 && xs.size() == heights.size(),
          "table ridge: need >= 2 nodes and matching heights");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    require(std::isfinite(xs[k]) && std::isfinite(heights[k]) && heights[k] >= 0.0,
            "table ridge: nodes must be finite with heights >= 0");
    if (k > 0) require(xs[k] > xs[k - 1], "table ridge: xs must be strictly increasing");
  }
  RidgeProfile p;
  p.kind = ProfileKind::kTable;
  p.xs = std::move(xs);
  p.heights = std::move(heights);
  p.height = *std::max_element(p.heights.begin(), p.heights.end());
  return p;
}

RidgeProfile RidgeProfile::constant(double height) {
  require(height > 0.0 && std::isfinite(height), "constant ridge: height must be > 0");
  RidgeProfile p;
  p.kind = ProfileKind::kConstant;
  p.height = height;
  return p;
}

double RidgeProfile::operator()(double xi) const {
  switch (kind) {
    case ProfileKind::kLorentzian: {
      const double u = (xi - center) / width;
      return height / (1.0 + u * u);
    }
    case ProfileKind::kGaussian: {
      const double u = (xi - center) / width;
      return height * std::exp(-0.5 * u * u);
    }
    case ProfileKind::kTable:
      return table_value(*this, xi);
    case ProfileKind::kConstant:
      return height;
  }
  return 0.0;
}

double RidgeProfile::max_height() const { return height; }

double RidgeProfile::slope_bound() const {
  switch (kind) {
    case ProfileKind::kLorentzian:
      return 3.0 * std::sqrt(3.0) / 8.0 * height / width;
    case ProfileKind::kGaussian:
      return height / width * std::exp(-0.5);
    default:
      return 0.0;
  }
}

double RidgeProfile::curvature_bound() const {
  switch (kind) {
    case ProfileKind::kLorentzian:
      return 2.0 * height / (width * width);
    case ProfileKind::kGaussian:
      return height / (width * width);
    default:
      return 0.0;
  }
}

std::optional<std::pair<double, double>> RidgeProfile::support_above(double level) const {
  switch (kind) {
    case ProfileKind::kLorentzian: {
      if (level >= height) return std::pair{center, center};
      const double u = std::sqrt(height / level - 1.0);
      return std::pair{center - width * u, center + width * u};
    }
    case ProfileKind::kGaussian: {
      if (level >= height) return std::pair{center, center};
      const double u = std::sqrt(2.0 * std::log(height / level));
      return std::pair{center - width * u, center + width * u};
    }
    case ProfileKind::kTable:
      return std::pair{xs.front(), xs.back()};
    case ProfileKind::kConstant:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hull

Hull Hull::vertical_slit(double base, double height) {
  require(std::isfinite(base), "vertical_slit: base must be finite");
  require(height > 0.0 && std::isfinite(height), "vertical_slit: height must be > 0");
  return Hull(VerticalSlit{base, height});
}

Hull Hull::half_disk(double center, double radius) {
  require(std::isfinite(center), "half_disk: center must be finite");
  require(radius > 0.0 && std::isfinite(radius), "half_disk: radius must be > 0");
  return Hull(HalfDisk{center, radius});
}

Hull Hull::ridge(RidgeProfile profile) { return Hull(Ridge{std::move(profile)}); }

Hull Hull::polyline(std::vector<Point> vertices) {
  require(vertices.size() >= 2, "polyline: need at least two vertices");
  for (const Point& v : vertices) {
    require(std::isfinite(v.re) && std::isfinite(v.im) && v.im >= 0.0,
            "polyline: vertices must be finite and lie in the closed upper half-plane");
  }
  return Hull(Polyline{std::move(vertices)});
}

Hull Hull::union_of(std::vector<Hull> parts) {
  if (parts.empty()) return empty();
  if (parts.size() == 1) return parts.front();
  return Hull(HullUnion{std::move(parts)});
}

Hull Hull::shifted(Hull inner, double offset) {
  require(std::isfinite(offset), "shifted: offset must be finite");
  if (inner.is_empty()) return inner;
  return Hull(Shifted{offset, std::make_shared<const Hull>(std::move(inner))});
}

Hull Hull::scaled(Hull inner, double factor) {
  require(factor > 0.0 && std::isfinite(factor), "scaled: factor must be > 0");
  if (inner.is_empty()) return inner;
  return Hull(Scaled{factor, std::make_shared<const Hull>(std::move(inner))});
}

std::string Hull::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const EmptyHull&) { os << "empty"; },
                 [&](const VerticalSlit& s) {
                   os << "vertical_slit(base=" << s.base << ", height=" << s.height << ")";
                 },
                 [&](const HalfDisk& d) {
                   os << "half_disk(center=" << d.center << ", radius=" << d.radius << ")";
                 },
                 [&](const Ridge& r) {
                   const char* names[] = {"lorentzian", "gaussian", "table", "constant"};
                   os << "ridge(" << names[static_cast<int>(r.profile.kind)]
                      << ", height=" << r.profile.height << ")";
                 },
                 [&](const Polyline& p) { os << "polyline(" << p.vertices.size() << " vertices)"; },
                 [&](const HullUnion& u) {
                   os << "union(";
                   for (std::size_t k = 0; k < u.parts.size(); ++k) {
                     os << (k ? ", " : "") << u.parts[k].describe();
                   }
                   os << ")";
                 },
                 [&](const Shifted& s) { os << "shift(" << s.inner->describe() << ", " << s.offset << ")"; },
                 [&](const Scaled& s) { os << "scale(" << s.inner->describe() << ", " << s.factor << ")"; },
             },
             v_);
  return os.str();
}

bool contains(const Hull& h, Point z) {
  return std::visit(
      Overloaded{
          [](const EmptyHull&) { return false; },
          [&](const VerticalSlit& s) {
            return std::abs(z.re - s.base) <= kContainsTol && z.im > 0.0 &&
                   z.im <= s.height + kContainsTol;
          },
          [&](const HalfDisk& d) {
            return z.im > 0.0 && std::hypot(z.re - d.center, z.im) <= d.radius + kContainsTol;
          },
          [&](const Ridge& r) { return z.im > 0.0 && z.im <= r.profile(z.re) + kContainsTol; },
          [&](const Polyline& p) { return z.im > 0.0 && polyline_distance(p.vertices, z) <= kContainsTol; },
          [&](const HullUnion& u) {
            return std::any_of(u.parts.begin(), u.parts.end(),
                               [&](const Hull& part) { return contains(part, z); });
          },
          [&](const Shifted& s) { return contains(*s.inner, {z.re - s.offset, z.im}); },
          [&](const Scaled& s) { return contains(*s.inner, z / s.factor); },
      },
      h.variant());
}

double dist_to_hull(const Hull& h, Point z) {
  return std::visit(
      Overloaded{
          [](const EmptyHull&) { return kInf; },
          [&](const VerticalSlit& s) {
            const double dx = z.re - s.base;
            if (z.im <= s.height) {
              return z.im >= 0.0 ? std::abs(dx) : std::hypot(dx, z.im);
            }
            return std::hypot(dx, z.im - s.height);
          },
          [&](const HalfDisk& d) { return std::max(0.0, std::hypot(z.re - d.center, z.im) - d.radius); },
          [&](const Ridge& r) { return ridge_distance(r.profile, z); },
          [&](const Polyline& p) { return polyline_distance(p.vertices, z); },
          [&](const HullUnion& u) {
            double best = kInf;
            for (const Hull& part : u.parts) best = std::min(best, dist_to_hull(part, z));
            return best;
          },
          [&](const Shifted& s) { return dist_to_hull(*s.inner, {z.re - s.offset, z.im}); },
          [&](const Scaled& s) { return s.factor * dist_to_hull(*s.inner, z / s.factor); },
      },
      h.variant());
}

double sup_im(const Hull& h) {
  return std::visit(
      Overloaded{
          [](const EmptyHull&) { return 0.0; },
          [](const VerticalSlit& s) { return s.height; },
          [](const HalfDisk& d) { return d.radius; },
          [](const Ridge& r) { return r.profile.max_height(); },
          [](const Polyline& p) {
            double m = 0.0;
            for (const Point& v : p.vertices) m = std::max(m, v.im);
            return m;
          },
          [](const HullUnion& u) {
            double m = 0.0;
            for (const Hull& part : u.parts) m = std::max(m, sup_im(part));
            return m;
          },
          [](const Shifted& s) { return sup_im(*s.inner); },
          [](const Scaled& s) { return s.factor * sup_im(*s.inner); },
      },
      h.variant());
}

std::optional<std::pair<double, double>> horizontal_extent(const Hull& h) {
  using Extent = std::optional<std::pair<double, double>>;
  return std::visit(
      Overloaded{
          [](const EmptyHull&) -> Extent { return std::nullopt; },
          [](const VerticalSlit& s) -> Extent { return std::pair{s.base, s.base}; },
          [](const HalfDisk& d) -> Extent { return std::pair{d.center - d.radius, d.center + d.radius}; },
          [](const Ridge& r) -> Extent {
            if (r.profile.kind == ProfileKind::kTable) return std::pair{r.profile.xs.front(), r.profile.xs.back()};
            return std::nullopt;
          },
          [](const Polyline& p) -> Extent {
            auto [lo, hi] = std::minmax_element(p.vertices.begin(), p.vertices.end(),
                                                [](Point a, Point b) { return a.re < b.re; });
            return std::pair{lo->re, hi->re};
          },
          [](const HullUnion& u) -> Extent {
            Extent out;
            for (const Hull& part : u.parts) {
              if (part.is_empty()) continue;
              Extent e = horizontal_extent(part);
              if (!e) return std::nullopt;
              if (!out) {
                out = e;
              } else {
                out->first = std::min(out->first, e->first);
                out->second = std::max(out->second, e->second);
              }
            }
            return out;
          },
          [](const Shifted& s) -> Extent {
            Extent e = horizontal_extent(*s.inner);
            if (e) {
              e->first += s.offset;
              e->second += s.offset;
            }
            return e;
          },
          [](const Scaled& s) -> Extent {
            Extent e = horizontal_extent(*s.inner);
            if (e) {
              e->first *= s.factor;
              e->second *= s.factor;
            }
            return e;
          },
      },
      h.variant());
}

std::pair<double, double> horizontal_window(const Hull& h, double level) {
  using Window = std::pair<double, double>;
  return std::visit(
      Overloaded{
          [](const EmptyHull&) -> Window { return {0.0, 0.0}; },
          [&](const Ridge& r) -> Window {
            auto s = r.profile.support_above(level);
            if (s) return *s;
            const double half = 4.0 * std::max(1.0, r.profile.height);
            return {-half, half};
          },
          [&](const HullUnion& u) -> Window {
            bool any = false;
            Window out{0.0, 0.0};
            for (const Hull& part : u.parts) {
              if (part.is_empty()) continue;
              Window w = horizontal_window(part, level);
              if (!any) {
                out = w;
                any = true;
              } else {
                out.first = std::min(out.first, w.first);
                out.second = std::max(out.second, w.second);
              }
            }
            return out;
          },
          [&](const Shifted& s) -> Window {
            Window w = horizontal_window(*s.inner, level);
            return {w.first + s.offset, w.second + s.offset};
          },
          [&](const Scaled& s) -> Window {
            Window w = horizontal_window(*s.inner, level / s.factor);
            return {w.first * s.factor, w.second * s.factor};
          },
          [&](const auto&) -> Window { return *horizontal_extent(h); },
      },
      h.variant());
}

std::optional<Point> sample_hull_point(const Hull& h, const std::function<double()>& uniform) {
  return std::visit(
      Overloaded{
          [](const EmptyHull&) -> std::optional<Point> { return std::nullopt; },
          [&](const VerticalSlit& s) -> std::optional<Point> {
            return Point{s.base, s.height * (1.0 - uniform())};
          },
          [&](const HalfDisk& d) -> std::optional<Point> {
            for (int tries = 0; tries < 1000; ++tries) {
              const Point p{d.center + d.radius * (2.0 * uniform() - 1.0), d.radius * (1.0 - uniform())};
              if (std::hypot(p.re - d.center, p.im) <= d.radius) return p;
            }
            return Point{d.center, 0.5 * d.radius};
          },
          [&](const Ridge& r) -> std::optional<Point> {
            const auto [lo, hi] = horizontal_window(h, 1e-3 * r.profile.max_height());
            for (int tries = 0; tries < 1000; ++tries) {
              const double xi = lo + (hi - lo) * uniform();
              const double f = r.profile(xi);
              if (f > 0.0) return Point{xi, f * (1.0 - uniform())};
            }
            return std::nullopt;
          },
          [&](const Polyline& p) -> std::optional<Point> {
            std::vector<double> cum{0.0};
            for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) {
              cum.push_back(cum.back() + abs(p.vertices[k + 1] - p.vertices[k]));
            }
            const double s = uniform() * cum.back();
            std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
            k = std::clamp<std::size_t>(k, 1, p.vertices.size() - 1);
            const double seg = cum[k] - cum[k - 1];
            const double t = seg > 0.0 ? (s - cum[k - 1]) / seg : 0.0;
            return p.vertices[k - 1] + t * (p.vertices[k] - p.vertices[k - 1]);
          },
          [&](const HullUnion& u) -> std::optional<Point> {
            std::vector<const Hull*> parts;
            for (const Hull& part : u.parts) {
              if (!part.is_empty()) parts.push_back(&part);
            }
            if (parts.empty()) return std::nullopt;
            const auto k = std::min(parts.size() - 1, static_cast<std::size_t>(uniform() * parts.size()));
            return sample_hull_point(*parts[k], uniform);
          },
          [&](const Shifted& s) -> std::optional<Point> {
            auto p = sample_hull_point(*s.inner, uniform);
            if (p) p->re += s.offset;
            return p;
          },
          [&](const Scaled& s) -> std::optional<Point> {
            auto p = sample_hull_point(*s.inner, uniform);
            if (p) *p = s.factor * *p;
            return p;
          },
      },
      h.variant());
}

bool hull_contained_in(const Hull& inner, const Hull& outer, int samples, std::uint64_t seed, double tol) {
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int k = 0; k < samples; ++k) {
    auto p = sample_hull_point(inner, uniform);
    if (!p) continue;
    if (p->im <= 0.0) continue;
    if (dist_to_hull(outer, *p) > tol) return false;
  }
  return true;
}

HullDiagnostics validate_hull(const Hull& h, double res) {
  require(res > 0.0 && std::isfinite(res), "validate_hull: grid_resolution must be > 0");
  HullDiagnostics diag;
  diag.resolution = res;
  if (h.is_empty()) {
    diag.message = "empty hull";
    return diag;
  }
  const double top_hull = sup_im(h);
  auto [lo, hi] = horizontal_window(h, res);
  const double pad = std::max({1.0, 0.5 * top_hull, 4.0 * res});
  const double x0 = lo - pad;
  const double width = (hi - lo) + 2.0 * pad;
  const double height = top_hull + pad;
  const auto nx = static_cast<std::int64_t>(std::ceil(width / res));
  const auto ny = static_cast<std::int64_t>(std::ceil(height / res));
  require(nx * ny <= 40'000'000, "validate_hull: grid too fine for this hull (more than 4e7 cells)");
  diag.cells = nx * ny;

  auto idx = [nx](std::int64_t i, std::int64_t j) { return j * nx + i; };
  auto center = [&](std::int64_t i, std::int64_t j) {
    return Point{x0 + (static_cast<double>(i) + 0.5) * res, (static_cast<double>(j) + 0.5) * res};
  };
  const double touch = res * std::sqrt(0.5);
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(nx * ny));
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      blocked[idx(i, j)] = dist_to_hull(h, center(i, j)) <= touch ? 1 : 0;
    }
  }

  // Free cells reachable from the far field (top row, side columns).
  std::vector<std::uint8_t> seen(blocked.size());
  std::deque<std::pair<std::int64_t, std::int64_t>> queue;
  auto seed_free = [&](std::int64_t i, std::int64_t j) {
    if (!blocked[idx(i, j)] && !seen[idx(i, j)]) {
      seen[idx(i, j)] = 1;
      queue.emplace_back(i, j);
    }
  };
  for (std::int64_t i = 0; i < nx; ++i) seed_free(i, ny - 1);
  for (std::int64_t j = 0; j < ny; ++j) {
    seed_free(0, j);
    seed_free(nx - 1, j);
  }
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    constexpr std::int64_t di[] = {1, -1, 0, 0};
    constexpr std::int64_t dj[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const std::int64_t a = i + di[k], b = j + dj[k];
      if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
      seed_free(a, b);
    }
  }
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      if (!blocked[idx(i, j)] && !seen[idx(i, j)]) {
        diag.pass = false;
        diag.message = "H \\ F is disconnected: a bounded region is sealed off from infinity";
        diag.offending_cell = center(i, j);
        return diag;
      }
    }
  }

  // Components of F must reach R (or leave the window sideways, for
  // unbounded ridges); a floating piece disconnects the sphere complement.
  std::fill(seen.begin(), seen.end(), 0);
  auto seed_blocked = [&](std::int64_t i, std::int64_t j) {
    if (blocked[idx(i, j)] && !seen[idx(i, j)]) {
      seen[idx(i, j)] = 1;
      queue.emplace_back(i, j);
    }
  };
  for (std::int64_t i = 0; i < nx; ++i) seed_blocked(i, 0);
  for (std::int64_t j = 0; j < ny; ++j) {
    seed_blocked(0, j);
    seed_blocked(nx - 1, j);
  }
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    for (std::int64_t a = i - 1; a <= i + 1; ++a) {
      for (std::int64_t b = j - 1; b <= j + 1; ++b) {
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        seed_blocked(a, b);
      }
    }
  }
  for (std::int64_t j = 0; j < ny; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      if (blocked[idx(i, j)] && !seen[idx(i, j)]) {
        diag.pass = false;
        diag.message = "complement not simply connected: a component of F does not touch R";
        diag.offending_cell = center(i, j);
        return diag;
      }
    }
  }
  diag.message = "pass at resolution (grid certificate, not a proof)";
  return diag;
}

// ---------------------------------------------------------------------------
// Slits and probe shapes

double Slit::distance(Point z) const { return segment_distance(z, {x_lo, y}, {x_hi, y}); }

double slit_gap(const Slit& a, const Slit& b) {
  const double dx = std::max(0.0, std::max(a.x_lo, b.x_lo) - std::min(a.x_hi, b.x_hi));
  return std::hypot(dx, a.y - b.y);
}

SlitDomain::SlitDomain(std::vector<Slit> slits) : slits_(std::move(slits)) {
  for (std::size_t j = 0; j < slits_.size(); ++j) {
    const Slit& s = slits_[j];
    require(std::isfinite(s.y) && std::isfinite(s.x_lo) && std::isfinite(s.x_hi),
            "slit: coordinates must be finite");
    require(s.y > 0.0, "slit: must lie strictly inside H (y > 0)");
    require(s.x_lo < s.x_hi, "slit: x_lo must be < x_hi");
    for (std::size_t k = 0; k < j; ++k) {
      require(slit_gap(slits_[k], s) > 0.0, "slits must be pairwise disjoint");
    }
  }
}

double SlitDomain::max_height() const {
  double m = 0.0;
  for (const Slit& s : slits_) m = std::max(m, s.y);
  return m;
}

double slit_hull_distance(const Slit& c, const Hull& h) {
  if (h.is_empty()) return kInf;
  constexpr int kSamples = 4001;
  double best = kInf;
  for (int k = 0; k < kSamples; ++k) {
    const double x = c.x_lo + c.length() * k / (kSamples - 1);
    best = std::min(best, dist_to_hull(h, {x, c.y}));
  }
  return std::max(0.0, best - 0.5 * c.length() / (kSamples - 1));
}

double Rect::inner_distance(Point z) const {
  return std::min({z.re - x_lo, x_hi - z.re, z.im - y_lo, y_hi - z.im});
}

Point Rect::project(Point z) const {
  const double dl = z.re - x_lo, dr = x_hi - z.re, db = z.im - y_lo, dt = y_hi - z.im;
  const double m = std::min({std::abs(dl), std::abs(dr), std::abs(db), std::abs(dt)});
  const double cx = std::clamp(z.re, x_lo, x_hi);
  const double cy = std::clamp(z.im, y_lo, y_hi);
  if (m == std::abs(dl)) return {x_lo, cy};
  if (m == std::abs(dr)) return {x_hi, cy};
  if (m == std::abs(db)) return {cx, y_lo};
  return {cx, y_hi};
}

}  // namespace hcap
