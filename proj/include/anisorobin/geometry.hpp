// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Planar polygonal domains and the anisotropic geometry built on them:
// Wulff shapes 𝒲_R = {H° < R} as sampled polygons, the perimeter
// σ_H(∂Ω) = ∫ H(ν) dσ, the distance d_H(x) = min_{y∈∂Ω} H°(x−y) with its
// maximizer (the anisotropic inradius), and the isoperimetric ratio
// σ_H(∂Ω) / (2·sqrt(κ·|Ω|)) that the Faber-Krahn pipeline feeds on.
//
// Everything here is 2-D; higher dimensions live in the radial module where
// symmetry removes the geometry.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "anisorobin/errors.hpp"
#include "anisorobin/norms.hpp"
#include "anisorobin/util.hpp"

namespace anisorobin {

using Point = Eigen::Vector2d;

struct Edge {
  Point a, b;
  Point normal;  // unit outward
  double length;
};

class Domain {
 public:
  explicit Domain(std::vector<Point> vertices, std::string tag = "")
      : vertices_(std::move(vertices)), tag_(std::move(tag)) {
    validate();
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::string& tag() const { return tag_; }
  bool convex() const { return convex_; }
  int edge_count() const { return static_cast<int>(vertices_.size()); }

  Edge edge(int k) const {
    const int m = edge_count();
    const Point& a = vertices_[k % m];
    const Point& b = vertices_[(k + 1) % m];
    const Point d = b - a;
    const double len = d.norm();
    return {a, b, Point(d.y() / len, -d.x() / len), len};
  }

  std::pair<Point, Point> bounding_box() const {
    Point lo = vertices_[0], hi = vertices_[0];
    for (const Point& v : vertices_) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    return {lo, hi};
  }

  bool contains(const Point& x) const {
    // Crossing parity with a tolerance collar: points within 1e-12·scale of
    // the boundary count as inside, so downstream quadrature points sitting
    // on edges do not flicker.
    const auto [lo, hi] = bounding_box();
    const double scale = (hi - lo).norm();
    const int m = edge_count();
    for (int k = 0; k < m; ++k) {
      if (distance_to_segment(x, vertices_[k], vertices_[(k + 1) % m]) < 1e-12 * scale)
        return true;
    }
    bool in = false;
    for (int k = 0; k < m; ++k) {
      const Point &a = vertices_[k], &b = vertices_[(k + 1) % m];
      if ((a.y() > x.y()) != (b.y() > x.y())) {
        const double t = (x.y() - a.y()) / (b.y() - a.y());
        if (a.x() + t * (b.x() - a.x()) > x.x()) in = !in;
      }
    }
    return in;
  }

 private:
  static double distance_to_segment(const Point& x, const Point& a, const Point& b) {
    const Point d = b - a;
    const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (x - (a + t * d)).norm();
  }

  void validate() {
    const int m = static_cast<int>(vertices_.size());
    if (m < 3) throw input_error("polygon needs at least 3 vertices");
    const auto [lo, hi] = bounding_box();
    const double scale = (hi - lo).norm();
    if (!(scale > 0)) throw input_error("polygon is a single point");

    double signed_area = 0;
    for (int k = 0; k < m; ++k) {
      const Point &a = vertices_[k], &b = vertices_[(k + 1) % m];
      if ((b - a).norm() <= 1e-14 * scale)
        throw input_error("polygon has a zero-length edge at vertex " + std::to_string(k));
      signed_area += 0.5 * (a.x() * b.y() - b.x() * a.y());
    }
    if (signed_area <= 0)
      throw input_error("polygon must be counter-clockwise with positive area");

    convex_ = true;
    for (int k = 0; k < m; ++k) {
      const Point e1 = vertices_[(k + 1) % m] - vertices_[k];
      const Point e2 = vertices_[(k + 2) % m] - vertices_[(k + 1) % m];
      if (e1.x() * e2.y() - e1.y() * e2.x() < -1e-12 * scale * scale) {
        convex_ = false;
        break;
      }
    }
    if (!convex_ && self_intersects(scale))
      throw input_error("polygon is self-intersecting");
  }

  bool self_intersects(double scale) const {
    const int m = static_cast<int>(vertices_.size());
    auto seg = [&](int k) -> std::pair<Point, Point> {
      return {vertices_[k], vertices_[(k + 1) % m]};
    };
    auto cross = [](const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); };
    for (int i = 0; i < m; ++i) {
      const auto [a, b] = seg(i);
      for (int j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;  // adjacent around the wrap
        const auto [c, d] = seg(j);
        if (std::max(a.x(), b.x()) < std::min(c.x(), d.x()) ||
            std::max(c.x(), d.x()) < std::min(a.x(), b.x()) ||
            std::max(a.y(), b.y()) < std::min(c.y(), d.y()) ||
            std::max(c.y(), d.y()) < std::min(a.y(), b.y()))
          continue;
        const double eps = 1e-14 * scale * scale;
        const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
        const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
        if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
            ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
          return true;
      }
    }
    return false;
  }

  std::vector<Point> vertices_;
  std::string tag_;
  bool convex_ = false;
};

inline double area(const Domain& d) {
  double s = 0;
  const auto& v = d.vertices();
  const int m = static_cast<int>(v.size());
  for (int k = 0; k < m; ++k)
    s += 0.5 * (v[k].x() * v[(k + 1) % m].y() - v[(k + 1) % m].x() * v[k].y());
  return s;
}

/// σ_H(∂Ω) = Σ_edges |e|·H(ν_e).
inline double aniso_perimeter(const Domain& d, const AnisotropicNorm& H) {
  if (H.dim() != 2) throw input_error("aniso_perimeter needs a 2-D norm");
  double s = 0;
  for (int k = 0; k < d.edge_count(); ++k) {
    const Edge e = d.edge(k);
    Vector nu(2);
    nu << e.normal.x(), e.normal.y();
    s += e.length * H(nu);
  }
  return s;
}

/// Polygonal sampling of ∂𝒲_R = {H° = R}: vertex x_k = center + R·u_k/H°(u_k)
/// at m equally spaced angles.
inline Domain wulff_polygon(const AnisotropicNorm& H, double R, const Point& center = Point(0, 0),
                            int m = 2048) {
  if (!(R > 0)) throw input_error("wulff_polygon: R must be positive");
  if (m < 8) throw input_error("wulff_polygon: need at least 8 boundary samples");
  std::vector<Point> verts;
  verts.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * M_PI * k / m;
    Vector u(2);
    u << std::cos(th), std::sin(th);
    const double hp = H.polar_evaluate(u);
    verts.emplace_back(center + Point(u[0], u[1]) * (R / hp));
  }
  return Domain(std::move(verts), "wulff:" + detail::fmt_g(R) + ":" + H.label());
}

/// κ = |𝒲₁|, Richardson-extrapolated from inscribed polygons at
/// m ∈ {512, 1024, 2048} (area error is O(m⁻²), so two levels kill it).
inline double kappa(const AnisotropicNorm& H) {
  if (H.dim() != 2) throw unsupported_error("kappa implemented for n = 2 only");
  const double a1 = area(wulff_polygon(H, 1.0, Point(0, 0), 512));
  const double a2 = area(wulff_polygon(H, 1.0, Point(0, 0), 1024));
  const double a3 = area(wulff_polygon(H, 1.0, Point(0, 0), 2048));
  return detail::richardson2(a1, a2, a3);
}

/// d_H(x) = min over boundary edges of min_{y∈e} H°(x−y).  Each per-edge
/// problem is convex in the edge parameter; golden section to 1e-10.
/// Outside points report 0 (and set *inside=false) rather than extrapolate.
inline double aniso_distance(const Domain& d, const AnisotropicNorm& H, const Point& x,
                             bool* inside = nullptr) {
  if (!d.convex())
    throw unsupported_error("aniso_distance requires a convex domain");
  if (!d.contains(x)) {
    if (inside) *inside = false;
    return 0.0;
  }
  if (inside) *inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < d.edge_count(); ++k) {
    const Edge e = d.edge(k);
    auto f = [&](double t) {
      const Point y = e.a + t * (e.b - e.a);
      Vector v(2);
      v << x.x() - y.x(), x.y() - y.y();
      return H.polar_evaluate(v);
    };
    best = std::min(best, detail::golden_min(f, 0.0, 1.0, 1e-10).second);
  }
  return best;
}

struct InradiusResult {
  double value;
  Point argmax;
};

/// R_{H,Ω} = max d_H over Ω.  d_H is concave on convex Ω, so a coarse grid
/// start plus coordinate-wise golden ascent lands on the maximizer.
inline InradiusResult inradius(const Domain& d, const AnisotropicNorm& H) {
  if (!d.convex())
    throw unsupported_error("inradius requires a convex domain");
  const auto [lo, hi] = d.bounding_box();
  auto dist = [&](double x, double y) { return aniso_distance(d, H, Point(x, y)); };

  constexpr int kGrid = 64;
  Point best(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()));
  double best_val = dist(best.x(), best.y());
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = 0; j <= kGrid; ++j) {
      const double x = lo.x() + (hi.x() - lo.x()) * i / kGrid;
      const double y = lo.y() + (hi.y() - lo.y()) * j / kGrid;
      if (!d.contains(Point(x, y))) continue;
      const double v = dist(x, y);
      if (v > best_val) { best_val = v; best = Point(x, y); }
    }
  }

  const double tol = 1e-11 * std::max(hi.x() - lo.x(), hi.y() - lo.y());
  for (int round = 0; round < 40; ++round) {
    const Point prev = best;
    auto [bx, vx] = detail::golden_max([&](double x) { return dist(x, best.y()); },
                                       lo.x(), hi.x(), tol);
    best.x() = bx;
    auto [by, vy] = detail::golden_max([&](double y) { return dist(best.x(), y); },
                                       lo.y(), hi.y(), tol);
    best.y() = by;
    best_val = vy;
    if ((best - prev).norm() < 10 * tol && round >= 2) break;
  }
  return {best_val, best};
}

/// σ_H(∂Ω) / (2·κ^{1/2}·|Ω|^{1/2}); ≥ 1 up to discretization, = 1 exactly on
/// Wulff shapes of the same H.
inline double isoperimetric_ratio(const Domain& d, const AnisotropicNorm& H) {
  return aniso_perimeter(d, H) / (2.0 * std::sqrt(kappa(H) * area(d)));
}

// Built-in domain generators (the CLI exposes these names).

inline Domain make_square(double side = 1.0) {
  return Domain({{0, 0}, {side, 0}, {side, side}, {0, side}}, "square");
}

inline Domain make_rect(double w, double h) {
  if (!(w > 0) || !(h > 0)) throw input_error("rect: sides must be positive");
  return Domain({{0, 0}, {w, 0}, {w, h}, {0, h}},
                "rect:" + detail::fmt_g(w) + "," + detail::fmt_g(h));
}

inline Domain make_ellipse(double a, double b, int m = 256) {
  if (!(a > 0) || !(b > 0)) throw input_error("ellipse: semi-axes must be positive");
  if (m < 8) throw input_error("ellipse: need at least 8 samples");
  std::vector<Point> v;
  v.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * M_PI * k / m;
    v.emplace_back(a * std::cos(th), b * std::sin(th));
  }
  return Domain(std::move(v), "ellipse:" + detail::fmt_g(a) + "," + detail::fmt_g(b));
}

inline Domain make_regular_polygon(int k, double R = 1.0) {
  if (k < 3) throw input_error("regular polygon needs k >= 3");
  if (!(R > 0)) throw input_error("regular polygon: R must be positive");
  std::vector<Point> v;
  v.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double th = 2.0 * M_PI * i / k;
    v.emplace_back(R * std::cos(th), R * std::sin(th));
  }
  return Domain(std::move(v), "regular:" + std::to_string(k));
}

}  // namespace anisorobin
