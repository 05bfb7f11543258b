// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Conforming P1 triangulations of polygonal domains.  The recipe: sample the
// polygon boundary at spacing ≤ h (long edges subdivided, short ones kept),
// lay a structured interior grid clipped away from the boundary by a guard
// band, Delaunay-triangulate (incremental Bowyer–Watson with walk location),
// then a few rounds of Laplacian smoothing with re-triangulation.  The guard
// band keeps every boundary segment's diametral circle empty, which is what
// makes the sampled boundary chain appear verbatim among Delaunay edges — so
// triangle areas sum to the polygon area exactly (up to roundoff) and the
// boundary edges close into the original loop.
//
// Deterministic by construction: no randomness, fixed insertion and scan
// orders.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "anisorobin/errors.hpp"
#include "anisorobin/geometry.hpp"

namespace anisorobin {

struct BoundaryEdge {
  int a, b;      // node indices, domain on the left (CCW loop)
  Point normal;  // unit outward
  double length;
};

struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<BoundaryEdge> boundary;
  double h = 0;

  double triangle_area(int t) const {
    const Point &a = nodes[triangles[t][0]], &b = nodes[triangles[t][1]],
                &c = nodes[triangles[t][2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  }

  double area() const {
    double s = 0;
    for (size_t t = 0; t < triangles.size(); ++t) s += triangle_area(static_cast<int>(t));
    return s;
  }

  double min_angle_deg() const {
    double worst = 180.0;
    for (const auto& tri : triangles) {
      for (int i = 0; i < 3; ++i) {
        const Point &a = nodes[tri[i]], &b = nodes[tri[(i + 1) % 3]], &c = nodes[tri[(i + 2) % 3]];
        const Point u = b - a, v = c - a;
        const double ang = std::atan2(std::fabs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
        worst = std::min(worst, ang * 180.0 / M_PI);
      }
    }
    return worst;
  }
};

namespace detail {

/// Incremental Delaunay triangulation with a super-triangle, walk-based point
/// location, and strict (tie-excluding) incircle tests, so cocircular grid
/// points resolve deterministically by insertion order.
class Delaunay {
 public:
  explicit Delaunay(const std::vector<Point>& pts) : pts_(pts) {
    Point lo = pts[0], hi = pts[0];
    for (const Point& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    scale_ = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-30});
    eps_orient_ = 1e-13 * scale_ * scale_;
    eps_incircle_ = 1e-11 * scale_ * scale_ * scale_ * scale_;
    const Point c = 0.5 * (lo + hi);
    const double L = 30.0 * scale_;
    const int n = static_cast<int>(pts.size());
    super_ = n;
    pts_ext_ = pts;
    pts_ext_.emplace_back(c.x() - 2 * L, c.y() - L);
    pts_ext_.emplace_back(c.x() + 2 * L, c.y() - L);
    pts_ext_.emplace_back(c.x(), c.y() + 2 * L);
    tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
    hint_ = 0;
    for (int i = 0; i < n; ++i) insert(i);
  }

  /// Alive triangles not touching the super-triangle, CCW.
  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= super_ || t.v[1] >= super_ || t.v[2] >= super_) continue;
      out.push_back({t.v[0], t.v[1], t.v[2]});
    }
    return out;
  }

 private:
  struct Tri {
    int v[3];
    int adj[3];  // adj[i] shares the edge opposite v[i]; -1 at the rim
    bool alive;
  };

  double orient(int a, int b, int c) const {
    const Point &A = pts_ext_[a], &B = pts_ext_[b], &C = pts_ext_[c];
    return (B.x() - A.x()) * (C.y() - A.y()) - (B.y() - A.y()) * (C.x() - A.x());
  }

  bool in_circumcircle(const Tri& t, int p) const {
    const Point& P = pts_ext_[p];
    double m[3][3];
    for (int i = 0; i < 3; ++i) {
      const Point& V = pts_ext_[t.v[i]];
      m[i][0] = V.x() - P.x();
      m[i][1] = V.y() - P.y();
      m[i][2] = m[i][0] * m[i][0] + m[i][1] * m[i][1];
    }
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[2][0] * m[1][2]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[2][0] * m[1][1]);
    return det > eps_incircle_;
  }

  int locate(int p) const {
    int cur = hint_;
    for (int step = 0; step < 1 << 20; ++step) {
      if (!tris_[cur].alive) break;  // stale hint; fall through to scan
      bool moved = false;
      for (int i = 0; i < 3; ++i) {
        const int a = tris_[cur].v[(i + 1) % 3], b = tris_[cur].v[(i + 2) % 3];
        if (orient(a, b, p) < -eps_orient_) {
          const int next = tris_[cur].adj[i];
          if (next < 0) break;
          cur = next;
          moved = true;
          break;
        }
      }
      if (!moved) return cur;
    }
    for (size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive) continue;
      bool inside = true;
      for (int i = 0; i < 3 && inside; ++i)
        inside = orient(tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], p) >= -eps_orient_;
      if (inside) return static_cast<int>(t);
    }
    throw internal_error("Delaunay point location failed");
  }

  void insert(int p) {
    const int start = locate(p);
    // Grow the cavity of triangles whose circumcircle strictly contains p.
    std::vector<int> cavity{start}, stack{start};
    std::vector<char> in_cavity(tris_.size(), 0);
    in_cavity[start] = 1;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; ++i) {
        const int nb = tris_[t].adj[i];
        if (nb < 0 || in_cavity[nb]) continue;
        if (in_circumcircle(tris_[nb], p)) {
          in_cavity[nb] = 1;
          cavity.push_back(nb);
          stack.push_back(nb);
        }
      }
    }
    // Rim edges (cavity side facing a non-cavity triangle), then fan from p.
    struct RimEdge {
      int a, b, outside;
    };
    std::vector<RimEdge> rim;
    for (int t : cavity) {
      for (int i = 0; i < 3; ++i) {
        const int nb = tris_[t].adj[i];
        if (nb >= 0 && in_cavity[nb]) continue;
        rim.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
      }
    }
    for (int t : cavity) tris_[t].alive = false;

    std::map<std::pair<int, int>, std::pair<int, int>> open;  // (p,v) edge -> (tri, slot)
    for (const RimEdge& e : rim) {
      const int id = static_cast<int>(tris_.size());
      // New triangle (a, b, p): keeps the rim edge orientation, CCW since the
      // cavity is star-shaped around p.
      tris_.push_back({{e.a, e.b, p}, {-1, -1, -1}, true});
      Tri& nt = tris_.back();
      nt.adj[2] = e.outside;  // edge (a,b) opposite p
      if (e.outside >= 0) {
        Tri& ot = tris_[e.outside];
        for (int i = 0; i < 3; ++i) {
          const int oa = ot.v[(i + 1) % 3], ob = ot.v[(i + 2) % 3];
          if ((oa == e.b && ob == e.a) || (oa == e.a && ob == e.b)) ot.adj[i] = id;
        }
      }
      // Edge (b,p) is opposite slot 0; edge (p,a) is opposite slot 1.
      auto link = [&](int u, int v, int slot) {
        const auto key = std::minmax(u, v);
        const auto it = open.find({key.first, key.second});
        if (it == open.end()) {
          open[{key.first, key.second}] = {id, slot};
        } else {
          tris_[id].adj[slot] = it->second.first;
          tris_[it->second.first].adj[it->second.second] = id;
          open.erase(it);
        }
      };
      link(e.b, p, 0);
      link(p, e.a, 1);
      hint_ = id;
    }
    if (!open.empty()) throw internal_error("Delaunay cavity did not close");
  }

  const std::vector<Point>& pts_;
  std::vector<Point> pts_ext_;
  std::vector<Tri> tris_;
  double scale_, eps_orient_, eps_incircle_;
  int super_;
  int hint_;
};

inline std::vector<std::array<int, 3>> triangulate_inside(const std::vector<Point>& pts,
                                                          const Domain& d, int n_boundary) {
  std::vector<std::array<int, 3>> tris = Delaunay(pts).triangles();
  if (!d.convex()) {
    // Non-convex pockets are covered by the Delaunay hull; drop triangles
    // whose centroid falls outside.
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : tris) {
      const Point c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
      if (d.contains(c)) kept.push_back(t);
    }
    tris.swap(kept);
  }
  (void)n_boundary;
  return tris;
}

}  // namespace detail

/// Mesh the polygon at target edge length h.  Postconditions enforced here:
/// triangle areas sum to the polygon area (1e-10 relative), boundary edges
/// close into the polygon's loop, min angle ≥ 20°, fully deterministic.
inline Mesh generate_mesh(const Domain& d, double h) {
  const auto [lo, hi] = d.bounding_box();
  const double w = hi.x() - lo.x(), ht = hi.y() - lo.y();
  if (!(h > 0)) throw input_error("generate_mesh: h must be positive");
  if (h > 0.5 * std::min(w, ht))
    throw input_error("generate_mesh: h = " + detail::fmt_g(h) +
                      " too large for a domain of size " + detail::fmt_g(w) + " x " +
                      detail::fmt_g(ht));

  // Boundary chain: subdivide edges longer than h, keep short edges whole.
  std::vector<Point> pts;
  for (int k = 0; k < d.edge_count(); ++k) {
    const Edge e = d.edge(k);
    const int parts = std::max(1, static_cast<int>(std::ceil(e.length / h - 1e-9)));
    for (int i = 0; i < parts; ++i)
      pts.push_back(e.a + (static_cast<double>(i) / parts) * (e.b - e.a));
  }
  const int n_boundary = static_cast<int>(pts.size());

  // Interior grid, clipped a guard band away from the boundary so boundary
  // segments keep empty diametral circles.
  const double guard = 0.6 * h;
  auto clear_of_boundary = [&](const Point& p) {
    for (int k = 0; k < d.edge_count(); ++k) {
      const Edge e = d.edge(k);
      const Point dd = e.b - e.a;
      const double t = std::clamp((p - e.a).dot(dd) / dd.squaredNorm(), 0.0, 1.0);
      if ((p - (e.a + t * dd)).norm() < guard) return false;
    }
    return true;
  };
  for (int j = 0; lo.y() + j * h <= hi.y() + 1e-12; ++j) {
    for (int i = 0; lo.x() + i * h <= hi.x() + 1e-12; ++i) {
      const Point p(lo.x() + i * h, lo.y() + j * h);
      if (d.contains(p) && clear_of_boundary(p)) pts.push_back(p);
    }
  }

  std::vector<std::array<int, 3>> tris = detail::triangulate_inside(pts, d, n_boundary);

  // Laplacian smoothing of interior nodes (boundary fixed), re-triangulating
  // after each round; averaging keeps points inside on convex domains, and a
  // containment clamp covers the rest.
  for (int round = 0; round < 6; ++round) {
    std::vector<Point> acc(pts.size(), Point(0, 0));
    std::vector<int> deg(pts.size(), 0);
    for (const auto& t : tris) {
      for (int i = 0; i < 3; ++i) {
        acc[t[i]] += pts[t[(i + 1) % 3]] + pts[t[(i + 2) % 3]];
        deg[t[i]] += 2;
      }
    }
    for (size_t i = n_boundary; i < pts.size(); ++i) {
      if (!deg[i]) continue;
      const Point cand = acc[i] / deg[i];
      if (d.convex() || d.contains(cand)) pts[i] = cand;
    }
    tris = detail::triangulate_inside(pts, d, n_boundary);
  }

  Mesh mesh;
  mesh.h = h;
  mesh.nodes = pts;
  mesh.triangles = tris;

  // Boundary edges: those owned by exactly one triangle, oriented with the
  // domain on the left; normals point away from the owning triangle.
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      const auto key = std::minmax(t[i], t[(i + 1) % 3]);
      edge_use[{key.first, key.second}]++;
    }
  for (const auto& t : tris) {
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      const auto key = std::minmax(a, b);
      if (edge_use[{key.first, key.second}] != 1) continue;
      const Point dd = mesh.nodes[b] - mesh.nodes[a];
      const double len = dd.norm();
      mesh.boundary.push_back({a, b, Point(dd.y() / len, -dd.x() / len), len});
    }
  }

  // --- Postcondition checks ---
  const double poly_area = area(d);
  double mesh_area = 0;
  for (size_t t = 0; t < tris.size(); ++t) {
    const double at = mesh.triangle_area(static_cast<int>(t));
    if (at <= 0) throw numeric_error("generate_mesh produced a degenerate triangle");
    mesh_area += at;
  }
  if (std::fabs(mesh_area - poly_area) > 1e-10 * poly_area)
    throw numeric_error("mesh area " + detail::fmt_g(mesh_area) +
                        " does not match polygon area " + detail::fmt_g(poly_area));

  if (static_cast<int>(mesh.boundary.size()) != n_boundary)
    throw numeric_error("mesh boundary does not conform to the polygon");
  std::vector<int> next(pts.size(), -1);
  for (const BoundaryEdge& e : mesh.boundary) {
    if (e.a >= n_boundary || e.b >= n_boundary || next[e.a] != -1)
      throw numeric_error("mesh boundary does not conform to the polygon");
    next[e.a] = e.b;
  }
  int cur = 0, count = 0;
  do {
    cur = next[cur];
    if (cur < 0) throw numeric_error("mesh boundary chain is broken");
    ++count;
  } while (cur != 0 && count <= n_boundary);
  if (count != n_boundary) throw numeric_error("mesh boundary is not a single closed loop");

  const double ang = mesh.min_angle_deg();
  if (ang < 20.0 - 1e-9)
    throw numeric_error("mesh quality too low: min angle " + detail::fmt_g(ang) + " deg");

  return mesh;
}

}  // namespace anisorobin
