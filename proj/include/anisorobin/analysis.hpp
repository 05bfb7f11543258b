// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// The verification layer on top of the solvers: the level-set representation
// functional F, the transplanted-competitor comparison behind the
// Faber-Krahn inequality, the Faber-Krahn verdict itself, the inradius lower
// bound, the Hardy-type inequality check, and the thin-rectangle sweep.
//
// Everything here consumes converged eigenpairs (or explicit nodal fields)
// and mesh geometry; level curves of P1 fields are extracted by marching
// triangles with linear edge interpolation.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "anisorobin/fem.hpp"
#include "anisorobin/geometry.hpp"
#include "anisorobin/radial.hpp"

namespace anisorobin {

/// One level t of a max-normalized eigenfunction: the superlevel set
/// U_t = {u > t}, its interior level curve S_t and boundary part Γ_t, and the
/// two integrals the representation functional is built from.
struct LevelSetSlice {
  double t;
  double area_Ut;
  double sigma_St;          // ∫_{S_t} H(ν) dσ
  double sigma_Gt;          // ∫_{Γ_t} H(ν) dσ
  double integral_phi_St;   // ∫_{S_t} φ H(ν) dσ
  double integral_phi_pow;  // ∫_{U_t} φ^{p/(p−1)} dx
};

struct RepresentationResult {
  LevelSetSlice slice;
  double F_value;
};

struct TransplantResult {
  double F_domain;  // F_Ω(U_t, φ) with the transplanted radial competitor
  double F_wulff;   // F_{W_R}(W_{r(t)}, φ*) evaluated from the radial profile
  double r_of_t;    // radius with |W_{r(t)}| = |U_t|
  LevelSetSlice slice;
};

struct FaberKrahnReport {
  double lambda_domain;
  double lambda_wulff;
  double R_equiv;  // radius with |W_R| = |Ω|
  double ratio;    // lambda_domain / lambda_wulff
  double mesh_h;
  std::string verdict;  // "holds" | "holds_with_margin" | "violated"
};

struct InradiusBoundResult {
  double bound;
  double lambda;
  double slack;  // lambda − bound
};

struct HardyResult {
  double lhs;
  double rhs;
  bool holds;
};

struct SweepRow {
  double ratio;
  double lambda;
};

namespace detail {

/// Nudge t off the (countable) set of nodal values so every triangle edge is
/// crossed transversally.
inline double dodge_nodal_values(const Eigen::VectorXd& u, double t) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool clean = true;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (std::fabs(u[i] - t) <= 1e-13) {
        clean = false;
        break;
      }
    if (clean) return t;
    t += 1e-12;
  }
  throw numeric_error("level value collides with nodal values persistently");
}

/// March the superlevel set {u > t} through every triangle and boundary edge,
/// accumulating areas, anisotropic lengths, and the two φ integrals.
/// `phi_pow(tri, uq)` is φ^{p/(p−1)} at a quadrature point with value uq;
/// `phi_seg(tri)` is φ on the piece of S_t inside that triangle.
template <typename PhiPow, typename PhiSeg>
LevelSetSlice march_superlevel(const Mesh& mesh, const FemCache& cache,
                               const AnisotropicNorm& H, const Eigen::VectorXd& u, double t,
                               PhiPow&& phi_pow, PhiSeg&& phi_seg) {
  LevelSetSlice s{t, 0, 0, 0, 0, 0};
  Vector nu(2);
  for (size_t ti = 0; ti < cache.tris.size(); ++ti) {
    const auto& tri = cache.tris[ti];
    const double c[3] = {u[tri.v[0]], u[tri.v[1]], u[tri.v[2]]};
    const bool above[3] = {c[0] > t, c[1] > t, c[2] > t};
    if (!above[0] && !above[1] && !above[2]) continue;

    // Clip polygon of {u > t} (CCW), plus the level segment if cut.
    Point poly[4];
    int np = 0;
    Point cross[2];
    int nc = 0;
    for (int e = 0; e < 3; ++e) {
      const int i = e, j = (e + 1) % 3;
      const Point &pi = mesh.nodes[tri.v[i]], &pj = mesh.nodes[tri.v[j]];
      if (above[i]) poly[np++] = pi;
      if (above[i] != above[j]) {
        const double w = (t - c[i]) / (c[j] - c[i]);
        poly[np++] = pi + w * (pj - pi);
        cross[nc++] = poly[np - 1];
      }
    }

    const Eigen::Vector2d g = c[0] * tri.dphi[0] + c[1] * tri.dphi[1] + c[2] * tri.dphi[2];
    double clip_area = 0;
    for (int k = 1; k + 1 < np; ++k) {
      const Point &a = poly[0], &b = poly[k], &cc = poly[k + 1];
      const double sub =
          0.5 * ((b.x() - a.x()) * (cc.y() - a.y()) - (cc.x() - a.x()) * (b.y() - a.y()));
      clip_area += sub;
      // 3-point rule on the fan triangle; u is affine on the parent triangle.
      for (int q = 0; q < 3; ++q) {
        double lam[3] = {1.0 / 6, 1.0 / 6, 1.0 / 6};
        lam[q] = 2.0 / 3;
        const Point xq = lam[0] * a + lam[1] * b + lam[2] * cc;
        const double uq =
            c[0] + g.dot(Eigen::Vector2d(xq.x() - mesh.nodes[tri.v[0]].x(),
                                         xq.y() - mesh.nodes[tri.v[0]].y()));
        s.integral_phi_pow += sub / 3.0 * phi_pow(static_cast<int>(ti), uq);
      }
    }
    s.area_Ut += clip_area;

    if (nc == 2) {
      const double len = (cross[1] - cross[0]).norm();
      if (len > 0) {
        nu << -g.x(), -g.y();  // outward normal of {u > t}: u decreases across
        nu /= nu.norm();
        const double hnu = H(nu);
        s.sigma_St += len * hnu;
        s.integral_phi_St += phi_seg(static_cast<int>(ti)) * len * hnu;
      }
    }
  }
  for (size_t ei = 0; ei < mesh.boundary.size(); ++ei) {
    const BoundaryEdge& e = mesh.boundary[ei];
    const double ua = u[e.a], ub = u[e.b];
    double frac = 0;
    if (ua > t && ub > t) frac = 1;
    else if (ua > t || ub > t) {
      const double w = (t - ua) / (ub - ua);
      frac = ua > t ? w : 1 - w;
    }
    s.sigma_Gt += frac * cache.edges[ei].weight;  // weight = len · H(ν)
  }
  return s;
}

/// Rescale so max u = 1 (the representation formula's normalization).
inline Eigen::VectorXd max_normalized(const Eigen::VectorXd& u) {
  const double m = u.maxCoeff();
  if (!(m > 0)) throw input_error("eigenfunction has no positive part");
  return u / m;
}

/// Linear interpolation of the radial β_r profile at radius s ∈ [0, R].
inline double beta_at(const RadialSolution& rad, double s) {
  const auto& r = rad.r;
  if (s <= 0) return 0;
  if (s >= r.back()) return rad.beta_profile.back();
  const auto it = std::upper_bound(r.begin(), r.end(), s);
  const size_t j = static_cast<size_t>(it - r.begin());  // r[j−1] ≤ s < r[j]
  const double w = (s - r[j - 1]) / (r[j] - r[j - 1]);
  return (1 - w) * rad.beta_profile[j - 1] + w * rad.beta_profile[j];
}

}  // namespace detail

/// σ_H(∂U_t) accumulated independently of the slice walker: clip-polygon
/// edges shared by two triangles cancel, leaving exactly the boundary of the
/// superlevel set (level segments plus clipped mesh-boundary pieces).
inline double level_set_perimeter(const Mesh& mesh, const AnisotropicNorm& H,
                                  const Eigen::VectorXd& u, double t) {
  const double tt = detail::dodge_nodal_values(u, t);
  double sigma = 0;
  // Portions of mesh edges covered by {u ≥ t}, keyed by node pair; interior
  // edges are seen from both sides and cancel by parity.
  std::map<std::pair<int, int>, int> edge_seen;
  Vector nu(2);
  for (const auto& tri : mesh.triangles) {
    const double c[3] = {u[tri[0]], u[tri[1]], u[tri[2]]};
    const bool above[3] = {c[0] > tt, c[1] > tt, c[2] > tt};
    if (!above[0] && !above[1] && !above[2]) continue;
    Point cross[2];
    int nc = 0;
    for (int e = 0; e < 3; ++e) {
      const int i = e, j = (e + 1) % 3;
      if (above[i] || above[j]) {
        const auto key = std::minmax(tri[i], tri[j]);
        ++edge_seen[{key.first, key.second}];
      }
      if (above[i] != above[j]) {
        const Point &pi = mesh.nodes[tri[i]], &pj = mesh.nodes[tri[j]];
        const double w = (tt - c[i]) / (c[j] - c[i]);
        cross[nc++] = pi + w * (pj - pi);
      }
    }
    if (nc == 2) {
      const double len = (cross[1] - cross[0]).norm();
      if (len > 0) {
        Eigen::Vector2d g(0, 0);
        // Reconstruct the P1 gradient from vertex positions and values.
        const Point &a = mesh.nodes[tri[0]], &b = mesh.nodes[tri[1]], &cc = mesh.nodes[tri[2]];
        const double det2 = (b.x() - a.x()) * (cc.y() - a.y()) - (cc.x() - a.x()) * (b.y() - a.y());
        g.x() = ((c[1] - c[0]) * (cc.y() - a.y()) - (c[2] - c[0]) * (b.y() - a.y())) / det2;
        g.y() = ((c[2] - c[0]) * (b.x() - a.x()) - (c[1] - c[0]) * (cc.x() - a.x())) / det2;
        nu << -g.x(), -g.y();
        nu /= nu.norm();
        sigma += len * H(nu);
      }
    }
  }
  // Mesh-boundary pieces: edges seen exactly once belong to ∂Ω; clip each to
  // the part with u > t and weight by H of the domain's outward normal.
  for (const BoundaryEdge& e : mesh.boundary) {
    const auto key = std::minmax(e.a, e.b);
    const auto it = edge_seen.find({key.first, key.second});
    if (it == edge_seen.end() || it->second != 1) continue;
    const double ua = u[e.a], ub = u[e.b];
    double frac = 0;
    if (ua > tt && ub > tt) frac = 1;
    else if (ua > tt || ub > tt) {
      const double w = (tt - ua) / (ub - ua);
      frac = ua > tt ? w : 1 - w;
    }
    nu << e.normal.x(), e.normal.y();
    sigma += frac * e.length * H(nu);
  }
  return sigma;
}

/// The level-set representation functional evaluated with the eigenfunction's
/// own competitor φ = H(∇u)^{p−1}/u^{p−1}.  For the true eigenpair the value
/// equals λ₁ for a.e. t; the spread across t measures discretization error.
inline RepresentationResult representation_functional(const EigenResult& result,
                                                      const Mesh& mesh,
                                                      const AnisotropicNorm& H, double p,
                                                      double beta, double t) {
  if (!result.converged)
    throw input_error("representation_functional: eigenpair did not converge");
  if (!(t > 0 && t < 1)) throw input_error("representation_functional: t must be in (0,1)");
  const Eigen::VectorXd u = detail::max_normalized(result.u);
  const double tt = detail::dodge_nodal_values(u, t);
  const detail::FemCache cache(mesh, H);

  // One-sided φ per triangle: the P1 gradient is constant there.
  std::vector<double> hp(cache.tris.size());
  for (size_t i = 0; i < cache.tris.size(); ++i) {
    const auto& tri = cache.tris[i];
    const Eigen::Vector2d g = u[tri.v[0]] * tri.dphi[0] + u[tri.v[1]] * tri.dphi[1] +
                              u[tri.v[2]] * tri.dphi[2];
    hp[i] = H(Vector(g));
  }
  const LevelSetSlice slice = detail::march_superlevel(
      mesh, cache, H, u, tt,
      [&](int tri, double uq) { return std::pow(hp[tri], p) / std::pow(uq, p); },
      [&](int tri) { return std::pow(hp[tri], p - 1.0) / std::pow(tt, p - 1.0); });
  if (!(slice.area_Ut > 0))
    throw input_error("representation_functional: superlevel set is empty");
  const double F = (-(p - 1.0) * slice.integral_phi_pow + slice.integral_phi_St +
                    beta * slice.sigma_Gt) /
                   slice.area_Ut;
  return {slice, F};
}

/// The Faber-Krahn proof's competitor: transplant the radial profile's
/// effective Robin parameter β_r onto the level sets of u via equal measure
/// (|W_{r(s)}| = |U_s|), and evaluate the functional on both the domain and
/// its Wulff counterpart.  Contracts (up to mesh error): F_domain ≥ F_wulff
/// and F_domain ≤ λ₁(Ω).
inline TransplantResult transplant_comparison(const EigenResult& result, const Mesh& mesh,
                                              const AnisotropicNorm& H, double p, double beta,
                                              double t) {
  if (!result.converged)
    throw input_error("transplant_comparison: eigenpair did not converge");
  if (!(t > 0 && t < 1)) throw input_error("transplant_comparison: t must be in (0,1)");
  const Eigen::VectorXd u = detail::max_normalized(result.u);
  const double tt = detail::dodge_nodal_values(u, t);
  const detail::FemCache cache(mesh, H);

  const double kap = kappa(H);
  double mesh_area = 0;
  for (const auto& tri : cache.tris) mesh_area += tri.area;
  const double R = std::sqrt(mesh_area / kap);
  const RadialSolution rad = first_eigenvalue_radial({2, p, R, beta});
  const double pprime = p / (p - 1.0);

  // Tabulate the level-to-radius map r(s): |W_{r(s)}| = |U_s| for s ∈ [t, 1].
  constexpr int kLevels = 256;
  std::vector<double> rtab(kLevels + 1);
  for (int j = 0; j <= kLevels; ++j) {
    const double s = tt + (1.0 - tt) * j / kLevels;
    double a = 0;
    for (const auto& tri : cache.tris) {
      const double c[3] = {u[tri.v[0]], u[tri.v[1]], u[tri.v[2]]};
      const bool above[3] = {c[0] > s, c[1] > s, c[2] > s};
      if (!above[0] && !above[1] && !above[2]) continue;
      Point poly[4];
      int np = 0;
      for (int e = 0; e < 3; ++e) {
        const int i = e, k = (e + 1) % 3;
        if (above[i]) poly[np++] = mesh.nodes[tri.v[i]];
        if (above[i] != above[k]) {
          const double w = (s - c[i]) / (c[k] - c[i]);
          poly[np++] = mesh.nodes[tri.v[i]] + w * (mesh.nodes[tri.v[k]] - mesh.nodes[tri.v[i]]);
        }
      }
      for (int k = 1; k + 1 < np; ++k)
        a += 0.5 * ((poly[k].x() - poly[0].x()) * (poly[k + 1].y() - poly[0].y()) -
                    (poly[k + 1].x() - poly[0].x()) * (poly[k].y() - poly[0].y()));
    }
    rtab[j] = std::sqrt(std::max(0.0, a) / kap);
  }
  auto r_of = [&](double uq) {
    const double x = std::clamp((uq - tt) / (1.0 - tt) * kLevels, 0.0, double(kLevels));
    const int j = std::min(static_cast<int>(x), kLevels - 1);
    return rtab[j] + (x - j) * (rtab[j + 1] - rtab[j]);
  };

  const double r_t = rtab[0];
  const double beta_rt = detail::beta_at(rad, r_t);
  const LevelSetSlice slice = detail::march_superlevel(
      mesh, cache, H, u, tt,
      [&](int, double uq) { return std::pow(detail::beta_at(rad, r_of(uq)), pprime); },
      [&](int) { return beta_rt; });
  if (!(slice.area_Ut > 0))
    throw input_error("transplant_comparison: superlevel set is empty");
  const double F_domain = (-(p - 1.0) * slice.integral_phi_pow + slice.integral_phi_St +
                           beta * slice.sigma_Gt) /
                          slice.area_Ut;

  // Wulff side from the radial profile: F = (1/(κr²))(−(p−1)∫₀^r β_s^{p′}·2κs ds
  // + β_r·2κr).  Trapezoid over the recorded grid; β_0 = 0 closes the origin.
  double ipow = 0;
  for (size_t i = 1; i < rad.r.size() && rad.r[i - 1] < r_t; ++i) {
    const double s0 = rad.r[i - 1], s1 = std::min(rad.r[i], r_t);
    const double b0 = rad.beta_profile[i - 1];
    const double b1 = detail::beta_at(rad, s1);
    ipow += 0.5 * (std::pow(b0, pprime) * 2 * kap * s0 + std::pow(b1, pprime) * 2 * kap * s1) *
            (s1 - s0);
  }
  const double F_wulff =
      (-(p - 1.0) * ipow + beta_rt * 2 * kap * r_t) / (kap * r_t * r_t);
  return {F_domain, F_wulff, r_t, slice};
}

/// Declared mesh tolerance for the Faber-Krahn verdict: 2e-3 at the reference
/// resolution h = 0.02, degrading with coarser meshes at the observed O(h^1.5)
/// eigenvalue accuracy and never tightening below the reference.
inline double faber_krahn_tolerance(double h) {
  return 2e-3 * std::max(1.0, std::pow(h / 0.02, 1.5));
}

/// λ₁(Ω) vs λ₁(W_R) at equal measure.  The verdict separates the equality
/// zone ("holds") from a strict inequality resolved beyond mesh error
/// ("holds_with_margin"); "violated" would falsify the comparison theorem.
inline FaberKrahnReport faber_krahn(const Domain& d, const AnisotropicNorm& H, double p,
                                    double beta, double h) {
  const Mesh mesh = generate_mesh(d, h);
  const double lambda_domain = solve_first_eigenpair(mesh, H, p, beta).lambda;
  const double R = std::sqrt(area(d) / kappa(H));
  const double lambda_wulff = first_eigenvalue_radial({2, p, R, beta}).lambda;
  const double ratio = lambda_domain / lambda_wulff;
  const double tol = faber_krahn_tolerance(h);
  const double margin = 5e-3 * std::max(1.0, std::pow(h / 0.02, 1.5));
  std::string verdict = "holds";
  if (ratio < 1.0 - tol) verdict = "violated";
  else if (ratio > 1.0 + margin) verdict = "holds_with_margin";
  return {lambda_domain, lambda_wulff, R, ratio, h, verdict};
}

/// Lower bound λ₁ ≥ ((p−1)/p)^p · β/(R_H(1+β^{1/(p−1)}R_H)^{p−1}) on convex
/// domains, with both sides computed independently.
inline InradiusBoundResult inradius_bound(const Domain& d, const AnisotropicNorm& H, double p,
                                          double beta, double h = 0.05) {
  if (!d.convex()) throw unsupported_error("inradius_bound requires a convex domain");
  const double RH = inradius(d, H).value;
  const double bound = std::pow((p - 1.0) / p, p) * beta /
                       (RH * std::pow(1.0 + std::pow(beta, 1.0 / (p - 1.0)) * RH, p - 1.0));
  const Mesh mesh = generate_mesh(d, h);
  const double lambda = solve_first_eigenpair(mesh, H, p, beta).lambda;
  return {bound, lambda, lambda - bound};
}

/// Hardy-type inequality on a convex domain:
///   ∫ H(∇u)^p + θ^{p−1}∫_{∂Ω}|u|^p H(ν) ≥ (p−1)(αθ)^{p−1}(1−αθ)∫ |u|^p/(d_H+α)^p.
/// The left side reuses the Rayleigh numerator with β = θ^{p−1}; the right
/// side evaluates d_H at interior quadrature points only.
inline HardyResult hardy_check(const Domain& d, const Mesh& mesh, const AnisotropicNorm& H,
                               double p, const Eigen::VectorXd& u, double alpha,
                               double theta) {
  if (!d.convex()) throw unsupported_error("hardy_check requires a convex domain");
  if (!(alpha > 0) || !(theta > 0))
    throw input_error("hardy_check: alpha and theta must be positive");
  const double lhs = rayleigh(mesh, H, p, std::pow(theta, p - 1.0), u).num;

  const detail::FemCache cache(mesh, H);
  double integral = 0;
  for (const auto& tri : cache.tris) {
    for (int q = 0; q < 3; ++q) {
      double lam[3] = {1.0 / 6, 1.0 / 6, 1.0 / 6};
      lam[q] = 2.0 / 3;
      const Point xq = lam[0] * mesh.nodes[tri.v[0]] + lam[1] * mesh.nodes[tri.v[1]] +
                       lam[2] * mesh.nodes[tri.v[2]];
      const double uq = lam[0] * u[tri.v[0]] + lam[1] * u[tri.v[1]] + lam[2] * u[tri.v[2]];
      const double dh = aniso_distance(d, H, xq);
      integral += tri.area / 3.0 * std::pow(std::fabs(uq), p) / std::pow(dh + alpha, p);
    }
  }
  const double rhs = (p - 1.0) * std::pow(alpha * theta, p - 1.0) * (1.0 - alpha * theta) *
                     integral;
  return {lhs, rhs, lhs >= rhs - 1e-9 * std::fabs(lhs)};
}

/// λ₁ over rectangles of fixed area and growing aspect ratio; the sequence
/// must increase (no Faber-Krahn upper bound: sup λ₁ = ∞ at fixed measure).
inline std::vector<SweepRow> unboundedness_sweep(const std::vector<double>& aspect_ratios,
                                                 double area_target,
                                                 const AnisotropicNorm& H, double p,
                                                 double beta, double h) {
  if (aspect_ratios.empty()) throw input_error("unboundedness_sweep: no ratios given");
  if (!(area_target > 0)) throw input_error("unboundedness_sweep: area must be positive");
  for (size_t i = 0; i < aspect_ratios.size(); ++i) {
    if (!(aspect_ratios[i] >= 1)) throw input_error("unboundedness_sweep: ratios must be >= 1");
    if (i && !(aspect_ratios[i] > aspect_ratios[i - 1]))
      throw input_error("unboundedness_sweep: ratios must be strictly increasing");
  }
  std::vector<SweepRow> rows;
  for (const double ratio : aspect_ratios) {
    const double w = std::sqrt(area_target * ratio);
    const Domain rect = make_rect(w, area_target / w);
    const Mesh mesh = generate_mesh(rect, h);
    rows.push_back({ratio, solve_first_eigenpair(mesh, H, p, beta).lambda});
  }
  return rows;
}

}  // namespace anisorobin
