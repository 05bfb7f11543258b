// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// P1 finite elements for the first Robin eigenpair of the anisotropic
// p-Laplacian: minimize
//
//   J(u) = ( ∫_Ω H(∇u)^p + β ∫_{∂Ω} |u|^p H(ν) dσ ) / ∫_Ω |u|^p.
//
// Two solvers share the assembly: a p = 2 + quadratic-H fast path (sparse
// generalized eigenproblem, inverse power iteration) and a projected
// Barzilai–Borwein descent on J for everything else.  One-point gradient
// quadrature per triangle (exact for p = 2 quadratic — a documented
// variational crime otherwise), 3-point interior and 2-point Gauss boundary
// quadrature for the |u|^p terms.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <random>
#include <vector>

#include "anisorobin/errors.hpp"
#include "anisorobin/mesh.hpp"
#include "anisorobin/norms.hpp"
#include "anisorobin/util.hpp"

namespace anisorobin {

struct RayleighParts {
  double num, den, J;
};

struct EigenResult {
  double lambda = 0;
  Eigen::VectorXd u;
  int iterations = 0;
  double rq_residual = 0;    // relative J (or λ) decrease at stop
  double weak_residual = 0;  // lumped-mass dual norm of the stationarity residual
  bool converged = false;
};

namespace detail {

/// Geometry cached per triangle/edge: P1 basis gradients, areas, boundary
/// weights.  Shared by the functional, its gradient, and the assemblers.
struct FemCache {
  struct Tri {
    int v[3];
    double area;
    Eigen::Vector2d dphi[3];
  };
  struct BEdge {
    int a, b;
    double weight;  // length · H(ν)
  };
  std::vector<Tri> tris;
  std::vector<BEdge> edges;
  int n = 0;

  FemCache(const Mesh& mesh, const AnisotropicNorm& H) {
    n = static_cast<int>(mesh.nodes.size());
    tris.reserve(mesh.triangles.size());
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      Tri ct;
      for (int i = 0; i < 3; ++i) ct.v[i] = mesh.triangles[t][i];
      const Point &a = mesh.nodes[ct.v[0]], &b = mesh.nodes[ct.v[1]], &c = mesh.nodes[ct.v[2]];
      ct.area = 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
      // ∇φ_i = rot90(opposite edge)/(2·area), rot90(v) = (−v_y, v_x).
      const Point e0 = c - b, e1 = a - c, e2 = b - a;
      ct.dphi[0] = Eigen::Vector2d(-e0.y(), e0.x()) / (2 * ct.area);
      ct.dphi[1] = Eigen::Vector2d(-e1.y(), e1.x()) / (2 * ct.area);
      ct.dphi[2] = Eigen::Vector2d(-e2.y(), e2.x()) / (2 * ct.area);
      tris.push_back(ct);
    }
    edges.reserve(mesh.boundary.size());
    Vector nu(2);
    for (const BoundaryEdge& e : mesh.boundary) {
      nu << e.normal.x(), e.normal.y();
      edges.push_back({e.a, e.b, e.length * H(nu)});
    }
  }
};

constexpr double kGauss1 = 0.21132486540518713;  // (1 − 1/√3)/2
constexpr double kGauss2 = 0.78867513459481287;

/// J's pieces and (optionally) its gradient.  The ε-regularization enters the
/// derivative of H(∇u)^p only — J itself stays the true discrete quotient.
inline RayleighParts eval_rayleigh(const FemCache& cache, const AnisotropicNorm& H, double p,
                                   double beta, const Eigen::VectorXd& u,
                                   Eigen::VectorXd* grad_num = nullptr,
                                   Eigen::VectorXd* grad_den = nullptr, double eps_reg = 0.0) {
  double num = 0, den = 0;
  if (grad_num) grad_num->setZero(cache.n);
  if (grad_den) grad_den->setZero(cache.n);

  Vector g(2);
  for (const auto& t : cache.tris) {
    g = u[t.v[0]] * t.dphi[0] + u[t.v[1]] * t.dphi[1] + u[t.v[2]] * t.dphi[2];
    const double hv = H(g);
    num += t.area * std::pow(hv, p);
    if (grad_num && g.norm() > 1e-11) {
      double w;  // d(H^p)/dH factor, regularized below p = 2
      if (p < 2.0) {
        const double he = std::sqrt(hv * hv + eps_reg * eps_reg);
        w = t.area * p * std::pow(he, p - 2.0) * hv;
      } else {
        w = t.area * p * std::pow(hv, p - 1.0);
      }
      const Vector hxi = H.gradient(g);
      for (int i = 0; i < 3; ++i)
        (*grad_num)[t.v[i]] += w * hxi.dot(t.dphi[i]);
    }
    // 3-point interior rule at barycentric permutations of (2/3, 1/6, 1/6).
    for (int q = 0; q < 3; ++q) {
      double lam[3] = {1.0 / 6, 1.0 / 6, 1.0 / 6};
      lam[q] = 2.0 / 3;
      const double uq = lam[0] * u[t.v[0]] + lam[1] * u[t.v[1]] + lam[2] * u[t.v[2]];
      den += t.area / 3.0 * std::pow(std::fabs(uq), p);
      if (grad_den) {
        const double dq = t.area / 3.0 * p * spow(uq, p - 1.0);
        for (int i = 0; i < 3; ++i) (*grad_den)[t.v[i]] += dq * lam[i];
      }
    }
  }
  for (const auto& e : cache.edges) {
    for (const double tq : {kGauss1, kGauss2}) {
      const double uq = (1 - tq) * u[e.a] + tq * u[e.b];
      num += beta * e.weight * 0.5 * std::pow(std::fabs(uq), p);
      if (grad_num) {
        const double dq = beta * e.weight * 0.5 * p * spow(uq, p - 1.0);
        (*grad_num)[e.a] += dq * (1 - tq);
        (*grad_num)[e.b] += dq * tq;
      }
    }
  }
  if (den == 0) throw input_error("Rayleigh quotient undefined: u vanishes identically");
  return {num, den, num / den};
}

}  // namespace detail

/// (num, den, J) of the Rayleigh quotient at nodal values u.
inline RayleighParts rayleigh(const Mesh& mesh, const AnisotropicNorm& H, double p, double beta,
                              const Eigen::VectorXd& u) {
  if (u.size() != static_cast<Eigen::Index>(mesh.nodes.size()))
    throw input_error("rayleigh: u has wrong length");
  if (!(p > 1)) throw input_error("rayleigh: p must be > 1");
  if (!(beta >= 0)) throw input_error("rayleigh: beta must be >= 0");
  const detail::FemCache cache(mesh, H);
  return detail::eval_rayleigh(cache, H, p, beta, u);
}

struct P2System {
  Eigen::SparseMatrix<double> K;  // ∫ ∇φᵢᵀ A ∇φⱼ
  Eigen::SparseMatrix<double> B;  // ∫_{∂Ω} φᵢ φⱼ H(ν)
  Eigen::SparseMatrix<double> M;  // ∫ φᵢ φⱼ
};

/// Stiffness, boundary-mass and mass matrices for p = 2 with H² = ξᵀAξ.
inline P2System assemble_p2(const Mesh& mesh, const Matrix& A) {
  const AnisotropicNorm H = AnisotropicNorm::quadratic(A);  // validates SPD
  const detail::FemCache cache(mesh, H);
  const int n = cache.n;
  std::vector<Eigen::Triplet<double>> tk, tb, tm;
  for (const auto& t : cache.tris) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(t.v[i], t.v[j], t.area * t.dphi[i].dot(A * t.dphi[j]));
        tm.emplace_back(t.v[i], t.v[j], t.area / 12.0 * (i == j ? 2.0 : 1.0));
      }
  }
  for (const auto& e : cache.edges) {
    const int idx[2] = {e.a, e.b};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        tb.emplace_back(idx[i], idx[j], e.weight / 6.0 * (i == j ? 2.0 : 1.0));
  }
  P2System sys;
  sys.K.resize(n, n);
  sys.B.resize(n, n);
  sys.M.resize(n, n);
  sys.K.setFromTriplets(tk.begin(), tk.end());
  sys.B.setFromTriplets(tb.begin(), tb.end());
  sys.M.setFromTriplets(tm.begin(), tm.end());
  return sys;
}

/// Smallest eigenpair of (K + βB)u = λMu by inverse power iteration with a
/// tiny spectral shift (so the β = 0 Neumann case, λ = 0, stays factorable).
inline EigenResult solve_p2_quadratic(const Mesh& mesh, const Matrix& A, double beta,
                                      double tol = 1e-12) {
  if (!(beta >= 0)) throw input_error("solve_p2_quadratic: beta must be >= 0");
  if (!(tol > 0)) throw input_error("solve_p2_quadratic: tol must be positive");
  const P2System sys = assemble_p2(mesh, A);
  const int n = static_cast<int>(mesh.nodes.size());

  Eigen::SparseMatrix<double> KB = sys.K + beta * sys.B;
  const double spectral_scale =
      KB.diagonal().sum() / std::max(1e-300, sys.M.diagonal().sum());
  const double sigma = std::max(1e-8 * spectral_scale, 1e-14);
  Eigen::SparseMatrix<double> S = KB + sigma * sys.M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success)
    throw numeric_error("solve_p2_quadratic: factorization failed (singular system?)");

  Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
  double lambda = 0, prev = std::numeric_limits<double>::infinity();
  int it = 0;
  bool converged = false;
  for (; it < 2000; ++it) {
    Eigen::VectorXd v = ldlt.solve(sys.M * u);
    v /= std::sqrt(v.dot(sys.M * v));
    u = v;
    lambda = u.dot(KB * u) / u.dot(sys.M * u);
    if (std::fabs(lambda - prev) <= tol * std::max(std::fabs(lambda), 1.0)) {
      converged = true;
      ++it;
      break;
    }
    prev = lambda;
  }
  if (!converged)
    throw numeric_error("solve_p2_quadratic: inverse power iteration stalled");

  EigenResult res;
  res.iterations = it;
  res.rq_residual = std::fabs(lambda - prev) / std::max(std::fabs(lambda), 1.0);
  // Mass-weighted mean positive, then normalize ‖u‖₂ (discrete) to 1.
  if ((sys.M * u).sum() < 0) u = -u;
  u /= std::sqrt(u.dot(sys.M * u));
  res.u = u;
  res.lambda = u.dot(KB * u) / u.dot(sys.M * u);

  const Eigen::VectorXd r = KB * u - res.lambda * (sys.M * u);
  Eigen::VectorXd mlump = sys.M * Eigen::VectorXd::Ones(n);
  double wr = 0;
  for (int i = 0; i < n; ++i) wr += r[i] * r[i] / mlump[i];
  res.weak_residual = std::sqrt(wr) / (std::fabs(res.lambda) + sigma);
  res.converged = true;
  return res;
}

/// Projected Barzilai–Borwein descent on J for general (H, p, β).  Steps are
/// safeguarded to be monotone (backtracking halving), iterates renormalized
/// to ‖u‖_p = 1, and the run stops once the relative J decrease over a
/// 10-iteration window drops below tol.  Non-convergence returns best-so-far
/// with converged = false rather than throwing.
inline EigenResult minimize_rayleigh(const Mesh& mesh, const AnisotropicNorm& H, double p,
                                     double beta, const Eigen::VectorXd* init = nullptr,
                                     double tol = 1e-10, int max_iters = 20000,
                                     unsigned seed = 1) {
  if (!(p > 1) || !std::isfinite(p)) throw input_error("minimize_rayleigh: p must be > 1");
  if (!(beta >= 0)) throw input_error("minimize_rayleigh: beta must be >= 0");
  const int n = static_cast<int>(mesh.nodes.size());
  const detail::FemCache cache(mesh, H);

  Eigen::VectorXd u(n);
  if (init) {
    if (init->size() != n) throw input_error("minimize_rayleigh: init has wrong length");
    if (init->norm() == 0) throw input_error("minimize_rayleigh: init must not vanish");
    u = *init;
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) u[i] = 1.0 + detail::uniform(rng, -0.01, 0.01);
  }

  // ε for the p < 2 derivative regularization, scaled to the gradients the
  // initial iterate actually produces.
  double grad_scale = 0;
  {
    Vector g(2);
    for (const auto& t : cache.tris) {
      g = u[t.v[0]] * t.dphi[0] + u[t.v[1]] * t.dphi[1] + u[t.v[2]] * t.dphi[2];
      grad_scale = std::max(grad_scale, H(g));
    }
  }
  const double eps_reg = p < 2.0 ? 1e-10 * std::max(grad_scale, 1.0) : 0.0;

  // Rescale to ‖v‖_p = 1 and re-evaluate.  (For 1-homogeneous H the re-
  // evaluation only confirms J, but smoothed norms are not exactly
  // homogeneous, so the quotient genuinely depends on the scaling.)
  auto normalize = [&](Eigen::VectorXd& v) {
    v /= std::pow(detail::eval_rayleigh(cache, H, p, beta, v).den, 1.0 / p);
    return detail::eval_rayleigh(cache, H, p, beta, v);
  };

  RayleighParts parts = normalize(u);
  Eigen::VectorXd gn(n), gd(n);
  auto gradient = [&](const Eigen::VectorXd& v, const RayleighParts& at) {
    detail::eval_rayleigh(cache, H, p, beta, v, &gn, &gd, eps_reg);
    return Eigen::VectorXd((gn - at.J * gd) / at.den);
  };

  Eigen::VectorXd grad = gradient(u, parts);
  double alpha = 0.1 / std::max(grad.norm(), 1e-30);
  std::vector<double> history{parts.J};
  int it = 0;
  bool converged = false;
  double window_drop = std::numeric_limits<double>::infinity();

  for (; it < max_iters; ++it) {
    Eigen::VectorXd u_new;
    RayleighParts parts_new{};
    double a = alpha;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      u_new = u - a * grad;
      if (u_new.norm() == 0) { a *= 0.5; continue; }
      parts_new = normalize(u_new);
      if (parts_new.J <= parts.J * (1 + 1e-14)) { accepted = true; break; }
      a *= 0.5;
    }
    if (!accepted) {  // no descent direction left: iterate is stationary
      converged = true;
      break;
    }

    const Eigen::VectorXd grad_new = gradient(u_new, parts_new);
    const Eigen::VectorXd s = u_new - u, y = grad_new - grad;
    const double sy = s.dot(y);
    alpha = sy > 1e-30 ? s.dot(s) / sy : 2.0 * a;

    u = u_new;
    parts = parts_new;
    grad = grad_new;
    history.push_back(parts.J);
    if (history.size() > 10) {
      const double j_old = history[history.size() - 11];
      window_drop = (j_old - parts.J) / std::max(parts.J, 1e-300);
      if (window_drop < tol) {
        converged = true;
        ++it;
        break;
      }
    }
  }

  // Final tidy-up: mean-positive flip, u := |u| (J(|u|) = J(u) for the
  // eigenfunction, which is sign-definite), renormalize.
  if (u.sum() < 0) u = -u;
  u = u.cwiseAbs();
  parts = normalize(u);

  EigenResult res;
  res.lambda = parts.J;
  res.u = u;
  res.iterations = it;
  res.rq_residual = std::isfinite(window_drop) ? std::max(window_drop, 0.0) : 0.0;
  res.converged = converged;

  const Eigen::VectorXd r = (gradient(u, parts) * parts.den) / p;  // (∂num − J·∂den)/p
  Eigen::VectorXd mlump = Eigen::VectorXd::Zero(n);
  for (const auto& t : cache.tris)
    for (int i = 0; i < 3; ++i) mlump[t.v[i]] += t.area / 3.0;
  double wr = 0;
  for (int i = 0; i < n; ++i) wr += r[i] * r[i] / mlump[i];
  res.weak_residual = std::sqrt(wr) / std::max(parts.J, 1e-300);
  return res;
}

/// Route to the p = 2 quadratic fast path when the norm admits it, otherwise
/// run the general minimizer.  Convenience dispatcher for the layers above.
inline EigenResult solve_first_eigenpair(const Mesh& mesh, const AnisotropicNorm& H, double p,
                                         double beta, double tol = 1e-10,
                                         int max_iters = 20000, unsigned seed = 1) {
  if (p == 2.0 &&
      (H.family() == NormFamily::euclidean || H.family() == NormFamily::quadratic)) {
    const Matrix A = H.family() == NormFamily::euclidean ? Matrix(Matrix::Identity(2, 2))
                                                         : H.matrix();
    return solve_p2_quadratic(mesh, A, beta, std::min(tol, 1e-12));
  }
  EigenResult r = minimize_rayleigh(mesh, H, p, beta, nullptr, tol, max_iters, seed);
  if (!r.converged)
    throw numeric_error("solve_first_eigenpair: Rayleigh minimizer did not converge");
  return r;
}

/// Max relative gap between the analytic ∂J/∂u_i and central finite
/// differences at probe_count deterministic random nodes.
inline double gradient_check(const Mesh& mesh, const AnisotropicNorm& H, double p, double beta,
                             const Eigen::VectorXd& u, int probe_count = 16,
                             unsigned seed = 123) {
  if (u.size() != static_cast<Eigen::Index>(mesh.nodes.size()))
    throw input_error("gradient_check: u has wrong length");
  const detail::FemCache cache(mesh, H);
  Eigen::VectorXd gn(cache.n), gd(cache.n);
  const RayleighParts parts =
      detail::eval_rayleigh(cache, H, p, beta, u, &gn, &gd,
                            p < 2.0 ? 1e-12 * u.cwiseAbs().maxCoeff() : 0.0);
  const Eigen::VectorXd analytic = (gn - parts.J * gd) / parts.den;

  std::mt19937_64 rng(seed);
  const double h = 1e-6 * std::max(1.0, u.cwiseAbs().maxCoeff());
  const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-12);
  double worst = 0;
  for (int k = 0; k < probe_count; ++k) {
    const int i = static_cast<int>(detail::uniform(rng, 0.0, static_cast<double>(cache.n)));
    Eigen::VectorXd up = u, um = u;
    up[i] += h;
    um[i] -= h;
    const double fd = (detail::eval_rayleigh(cache, H, p, beta, up).J -
                       detail::eval_rayleigh(cache, H, p, beta, um).J) /
                      (2 * h);
    worst = std::max(worst, std::fabs(analytic[i] - fd) / scale);
  }
  return worst;
}

}  // namespace anisorobin
