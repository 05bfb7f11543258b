// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Anisotropic norms H: ℝⁿ → [0,∞) with gradients, polar norms H°, and a
// numeric audit of the structural identities everything downstream leans on:
//
//   H_ξ(ξ)·ξ = H(ξ)            (Euler, 1-homogeneity)
//   H(H°_ξ(x)) = 1,  H°(H_ξ(ξ)) = 1
//   H°(x)·H_ξ(H°_ξ(x)) = x     (the gradient maps are inverse to each other)
//   a|ξ| ≤ H(ξ) ≤ b|ξ|
//
// Closed forms where they exist (Euclidean, Quadratic); the other families
// get their polars from the sup definition H°(x) = sup_{u≠0} x·u/H(u).
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "anisorobin/errors.hpp"
#include "anisorobin/util.hpp"

namespace anisorobin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class NormFamily { euclidean, quadratic, smoothed_pnorm, custom };

/// Max relative residuals of the norm identities over a random sample cloud,
/// plus the ellipticity constant estimate γ (smallest eigenvalue of the
/// quadratic form η ↦ (1/p)·D²(H^p)(η), normalized by |η|^{p−2}).
struct IdentityReport {
  double euler = 0;
  double polar_unit = 0;
  double inverse_map = 0;
  double homogeneity = 0;
  double bounds = 0;
  int sample_count = 0;
  double gamma_estimate = 0;

  double max_abs_residual() const {
    double r = euler;
    for (double v : {polar_unit, inverse_map, homogeneity, bounds})
      r = std::isnan(v) ? v : std::max(r, v);
    return r;
  }
};

class AnisotropicNorm {
 public:
  using Evaluator = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  static AnisotropicNorm euclidean(int n) {
    AnisotropicNorm H(NormFamily::euclidean, n);
    H.a_ = H.b_ = 1.0;
    H.label_ = "euclidean";
    return H;
  }

  /// H(ξ) = sqrt(ξᵀAξ) for symmetric positive-definite A.
  static AnisotropicNorm quadratic(const Matrix& A) {
    if (A.rows() != A.cols() || A.rows() < 2)
      throw input_error("quadratic norm: matrix must be square, n >= 2");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
      throw input_error("quadratic norm: matrix must be symmetric");
    AnisotropicNorm H(NormFamily::quadratic, static_cast<int>(A.rows()));
    H.A_ = A;
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.eigenvalues().minCoeff() <= 0)
      throw input_error("quadratic norm: matrix must be positive definite");
    H.Ainv_ = A.inverse();
    H.a_ = std::sqrt(es.eigenvalues().minCoeff());
    H.b_ = std::sqrt(es.eigenvalues().maxCoeff());
    std::string s = "quadratic:";
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        s += (i + j ? "," : "") + detail::fmt_g(A(i, j));
    H.label_ = s;
    return H;
  }

  /// H(ξ) = (Σᵢ (ξᵢ² + ε²)^{q/2})^{1/q} − n^{1/q}·ε.  Homogeneous (and hence
  /// an actual norm) only for ε = 0, where it is plain ℓ_q; ε > 0 trades the
  /// norm axioms for smoothness at the axes.  Experimental family: for q > 2
  /// the ellipticity constant degenerates on the axes, and the identity
  /// report is the tool that shows it.
  static AnisotropicNorm smoothed_pnorm(int n, double q, double eps = 0.0) {
    if (q <= 1) throw input_error("smoothed_pnorm: q must be > 1");
    if (eps < 0) throw input_error("smoothed_pnorm: eps must be >= 0");
    AnisotropicNorm H(NormFamily::smoothed_pnorm, n);
    H.q_ = q;
    H.eps_ = eps;
    if (eps == 0.0) {
      const double c = std::pow(static_cast<double>(n), 1.0 / q - 0.5);
      H.a_ = std::min(1.0, c);
      H.b_ = std::max(1.0, c);
    } else {
      H.estimate_bounds();
    }
    H.label_ = "pnorm:" + detail::fmt_g(q) + (eps > 0 ? "," + detail::fmt_g(eps) : "");
    return H;
  }

  /// Arbitrary evaluator (expected 1-homogeneous, even, strictly convex level
  /// sets).  Gradient falls back to central differences when not supplied.
  static AnisotropicNorm custom(int n, Evaluator f, GradientFn g = nullptr,
                                std::string label = "custom") {
    if (!f) throw input_error("custom norm: evaluator required");
    AnisotropicNorm H(NormFamily::custom, n);
    H.eval_ = std::move(f);
    H.grad_ = std::move(g);
    H.label_ = std::move(label);
    H.estimate_bounds();
    return H;
  }

  int dim() const { return n_; }
  NormFamily family() const { return family_; }
  const std::string& label() const { return label_; }
  const Matrix& matrix() const { return A_; }

  /// a, b of the pinch a|ξ| ≤ H(ξ) ≤ b|ξ| — exact for closed-form families,
  /// sampled (and padded) otherwise.
  double lower_bound() const { return a_; }
  double upper_bound() const { return b_; }

  double operator()(const Vector& xi) const { return evaluate(xi); }

  double evaluate(const Vector& xi) const {
    check_dim(xi);
    switch (family_) {
      case NormFamily::euclidean:
        return xi.norm();
      case NormFamily::quadratic:
        return std::sqrt(std::max(0.0, xi.dot(A_ * xi)));
      case NormFamily::smoothed_pnorm: {
        double s = 0;
        for (int i = 0; i < n_; ++i)
          s += std::pow(xi[i] * xi[i] + eps_ * eps_, 0.5 * q_);
        return std::pow(s, 1.0 / q_) - std::pow(static_cast<double>(n_), 1.0 / q_) * eps_;
      }
      case NormFamily::custom:
        return eval_(xi);
    }
    throw internal_error("unreachable norm family");
  }

  Vector gradient(const Vector& xi) const {
    check_dim(xi);
    const double nrm = xi.norm();
    if (nrm == 0.0) throw std::domain_error("norm gradient undefined at the origin");
    switch (family_) {
      case NormFamily::euclidean:
        return xi / nrm;
      case NormFamily::quadratic:
        return (A_ * xi) / evaluate(xi);
      case NormFamily::smoothed_pnorm: {
        if (nrm < 1e-12)
          throw std::domain_error("smoothed_pnorm gradient rejected near the origin");
        double s = 0;
        for (int i = 0; i < n_; ++i)
          s += std::pow(xi[i] * xi[i] + eps_ * eps_, 0.5 * q_);
        Vector g(n_);
        const double outer = std::pow(s, 1.0 / q_ - 1.0);
        for (int i = 0; i < n_; ++i)
          g[i] = eps_ == 0.0
                     ? outer * detail::spow(xi[i], q_ - 1.0)
                     : outer * std::pow(xi[i] * xi[i] + eps_ * eps_, 0.5 * q_ - 1.0) * xi[i];
        return g;
      }
      case NormFamily::custom: {
        if (nrm < 1e-12)
          throw std::domain_error("custom norm gradient rejected near the origin");
        if (grad_) return grad_(xi);
        return fd_gradient(xi);
      }
    }
    throw internal_error("unreachable norm family");
  }

  double polar_evaluate(const Vector& x) const {
    check_dim(x);
    switch (family_) {
      case NormFamily::euclidean:
        return x.norm();
      case NormFamily::quadratic:
        return std::sqrt(std::max(0.0, x.dot(Ainv_ * x)));
      default:
        if (x.norm() == 0.0) return 0.0;
        return numeric_polar(x).first;
    }
  }

  Vector polar_gradient(const Vector& x) const {
    check_dim(x);
    const double nrm = x.norm();
    if (nrm == 0.0) throw std::domain_error("polar gradient undefined at the origin");
    switch (family_) {
      case NormFamily::euclidean:
        return x / nrm;
      case NormFamily::quadratic:
        return (Ainv_ * x) / polar_evaluate(x);
      default: {
        // Danskin: the sup in H°(x) = max_{|u|=1} x·u/H(u) is attained at a
        // unique u*, and ∇H°(x) = u*/H(u*).
        auto [value, ustar] = numeric_polar(x);
        (void)value;
        return ustar / evaluate(ustar);
      }
    }
  }

  IdentityReport verify_identities(int samples, unsigned seed, double p = 2.0) const {
    if (samples < 1) throw input_error("verify_identities: samples must be >= 1");
    std::mt19937_64 rng(seed);
    IdentityReport rep;
    rep.sample_count = samples;
    rep.gamma_estimate = std::numeric_limits<double>::infinity();
    auto fold = [](double& acc, double r) {
      if (std::isnan(acc)) return;
      acc = std::isnan(r) ? r : std::max(acc, r);
    };
    for (int s = 0; s < samples; ++s) {
      Vector xi = random_sample(rng);
      const double h = evaluate(xi);
      const double hp = polar_evaluate(xi);
      const Vector g = gradient(xi);
      const Vector gp = polar_gradient(xi);

      fold(rep.euler, std::fabs(g.dot(xi) - h) / h);
      fold(rep.euler, std::fabs(gp.dot(xi) - hp) / hp);
      fold(rep.polar_unit, std::fabs(evaluate(gp) - 1.0));
      fold(rep.polar_unit, std::fabs(polar_evaluate(g) - 1.0));
      fold(rep.inverse_map, (hp * gradient(gp) - xi).norm() / xi.norm());
      fold(rep.inverse_map, (h * polar_gradient(g) - xi).norm() / xi.norm());
      for (double t : {-2.0, -1.0, 0.5, 3.0})
        fold(rep.homogeneity, std::fabs(evaluate(t * xi) - std::fabs(t) * h) / h);
      const double ratio = h / xi.norm();
      fold(rep.bounds, std::max({0.0, (a_ - ratio) / b_, (ratio - b_) / b_}));

      const double gs = gamma_sample(xi, p);
      rep.gamma_estimate = std::isnan(gs) ? gs : std::min(rep.gamma_estimate, gs);
    }
    if (!std::isnan(rep.gamma_estimate))
      rep.gamma_estimate = std::max(0.0, rep.gamma_estimate);
    return rep;
  }

 private:
  AnisotropicNorm(NormFamily fam, int n) : family_(fam), n_(n) {
    if (n < 2) throw input_error("norm dimension must be >= 2");
  }

  void check_dim(const Vector& v) const {
    if (v.size() != n_)
      throw input_error("norm argument has dimension " + std::to_string(v.size()) +
                        ", expected " + std::to_string(n_));
  }

  Vector fd_gradient(const Vector& xi) const {
    const double h = 1e-7 * xi.norm();
    Vector g(n_), e = Vector::Zero(n_);
    for (int i = 0; i < n_; ++i) {
      e[i] = h;
      g[i] = (evaluate(xi + e) - evaluate(xi - e)) / (2 * h);
      e[i] = 0;
    }
    return g;
  }

  /// sup_{|u|=1} x·u/H(u) with the maximizer.  n=2: 64 multi-starts on the
  /// circle, golden-section refinement to 1e-10 in angle.  n=3: Fibonacci
  /// sphere scan plus coordinate-wise golden refinement.
  std::pair<double, Vector> numeric_polar(const Vector& x) const {
    auto ratio2 = [&](double th) {
      Vector u(2);
      u << std::cos(th), std::sin(th);
      return x.dot(u) / evaluate(u);
    };
    if (n_ == 2) {
      constexpr int kStarts = 64;
      double best_th = 0, best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < kStarts; ++k) {
        const double th = 2.0 * M_PI * k / kStarts;
        const double r = ratio2(th);
        if (r > best) { best = r; best_th = th; }
      }
      const double w = 2.0 * M_PI / kStarts;
      auto [th, val] = detail::golden_max(ratio2, best_th - w, best_th + w, 1e-10);
      // Where the level set is nearly flat (ℓ_q axes, q > 2) the ratio is so
      // shallow that value comparisons localize θ only to ~sqrt(ε)/|f''|.
      // When a gradient is on hand, polishing by bisecting the analytic
      // derivative of the ratio recovers full precision.
      if (family_ == NormFamily::smoothed_pnorm ||
          (family_ == NormFamily::custom && grad_)) {
        auto dratio = [&](double t) {
          Vector u(2), up(2);
          u << std::cos(t), std::sin(t);
          up << -u[1], u[0];
          const double h = evaluate(u);
          return (x.dot(up) - (x.dot(u) / h) * gradient(u).dot(up)) / h;
        };
        double lo = best_th - w, hi = best_th + w;
        double dlo = dratio(lo), dhi = dratio(hi);
        if (dlo > 0 && dhi < 0) {
          for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (dratio(mid) > 0 ? lo : hi) = mid;
          }
          th = 0.5 * (lo + hi);
          val = std::max(val, ratio2(th));
        }
      }
      Vector u(2);
      u << std::cos(th), std::sin(th);
      return {val, u};
    }
    if (n_ == 3) {
      auto dir = [](double th, double ph) {
        Vector u(3);
        u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        return u;
      };
      auto ratio3 = [&](double th, double ph) { return x.dot(dir(th, ph)) / evaluate(dir(th, ph)); };
      constexpr int kPts = 4096;
      const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
      double bt = 0, bp = 0, best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < kPts; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / kPts;
        const double th = std::acos(z), ph = golden_angle * k;
        const double r = ratio3(th, ph);
        if (r > best) { best = r; bt = th; bp = ph; }
      }
      double delta = 0.08;  // ≳ Fibonacci spacing for 4096 points
      for (int round = 0; round < 40; ++round) {
        auto [t1, v1] = detail::golden_max([&](double t) { return ratio3(t, bp); },
                                           bt - delta, bt + delta, 1e-11);
        bt = t1;
        // Longitude distances shrink with sin(θ); widen the bracket there.
        const double dphi = delta / std::max(0.1, std::sin(bt));
        auto [p1, v2] = detail::golden_max([&](double t) { return ratio3(bt, t); },
                                           bp - dphi, bp + dphi, 1e-11);
        bp = p1;
        if (std::fabs(v2 - v1) < 1e-13 * std::max(1.0, std::fabs(v2)) && round >= 3) {
          Vector u = dir(bt, bp);
          return {v2, u};
        }
        delta = std::max(1e-9, delta * 0.5);
      }
      const double resid = std::fabs(ratio3(bt, bp) - best);
      throw numeric_error("polar maximization did not converge on the sphere (residual " +
                          detail::fmt_g(resid) + ")");
    }
    throw unsupported_error("numeric polar norm implemented for n = 2, 3 only");
  }

  /// Smallest eigenvalue of (1/p)·D²(H^p)(η) / |η|^{p−2} by central finite
  /// differences at scale 1e-5·|η|.  An estimate, not a certificate.
  double gamma_sample(const Vector& eta, double p) const {
    const double h = 1e-5 * eta.norm();
    auto f = [&](const Vector& v) { return std::pow(evaluate(v), p); };
    Matrix Hss(n_, n_);
    Vector ei = Vector::Zero(n_), ej = Vector::Zero(n_);
    const double f0 = f(eta);
    for (int i = 0; i < n_; ++i) {
      ei[i] = h;
      Hss(i, i) = (f(eta + ei) - 2 * f0 + f(eta - ei)) / (h * h);
      for (int j = i + 1; j < n_; ++j) {
        ej[j] = h;
        Hss(i, j) = Hss(j, i) =
            (f(eta + ei + ej) - f(eta + ei - ej) - f(eta - ei + ej) + f(eta - ei - ej)) /
            (4 * h * h);
        ej[j] = 0;
      }
      ei[i] = 0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(Hss);
    return es.eigenvalues().minCoeff() / (p * std::pow(eta.norm(), p - 2.0));
  }

  Vector random_sample(std::mt19937_64& rng) const {
    Vector xi(n_);
    do {
      for (int i = 0; i < n_; ++i) xi[i] = detail::uniform(rng, -1.0, 1.0);
    } while (xi.norm() < 1e-3);
    return xi * std::pow(10.0, detail::uniform(rng, -1.0, 1.0));
  }

  /// Sampled a, b for families without closed-form extremes, padded so the
  /// sampling gap cannot flip the declared inequality.
  void estimate_bounds() {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    auto take = [&](const Vector& u) {
      const double h = evaluate(u);
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    };
    if (n_ > 3)
      throw unsupported_error("sampled norm bounds implemented for n = 2, 3 only");
    if (n_ == 2) {
      constexpr int m = 4096;
      for (int k = 0; k < m; ++k) {
        Vector u(2);
        u << std::cos(2 * M_PI * k / m), std::sin(2 * M_PI * k / m);
        take(u);
      }
    } else {
      constexpr int m = 8192;
      const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < m; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / m;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z)), ph = golden_angle * k;
        Vector u(n_);
        u.setZero();
        u[0] = r * std::cos(ph);
        u[1] = r * std::sin(ph);
        u[n_ - 1] = z;
        take(u);
      }
    }
    if (!(lo > 0) || !std::isfinite(hi))
      throw input_error("norm is not positive on the unit sphere; cannot bound");
    a_ = lo * (1.0 - 1e-4);
    b_ = hi * (1.0 + 1e-4);
  }

  NormFamily family_;
  int n_;
  Matrix A_, Ainv_;
  double q_ = 2.0, eps_ = 0.0;
  Evaluator eval_;
  GradientFn grad_;
  double a_ = 0, b_ = 0;
  std::string label_;
};

}  // namespace anisorobin
