// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, deliberately independent of the
// library's numerics: power-series Bessel functions with a bisection
// characteristic-equation solver (the radial solver under test integrates an
// ODE and never touches these), brute-force sampled suprema for polar norms,
// and plain finite differences.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "anisorobin/norms.hpp"

namespace oracles {

// J0/J1 by their ascending power series.  Our arguments never exceed the
// first J0 zero (≈2.40), far inside the series' comfortable range.
inline double bessel_j0(double x) {
  const double z = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -z / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

inline double bessel_j1(double x) {
  const double z = 0.25 * x * x;
  double term = 0.5 * x, sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -z / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// Spherical Bessel functions: j0(x) = sin(x)/x, j1(x) = sin(x)/x² − cos(x)/x.
inline double sph_j0(double x) { return x == 0 ? 1.0 : std::sin(x) / x; }
inline double sph_j1(double x) {
  if (std::fabs(x) < 1e-4) return x / 3.0 - x * x * x / 30.0;  // series, avoids 0/0
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::runtime_error("oracle bisect: no sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
    else hi = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

// First λ of the p=2 Robin problem on the Euclidean ball B_R, from the
// classical characteristic equations
//   n=2:  √λ·J1(√λ R) = β·J0(√λ R),   √λ R below the first J0 zero,
//   n=3:  √λ·j1(√λ R) = β·j0(√λ R),   √λ R below π.
inline double robin_ball_lambda(int n, double R, double beta) {
  const double first_zero = n == 2 ? 2.404825557695772768622 : M_PI;
  auto f = [&](double z) {
    return n == 2 ? z * bessel_j1(z * R) - beta * bessel_j0(z * R)
                  : z * sph_j1(z * R) - beta * sph_j0(z * R);
  };
  const double z = bisect(f, 1e-8, first_zero / R * (1.0 - 1e-13));
  return z * z;
}

// sup over m sampled directions of x·u/H(u): the definition of the polar
// norm, evaluated the dumb way.
inline double sampled_sup_polar(const anisorobin::AnisotropicNorm& H,
                                const anisorobin::Vector& x, int m = 10000) {
  double best = 0;
  if (H.dim() == 2) {
    for (int k = 0; k < m; ++k) {
      anisorobin::Vector u(2);
      u << std::cos(2 * M_PI * k / m), std::sin(2 * M_PI * k / m);
      best = std::max(best, x.dot(u) / H(u));
    }
  } else {
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / m;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      anisorobin::Vector u(H.dim());
      u.setZero();
      u[0] = r * std::cos(ga * k);
      u[1] = r * std::sin(ga * k);
      u[H.dim() - 1] = z;
      best = std::max(best, x.dot(u) / H(u));
    }
  }
  return best;
}

inline anisorobin::Vector fd_gradient(const std::function<double(const anisorobin::Vector&)>& f,
                                      const anisorobin::Vector& x, double h = 1e-6) {
  anisorobin::Vector g(x.size()), e = anisorobin::Vector::Zero(x.size());
  for (int i = 0; i < x.size(); ++i) {
    e[i] = h;
    g[i] = (f(x + e) - f(x - e)) / (2 * h);
    e[i] = 0;
  }
  return g;
}

}  // namespace oracles
