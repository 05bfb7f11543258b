// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>

namespace anisorobin::detail {

/// Signed power: spow(x, a) = sign(x)·|x|^a.  The radial ODE and the p<2
/// regularization both need odd extensions of t ↦ t^a.  The common exponents
/// (p = 2, p = 3) bypass pow, which dominates the shooting solver's runtime.
inline double spow(double x, double a) {
  if (x == 0.0) return 0.0;
  if (a == 1.0) return x;
  if (a == 2.0) return x * std::fabs(x);
  if (a == 0.5) return x > 0 ? std::sqrt(x) : -std::sqrt(-x);
  return x > 0 ? std::pow(x, a) : -std::pow(-x, a);
}

inline double sqr(double x) { return x * x; }

/// Golden-section minimum of f on [a,b].  Unimodality is the caller's
/// problem; the bracket shrinks by the golden ratio per step, so the
/// iteration count below reaches width tol from any bracket ≤ 2π.
inline std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                            double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a); f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

inline std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                            double a, double b, double tol) {
  auto [x, fneg] = golden_min([&](double t) { return -f(t); }, a, b, tol);
  return {x, -fneg};
}

/// Brent's method on [a,b] with f(a)·f(b) ≤ 0.  Returns the root to a
/// combined absolute/relative tolerance; the classic bracketing guarantees
/// termination even on ugly g(λ) (our shooting mismatch is only C⁰ near
/// bracket edges where the profile loses positivity).
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double fa, double fb, double rel_tol, double abs_tol = 0.0) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = e = b - a; }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * rel_tol * std::fabs(b) + 0.5 * abs_tol +
                        4.0 * std::numeric_limits<double>::epsilon() * std::fabs(b);
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {  // secant
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {  // inverse quadratic
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

/// Two-level Richardson extrapolation for a quantity with an h² leading
/// error term, sampled at resolutions m, 2m, 4m.
inline double richardson2(double a_m, double a_2m, double a_4m) {
  const double r1 = (4.0 * a_2m - a_m) / 3.0;
  const double r2 = (4.0 * a_4m - a_2m) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

/// Uniform double in [lo, hi) from a seeded engine.  We spell the mapping
/// out (instead of std::uniform_real_distribution) so streams are identical
/// across standard libraries — CSV output is promised byte-for-byte stable.
inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

/// printf-style %.12g, the one formatting used for every number we emit.
inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace anisorobin::detail
