// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Fast invariant suites behind `check --suite ...`: each check re-verifies a
// library-level property (norm identities, isoperimetry, radial profiles,
// eigenvalue bounds, representation constancy) on small fixed inputs with
// fixed seeds, in a few seconds total.  These are smoke-level guarantees; the
// full statistical and oracle coverage lives in the test suite.
#pragma once

#include <string>
#include <vector>

#include "anisorobin/analysis.hpp"

namespace anisorobin {

struct CheckResult {
  std::string suite;
  std::string name;
  bool ok = false;
  std::string detail;
};

namespace detail {

inline void record(std::vector<CheckResult>& out, const std::string& suite,
                   const std::string& name, bool ok, const std::string& detail) {
  out.push_back({suite, name, ok, detail});
}

inline void check_norms(std::vector<CheckResult>& out) {
  const struct {
    const char* name;
    AnisotropicNorm H;
    double tol;
  } cases[] = {
      {"euclidean", AnisotropicNorm::euclidean(2), 1e-10},
      {"quadratic", AnisotropicNorm::quadratic((Matrix(2, 2) << 2, 1, 1, 2).finished()),
       1e-10},
      {"pnorm", AnisotropicNorm::smoothed_pnorm(2, 3.0), 1e-8},
  };
  for (const auto& c : cases) {
    const IdentityReport rep = c.H.verify_identities(128, 42, 2.0);
    const double r = rep.max_abs_residual();
    record(out, "norms", std::string("identities.") + c.name, r <= c.tol,
           "max residual " + fmt_g(r) + " (tol " + fmt_g(c.tol) + ")");
  }
  const AnisotropicNorm Q =
      AnisotropicNorm::quadratic((Matrix(2, 2) << 4, 0, 0, 1).finished());
  const double g = Q.polar_evaluate(Vector::Unit(2, 0) * 2.0);  // H°((2,0)) = 1
  record(out, "norms", "polar.quadratic", std::fabs(g - 1.0) <= 1e-10,
         "H°((2,0)) = " + fmt_g(g) + " (want 1)");
}

inline void check_geometry(std::vector<CheckResult>& out) {
  const AnisotropicNorm He = AnisotropicNorm::euclidean(2);
  const AnisotropicNorm Hq =
      AnisotropicNorm::quadratic((Matrix(2, 2) << 4, 0, 0, 1).finished());

  const double k = kappa(He);
  record(out, "geometry", "kappa.euclidean", std::fabs(k - M_PI) <= 1e-6,
         "kappa = " + fmt_g(k) + " (want pi)");

  const Domain w = wulff_polygon(Hq, 1.0, Point(0, 0), 256);
  const double aw = area(w), kq = kappa(Hq);
  record(out, "geometry", "wulff.area", std::fabs(aw - kq) <= 1e-3 * kq,
         "polygon area " + fmt_g(aw) + " vs kappa " + fmt_g(kq));

  const double iso_sq = isoperimetric_ratio(make_square(), He);
  const double iso_w = isoperimetric_ratio(w, Hq);
  record(out, "geometry", "isoperimetric.square", iso_sq >= 1.0,
         "ratio " + fmt_g(iso_sq) + " (want >= 1)");
  record(out, "geometry", "isoperimetric.wulff", std::fabs(iso_w - 1.0) <= 1e-3,
         "ratio " + fmt_g(iso_w) + " (want 1)");

  const double rin = inradius(make_square(), He).value;
  record(out, "geometry", "inradius.square", std::fabs(rin - 0.5) <= 1e-6,
         "R_H = " + fmt_g(rin) + " (want 0.5)");

  const double per = aniso_perimeter(make_square(), He);
  record(out, "geometry", "perimeter.square", std::fabs(per - 4.0) <= 1e-12,
         "sigma_H = " + fmt_g(per) + " (want 4)");
}

inline void check_radial(std::vector<CheckResult>& out) {
  const RadialSolution base = first_eigenvalue_radial({2, 2.0, 1.0, 1.0});
  record(out, "radial", "bc_residual", std::fabs(base.bc_residual) <= 1e-8,
         "residual " + fmt_g(base.bc_residual));

  bool nondecreasing = true;
  for (size_t i = 1; i < base.beta_profile.size(); ++i)
    nondecreasing = nondecreasing && base.beta_profile[i] >= base.beta_profile[i - 1] - 1e-12;
  const double b0 = base.beta_profile.front(), bR = base.beta_profile.back();
  record(out, "radial", "beta_profile",
         nondecreasing && std::fabs(b0) <= 1e-8 && std::fabs(bR - 1.0) <= 1e-6,
         "endpoints (" + fmt_g(b0) + ", " + fmt_g(bR) + "), nondecreasing " +
             (nondecreasing ? "yes" : "no"));

  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (double R : {0.5, 1.0, 2.0}) {
    const double lam = first_eigenvalue_radial({2, 2.0, R, 1.0}).lambda;
    decreasing = decreasing && lam < prev;
    prev = lam;
  }
  record(out, "radial", "monotonicity.radius", decreasing,
         decreasing ? "lambda strictly decreasing in R" : "ordering violated");

  const ScalingCheck sc = verify_scaling({2, 2.0, 1.0, 1.0}, 2.0, 1e-10);
  record(out, "radial", "scaling", std::fabs(sc.residual) <= 1e-7,
         "relative error " + fmt_g(sc.residual));
}

inline void check_fem(std::vector<CheckResult>& out) {
  const AnisotropicNorm He = AnisotropicNorm::euclidean(2);
  const Mesh m = generate_mesh(make_square(), 0.1);

  const EigenResult r = solve_first_eigenpair(m, He, 2.0, 1.0);
  const double upper = 1.0 * aniso_perimeter(make_square(), He) / area(make_square());
  record(out, "fem", "upper_bound", r.converged && r.lambda <= upper + 1e-12,
         "lambda " + fmt_g(r.lambda) + " <= " + fmt_g(upper));
  record(out, "fem", "sign_definite", r.u.minCoeff() >= -1e-10 * r.u.maxCoeff(),
         "min/max = " + fmt_g(r.u.minCoeff() / r.u.maxCoeff()));
  record(out, "fem", "weak_residual", r.weak_residual <= 1e-6,
         "residual " + fmt_g(r.weak_residual));

  // Dilation by t maps (Ω, β) to (tΩ, t^{1−p}β) with λ scaled by t^{−p}.
  Mesh md = m;
  for (auto& p : md.nodes) p *= 2.0;
  for (auto& e : md.boundary) e.length *= 2.0;
  md.h *= 2.0;
  const EigenResult rd = solve_first_eigenpair(md, He, 2.0, 0.5);
  const double rel = std::fabs(rd.lambda - 0.25 * r.lambda) / (0.25 * r.lambda);
  record(out, "fem", "scaling", rel <= 1e-10, "relative error " + fmt_g(rel));

  const EigenResult s1 = minimize_rayleigh(m, He, 2.5, 1.0, nullptr, 1e-10, 20000, 1);
  const EigenResult s2 = minimize_rayleigh(m, He, 2.5, 1.0, nullptr, 1e-10, 20000, 2);
  const double drel = std::fabs(s1.lambda - s2.lambda) / s1.lambda;
  record(out, "fem", "seed_agreement", s1.converged && s2.converged && drel <= 1e-6,
         "relative spread " + fmt_g(drel));
}

inline void check_analysis(std::vector<CheckResult>& out) {
  const AnisotropicNorm He = AnisotropicNorm::euclidean(2);
  const Domain sq = make_square();
  const Mesh m = generate_mesh(sq, 0.05);
  const EigenResult r = solve_first_eigenpair(m, He, 2.0, 1.0);

  const auto rep = representation_functional(r, m, He, 2.0, 1.0, 0.5);
  const double rel = std::fabs(rep.F_value - r.lambda) / r.lambda;
  record(out, "analysis", "representation", rel <= 2e-2,
         "F(0.5) off by " + fmt_g(rel) + " relative");

  const auto fk = faber_krahn(sq, He, 2.0, 1.0, 0.05);
  record(out, "analysis", "faber_krahn.square",
         fk.ratio >= 1.0 - faber_krahn_tolerance(0.05) && fk.verdict != "violated",
         "ratio " + fmt_g(fk.ratio) + ", verdict " + fk.verdict);

  const auto ib = inradius_bound(sq, He, 2.0, 1.0);
  record(out, "analysis", "inradius_bound", ib.slack >= 0,
         "bound " + fmt_g(ib.bound) + ", lambda " + fmt_g(ib.lambda));

  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.nodes.size());
  const auto hr = hardy_check(sq, m, He, 2.0, one, 0.25, 1.0);
  record(out, "analysis", "hardy", hr.holds,
         "lhs " + fmt_g(hr.lhs) + " >= rhs " + fmt_g(hr.rhs));

  const auto rows = unboundedness_sweep({1.0, 4.0}, 1.0, He, 2.0, 1.0, 0.05);
  record(out, "analysis", "unboundedness", rows[1].lambda > rows[0].lambda,
         "lambda " + fmt_g(rows[0].lambda) + " -> " + fmt_g(rows[1].lambda));
}

}  // namespace detail

/// Run one named suite ("norms", "geometry", "radial", "fem", "analysis") or
/// "all".  Unknown names are input errors listing the choices.
inline std::vector<CheckResult> run_check_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  bool matched = false;
  const auto want = [&](const char* name) {
    const bool w = suite == "all" || suite == name;
    matched = matched || suite == name;
    return w;
  };
  if (want("norms")) detail::check_norms(out);
  if (want("geometry")) detail::check_geometry(out);
  if (want("radial")) detail::check_radial(out);
  if (want("fem")) detail::check_fem(out);
  if (want("analysis")) detail::check_analysis(out);
  if (!matched && suite != "all")
    throw input_error("unknown check suite '" + suite +
                      "' (expected all, norms, geometry, radial, fem or analysis)");
  return out;
}

}  // namespace anisorobin
