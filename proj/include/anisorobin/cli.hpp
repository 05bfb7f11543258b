// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: the `radial`, `solve`, `faber-krahn`, `sweep` and
// `check` subcommands, config-file merging (flags override file values), CSV
// artifact emission, and the exit-code contract (0 success, 1 input error,
// 2 verdict violation).  CSV goes to stdout unless --out is given; the
// merged effective config is echoed for provenance (stderr, or `<out>.config`).
#pragma once

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "anisorobin/analysis.hpp"
#include "anisorobin/selfcheck.hpp"
#include "anisorobin/specio.hpp"

namespace anisorobin {

namespace detail {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitViolation = 2;

/// One CSV field: quoted iff it contains a separator or quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

/// The merged flag-over-file configuration, echoed verbatim as `key = value`
/// lines so a run can be reproduced from its own provenance record.
struct EffectiveConfig {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, fmt_g(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }

  std::string text() const {
    std::string s;
    for (const auto& [k, v] : entries) s += k + " = " + v + "\n";
    return s;
  }
};

/// Route an artifact: stdout when no path is given, else the file plus a
/// sibling `<path>.config` provenance record.  The human-readable summary and
/// the no-out config echo go to stderr, keeping stdout machine-clean.
inline void deliver(const std::string& out_path, const std::string& content,
                    const EffectiveConfig& config, const std::string& summary) {
  if (out_path.empty()) {
    std::cout << content;
    std::cerr << config.text();
  } else {
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot write output file '" + out_path + "'");
    out << content;
    std::ofstream cfg(out_path + ".config");
    if (!cfg) throw input_error("cannot write config echo '" + out_path + ".config'");
    cfg << config.text();
    std::cerr << "wrote " << out_path << "\n";
  }
  if (!summary.empty()) std::cerr << summary << "\n";
}

/// Pull `--config FILE` (or `--config=FILE`) out of the raw token stream; it
/// must be resolved before the real parse so file values can be injected
/// ahead of the explicit flags.
inline std::string extract_config_path(std::vector<std::string>& tokens) {
  std::string path;
  std::vector<std::string> rest;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    std::string value;
    bool found = false;
    if (t == "--config") {
      if (i + 1 >= tokens.size()) throw input_error("--config needs a file path");
      value = tokens[++i];
      found = true;
    } else if (t.rfind("--config=", 0) == 0) {
      value = t.substr(9);
      found = true;
    }
    if (found) {
      if (!path.empty()) throw input_error("--config given twice");
      if (value.empty()) throw input_error("--config needs a file path");
      path = value;
    } else {
      rest.push_back(t);
    }
  }
  tokens = std::move(rest);
  return path;
}

/// Turn config entries into flag tokens placed before the user's own flags.
/// Keys must name options of the active subcommand; `subcommand` may restate
/// (but not contradict) the one being run.
inline std::vector<std::string> config_tokens(const std::vector<ConfigEntry>& entries,
                                              const CLI::App& app,
                                              const std::string& subcommand) {
  std::vector<std::string> tokens;
  for (const auto& e : entries) {
    if (e.key == "subcommand") {
      if (e.value != subcommand)
        throw input_error("config line " + std::to_string(e.line) + ": subcommand '" +
                          e.value + "' does not match '" + subcommand + "'");
      continue;
    }
    if (e.key == "config")
      throw input_error("config line " + std::to_string(e.line) +
                        ": config files cannot nest");
    if (app.get_option_no_throw("--" + e.key) == nullptr)
      throw input_error("config line " + std::to_string(e.line) + ": unknown key '" + e.key +
                        "' for subcommand '" + subcommand + "'");
    tokens.push_back("--" + e.key);
    tokens.push_back(e.value);
  }
  return tokens;
}

/// Parse a subcommand's tokens with config-file merging.  Returns the exit
/// code to propagate when parsing itself ended the run (--help), or −1 to
/// continue into the action.
inline int parse_merged(CLI::App& app, std::vector<std::string> tokens,
                        const std::string& subcommand) {
  const std::string config_path = extract_config_path(tokens);
  std::vector<std::string> merged;
  if (!config_path.empty()) {
    const auto entries = read_config_file(config_path);
    merged = config_tokens(entries, app, subcommand);
  }
  merged.insert(merged.end(), tokens.begin(), tokens.end());

  std::vector<std::string> argv_store = {"anisorobin " + subcommand};
  argv_store.insert(argv_store.end(), merged.begin(), merged.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }
  return -1;
}

inline std::vector<double> parse_number_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (const std::string& part : split(csv, ',')) out.push_back(parse_number(part, what));
  return out;
}

// ---------------------------------------------------------------------------

inline int run_radial(std::vector<std::string> tokens) {
  int n = 2;
  double p = 2.0, R = 1.0, beta = 1.0, tol = 1e-10;
  int steps = 10000;
  std::string sweep, profile_path, out_path;

  CLI::App app{"First eigenvalue of the anisotropic radial problem on W_R"};
  app.set_help_flag("--help", "print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--n", n, "space dimension (>= 2)");
  app.add_option("--p", p, "exponent p in (1.2, 10)");
  app.add_option("--R", R, "Wulff radius");
  app.add_option("--beta", beta, "Robin parameter (> 0)");
  app.add_option("--tol", tol, "relative eigenvalue tolerance");
  app.add_option("--steps", steps, "ODE integration steps");
  app.add_option("--sweep", sweep,
                 "vary one parameter: beta=0.1:10:log10[:count] or R=0.5,1,2");
  app.add_option("--profile", profile_path, "write r,rho,rho_prime,beta_r CSV here");
  app.add_option("--out", out_path, "write the summary CSV here (default: stdout)");
  std::string config_dummy;
  app.add_option("--config", config_dummy, "config file with key = value lines (flags win)");
  if (const int code = parse_merged(app, std::move(tokens), "radial"); code >= 0) return code;

  std::vector<RadialProblem> problems;
  if (sweep.empty()) {
    problems.push_back({n, p, R, beta});
  } else {
    if (!profile_path.empty())
      throw input_error("--profile needs a single solve, not --sweep");
    const SweepSpec s = parse_sweep_spec(sweep);
    if (s.values.empty()) throw input_error("sweep spec: no values given");
    for (double v : s.values) {
      RadialProblem prob{n, p, R, beta};
      if (s.param == "R") prob.R = v;
      else if (s.param == "beta") prob.beta = v;
      else prob.p = v;
      problems.push_back(prob);
    }
  }

  EffectiveConfig cfg;
  cfg.add("subcommand", "radial");
  cfg.add("n", n);
  cfg.add("p", p);
  cfg.add("R", R);
  cfg.add("beta", beta);
  if (!sweep.empty()) cfg.add("sweep", sweep);
  cfg.add("tol", tol);
  cfg.add("steps", steps);
  if (!profile_path.empty()) cfg.add("profile", profile_path);
  if (!out_path.empty()) cfg.add("out", out_path);

  std::string csv = "n,p,R,beta,lambda,bc_residual\n";
  std::string summary;
  for (const RadialProblem& prob : problems) {
    const RadialSolution sol = first_eigenvalue_radial(prob, tol, steps);
    csv += std::to_string(prob.n) + "," + fmt_g(prob.p) + "," + fmt_g(prob.R) + "," +
           fmt_g(prob.beta) + "," + fmt_g(sol.lambda) + "," + fmt_g(sol.bc_residual) + "\n";
    summary = "radial: lambda = " + fmt_g(sol.lambda) + " at R = " + fmt_g(prob.R);
    if (!profile_path.empty()) {
      std::ofstream prof(profile_path);
      if (!prof) throw input_error("cannot write profile file '" + profile_path + "'");
      prof << "r,rho,rho_prime,beta_r\n";
      for (size_t i = 0; i < sol.r.size(); ++i)
        prof << fmt_g(sol.r[i]) << "," << fmt_g(sol.rho[i]) << "," << fmt_g(sol.rho_prime[i])
             << "," << fmt_g(sol.beta_profile[i]) << "\n";
    }
  }
  if (problems.size() > 1)
    summary = "radial: " + std::to_string(problems.size()) + " cases solved";
  deliver(out_path, csv, cfg, summary);
  return kExitOk;
}

inline int run_solve(std::vector<std::string> tokens) {
  std::string domain_spec, norm_spec = "euclidean";
  double p = 2.0, beta = 1.0, h = 0.02, tol = 1e-10;
  int max_iters = 20000;
  unsigned seed = 1;
  std::string out_path, mesh_path, u_path;

  CLI::App app{"FEM first eigenpair on a polygonal domain"};
  app.set_help_flag("--help", "print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--domain", domain_spec, "domain spec (square, rect:w,h, ...)")->required();
  app.add_option("--norm", norm_spec, "norm spec (euclidean, quadratic:..., pnorm:...)");
  app.add_option("--p", p, "exponent p (> 1)");
  app.add_option("--beta", beta, "Robin parameter (>= 0)");
  app.add_option("--h", h, "target mesh size");
  app.add_option("--tol", tol, "solver tolerance");
  app.add_option("--max-iters", max_iters, "iteration cap for the minimizer");
  app.add_option("--seed", seed, "minimizer start seed");
  app.add_option("--out", out_path, "write the summary CSV here (default: stdout)");
  app.add_option("--mesh-out", mesh_path, "write the mesh (n/t/b lines) here");
  app.add_option("--u-out", u_path, "write the eigenfunction CSV (node,x,y,u) here");
  std::string config_dummy;
  app.add_option("--config", config_dummy, "config file with key = value lines (flags win)");
  if (const int code = parse_merged(app, std::move(tokens), "solve"); code >= 0) return code;

  const AnisotropicNorm H = parse_norm_spec(norm_spec);
  const Domain d = parse_domain_spec(domain_spec, H);
  const Mesh mesh = generate_mesh(d, h);
  const EigenResult r = solve_first_eigenpair(mesh, H, p, beta, tol, max_iters, seed);

  EffectiveConfig cfg;
  cfg.add("subcommand", "solve");
  cfg.add("domain", domain_spec);
  cfg.add("norm", norm_spec);
  cfg.add("p", p);
  cfg.add("beta", beta);
  cfg.add("h", h);
  cfg.add("tol", tol);
  cfg.add("max-iters", max_iters);
  cfg.add("seed", static_cast<int>(seed));
  if (!out_path.empty()) cfg.add("out", out_path);
  if (!mesh_path.empty()) cfg.add("mesh-out", mesh_path);
  if (!u_path.empty()) cfg.add("u-out", u_path);

  std::string csv = "domain,norm,p,beta,h,seed,lambda,iterations,weak_residual,converged\n";
  csv += csv_field(d.tag()) + "," + csv_field(H.label()) + "," + fmt_g(p) + "," + fmt_g(beta) +
         "," + fmt_g(h) + "," + std::to_string(seed) + "," + fmt_g(r.lambda) + "," +
         std::to_string(r.iterations) + "," + fmt_g(r.weak_residual) + "," +
         (r.converged ? "true" : "false") + "\n";

  if (!mesh_path.empty()) {
    std::ofstream mf(mesh_path);
    if (!mf) throw input_error("cannot write mesh file '" + mesh_path + "'");
    write_mesh(mf, mesh);
  }
  if (!u_path.empty()) {
    std::ofstream uf(u_path);
    if (!uf) throw input_error("cannot write eigenfunction file '" + u_path + "'");
    write_eigenfunction_csv(uf, mesh, r.u);
  }
  deliver(out_path, csv, cfg,
          "solve: lambda = " + fmt_g(r.lambda) + " (" + std::to_string(mesh.nodes.size()) +
              " nodes)");
  return kExitOk;
}

inline int run_faber_krahn(std::vector<std::string> tokens) {
  std::string domain_spec, norm_spec = "euclidean";
  double p = 2.0, beta = 1.0, h = 0.02;
  std::string out_path;

  CLI::App app{"Faber-Krahn comparison: lambda(domain) vs lambda(Wulff shape of equal area)"};
  app.set_help_flag("--help", "print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--domain", domain_spec, "domain spec")->required();
  app.add_option("--norm", norm_spec, "norm spec");
  app.add_option("--p", p, "exponent p (> 1)");
  app.add_option("--beta", beta, "Robin parameter (> 0)");
  app.add_option("--h", h, "target mesh size");
  app.add_option("--out", out_path, "write the CSV row here (default: stdout)");
  std::string config_dummy;
  app.add_option("--config", config_dummy, "config file with key = value lines (flags win)");
  if (const int code = parse_merged(app, std::move(tokens), "faber-krahn"); code >= 0)
    return code;

  const AnisotropicNorm H = parse_norm_spec(norm_spec);
  const Domain d = parse_domain_spec(domain_spec, H);
  const FaberKrahnReport rep = faber_krahn(d, H, p, beta, h);

  EffectiveConfig cfg;
  cfg.add("subcommand", "faber-krahn");
  cfg.add("domain", domain_spec);
  cfg.add("norm", norm_spec);
  cfg.add("p", p);
  cfg.add("beta", beta);
  cfg.add("h", h);
  if (!out_path.empty()) cfg.add("out", out_path);

  std::string csv = "domain,norm,p,beta,h,lambda,lambda_wulff,ratio,verdict\n";
  csv += csv_field(d.tag()) + "," + csv_field(H.label()) + "," + fmt_g(p) + "," + fmt_g(beta) +
         "," + fmt_g(h) + "," + fmt_g(rep.lambda_domain) + "," + fmt_g(rep.lambda_wulff) +
         "," + fmt_g(rep.ratio) + "," + rep.verdict + "\n";
  deliver(out_path, csv, cfg,
          "faber-krahn: ratio = " + fmt_g(rep.ratio) + ", verdict = " + rep.verdict);
  return rep.verdict == "violated" ? kExitViolation : kExitOk;
}

inline int run_sweep(std::vector<std::string> tokens) {
  std::string ratios_csv = "1,4,16", norm_spec = "euclidean";
  double area_target = 1.0, p = 2.0, beta = 1.0, h = 0.02;
  std::string out_path;

  CLI::App app{"lambda_1 over rectangles of fixed area and growing aspect ratio"};
  app.set_help_flag("--help", "print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--ratios", ratios_csv, "comma list of aspect ratios (>= 1, increasing)");
  app.add_option("--area", area_target, "rectangle area");
  app.add_option("--norm", norm_spec, "norm spec");
  app.add_option("--p", p, "exponent p (> 1)");
  app.add_option("--beta", beta, "Robin parameter (> 0)");
  app.add_option("--h", h, "target mesh size");
  app.add_option("--out", out_path, "write the CSV table here (default: stdout)");
  std::string config_dummy;
  app.add_option("--config", config_dummy, "config file with key = value lines (flags win)");
  if (const int code = parse_merged(app, std::move(tokens), "sweep"); code >= 0) return code;

  const AnisotropicNorm H = parse_norm_spec(norm_spec);
  const auto ratios = parse_number_list(ratios_csv, "sweep ratio");
  const auto rows = unboundedness_sweep(ratios, area_target, H, p, beta, h);

  EffectiveConfig cfg;
  cfg.add("subcommand", "sweep");
  cfg.add("ratios", ratios_csv);
  cfg.add("area", area_target);
  cfg.add("norm", norm_spec);
  cfg.add("p", p);
  cfg.add("beta", beta);
  cfg.add("h", h);
  if (!out_path.empty()) cfg.add("out", out_path);

  std::string csv = "ratio,lambda\n";
  bool increasing = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    csv += fmt_g(rows[i].ratio) + "," + fmt_g(rows[i].lambda) + "\n";
    if (i > 0) increasing = increasing && rows[i].lambda > rows[i - 1].lambda;
  }
  deliver(out_path, csv, cfg,
          increasing ? "sweep: lambda strictly increasing over " +
                           std::to_string(rows.size()) + " ratios"
                     : "sweep: VIOLATION - lambda failed to increase");
  return increasing ? kExitOk : kExitViolation;
}

inline int run_check(std::vector<std::string> tokens) {
  std::string suite = "all", out_path;

  CLI::App app{"Built-in invariant suites (norm identities, bounds, comparisons)"};
  app.set_help_flag("--help", "print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--suite", suite, "all | norms | geometry | radial | fem | analysis");
  app.add_option("--out", out_path, "write the report here (default: stdout)");
  std::string config_dummy;
  app.add_option("--config", config_dummy, "config file with key = value lines (flags win)");
  if (const int code = parse_merged(app, std::move(tokens), "check"); code >= 0) return code;

  const auto results = run_check_suite(suite);

  EffectiveConfig cfg;
  cfg.add("subcommand", "check");
  cfg.add("suite", suite);
  if (!out_path.empty()) cfg.add("out", out_path);

  std::string report;
  int failures = 0;
  for (const auto& r : results) {
    report += std::string(r.ok ? "ok   " : "FAIL ") + r.suite + "." + r.name + ": " +
              r.detail + "\n";
    failures += r.ok ? 0 : 1;
  }
  report += "checks: " + std::to_string(results.size() - failures) + "/" +
            std::to_string(results.size()) + " passed\n";
  deliver(out_path, report, cfg,
          failures == 0 ? "check: all " + std::to_string(results.size()) + " passed"
                        : "check: " + std::to_string(failures) + " FAILED");
  return failures == 0 ? kExitOk : kExitViolation;
}

}  // namespace detail

inline const char* cli_usage() {
  return "usage: anisorobin <subcommand> [flags]\n"
         "\n"
         "subcommands:\n"
         "  radial       first eigenvalue of the radial problem on W_R\n"
         "  solve        FEM first eigenpair on a polygonal domain\n"
         "  faber-krahn  compare lambda(domain) against the Wulff shape of equal area\n"
         "  sweep        lambda over rectangles of growing aspect ratio\n"
         "  check        run the built-in invariant suites\n"
         "\n"
         "Every subcommand accepts --help, --config FILE (key = value lines;\n"
         "explicit flags override file values) and --out PATH.\n"
         "Exit codes: 0 success, 1 input error, 2 verdict violation.\n";
}

/// Entry point for the `anisorobin` binary: argv without the program name.
inline int run_cli(std::vector<std::string> args) {
  if (args.empty()) {
    std::cerr << cli_usage();
    return detail::kExitInputError;
  }
  const std::string sub = args.front();
  std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    if (sub == "radial") return detail::run_radial(std::move(rest));
    if (sub == "solve") return detail::run_solve(std::move(rest));
    if (sub == "faber-krahn") return detail::run_faber_krahn(std::move(rest));
    if (sub == "sweep") return detail::run_sweep(std::move(rest));
    if (sub == "check") return detail::run_check(std::move(rest));
    if (sub == "--help" || sub == "-h" || sub == "help") {
      std::cout << cli_usage();
      return detail::kExitOk;
    }
    throw input_error("unknown subcommand '" + sub +
                      "' (expected radial, solve, faber-krahn, sweep or check)");
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return detail::kExitInputError;
  } catch (const unsupported_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return detail::kExitInputError;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return detail::kExitInputError;
  }
}

}  // namespace anisorobin
