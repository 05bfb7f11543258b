// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "anisorobin/cli.hpp"
#include "oracles.hpp"

namespace ar = anisorobin;
namespace fs = std::filesystem;
using Catch::Approx;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "anisorobin_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliRun run_binary(const std::string& args) {
  static int counter = 0;
  const fs::path so = scratch_dir() / ("stdout" + std::to_string(counter) + ".txt");
  const fs::path se = scratch_dir() / ("stderr" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(ANISOROBIN_CLI_PATH) + " " + args + " >" + so.string() +
                          " 2>" + se.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(so), slurp(se)};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  return ar::detail::split(line, ',');
}

}  // namespace

TEST_CASE("radial subcommand reproduces the Bessel eigenvalue", "[cli]") {
  const CliRun r = run_binary("radial --n 2 --p 2 --R 1 --beta 1");
  REQUIRE(r.code == 0);

  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "n,p,R,beta,lambda,bc_residual");
  const auto f = fields_of(lines[1]);
  REQUIRE(f.size() == 6);
  CHECK(f[0] == "2");
  CHECK(f[1] == "2");
  CHECK(f[2] == "1");
  CHECK(f[3] == "1");
  CHECK(std::stod(f[4]) == Approx(oracles::robin_ball_lambda(2, 1.0, 1.0)).epsilon(1e-8));
  CHECK(std::stod(f[5]) < 1e-10);

  // Without --out the config echo and summary stay on stderr, off the CSV.
  CHECK(r.err.find("subcommand = radial") != std::string::npos);
  CHECK(r.err.find("lambda = ") != std::string::npos);

  const CliRun n3 = run_binary("radial --n 3 --beta 0.5 --R 2");
  REQUIRE(n3.code == 0);
  const auto g = fields_of(lines_of(n3.out)[1]);
  CHECK(std::stod(g[4]) == Approx(oracles::robin_ball_lambda(3, 2.0, 0.5)).epsilon(1e-8));
}

TEST_CASE("radial profile artifact carries the boundary data", "[cli]") {
  const fs::path prof = scratch_dir() / "profile.csv";
  const CliRun r = run_binary("radial --R 1 --beta 1 --profile " + prof.string());
  REQUIRE(r.code == 0);

  const auto lines = lines_of(slurp(prof));
  REQUIRE(lines.size() > 100);
  CHECK(lines[0] == "r,rho,rho_prime,beta_r");
  const auto first = fields_of(lines[1]);
  const auto last = fields_of(lines.back());
  CHECK(std::stod(first[0]) == Approx(0.0).margin(1e-15));
  CHECK(std::stod(first[1]) == Approx(1.0).epsilon(1e-12));   // max-normalized at the center
  CHECK(std::stod(first[3]) == Approx(0.0).margin(1e-12));    // beta_0 = 0
  CHECK(std::stod(last[0]) == Approx(1.0).epsilon(1e-12));
  CHECK(std::stod(last[3]) == Approx(1.0).epsilon(1e-8));     // beta_R = beta

  // rho(R) must match J0 at the eigenvalue's frequency.
  const double z = std::sqrt(oracles::robin_ball_lambda(2, 1.0, 1.0));
  CHECK(std::stod(last[1]) == Approx(oracles::bessel_j0(z)).epsilon(1e-8));

  // A profile is tied to a single solve.
  CHECK(run_binary("radial --sweep R=0.5,1 --profile " + prof.string()).code == 1);
}

TEST_CASE("radial sweep varies one parameter over a range", "[cli]") {
  const CliRun log = run_binary("radial --sweep beta=0.1:10:log10:3");
  REQUIRE(log.code == 0);
  const auto lines = lines_of(log.out);
  REQUIRE(lines.size() == 4);  // header + 3 rows
  CHECK(fields_of(lines[1])[3] == "0.1");
  CHECK(fields_of(lines[2])[3] == "1");
  CHECK(fields_of(lines[3])[3] == "10");
  // lambda grows with beta, and the middle row matches a plain single solve.
  CHECK(std::stod(fields_of(lines[1])[4]) < std::stod(fields_of(lines[2])[4]));
  CHECK(std::stod(fields_of(lines[2])[4]) < std::stod(fields_of(lines[3])[4]));
  const CliRun single = run_binary("radial --beta 1");
  CHECK(std::stod(fields_of(lines[2])[4]) ==
        Approx(std::stod(fields_of(lines_of(single.out)[1])[4])).epsilon(1e-12));

  const CliRun list = run_binary("radial --sweep R=0.5,1,2");
  REQUIRE(list.code == 0);
  const auto rows = lines_of(list.out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(fields_of(rows[1])[4]) > std::stod(fields_of(rows[2])[4]));
  CHECK(std::stod(fields_of(rows[2])[4]) > std::stod(fields_of(rows[3])[4]));

  const CliRun lin = run_binary("radial --sweep p=1.5:3:linear:4");
  REQUIRE(lin.code == 0);
  REQUIRE(lines_of(lin.out).size() == 5);
  CHECK(fields_of(lines_of(lin.out)[2])[1] == "2");

  CHECK(run_binary("radial --sweep gamma=1,2").code == 1);
  CHECK(run_binary("radial --sweep beta=10:0.1:log10").code == 1);
  CHECK(run_binary("radial --sweep beta=0.1:10:cosmic").code == 1);
  CHECK(run_binary("radial --sweep beta=-1:10:log10").code == 1);
  CHECK(run_binary("radial --sweep beta=1:10:linear:1").code == 1);
}

TEST_CASE("solve artifacts are byte-for-byte deterministic", "[cli]") {
  const fs::path dir = scratch_dir();
  const std::string common = "solve --domain square --h 0.1 ";
  const CliRun a = run_binary(common + "--out " + (dir / "a.csv").string() + " --mesh-out " +
                              (dir / "a.mesh").string() + " --u-out " +
                              (dir / "a_u.csv").string());
  const CliRun b = run_binary(common + "--out " + (dir / "b.csv").string() + " --mesh-out " +
                              (dir / "b.mesh").string() + " --u-out " +
                              (dir / "b_u.csv").string());
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.mesh") == slurp(dir / "b.mesh"));
  CHECK(slurp(dir / "a_u.csv") == slurp(dir / "b_u.csv"));

  const auto lines = lines_of(slurp(dir / "a.csv"));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "domain,norm,p,beta,h,seed,lambda,iterations,weak_residual,converged");
  const auto f = fields_of(lines[1]);
  REQUIRE(f.size() == 10);
  CHECK(f[0] == "square");
  CHECK(f[1] == "euclidean");
  CHECK(f[9] == "true");
  CHECK(std::stod(f[6]) == Approx(3.41828168473).epsilon(1e-6));

  // The provenance record sits next to the artifact and replays as a config.
  const std::string cfg = slurp(dir / "a.csv.config");
  CHECK(cfg.find("subcommand = solve\n") != std::string::npos);
  CHECK(cfg.find("domain = square\n") != std::string::npos);
  CHECK(cfg.find("h = 0.1\n") != std::string::npos);

  const std::string mesh_text = slurp(dir / "a.mesh");
  CHECK(mesh_text.rfind("# nodes", 0) == 0);
  CHECK(lines_of(slurp(dir / "a_u.csv"))[0] == "node,x,y,u");

  // Identical stdout across repeated runs without --out, too.
  const CliRun c = run_binary("radial --n 2 --R 0.75 --beta 2");
  const CliRun d = run_binary("radial --n 2 --R 0.75 --beta 2");
  CHECK(c.out == d.out);
  CHECK(c.out.find("0.75") != std::string::npos);
}

TEST_CASE("config file values merge under explicit flags", "[cli]") {
  const fs::path cfg = scratch_dir() / "radial.cfg";
  {
    std::ofstream f(cfg);
    f << "# stored run configuration\n"
         "subcommand = radial\n"
         "n = 3\n"
         "beta = 2\n";
  }
  const CliRun file_only = run_binary("radial --config " + cfg.string());
  REQUIRE(file_only.code == 0);
  const auto f0 = fields_of(lines_of(file_only.out)[1]);
  CHECK(f0[0] == "3");
  CHECK(f0[3] == "2");
  CHECK(std::stod(f0[4]) == Approx(oracles::robin_ball_lambda(3, 1.0, 2.0)).epsilon(1e-8));

  // An explicit flag wins over the file value; unrelated file keys survive.
  const CliRun merged = run_binary("radial --config " + cfg.string() + " --beta 10");
  REQUIRE(merged.code == 0);
  const auto f1 = fields_of(lines_of(merged.out)[1]);
  CHECK(f1[0] == "3");
  CHECK(f1[3] == "10");
  CHECK(merged.err.find("beta = 10\n") != std::string::npos);
  CHECK(merged.err.find("n = 3\n") != std::string::npos);

  // `--config=FILE` spelling is accepted too.
  const CliRun eq = run_binary("radial --config=" + cfg.string());
  REQUIRE(eq.code == 0);
  CHECK(lines_of(eq.out)[1] == lines_of(file_only.out)[1]);

  // The braced norm schema inside a config file matches the compact flag form.
  const fs::path ncf = scratch_dir() / "norm.cfg";
  {
    std::ofstream f(ncf);
    f << "subcommand = solve\n"
         "domain = square\n"
         "norm = { family = \"quadratic\", matrix = [[4,0],[0,1]] }\n"
         "h = 0.1\n";
  }
  const CliRun braced = run_binary("solve --config " + ncf.string());
  const CliRun compact = run_binary("solve --domain square --norm quadratic:4,0,0,1 --h 0.1");
  REQUIRE(braced.code == 0);
  REQUIRE(compact.code == 0);
  CHECK(lines_of(braced.out)[1] == lines_of(compact.out)[1]);
  CHECK(lines_of(braced.out)[1].find("\"quadratic:4,0,0,1\"") != std::string::npos);
}

TEST_CASE("exit codes separate input errors from verdict violations", "[cli]") {
  CHECK(run_binary("radial").code == 0);                            // all-defaults run
  CHECK(run_binary("check --suite norms").code == 0);
  CHECK(run_binary("--help").code == 0);

  CHECK(run_binary("frobnicate").code == 1);
  CHECK(run_binary("solve --h 0.1").code == 1);                     // missing --domain
  CHECK(run_binary("radial --beta -3").code == 1);
  CHECK(run_binary("radial --R nonsense").code == 1);
  CHECK(run_binary("sweep --ratios 4,1 --h 0.1").code == 1);        // not increasing input

  const CliRun bad_norm = run_binary("solve --domain square --h 0.1 --norm quadratic:bogus");
  CHECK(bad_norm.code == 1);
  CHECK(bad_norm.err.find("input error") != std::string::npos);

  const fs::path cfg = scratch_dir() / "bad.cfg";
  std::ofstream(cfg) << "subcommand = radial\nwidgets = 7\n";
  const CliRun bad_key = run_binary("radial --config " + cfg.string());
  CHECK(bad_key.code == 1);
  CHECK(bad_key.err.find("widgets") != std::string::npos);

  const fs::path wrong = scratch_dir() / "wrong.cfg";
  std::ofstream(wrong) << "subcommand = solve\n";
  CHECK(run_binary("radial --config " + wrong.string()).code == 1);

  // Indistinguishable aspect ratios leave the eigenvalue ordering to mesh
  // noise: a genuine monotonicity violation, reported with exit code 2.
  const CliRun flat = run_binary("sweep --ratios 1,1.000001 --h 0.1");
  CHECK(flat.code == 2);
  CHECK(flat.err.find("VIOLATION") != std::string::npos);
}

TEST_CASE("check subcommand reports every suite", "[cli]") {
  const CliRun r = run_binary("check --suite geometry");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 3);
  for (size_t i = 0; i + 1 < lines.size(); ++i) CHECK(lines[i].rfind("ok   ", 0) == 0);
  CHECK(lines.back().find("passed") != std::string::npos);
  CHECK(run_binary("check --suite bogus").code == 1);
}

TEST_CASE("faber-krahn subcommand emits a verdict row", "[cli]") {
  const CliRun r = run_binary("faber-krahn --domain rect:2,0.5 --h 0.1");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "domain,norm,p,beta,h,lambda,lambda_wulff,ratio,verdict");
  CHECK(lines[1].find("holds_with_margin") != std::string::npos);
  // The domain tag contains a comma, so the field must arrive quoted.
  CHECK(lines[1].rfind("\"rect:2,0.5\"", 0) == 0);
}

TEST_CASE("csv fields quote separators and quotes", "[cli]") {
  CHECK(ar::detail::csv_field("plain") == "plain");
  CHECK(ar::detail::csv_field("a,b") == "\"a,b\"");
  CHECK(ar::detail::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("config extraction handles both spellings and rejects misuse", "[cli]") {
  std::vector<std::string> tokens = {"--n", "3", "--config", "f.cfg", "--beta", "2"};
  CHECK(ar::detail::extract_config_path(tokens) == "f.cfg");
  CHECK(tokens == std::vector<std::string>{"--n", "3", "--beta", "2"});

  std::vector<std::string> eq = {"--config=g.cfg"};
  CHECK(ar::detail::extract_config_path(eq) == "g.cfg");
  CHECK(eq.empty());

  std::vector<std::string> dup = {"--config", "a", "--config=b"};
  CHECK_THROWS_AS(ar::detail::extract_config_path(dup), ar::input_error);
  std::vector<std::string> dangling = {"--config"};
  CHECK_THROWS_AS(ar::detail::extract_config_path(dangling), ar::input_error);
  std::vector<std::string> none = {"--n", "3"};
  CHECK(ar::detail::extract_config_path(none).empty());
}
