// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Text-format layer: norm and domain specification strings (compact
// `quadratic:4,0,0,1` and braced `{ family = "quadratic", matrix = [[4,0],[0,1]] }`
// forms), polygon files (`v x y` lines), mesh and eigenfunction export, and
// the line-oriented `key = value` run-config reader.  Everything here is
// deterministic: parse → serialize → parse round-trips bit-for-bit.
#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "anisorobin/geometry.hpp"
#include "anisorobin/mesh.hpp"

namespace anisorobin {

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Split on `sep` only at bracket/brace depth zero, so list and table values
/// survive intact.
inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '{') ++depth;
    if (c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_number(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  try {
    size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw input_error(what + ": '" + t + "' is not a number");
  }
}

inline std::string unquote(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() >= 2 && ((t.front() == '"' && t.back() == '"') ||
                        (t.front() == '\'' && t.back() == '\'')))
    return t.substr(1, t.size() - 2);
  return t;
}

/// `[[4,0],[0,1]]` → row-major entries of a square matrix.
inline Matrix parse_matrix_literal(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw input_error(what + ": expected [[...],[...]] matrix literal, got '" + t + "'");
  std::vector<std::vector<double>> rows;
  for (const std::string& part : split_top_level(t.substr(1, t.size() - 2), ',')) {
    const std::string row = trim(part);
    if (row.size() < 2 || row.front() != '[' || row.back() != ']')
      throw input_error(what + ": expected a [..] row, got '" + row + "'");
    std::vector<double> vals;
    for (const std::string& num : split(row.substr(1, row.size() - 2), ','))
      vals.push_back(parse_number(num, what));
    rows.push_back(std::move(vals));
  }
  const size_t n = rows.size();
  Matrix A(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw input_error(what + ": matrix must be square, row " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " of " + std::to_string(n) +
                        " entries");
    for (size_t j = 0; j < n; ++j) A(i, j) = rows[i][j];
  }
  return A;
}

constexpr const char* kNormSchema =
    "expected 'euclidean', 'quadratic:a11,a12,a21,a22', 'pnorm:q[,eps]' or "
    "'{ family = \"...\", ... }' (schema in README)";

inline AnisotropicNorm parse_norm_braced(const std::string& spec) {
  const std::string body = trim(spec).substr(1, trim(spec).size() - 2);
  std::string family;
  Matrix A;
  double q = 0, eps = 0;
  int dim = 2;
  bool has_matrix = false, has_q = false;
  for (const std::string& part : split_top_level(body, ',')) {
    if (trim(part).empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw input_error("norm spec: '" + trim(part) + "' is not 'key = value'");
    const std::string key = trim(part.substr(0, eq));
    const std::string value = part.substr(eq + 1);
    if (key == "family") {
      family = unquote(value);
    } else if (key == "matrix") {
      A = parse_matrix_literal(value, "norm spec matrix");
      has_matrix = true;
    } else if (key == "q") {
      q = parse_number(value, "norm spec q");
      has_q = true;
    } else if (key == "eps") {
      eps = parse_number(value, "norm spec eps");
    } else if (key == "dim") {
      dim = static_cast<int>(parse_number(value, "norm spec dim"));
    } else {
      throw input_error("norm spec: unknown key '" + key +
                        "' (allowed: family, matrix, q, eps, dim)");
    }
  }
  if (family == "euclidean") return AnisotropicNorm::euclidean(dim);
  if (family == "quadratic") {
    if (!has_matrix) throw input_error("norm spec: quadratic family needs 'matrix'");
    return AnisotropicNorm::quadratic(A);
  }
  if (family == "pnorm") {
    if (!has_q) throw input_error("norm spec: pnorm family needs 'q'");
    return AnisotropicNorm::smoothed_pnorm(dim, q, eps);
  }
  throw input_error("norm spec: unknown family '" + family +
                    "' (expected euclidean, quadratic or pnorm)");
}

}  // namespace detail

/// Parse a norm specification, either compact (`euclidean`,
/// `quadratic:4,0,0,1` row-major, `pnorm:3` or `pnorm:3,0.05`) or braced
/// key-value (`{ family = "quadratic", matrix = [[4,0],[0,1]] }`).  The
/// compact form is exactly what AnisotropicNorm::label() emits, so specs
/// round-trip.
inline AnisotropicNorm parse_norm_spec(const std::string& spec) {
  const std::string t = detail::trim(spec);
  if (t.empty()) throw input_error(std::string("empty norm spec; ") + detail::kNormSchema);
  if (t.front() == '{' && t.back() == '}') return detail::parse_norm_braced(t);

  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : t.substr(colon + 1);
  if (head == "euclidean") {
    if (!args.empty()) throw input_error("norm spec: euclidean takes no parameters");
    return AnisotropicNorm::euclidean(2);
  }
  if (head == "quadratic") {
    const auto parts = detail::split(args, ',');
    const size_t n = parts.size() == 4 ? 2 : parts.size() == 9 ? 3 : 0;
    if (n == 0)
      throw input_error("norm spec: quadratic needs 4 (2x2) or 9 (3x3) row-major entries, got " +
                        std::to_string(args.empty() ? 0 : parts.size()));
    Matrix A(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        A(i, j) = detail::parse_number(parts[i * n + j], "norm spec quadratic entry");
    return AnisotropicNorm::quadratic(A);
  }
  if (head == "pnorm") {
    const auto parts = detail::split(args, ',');
    if (args.empty() || parts.size() > 2)
      throw input_error("norm spec: pnorm takes q and an optional eps");
    const double q = detail::parse_number(parts[0], "norm spec q");
    const double eps = parts.size() == 2 ? detail::parse_number(parts[1], "norm spec eps") : 0.0;
    return AnisotropicNorm::smoothed_pnorm(2, q, eps);
  }
  throw input_error("norm spec: '" + t + "' not recognized; " + detail::kNormSchema);
}

/// Polygon file: `v x y` vertex lines in CCW order; `#` starts a comment.
inline Domain load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("domain file '" + path + "' cannot be opened");
  std::vector<Point> vertices;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    std::istringstream row(t);
    std::string kind;
    double x = 0, y = 0;
    row >> kind >> x >> y;
    if (kind != "v" || row.fail())
      throw input_error("domain file '" + path + "' line " + std::to_string(lineno) +
                        ": expected 'v x y', got '" + t + "'");
    vertices.emplace_back(x, y);
  }
  return Domain(std::move(vertices), "file:" + path);
}

constexpr const char* kDomainSchema =
    "expected 'square[:side]', 'rect:w,h', 'ellipse:a,b[,m]', 'regular:k[,R]', "
    "'wulff:R[,m]' or 'file:path' (schema in README)";

/// Parse a domain specification.  `wulff:R` samples the Wulff shape of the
/// supplied norm, which is why the norm is a parameter.
inline Domain parse_domain_spec(const std::string& spec, const AnisotropicNorm& H) {
  const std::string t = detail::trim(spec);
  if (t.empty()) throw input_error(std::string("empty domain spec; ") + kDomainSchema);
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : t.substr(colon + 1);
  const auto parts = detail::split(args, ',');
  const auto arg_count = args.empty() ? 0 : parts.size();
  auto num = [&](size_t i, const char* what) { return detail::parse_number(parts[i], what); };

  if (head == "square") {
    if (arg_count > 1) throw input_error("domain spec: square takes at most a side length");
    return make_square(arg_count ? num(0, "square side") : 1.0);
  }
  if (head == "rect") {
    if (arg_count != 2) throw input_error("domain spec: rect needs w,h");
    return make_rect(num(0, "rect width"), num(1, "rect height"));
  }
  if (head == "ellipse") {
    if (arg_count < 2 || arg_count > 3)
      throw input_error("domain spec: ellipse needs a,b and an optional vertex count");
    const int m = arg_count == 3 ? static_cast<int>(num(2, "ellipse vertices")) : 256;
    return make_ellipse(num(0, "ellipse a"), num(1, "ellipse b"), m);
  }
  if (head == "regular") {
    if (arg_count < 1 || arg_count > 2)
      throw input_error("domain spec: regular needs k and an optional circumradius");
    return make_regular_polygon(static_cast<int>(num(0, "regular k")),
                                arg_count == 2 ? num(1, "regular R") : 1.0);
  }
  if (head == "wulff") {
    if (arg_count < 1 || arg_count > 2)
      throw input_error("domain spec: wulff needs R and an optional vertex count");
    const int m = arg_count == 2 ? static_cast<int>(num(1, "wulff vertices")) : 256;
    return wulff_polygon(H, num(0, "wulff R"), Point(0, 0), m);
  }
  if (head == "file") {
    if (colon == std::string::npos || args.empty())
      throw input_error("domain spec: file needs a path");
    return load_domain_file(args);
  }
  throw input_error("domain spec: '" + t + "' not recognized; " + kDomainSchema);
}

/// Mesh export: `n x y` per node, `t i j k` per triangle (CCW), `b i j nx ny`
/// per boundary edge with its outward unit normal.
inline void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "# nodes " << mesh.nodes.size() << " triangles " << mesh.triangles.size()
      << " boundary " << mesh.boundary.size() << " h " << detail::fmt_g(mesh.h) << "\n";
  for (const Point& p : mesh.nodes)
    out << "n " << detail::fmt_g(p.x()) << " " << detail::fmt_g(p.y()) << "\n";
  for (const auto& t : mesh.triangles)
    out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& e : mesh.boundary)
    out << "b " << e.a << " " << e.b << " " << detail::fmt_g(e.normal.x()) << " "
        << detail::fmt_g(e.normal.y()) << "\n";
}

/// Eigenfunction export: CSV `node,x,y,u`.
inline void write_eigenfunction_csv(std::ostream& out, const Mesh& mesh,
                                    const Eigen::VectorXd& u) {
  if (static_cast<size_t>(u.size()) != mesh.nodes.size())
    throw input_error("eigenfunction export: field length does not match the mesh");
  out << "node,x,y,u\n";
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    out << i << "," << detail::fmt_g(mesh.nodes[i].x()) << ","
        << detail::fmt_g(mesh.nodes[i].y()) << "," << detail::fmt_g(u[i]) << "\n";
}

struct SweepSpec {
  std::string param;           // one of "R", "beta", "p"
  std::vector<double> values;  // the resolved sample points, in order
};

/// Parse a parameter sweep: `beta=0.1:10:log10`, `beta=0.1:10:log10:25`,
/// `R=0.5:4:linear:8`, or an explicit list `R=0.5,1,2`.  Ranges include both
/// endpoints; `log10` spaces the samples geometrically and needs positive
/// bounds.  The count defaults to 9.
inline SweepSpec parse_sweep_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw input_error(
        "sweep spec: expected param=values, e.g. beta=0.1:10:log10 or R=0.5,1,2");
  SweepSpec s;
  s.param = detail::trim(spec.substr(0, eq));
  if (s.param != "R" && s.param != "beta" && s.param != "p")
    throw input_error("sweep spec: unknown parameter '" + s.param +
                      "' (expected R, beta or p)");
  const std::string rest = detail::trim(spec.substr(eq + 1));
  if (rest.find(':') == std::string::npos) {
    for (const std::string& part : detail::split(rest, ','))
      s.values.push_back(detail::parse_number(part, "sweep value"));
    return s;
  }
  const auto parts = detail::split(rest, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw input_error("sweep spec: expected lo:hi:scale or lo:hi:scale:count");
  const double lo = detail::parse_number(parts[0], "sweep lower bound");
  const double hi = detail::parse_number(parts[1], "sweep upper bound");
  const std::string scale = detail::trim(parts[2]);
  int count = 9;
  if (parts.size() == 4) {
    const double c = detail::parse_number(parts[3], "sweep count");
    count = static_cast<int>(c);
    if (count != c || count < 2) throw input_error("sweep count must be an integer >= 2");
  }
  if (!(lo < hi)) throw input_error("sweep spec: bounds must satisfy lo < hi");
  if (scale == "log10") {
    if (!(lo > 0)) throw input_error("sweep spec: log10 scale needs positive bounds");
    for (int i = 0; i < count; ++i)
      s.values.push_back(i == count - 1 ? hi
                                        : lo * std::pow(hi / lo, double(i) / (count - 1)));
  } else if (scale == "linear") {
    for (int i = 0; i < count; ++i)
      s.values.push_back(i == count - 1 ? hi : lo + (hi - lo) * double(i) / (count - 1));
  } else {
    throw input_error("sweep spec: unknown scale '" + scale + "' (expected linear or log10)");
  }
  return s;
}

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Run-config file: `key = value` lines, `#` comments.  Values keep their raw
/// text (so braced norm specs pass through); the CLI layer validates keys
/// against the active subcommand and applies flag-over-file precedence.
inline std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("config file '" + path + "' cannot be opened");
  std::vector<ConfigEntry> entries;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error("config file '" + path + "' line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    ConfigEntry e;
    e.key = detail::trim(line.substr(0, eq));
    e.value = detail::unquote(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty())
      throw input_error("config file '" + path + "' line " + std::to_string(lineno) +
                        ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace anisorobin
