#pragma once

// Problem files: flat "key = value" lines, '#' starts a comment.
//
//   omega2 = x + x^3/6        # expression in x
//   interval = -1, 1
//   eps = 1e-2
//   kind = linear             # constant | linear | exp | quadratic
//   order = 2
//   anchor = 0                # optional turning-point hint
//   side = right              # quadratic outer region: left | right
//   sigma_anchor = zero       # zero | consistent
//   output_interval = 1.2, 2  # optional sub-interval for tables
//   points = 201              # rows in expand tables
//   c1 = 0                    # dominant weight (verify)
//   c2 = 1                    # recessive weight (verify)
//   tolerance = 1e-8          # verify fails (exit 4) above this
//   eps_list = 1e-2, 5e-3, 2.5e-3   # sweep
//   gamma = 1, 1, 0, 0        # dingle: four values or "symbolic"

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uniwkb/cli/expr.hpp"
#include "uniwkb/equations.hpp"
#include "uniwkb/expansion.hpp"
#include "uniwkb/funcspace.hpp"

namespace uniwkb::cli {

struct ProblemConfig {
  std::string omega2_expr;
  ExprPtr omega2;
  double lo = 0.0, hi = 1.0;
  double eps = 1e-2;
  Kind kind = Kind::constant;
  std::size_t order = 0;
  std::optional<double> anchor;
  Side side = Side::right;
  SigmaAnchor sigma_anchor = SigmaAnchor::zero;
  std::optional<std::pair<double, double>> output_interval;
  std::size_t points = 201;
  double c1 = 0.0, c2 = 1.0;
  std::optional<double> tolerance;
  std::vector<double> eps_list;
  // empty: symbolic
  std::vector<std::string> gamma;
  double fit_tol = 1e-14;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double r = 0.0;
  try {
    r = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(r)) {
    throw ConfigError("key '" + key + "': expected a real number, got '" + v + "'");
  }
  return r;
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  const double r = to_real(key, v);
  if (r < 0 || r != std::floor(r) || r > 1e6) throw ConfigError("key '" + key + "': expected a small non-negative integer");
  return static_cast<std::size_t>(r);
}

inline std::pair<double, double> to_pair(const std::string& key, const std::string& v) {
  const auto items = split_list(v);
  if (items.size() != 2) throw ConfigError("key '" + key + "': expected two comma-separated reals");
  return {to_real(key, items[0]), to_real(key, items[1])};
}

}  // namespace detail

inline ProblemConfig parse_config(std::istream& in) {
  ProblemConfig c;
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }

  for (const auto& [key, v] : kv) {
    if (key == "omega2") {
      c.omega2_expr = v;
      try {
        c.omega2 = parse_expr(v);
      } catch (const ParseError& e) {
        throw ConfigError(std::string("omega2: ") + e.what());
      }
    } else if (key == "interval") {
      std::tie(c.lo, c.hi) = detail::to_pair(key, v);
      if (!(c.lo < c.hi)) throw ConfigError("interval: lower end must be below the upper end");
    } else if (key == "eps") {
      c.eps = detail::to_real(key, v);
      if (!(c.eps > 0.0)) throw ConfigError("eps must be positive");
    } else if (key == "kind") {
      c.kind = parse_kind(v);
    } else if (key == "order") {
      c.order = detail::to_count(key, v);
    } else if (key == "anchor") {
      c.anchor = detail::to_real(key, v);
    } else if (key == "side") {
      if (v != "left" && v != "right") throw ConfigError("side must be left or right");
      c.side = v == "left" ? Side::left : Side::right;
    } else if (key == "sigma_anchor") {
      if (v != "zero" && v != "consistent") throw ConfigError("sigma_anchor must be zero or consistent");
      c.sigma_anchor = v == "zero" ? SigmaAnchor::zero : SigmaAnchor::consistent;
    } else if (key == "output_interval") {
      c.output_interval = detail::to_pair(key, v);
    } else if (key == "points") {
      c.points = detail::to_count(key, v);
      if (c.points < 2) throw ConfigError("points must be at least 2");
    } else if (key == "c1") {
      c.c1 = detail::to_real(key, v);
    } else if (key == "c2") {
      c.c2 = detail::to_real(key, v);
    } else if (key == "tolerance") {
      c.tolerance = detail::to_real(key, v);
    } else if (key == "eps_list") {
      for (const auto& item : detail::split_list(v)) c.eps_list.push_back(detail::to_real(key, item));
    } else if (key == "gamma") {
      if (v != "symbolic") {
        c.gamma = detail::split_list(v);
        if (c.gamma.size() != 4) throw ConfigError("gamma: expected four values or 'symbolic'");
      }
    } else if (key == "fit_tol") {
      c.fit_tol = detail::to_real(key, v);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return c;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in);
}

// omega^2 fitted on the configured interval.
inline GridFunction omega2_function(const ProblemConfig& c) {
  if (!c.omega2) throw ConfigError("missing key 'omega2'");
  const Expr& e = *c.omega2;
  FitOptions opt;
  opt.tol = c.fit_tol;
  return fit([&](double x) { return evaluate(e, x); }, Interval(c.lo, c.hi), opt);
}

inline Problem make_problem(const ProblemConfig& c, double eps) {
  Problem p{omega2_function(c)};
  p.eps = eps;
  p.kind = c.kind;
  p.order = c.order;
  p.anchor = c.anchor;
  p.side = c.side;
  p.sigma_anchor = c.sigma_anchor;
  p.opt.tol = c.fit_tol;
  return p;
}

}  // namespace uniwkb::cli
