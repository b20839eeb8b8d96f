#pragma once

// The four CLI commands as functions from a config to a Report (a table plus
// metadata), and the CSV / JSON writers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "uniwkb/cli/config.hpp"
#include "uniwkb/oracle.hpp"
#include "uniwkb/reconstruct.hpp"
#include "uniwkb/tp_series.hpp"

namespace uniwkb::cli {

using Cell = std::variant<double, std::string>;

struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  // written after the rows as "# key = value" lines in CSV
  std::vector<std::pair<std::string, std::string>> footer;
  // 0 or the verification-failure code
  int exit_code = 0;
};

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_verification = 4;

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const Report& r) {
  std::string out;
  for (std::size_t i = 0; i < r.header.size(); ++i) out += (i ? "," : "") + r.header[i];
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i])) out += format_real(*d);
      else out += std::get<std::string>(row[i]);
    }
    out += '\n';
  }
  for (const auto& [k, v] : r.footer) out += "# " + k + " = " + v + '\n';
  return out;
}

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j = r.meta;
  j["columns"] = r.header;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (const Cell& c : row) {
      if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) jr.push_back(*d);
        else jr.push_back(format_real(*d));
      } else {
        jr.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

namespace detail {

inline Interval output_interval(const ProblemConfig& c, const Interval& working) {
  if (!c.output_interval) return working;
  const Interval o(c.output_interval->first, c.output_interval->second);
  if (!working.contains(o.lo(), 1e-12) || !working.contains(o.hi(), 1e-12)) {
    throw ConfigError("output_interval " + to_string(o) + " lies outside the working interval " + to_string(working));
  }
  return o;
}

inline nlohmann::ordered_json problem_meta(const ProblemConfig& c, const Expansion& e) {
  nlohmann::ordered_json m;
  m["kind"] = to_string(e.kind);
  m["omega2"] = to_string(*c.omega2);
  m["eps"] = e.eps;
  m["order"] = e.ys.order();
  m["interval"] = {e.interval().lo(), e.interval().hi()};
  m["turning_points"] = e.turning_points;
  if (e.x_tp) m["x_tp"] = *e.x_tp;
  if (e.kind == Kind::quadratic) {
    m["a"] = e.a;
    m["side"] = e.side == Side::right ? "right" : "left";
  }
  m["order_residuals"] = e.order_residuals;
  return m;
}

inline std::string module_name(Kind k) {
  switch (k) {
    case Kind::constant: return "pinney_const";
    case Kind::linear: return "langer_linear";
    case Kind::exp: return "exp_comparison";
    case Kind::quadratic: return "quad_two_tp";
  }
  return "expansion";
}

// Runs f, prefixing library errors with the module they came from.
template <class F>
auto in_module(const std::string& module, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.category(), module + ": " + e.what());
  }
}

inline Expansion expand_config(const ProblemConfig& c, double eps) {
  const Problem p = in_module("config", [&] { return make_problem(c, eps); });
  return in_module(module_name(c.kind), [&] { return expand(p); });
}

// "p/q", "-p/q", "p", or a decimal like "0.25".
inline Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
      if (q == 0) throw ConfigError("zero denominator in '" + s + "'");
      return Rational(p, q);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    const std::string frac = s.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos) throw ConfigError("bad number");
    std::string whole = s.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    if (neg || (!whole.empty() && whole[0] == '+')) whole.erase(0, 1);
    BigInt ten = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) ten *= 10;
    const BigInt digits((whole.empty() ? "0" : whole) + frac);
    return Rational(neg ? BigInt(-digits) : digits, ten);
  } catch (const ConfigError&) {
    throw ConfigError("gamma: cannot read '" + s + "' as an exact rational");
  } catch (const std::exception&) {
    throw ConfigError("gamma: cannot read '" + s + "' as an exact rational");
  }
}

}  // namespace detail

inline Report run_expand(const ProblemConfig& c) {
  const Expansion e = detail::expand_config(c, c.eps);
  const Interval out = detail::output_interval(c, e.interval());
  const GridFunction y = sum_at(e.ys, e.eps);
  const GridFunction sigma = detail::in_module("reconstruct", [&] {
    const auto [xa, sa] = sigma_anchor(e, y, c.sigma_anchor);
    return phase(y, xa, sa);
  });
  const JetFunctions jet(y);
  const GridFunction wd = deriv(e.omega2);

  Report r;
  r.header.push_back("x");
  for (std::size_t n = 0; n <= e.ys.order(); ++n) r.header.push_back("y" + std::to_string(n));
  r.header.insert(r.header.end(), {"y_sum", "sigma", "residual"});
  double worst = 0.0;
  for (double x : probe_points(out, c.points)) {
    std::vector<Cell> row{x};
    for (std::size_t n = 0; n <= e.ys.order(); ++n) row.emplace_back(e.ys[n](x));
    const double res = residual_at(e.kind, jet, e.omega2, wd, x, e.eps, e.a2());
    worst = std::max(worst, std::abs(res));
    row.insert(row.end(), {y(x), sigma(x), res});
    r.rows.push_back(std::move(row));
  }
  r.meta = detail::problem_meta(c, e);
  r.meta["output_interval"] = {out.lo(), out.hi()};
  r.meta["sigma_anchor"] = c.sigma_anchor == SigmaAnchor::zero ? "zero" : "consistent";
  r.meta["residual_max"] = worst;
  return r;
}

inline Report run_verify(const ProblemConfig& c) {
  const Expansion e = detail::expand_config(c, c.eps);
  const UniformSolution s = detail::in_module("reconstruct", [&] { return assemble(e, c.c1, c.c2, c.sigma_anchor); });
  const VerifyReport v = detail::in_module("oracle", [&] { return verify(s, e.omega2, c.points); });
  Report r;
  r.header = {"x", "u_approx", "u_ref", "abs_err", "rel_err"};
  for (std::size_t i = 0; i < v.xs.size(); ++i) {
    r.rows.push_back({v.xs[i], v.u_approx[i], v.u_ref[i], v.abs_err[i], v.rel_err[i]});
  }
  r.meta = detail::problem_meta(c, e);
  r.meta["c1"] = c.c1;
  r.meta["c2"] = c.c2;
  r.meta["sigma_anchor"] = c.sigma_anchor == SigmaAnchor::zero ? "zero" : "consistent";
  r.meta["x_ref"] = s.x_ref;
  r.meta["log_scale"] = v.log_scale;
  r.meta["max_rel_err"] = v.max_rel_err;
  r.footer.emplace_back("max_rel_err", format_real(v.max_rel_err));
  if (v.log_scale != 0.0) r.footer.emplace_back("log_scale", format_real(v.log_scale));
  if (c.tolerance) {
    r.meta["tolerance"] = *c.tolerance;
    const bool pass = v.max_rel_err <= *c.tolerance;
    r.meta["passed"] = pass;
    r.footer.emplace_back("tolerance", format_real(*c.tolerance));
    if (!pass) r.exit_code = exit_verification;
  }
  return r;
}

inline Report run_dingle(const ProblemConfig& c) {
  const DingleCoefficients d = dingle_coefficients();
  std::optional<std::array<Rational, 4>> g;
  if (!c.gamma.empty()) {
    std::array<Rational, 4> v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = detail::parse_rational(c.gamma[i]);
    if (v[0] == 0) throw ConfigError("gamma: g1 must be nonzero (simple turning point)");
    g = v;
  }
  std::vector<std::pair<std::string, GammaPoly>> items;
  for (std::size_t k = 1; k < d.sigma.size(); ++k) items.emplace_back("sigma" + std::to_string(k), d.sigma[k]);
  items.emplace_back("sigma0_eps", d.sigma0_eps);
  items.emplace_back("sigma1_eps", d.sigma1_eps);
  for (std::size_t k = 0; k <= d.y0.order(); ++k) items.emplace_back("y0_x" + std::to_string(k), d.y0[k]);
  items.emplace_back("y1_at_tp", d.y1_at_tp);

  Report r;
  r.header = {"quantity", "value", "gamma_form"};
  for (const auto& [name, p] : items) {
    std::string value = "symbolic";
    if (g) {
      try {
        value = p.value(*g).str();
      } catch (const DomainError&) {
        const std::array<double, 4> gd{static_cast<double>((*g)[0]), static_cast<double>((*g)[1]),
                                       static_cast<double>((*g)[2]), static_cast<double>((*g)[3])};
        value = "~" + format_real(p.evaluate(gd));
      }
    }
    r.rows.push_back({name, value, p.to_string()});
  }
  r.meta["convention"] = "omega^2 = g1 x + g2 x^2/2 + g3 x^3/6 + g4 x^4/24; sigma_k = k! [x^k] sigma";
  if (g) {
    std::vector<std::string> gs;
    for (const auto& v : *g) gs.push_back(v.str());
    r.meta["gamma"] = gs;
  } else {
    r.meta["gamma"] = "symbolic";
  }
  return r;
}

inline Report run_sweep(const ProblemConfig& c) {
  if (c.eps_list.empty()) throw ConfigError("sweep needs eps_list");
  // The orders do not depend on eps; only the partial sum does.
  const Expansion e = detail::expand_config(c, c.eps_list.front());
  const Interval out = detail::output_interval(c, e.interval());
  Report r;
  r.header = {"eps", "residual_max"};
  std::vector<double> norms;
  for (double eps : c.eps_list) {
    if (!(eps > 0.0)) throw ConfigError("eps_list values must be positive");
    const double n = residual_norm(e.kind, sum_at(e.ys, eps), e.omega2, eps, e.a2(), out);
    norms.push_back(n);
    r.rows.push_back({eps, n});
  }
  const double floor_level = 1e-11 * std::max(1.0, e.omega2.max_abs());
  std::string slope;
  if (*std::max_element(norms.begin(), norms.end()) < floor_level) {
    // still validates the eps sequence
    std::vector<double> ones(norms.size(), 1.0);
    convergence_slope(c.eps_list, ones);
    slope = "floor";
    r.meta["slope"] = slope;
  } else {
    const double s = convergence_slope(c.eps_list, norms);
    slope = format_real(s);
    r.meta["slope"] = s;
  }
  r.meta["kind"] = to_string(e.kind);
  r.meta["omega2"] = to_string(*c.omega2);
  r.meta["order"] = e.ys.order();
  r.meta["expected_slope"] = e.ys.order() + 1;
  r.meta["interval"] = {out.lo(), out.hi()};
  r.footer.emplace_back("slope", slope);
  return r;
}

}  // namespace uniwkb::cli
