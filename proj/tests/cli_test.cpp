#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "uniwkb/cli/commands.hpp"

using namespace uniwkb;
using namespace uniwkb::cli;

namespace {

ProblemConfig config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExprPtr num(double v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::number;
  e->value = v;
  return e;
}

ExprPtr var() {
  auto e = std::make_shared<Expr>();
  e->op = Op::var;
  return e;
}

ExprPtr bin(Op op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

std::size_t column(const Report& r, const std::string& name) {
  for (std::size_t i = 0; i < r.header.size(); ++i) {
    if (r.header[i] == name) return i;
  }
  ADD_FAILURE() << "no column " << name;
  return 0;
}

double column_max(const Report& r, const std::string& name) {
  const std::size_t c = column(r, name);
  double m = 0.0;
  for (const auto& row : r.rows) m = std::max(m, std::abs(std::get<double>(row[c])));
  return m;
}

std::string cell_text(const Report& r, const std::string& quantity) {
  for (const auto& row : r.rows) {
    if (std::get<std::string>(row[0]) == quantity) return std::get<std::string>(row[1]);
  }
  ADD_FAILURE() << "no row " << quantity;
  return {};
}

}  // namespace

TEST(ParseExpr, Structure) {
  auto pow = std::make_shared<Expr>();
  pow->op = Op::pow;
  pow->num = 2;
  pow->lhs = var();
  EXPECT_EQ(*parse_expr("1 + x^2"), *bin(Op::add, num(1), pow));

  auto ex = std::make_shared<Expr>();
  ex->op = Op::call;
  ex->func = Func::exp;
  ex->lhs = var();
  EXPECT_EQ(*parse_expr("exp(x) - 1"), *bin(Op::sub, ex, num(1)));
}

TEST(ParseExpr, Evaluation) {
  EXPECT_DOUBLE_EQ(evaluate(*parse_expr("x^2 - 1"), 2.0), 3.0);
  EXPECT_DOUBLE_EQ(evaluate(*parse_expr("2^-1 + x^(1/2)"), 4.0), 2.5);
  EXPECT_DOUBLE_EQ(evaluate(*parse_expr("-x^2"), 3.0), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(*parse_expr("x^(1/3)"), -8.0), -2.0);
  EXPECT_DOUBLE_EQ(evaluate(*parse_expr("8 / 2 / 2"), 0.0), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(*parse_expr("abs(sin(0) - 1e-1*x)"), 10.0), 1.0);
  EXPECT_THROW(evaluate(*parse_expr("log(x)"), 0.0), DomainError);
  EXPECT_THROW(evaluate(*parse_expr("sqrt(x)"), -1.0), DomainError);
  EXPECT_THROW(evaluate(*parse_expr("1/x"), 0.0), DomainError);
}

TEST(ParseExpr, ErrorOffsets) {
  try {
    parse_expr("1 + foo(x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_NE(std::string(e.what()).find("unknown identifier 'foo'"), std::string::npos);
  }
  try {
    parse_expr("(x + 1");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    parse_expr("x * * 2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse_expr("x^(1/0)"), ParseError);
  EXPECT_THROW(parse_expr("x 2"), ParseError);
}

TEST(ParseExpr, RoundTrip) {
  for (const char* text : {"1 + x^2", "exp(x) - 1", "x - (x - 1)", "2 / (x * 3)", "-(x + 1)^2", "(-x)^(1/3)",
                           "x^2 - 1 + x^4/10", "sqrt(abs(cos(x))) * 0.1", "-x^-2", "1 - -x", "(2^3)^2"}) {
    const ExprPtr a = parse_expr(text);
    const std::string printed = to_string(*a);
    EXPECT_EQ(*parse_expr(printed), *a) << text << " -> " << printed;
    EXPECT_EQ(to_string(*parse_expr(printed)), printed);
  }
}

TEST(Config, Errors) {
  EXPECT_THROW(config("eps = 1e-2\neps = 1e-3\n"), ConfigError);
  EXPECT_THROW(config("colour = red\n"), ConfigError);
  EXPECT_THROW(config("omega2 = 1 + y\n"), ConfigError);
  EXPECT_THROW(config("kind = cubic\n"), ConfigError);
  EXPECT_THROW(config("interval = 1, 0\n"), ConfigError);
  EXPECT_THROW(config("eps = -1\n"), ConfigError);
  EXPECT_THROW(config("order = 1.5\n"), ConfigError);
  EXPECT_THROW(config("just text\n"), ConfigError);
  const auto c = config("# comment\nomega2 = x  # trailing\n\ninterval = -1, 2\nkind = linear\n");
  EXPECT_EQ(c.omega2_expr, "x");
  EXPECT_EQ(c.kind, Kind::linear);
  EXPECT_DOUBLE_EQ(c.hi, 2.0);
}

TEST(RunExpand, LinearExactCase) {
  const Report r = run_expand(config("omega2 = x\ninterval = -1, 1\nkind = linear\norder = 2\n"));
  EXPECT_EQ(r.header, (std::vector<std::string>{"x", "y0", "y1", "y2", "y_sum", "sigma", "residual"}));
  EXPECT_LT(column_max(r, "y1"), 1e-10);
  EXPECT_LT(column_max(r, "y2"), 1e-10);
  EXPECT_EQ(r.exit_code, exit_ok);
}

// The closed-form residual of the first-order partial sum peaks at
// 1.2766e-4 at x = 0; see PinneyResidual.FirstOrderMagnitude.
TEST(RunExpand, PinneyResidualColumn) {
  const Report r = run_expand(config("omega2 = 1 + x^2\ninterval = 0, 1\neps = 1e-2\norder = 1\n"));
  EXPECT_NEAR(column_max(r, "residual"), 1.2766462623283e-4, 1e-9);
  EXPECT_NEAR(r.meta["residual_max"].get<double>(), 1.2766462623283e-4, 1e-9);
  EXPECT_EQ(r.meta["kind"], "constant");
}

TEST(RunExpand, QuadraticExactCase) {
  const Report r = run_expand(config("omega2 = x^2 - 1\ninterval = -2, 2\nkind = quadratic\norder = 2\n"));
  EXPECT_NEAR(r.meta["a"].get<double>(), 1.0, 1e-12);
  EXPECT_LT(column_max(r, "y1"), 1e-10);
  EXPECT_LT(column_max(r, "y2"), 1e-10);
}

TEST(RunExpand, SolverErrorsNameTheModule) {
  try {
    run_expand(config("omega2 = 1 + x^2\ninterval = -1, 1\nkind = linear\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("langer_linear: ", 0), 0u) << e.what();
  }
}

TEST(RunVerify, Examples) {
  const Report c = run_verify(config("omega2 = 1\ninterval = 0, 1\neps = 1e-2\n"));
  EXPECT_LT(column_max(c, "rel_err"), 1e-10);
  const Report l = run_verify(config("omega2 = x\ninterval = -1, 1\nkind = linear\neps = 1e-3\ntolerance = 1e-8\n"));
  EXPECT_LT(l.meta["max_rel_err"].get<double>(), 1e-8);
  EXPECT_EQ(l.exit_code, exit_ok);

  const std::string base = "omega2 = 1 + x^2\ninterval = 0, 1\neps = 1e-2\n";
  const double e0 = run_verify(config(base + "order = 0\n")).meta["max_rel_err"].get<double>();
  const double e2 = run_verify(config(base + "order = 2\n")).meta["max_rel_err"].get<double>();
  EXPECT_LT(e2 / e0, 1e-3);

  EXPECT_EQ(run_verify(config(base + "order = 0\ntolerance = 1e-6\n")).exit_code, exit_verification);
}

TEST(RunDingle, Examples) {
  const Report r = run_dingle(config("gamma = 1, 1, 0, 0\n"));
  EXPECT_EQ(cell_text(r, "sigma2"), "1/5");
  EXPECT_EQ(cell_text(r, "sigma0_eps"), "-9/140");
  EXPECT_EQ(cell_text(run_dingle(config("gamma = 1, 0, 0, 1\n")), "sigma1_eps"), "1/54");
  EXPECT_EQ(cell_text(run_dingle(config("gamma = 2, 0, 0, 0\n")), "sigma1").rfind("~1.2599", 0), 0u);
  EXPECT_THROW(run_dingle(config("gamma = 0, 1, 0, 0\n")), ConfigError);
  const Report s = run_dingle(config(""));
  for (const auto& row : s.rows) {
    if (std::get<std::string>(row[0]) == "sigma2") {
      EXPECT_EQ(std::get<std::string>(row[2]), "1/5 g1^(-2/3) g2");
    }
  }
}

TEST(RunSweep, Slopes) {
  const std::string base = "omega2 = 1 + x^2\ninterval = 0, 1\neps_list = 1e-2, 5e-3, 2.5e-3, 1.25e-3\n";
  EXPECT_NEAR(run_sweep(config(base + "order = 0\n")).meta["slope"].get<double>(), 1.0, 0.15);
  EXPECT_NEAR(run_sweep(config(base + "order = 2\n")).meta["slope"].get<double>(), 3.0, 0.15);
  const Report f = run_sweep(config("omega2 = x\ninterval = -1, 1\nkind = linear\norder = 1\neps_list = 1e-2, 1e-3, 1e-4\n"));
  EXPECT_EQ(f.meta["slope"], "floor");
  EXPECT_THROW(run_sweep(config("omega2 = 1 + x^2\ninterval = 0, 1\neps_list = 1e-2, 3e-3, 1e-4\n")), ConfigError);
}

TEST(Csv, Deterministic) {
  const auto c = config("omega2 = x + x^3/6\ninterval = -1, 1\nkind = linear\norder = 1\npoints = 11\n");
  const std::string a = to_csv(run_expand(c));
  const std::string b = to_csv(run_expand(c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find('\r'), std::string::npos);
  EXPECT_EQ(a.back(), '\n');
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(1.0), "1");
}
