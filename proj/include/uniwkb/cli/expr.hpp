#pragma once

// The omega^2 expression language: literals, x, + - * /, unary -, powers with
// rational exponents, and exp log sin cos sqrt abs. Recursive descent with
// byte-offset error positions; the printer emits text that parses back to an
// identical tree.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' exponent)?
//   exponent := int | '-' int | '(' '-'? int ('/' int)? ')'
//   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>

#include "uniwkb/errors.hpp"

namespace uniwkb::cli {

enum class Op { number, var, add, sub, mul, div, neg, pow, call };
enum class Func { exp, log, sin, cos, sqrt, abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op;
  double value = 0.0;          // number
  long num = 1, den = 1;       // pow exponent num/den, den > 0, reduced
  Func func = Func::exp;       // call
  ExprPtr lhs, rhs;            // operands (unary ops use lhs)
};

inline const char* func_name(Func f) {
  switch (f) {
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
  }
  return "?";
}

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::number: return a.value == b.value;
    case Op::var: return true;
    case Op::pow: return a.num == b.num && a.den == b.den && *a.lhs == *b.lhs;
    case Op::call: return a.func == b.func && *a.lhs == *b.lhs;
    case Op::neg: return *a.lhs == *b.lhs;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw ParseError(what, at); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  static ExprPtr make(Op op, ExprPtr l, ExprPtr r = nullptr) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  ExprPtr expr() {
    ExprPtr l = term();
    for (;;) {
      if (accept('+')) l = make(Op::add, l, term());
      else if (accept('-')) l = make(Op::sub, l, term());
      else return l;
    }
  }

  ExprPtr term() {
    ExprPtr l = unary();
    for (;;) {
      if (accept('*')) l = make(Op::mul, l, unary());
      else if (accept('/')) l = make(Op::div, l, unary());
      else return l;
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (!accept('^')) return base;
    long n = 0, d = 1;
    if (accept('(')) {
      const bool minus = accept('-');
      n = integer();
      if (accept('/')) {
        const std::size_t at = pos_;
        d = integer();
        if (d == 0) fail_at("zero denominator in exponent", at);
      }
      expect(')');
      if (minus) n = -n;
    } else {
      const bool minus = accept('-');
      n = integer();
      if (minus) n = -n;
    }
    const long g = std::gcd(n, d);
    auto e = std::make_shared<Expr>();
    e->op = Op::pow;
    e->num = n / g;
    e->den = d / g;
    e->lhs = std::move(base);
    return e;
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 9) fail_at("exponent too large", start);
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "x") {
        auto e = std::make_shared<Expr>();
        e->op = Op::var;
        return e;
      }
      static constexpr Func funcs[] = {Func::exp, Func::log, Func::sin, Func::cos, Func::sqrt, Func::abs};
      for (Func f : funcs) {
        if (id == func_name(f)) {
          expect('(');
          auto e = std::make_shared<Expr>();
          e->op = Op::call;
          e->func = f;
          e->lhs = expr();
          expect(')');
          return e;
        }
      }
      fail_at("unknown identifier '" + id + "'", start);
    }
    if (accept('(')) {
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - b;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      const std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    auto e = std::make_shared<Expr>();
    e->op = Op::number;
    e->value = std::strtod(std::string(s_.substr(start, pos_ - start)).c_str(), nullptr);
    if (!std::isfinite(e->value)) fail_at("number out of range", start);
    return e;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline int precedence(Op op) {
  switch (op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    default: return 5;
  }
}

inline std::string print(const Expr& e, int context) {
  std::string out;
  const int p = precedence(e.op);
  switch (e.op) {
    case Op::number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      out = buf;
      break;
    }
    case Op::var: out = "x"; break;
    case Op::call: out = std::string(func_name(e.func)) + "(" + print(*e.lhs, 0) + ")"; break;
    case Op::neg: out = "-" + print(*e.lhs, p); break;
    case Op::pow: {
      out = print(*e.lhs, p + 1) + "^";
      if (e.den == 1 && e.num >= 0) out += std::to_string(e.num);
      else if (e.den == 1) out += "(" + std::to_string(e.num) + ")";
      else out += "(" + std::to_string(e.num) + "/" + std::to_string(e.den) + ")";
      break;
    }
    default: {
      const char* sym = e.op == Op::add ? " + " : e.op == Op::sub ? " - " : e.op == Op::mul ? " * " : " / ";
      // left-associative: the right operand needs parentheses at equal precedence
      out = print(*e.lhs, p) + sym + print(*e.rhs, p + 1);
      break;
    }
  }
  return p < context ? "(" + out + ")" : out;
}

}  // namespace detail

inline ExprPtr parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string to_string(const Expr& e) { return detail::print(e, 0); }

// Throws DomainError where the expression is undefined.
inline double evaluate(const Expr& e, double x) {
  switch (e.op) {
    case Op::number: return e.value;
    case Op::var: return x;
    case Op::add: return evaluate(*e.lhs, x) + evaluate(*e.rhs, x);
    case Op::sub: return evaluate(*e.lhs, x) - evaluate(*e.rhs, x);
    case Op::mul: return evaluate(*e.lhs, x) * evaluate(*e.rhs, x);
    case Op::div: {
      const double d = evaluate(*e.rhs, x);
      if (d == 0.0) throw DomainError("division by zero at x = " + std::to_string(x));
      return evaluate(*e.lhs, x) / d;
    }
    case Op::neg: return -evaluate(*e.lhs, x);
    case Op::pow: {
      const double b = evaluate(*e.lhs, x);
      if (e.den == 1) return std::pow(b, static_cast<double>(e.num));
      if (b < 0.0 && e.den % 2 == 0) throw DomainError("even root of a negative value at x = " + std::to_string(x));
      if (b == 0.0 && e.num < 0) throw DomainError("negative power of zero at x = " + std::to_string(x));
      const double r = std::pow(std::abs(b), static_cast<double>(e.num) / static_cast<double>(e.den));
      return b < 0.0 && e.num % 2 != 0 ? -r : r;
    }
    case Op::call: {
      const double v = evaluate(*e.lhs, x);
      switch (e.func) {
        case Func::exp: return std::exp(v);
        case Func::log:
          if (!(v > 0.0)) throw DomainError("log of a non-positive value at x = " + std::to_string(x));
          return std::log(v);
        case Func::sin: return std::sin(v);
        case Func::cos: return std::cos(v);
        case Func::sqrt:
          if (v < 0.0) throw DomainError("sqrt of a negative value at x = " + std::to_string(x));
          return std::sqrt(v);
        case Func::abs: return std::abs(v);
      }
    }
  }
  throw DomainError("malformed expression");
}

}  // namespace uniwkb::cli
