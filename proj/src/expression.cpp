#include "qopt/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "qopt/errors.hpp"
#include "qopt/linalg.hpp"

namespace qopt {

namespace {

using Fn = std::function<double(double)>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Fn parse() {
    Fn f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    raise(ErrorCode::parse_error, "parametric", "expression",
          what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

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

  Fn expr() {
    Fn lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = [a = lhs, b = term()](double t) { return a(t) + b(t); };
      } else if (accept('-')) {
        lhs = [a = lhs, b = term()](double t) { return a(t) - b(t); };
      } else {
        return lhs;
      }
    }
  }

  Fn term() {
    Fn lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = [a = lhs, b = unary()](double t) { return a(t) * b(t); };
      } else if (accept('/')) {
        lhs = [a = lhs, b = unary()](double t) { return a(t) / b(t); };
      } else {
        return lhs;
      }
    }
  }

  Fn unary() {
    if (accept('-')) return [a = unary()](double t) { return -a(t); };
    if (accept('+')) return unary();
    return power();
  }

  Fn power() {
    Fn base = primary();
    if (accept('^')) {
      return [a = base, b = unary()](double t) { return std::pow(a(t), b(t)); };
    }
    return base;
  }

  Fn primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Fn inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* first = s_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - first);
      return [value](double) { return value; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "t") return [](double t) { return t; };
      if (name == "pi") return [](double) { return kPi; };
      if (name == "e") return [](double) { return std::exp(1.0); };
      static const std::map<std::string, double (*)(double)> functions = {
          {"sin", [](double x) { return std::sin(x); }},
          {"cos", [](double x) { return std::cos(x); }},
          {"tan", [](double x) { return std::tan(x); }},
          {"exp", [](double x) { return std::exp(x); }},
          {"log", [](double x) { return std::log(x); }},
          {"sqrt", [](double x) { return std::sqrt(x); }},
          {"abs", [](double x) { return std::abs(x); }},
          {"sinh", [](double x) { return std::sinh(x); }},
          {"cosh", [](double x) { return std::cosh(x); }},
          {"tanh", [](double x) { return std::tanh(x); }},
      };
      const auto it = functions.find(name);
      if (it == functions.end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      Fn arg = expr();
      if (!accept(')')) fail("expected ')'");
      return [f = it->second, a = std::move(arg)](double t) { return f(a(t)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string text) : text_(std::move(text)) {
  eval_ = Parser(text_).parse();
}

}  // namespace qopt
