#pragma once

#include <functional>
#include <string>

namespace qopt {

/// Compiled real-valued expression of one variable t. Supports + - * / ^,
/// unary minus, parentheses, the constants pi and e, and the functions
/// sin cos tan exp log sqrt abs sinh cosh tanh.
class Expression {
 public:
  /// Throws ErrorCode::parse_error naming the offending position.
  explicit Expression(std::string text);

  double operator()(double t) const { return eval_(t); }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::function<double(double)> eval_;
};

}  // namespace qopt
