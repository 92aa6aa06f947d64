#pragma once

#include <string>
#include <vector>

#include "fbp/common.hpp"

namespace fbp {

// tiny arithmetic expression evaluator for config-supplied data functions.
// variables x1, x2; constant pi; functions sin cos tan exp log sqrt abs tanh;
// operators + - * / ^ with the usual precedence, ^ binds right
class Expression {
 public:
  Expression() = default;

  // throws ConfigError with a position on bad input
  static Expression parse(const std::string& src);

  double eval(double x1, double x2 = 0.0) const;
  bool uses_x2() const;
  bool empty() const { return code_.empty(); }
  const std::string& source() const { return src_; }

 private:
  enum class Op : int {
    push_const, push_x1, push_x2,
    add, sub, mul, div, pow, neg,
    fn_sin, fn_cos, fn_tan, fn_exp, fn_log, fn_sqrt, fn_abs, fn_tanh,
  };
  struct Instr {
    Op op;
    double value = 0.0;
  };

  std::vector<Instr> code_;
  std::string src_;

  friend class ExpressionParser;
};

}  // namespace fbp
