#include "fbp/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fbp {

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& src) : src_(src) {}

  Expression run() {
    Expression e;
    e.src_ = src_;
    parse_sum(e.code_);
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    if (e.code_.empty()) fail("empty expression");
    return e;
  }

 private:
  using Code = std::vector<Expression::Instr>;
  const std::string& src_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(what + " at position " + std::to_string(pos_) + " in '" + src_ + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void parse_sum(Code& out) {
    parse_product(out);
    for (;;) {
      if (eat('+')) {
        parse_product(out);
        out.push_back({Expression::Op::add});
      } else if (eat('-')) {
        parse_product(out);
        out.push_back({Expression::Op::sub});
      } else {
        return;
      }
    }
  }

  void parse_product(Code& out) {
    parse_unary(out);
    for (;;) {
      if (eat('*')) {
        parse_unary(out);
        out.push_back({Expression::Op::mul});
      } else if (eat('/')) {
        parse_unary(out);
        out.push_back({Expression::Op::div});
      } else {
        return;
      }
    }
  }

  void parse_unary(Code& out) {
    if (eat('-')) {
      parse_unary(out);
      out.push_back({Expression::Op::neg});
      return;
    }
    parse_power(out);
  }

  void parse_power(Code& out) {
    parse_primary(out);
    if (eat('^')) {
      parse_unary(out);  // right associative, allows 2^-3
      out.push_back({Expression::Op::pow});
    }
  }

  void parse_primary(Code& out) {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      parse_sum(out);
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      out.push_back({Expression::Op::push_const, v});
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      if (name == "x1") {
        out.push_back({Expression::Op::push_x1});
        return;
      }
      if (name == "x2") {
        out.push_back({Expression::Op::push_x2});
        return;
      }
      if (name == "pi") {
        out.push_back({Expression::Op::push_const, M_PI});
        return;
      }
      Expression::Op fn;
      if (name == "sin") fn = Expression::Op::fn_sin;
      else if (name == "cos") fn = Expression::Op::fn_cos;
      else if (name == "tan") fn = Expression::Op::fn_tan;
      else if (name == "exp") fn = Expression::Op::fn_exp;
      else if (name == "log") fn = Expression::Op::fn_log;
      else if (name == "sqrt") fn = Expression::Op::fn_sqrt;
      else if (name == "abs") fn = Expression::Op::fn_abs;
      else if (name == "tanh") fn = Expression::Op::fn_tanh;
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!eat('(')) fail("expected '(' after function name");
      parse_sum(out);
      if (!eat(')')) fail("expected ')'");
      out.push_back({fn});
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

Expression Expression::parse(const std::string& src) { return ExpressionParser(src).run(); }

double Expression::eval(double x1, double x2) const {
  // stack depth is bounded by the number of push instructions; config
  // expressions are tiny, so a local buffer covers the common case
  double local[64];
  std::vector<double> heap;
  double* stack = local;
  if (code_.size() + 1 > 64) {
    heap.resize(code_.size() + 1);
    stack = heap.data();
  }
  int top = -1;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::push_const: stack[++top] = in.value; break;
      case Op::push_x1: stack[++top] = x1; break;
      case Op::push_x2: stack[++top] = x2; break;
      case Op::add: --top; stack[top] += stack[top + 1]; break;
      case Op::sub: --top; stack[top] -= stack[top + 1]; break;
      case Op::mul: --top; stack[top] *= stack[top + 1]; break;
      case Op::div: --top; stack[top] /= stack[top + 1]; break;
      case Op::pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
      case Op::neg: stack[top] = -stack[top]; break;
      case Op::fn_sin: stack[top] = std::sin(stack[top]); break;
      case Op::fn_cos: stack[top] = std::cos(stack[top]); break;
      case Op::fn_tan: stack[top] = std::tan(stack[top]); break;
      case Op::fn_exp: stack[top] = std::exp(stack[top]); break;
      case Op::fn_log: stack[top] = std::log(stack[top]); break;
      case Op::fn_sqrt: stack[top] = std::sqrt(stack[top]); break;
      case Op::fn_abs: stack[top] = std::abs(stack[top]); break;
      case Op::fn_tanh: stack[top] = std::tanh(stack[top]); break;
    }
  }
  return stack[0];
}

bool Expression::uses_x2() const {
  for (const Instr& in : code_)
    if (in.op == Op::push_x2) return true;
  return false;
}

}  // namespace fbp
