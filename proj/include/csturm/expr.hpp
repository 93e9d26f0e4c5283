#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace csturm {

using cd = std::complex<double>;

// Expression tree for a complex potential V(x).
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ['-'|'+'] integer | '(' ['-'|'+'] integer ')'
//   primary := number ['i'] | 'i' | 'x' | 'pi' | '(' expr ')' | func '(' args ')'
//   func    := sqrt | exp | log | sin | cos | abs | piecewise
//
// piecewise(e0, b1, e1, ..., bk, ek) is e0 on x < b1, e_j on b_j <= x < b_{j+1},
// ek on x >= bk. Breakpoints must be real constants and strictly increasing.
class Expr {
public:
  enum class Op : std::uint8_t {
    Const, X, Add, Sub, Mul, Div, Neg, Pow,
    Sqrt, Exp, Log, Sin, Cos, Abs, Piecewise
  };

  struct Node {
    Op op = Op::Const;
    std::int32_t lhs = -1;   // first operand / argument
    std::int32_t rhs = -1;   // second operand
    std::int32_t ipow = 0;   // Pow exponent
    std::int32_t first = 0;  // Piecewise: offset into pieces_/breaks_
    std::int32_t count = 0;  // Piecewise: number of breakpoints
    cd value{};              // Const
  };

  static Expr parse(std::string_view source);

  cd eval(double x) const { return eval_node(root_, x); }
  std::string unparse() const;

  // All piecewise breakpoints, sorted and unique.
  std::vector<double> breakpoints() const;
  bool depends_on_x() const;

  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::int32_t root() const { return root_; }

private:
  friend class ExprParser;

  cd eval_node(std::int32_t i, double x) const;
  void unparse_node(std::int32_t i, int min_prec, std::string& out) const;
  bool equal_node(std::int32_t i, const Expr& o, std::int32_t j) const;
  bool node_depends_on_x(std::int32_t i) const;

  std::vector<Node> nodes_;
  std::vector<std::int32_t> pieces_;  // piecewise child expressions
  std::vector<double> breaks_;        // piecewise breakpoints
  std::int32_t root_ = -1;
};

// Shortest decimal text that reads back to exactly v.
std::string format_double(double v);

}  // namespace csturm
