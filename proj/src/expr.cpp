#include "csturm/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "csturm/error.hpp"

namespace csturm {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class ExprParser {
public:
  explicit ExprParser(std::string_view s) : src_(s) {}

  Expr run() {
    e_.root_ = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return std::move(e_);
  }

private:
  using Op = Expr::Op;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::int32_t add(Expr::Node n) {
    e_.nodes_.push_back(n);
    return static_cast<std::int32_t>(e_.nodes_.size() - 1);
  }
  std::int32_t binary(Op op, std::int32_t l, std::int32_t r) {
    Expr::Node n;
    n.op = op;
    n.lhs = l;
    n.rhs = r;
    return add(n);
  }

  std::int32_t parse_expr() {
    std::int32_t l = parse_term();
    for (;;) {
      if (accept('+')) l = binary(Op::Add, l, parse_term());
      else if (accept('-')) l = binary(Op::Sub, l, parse_term());
      else return l;
    }
  }

  std::int32_t parse_term() {
    std::int32_t l = parse_unary();
    for (;;) {
      if (accept('*')) l = binary(Op::Mul, l, parse_unary());
      else if (accept('/')) l = binary(Op::Div, l, parse_unary());
      else return l;
    }
  }

  std::int32_t parse_unary() {
    if (accept('-')) return binary(Op::Neg, parse_unary(), -1);
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  std::int32_t parse_power() {
    std::int32_t base = parse_primary();
    if (!accept('^')) return base;
    bool paren = accept('(');
    int sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("non-integer exponent in power");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E' ||
                               std::isalpha(static_cast<unsigned char>(src_[pos_])))) {
      fail("non-integer exponent in power");
    }
    int value = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (paren) expect(')');
    Expr::Node n;
    n.op = Op::Pow;
    n.lhs = base;
    n.ipow = sign * value;
    return add(n);
  }

  std::int32_t parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t nd = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) fail("malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;
        fail("malformed exponent in number");
      }
    }
    double v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("malformed number");
    }
    Expr::Node n;
    n.op = Op::Const;
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        !(pos_ + 1 < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
      ++pos_;
      n.value = cd(0.0, v);
    } else {
      n.value = cd(v, 0.0);
    }
    if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      fail("unexpected identifier after number");
    }
    return add(n);
  }

  std::int32_t parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      std::int32_t inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      std::string_view id = src_.substr(start, pos_ - start);
      Expr::Node n;
      if (id == "x") {
        n.op = Op::X;
        return add(n);
      }
      if (id == "i") {
        n.value = cd(0.0, 1.0);
        return add(n);
      }
      if (id == "pi") {
        n.value = cd(std::numbers::pi, 0.0);
        return add(n);
      }
      static const std::pair<std::string_view, Op> funcs[] = {
          {"sqrt", Op::Sqrt}, {"exp", Op::Exp}, {"log", Op::Log},
          {"sin", Op::Sin},   {"cos", Op::Cos}, {"abs", Op::Abs}};
      for (const auto& [name, op] : funcs) {
        if (id == name) {
          expect('(');
          n.op = op;
          n.lhs = parse_expr();
          expect(')');
          return add(n);
        }
      }
      if (id == "piecewise") return parse_piecewise();
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::int32_t parse_piecewise() {
    expect('(');
    std::vector<std::int32_t> pieces{parse_expr()};
    std::vector<double> breaks;
    while (accept(',')) {
      std::size_t at = pos_;
      std::int32_t b = parse_expr();
      if (e_.node_depends_on_x(b)) {
        pos_ = at;
        fail("piecewise breakpoint must be constant");
      }
      cd bv = e_.eval_node(b, 0.0);
      if (bv.imag() != 0.0 || !std::isfinite(bv.real())) {
        pos_ = at;
        fail("piecewise breakpoint must be a finite real constant");
      }
      if (!breaks.empty() && !(bv.real() > breaks.back())) {
        pos_ = at;
        fail("piecewise breakpoints must be strictly increasing");
      }
      breaks.push_back(bv.real());
      expect(',');
      pieces.push_back(parse_expr());
    }
    expect(')');
    if (breaks.empty()) fail("piecewise needs at least one breakpoint");
    Expr::Node n;
    n.op = Op::Piecewise;
    n.first = static_cast<std::int32_t>(e_.breaks_.size());
    n.count = static_cast<std::int32_t>(breaks.size());
    n.lhs = static_cast<std::int32_t>(e_.pieces_.size());
    e_.breaks_.insert(e_.breaks_.end(), breaks.begin(), breaks.end());
    e_.pieces_.insert(e_.pieces_.end(), pieces.begin(), pieces.end());
    return add(n);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Expr e_;
};

Expr Expr::parse(std::string_view source) { return ExprParser(source).run(); }

namespace {

cd ipow(cd z, int n) {
  if (n == 0) return cd(1.0, 0.0);
  bool inv = n < 0;
  unsigned m = inv ? static_cast<unsigned>(-(long long)n) : static_cast<unsigned>(n);
  cd r(1.0, 0.0), b = z;
  if (z.imag() == 0.0) {
    double rr = 1.0, rb = z.real();
    while (m) {
      if (m & 1u) rr *= rb;
      rb *= rb;
      m >>= 1u;
    }
    return inv ? cd(1.0 / rr, 0.0) : cd(rr, 0.0);
  }
  while (m) {
    if (m & 1u) r *= b;
    b *= b;
    m >>= 1u;
  }
  return inv ? 1.0 / r : r;
}

// Real-argument fast paths keep real potentials exactly real.
cd mul(cd a, cd b) {
  if (a.imag() == 0.0 && b.imag() == 0.0) return cd(a.real() * b.real(), 0.0);
  return a * b;
}
cd div(cd a, cd b) {
  if (b.imag() == 0.0) return cd(a.real() / b.real(), a.imag() / b.real());
  return a / b;
}

}  // namespace

cd Expr::eval_node(std::int32_t i, double x) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::X: return cd(x, 0.0);
    case Op::Add: return eval_node(n.lhs, x) + eval_node(n.rhs, x);
    case Op::Sub: return eval_node(n.lhs, x) - eval_node(n.rhs, x);
    case Op::Mul: return mul(eval_node(n.lhs, x), eval_node(n.rhs, x));
    case Op::Div: return div(eval_node(n.lhs, x), eval_node(n.rhs, x));
    case Op::Neg: return -eval_node(n.lhs, x);
    case Op::Pow: return ipow(eval_node(n.lhs, x), n.ipow);
    case Op::Sqrt: {
      cd z = eval_node(n.lhs, x);
      if (z.imag() == 0.0 && z.real() >= 0.0) return cd(std::sqrt(z.real()), 0.0);
      return std::sqrt(z);
    }
    case Op::Exp: {
      cd z = eval_node(n.lhs, x);
      if (z.imag() == 0.0) return cd(std::exp(z.real()), 0.0);
      return std::exp(z);
    }
    case Op::Log: {
      cd z = eval_node(n.lhs, x);
      if (z.imag() == 0.0 && z.real() > 0.0) return cd(std::log(z.real()), 0.0);
      return std::log(z);
    }
    case Op::Sin: {
      cd z = eval_node(n.lhs, x);
      if (z.imag() == 0.0) return cd(std::sin(z.real()), 0.0);
      return std::sin(z);
    }
    case Op::Cos: {
      cd z = eval_node(n.lhs, x);
      if (z.imag() == 0.0) return cd(std::cos(z.real()), 0.0);
      return std::cos(z);
    }
    case Op::Abs: return cd(std::abs(eval_node(n.lhs, x)), 0.0);
    case Op::Piecewise: {
      const double* b = breaks_.data() + n.first;
      std::int32_t k = static_cast<std::int32_t>(std::upper_bound(b, b + n.count, x) - b);
      return eval_node(pieces_[static_cast<std::size_t>(n.lhs + k)], x);
    }
  }
  return cd(0.0, 0.0);
}

namespace {

int precedence(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

const char* func_name(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Abs: return "abs";
    default: return "";
  }
}

}  // namespace

void Expr::unparse_node(std::int32_t i, int min_prec, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  int prec = precedence(n.op);
  // parsed constants are nonnegative and purely real or purely imaginary
  bool paren = prec < min_prec;
  if (paren) out += '(';
  switch (n.op) {
    case Op::Const:
      if (n.value.imag() != 0.0) {
        out += format_double(n.value.imag());
        out += 'i';
      } else {
        out += format_double(n.value.real());
      }
      break;
    case Op::X: out += 'x'; break;
    case Op::Add:
    case Op::Sub:
      unparse_node(n.lhs, 1, out);
      out += n.op == Op::Add ? " + " : " - ";
      unparse_node(n.rhs, 2, out);
      break;
    case Op::Mul:
    case Op::Div:
      unparse_node(n.lhs, 2, out);
      out += n.op == Op::Mul ? "*" : "/";
      unparse_node(n.rhs, 3, out);
      break;
    case Op::Neg:
      out += '-';
      unparse_node(n.lhs, 3, out);
      break;
    case Op::Pow:
      unparse_node(n.lhs, 5, out);
      out += '^';
      out += std::to_string(n.ipow);
      break;
    case Op::Piecewise:
      out += "piecewise(";
      for (std::int32_t k = 0; k <= n.count; ++k) {
        if (k > 0) {
          out += ", ";
          out += format_double(breaks_[static_cast<std::size_t>(n.first + k - 1)]);
          out += ", ";
        }
        unparse_node(pieces_[static_cast<std::size_t>(n.lhs + k)], 0, out);
      }
      out += ')';
      break;
    default:
      out += func_name(n.op);
      out += '(';
      unparse_node(n.lhs, 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

std::string Expr::unparse() const {
  std::string out;
  unparse_node(root_, 0, out);
  return out;
}

bool Expr::equal_node(std::int32_t i, const Expr& o, std::int32_t j) const {
  const Node& a = nodes_[static_cast<std::size_t>(i)];
  const Node& b = o.nodes_[static_cast<std::size_t>(j)];
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value;
    case Op::X: return true;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return equal_node(a.lhs, o, b.lhs) && equal_node(a.rhs, o, b.rhs);
    case Op::Pow: return a.ipow == b.ipow && equal_node(a.lhs, o, b.lhs);
    case Op::Piecewise:
      if (a.count != b.count) return false;
      for (std::int32_t k = 0; k < a.count; ++k) {
        if (breaks_[static_cast<std::size_t>(a.first + k)] !=
            o.breaks_[static_cast<std::size_t>(b.first + k)]) {
          return false;
        }
      }
      for (std::int32_t k = 0; k <= a.count; ++k) {
        if (!equal_node(pieces_[static_cast<std::size_t>(a.lhs + k)], o,
                        o.pieces_[static_cast<std::size_t>(b.lhs + k)])) {
          return false;
        }
      }
      return true;
    default: return equal_node(a.lhs, o, b.lhs);
  }
}

bool Expr::operator==(const Expr& other) const {
  if (root_ < 0 || other.root_ < 0) return root_ == other.root_;
  return equal_node(root_, other, other.root_);
}

bool Expr::node_depends_on_x(std::int32_t i) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.op) {
    case Op::Const: return false;
    case Op::X: return true;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return node_depends_on_x(n.lhs) || node_depends_on_x(n.rhs);
    case Op::Piecewise: return true;
    default: return node_depends_on_x(n.lhs);
  }
}

bool Expr::depends_on_x() const { return root_ >= 0 && node_depends_on_x(root_); }

std::vector<double> Expr::breakpoints() const {
  std::vector<double> out;
  for (const Node& n : nodes_) {
    if (n.op == Op::Piecewise) {
      out.insert(out.end(), breaks_.begin() + n.first, breaks_.begin() + n.first + n.count);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace csturm
