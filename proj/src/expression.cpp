#include "k3dyn/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace k3dyn::expr {

enum class Op { constant, var, add, sub, mul, div, neg, pow, call };

struct Node {
  Op op = Op::constant;
  Complex value;
  int var = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
  bool real = true;
  bool bounded = true;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

bool is_real_constant(const NodePtr& n) { return n->op == Op::constant && n->value.imag() == 0; }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::invalid_argument, "expression column " + std::to_string(pos_ + 1) + ": " + msg);
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
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->real = a->real && b->real;
    switch (op) {
      case Op::add:
      case Op::sub:
      case Op::mul: n->bounded = a->bounded && b->bounded; break;
      case Op::div: n->bounded = a->bounded && b->op == Op::constant && b->value != 0.0; break;
      case Op::pow:
        n->bounded = a->bounded && is_real_constant(b) && b->value.real() >= 0;
        n->real = a->real && is_real_constant(b) && std::floor(b->value.real()) == b->value.real();
        break;
      default: break;
    }
    n->args = {std::move(a), std::move(b)};
    return fold(n);
  }

  // Constant subtrees collapse so that "1/2" counts as a nonzero constant.
  static NodePtr fold(const std::shared_ptr<Node>& n) {
    for (const auto& a : n->args)
      if (a->op != Op::constant) return n;
    if (n->op == Op::call) return n;
    auto c = std::make_shared<Node>();
    c->op = Op::constant;
    c->value = eval(*n, {});
    c->real = c->value.imag() == 0;
    c->bounded = std::isfinite(std::abs(c->value));
    return c;
  }

  NodePtr expr() {
    auto n = term();
    while (true) {
      if (accept('+')) n = binary(Op::add, n, term());
      else if (accept('-')) n = binary(Op::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    auto n = unary();
    while (true) {
      if (accept('*')) n = binary(Op::mul, n, unary());
      else if (accept('/')) n = binary(Op::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) {
      auto a = unary();
      auto n = std::make_shared<Node>();
      n->op = Op::neg;
      n->real = a->real;
      n->bounded = a->bounded;
      n->args = {a};
      return fold(n);
    }
    return power();
  }
  NodePtr power() {
    auto base = atom();
    if (accept('^')) return binary(Op::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char ch = s_[pos_];
    if (accept('(')) {
      auto n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (accept('(')) return call(name, start);
      auto n = std::make_shared<Node>();
      if (name == "x" || name == "y" || name == "z") {
        n->op = Op::var;
        n->var = name[0] - 'x';
        n->real = false;
        n->bounded = false;
      } else if (name == "i") {
        n->value = Complex(0, 1);
        n->real = false;
      } else if (name == "pi") {
        n->value = std::numbers::pi;
      } else {
        pos_ = start;
        fail("unknown name '" + name + "'");
      }
      return n;
    }
    fail(std::string("unexpected '") + ch + "'");
  }

  NodePtr call(const std::string& name, std::size_t start) {
    std::vector<NodePtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    static const std::vector<std::pair<std::string, std::size_t>> known = {
        {"re", 1}, {"im", 1}, {"abs", 1}, {"conj", 1}, {"fs", 1}, {"clip", 3}, {"sin", 1}, {"cos", 1}, {"sqrt", 1}};
    auto it = std::find_if(known.begin(), known.end(), [&](const auto& k) { return k.first == name; });
    if (it == known.end()) {
      pos_ = start;
      fail("unknown function '" + name + "'");
    }
    if (args.size() != it->second) {
      pos_ = start;
      fail(name + " takes " + std::to_string(it->second) + " argument(s)");
    }
    auto n = std::make_shared<Node>();
    n->op = Op::call;
    n->fn = name;
    const auto& a = args[0];
    if (name == "re" || name == "im" || name == "abs") {
      n->real = true;
      n->bounded = a->bounded;
    } else if (name == "conj") {
      n->real = a->real;
      n->bounded = a->bounded;
    } else if (name == "fs") {
      n->real = true;
      n->bounded = true;
    } else if (name == "clip") {
      n->real = true;
      n->bounded = is_real_constant(args[1]) && is_real_constant(args[2]);
      if (!n->bounded) {
        pos_ = start;
        fail("clip bounds must be real constants");
      }
    } else if (name == "sin" || name == "cos") {
      n->real = a->real;
      n->bounded = a->real || a->bounded;
    } else if (name == "sqrt") {
      n->real = false;
      n->bounded = a->bounded;
    }
    n->args = std::move(args);
    return fold(n);
  }

 public:
  static Complex eval(const Node& n, const std::array<Complex, 3>& v) {
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::var: return v[n.var];
      case Op::add: return eval(*n.args[0], v) + eval(*n.args[1], v);
      case Op::sub: return eval(*n.args[0], v) - eval(*n.args[1], v);
      case Op::mul: return eval(*n.args[0], v) * eval(*n.args[1], v);
      case Op::div: return eval(*n.args[0], v) / eval(*n.args[1], v);
      case Op::neg: return -eval(*n.args[0], v);
      case Op::pow: {
        const Complex b = eval(*n.args[0], v);
        const Complex e = eval(*n.args[1], v);
        if (e.imag() == 0 && std::floor(e.real()) == e.real() && std::fabs(e.real()) <= 64) {
          Complex r = 1.0;
          const int k = static_cast<int>(std::fabs(e.real()));
          for (int j = 0; j < k; ++j) r *= b;
          return e.real() < 0 ? 1.0 / r : r;
        }
        return std::pow(b, e);
      }
      case Op::call: {
        const Complex a = eval(*n.args[0], v);
        if (n.fn == "re") return a.real();
        if (n.fn == "im") return a.imag();
        if (n.fn == "abs") return std::abs(a);
        if (n.fn == "conj") return std::conj(a);
        if (n.fn == "fs") {
          const double m = std::norm(a);
          return std::isinf(m) ? 1.0 : m / (1.0 + m);
        }
        if (n.fn == "clip") {
          const double lo = eval(*n.args[1], v).real();
          const double hi = eval(*n.args[2], v).real();
          if (std::isnan(a.real())) return a.real();
          return std::clamp(a.real(), lo, hi);
        }
        if (n.fn == "sin") return std::sin(a);
        if (n.fn == "cos") return std::cos(a);
        if (n.fn == "sqrt") return std::sqrt(a);
        return 0.0;
      }
    }
    return 0.0;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  Parser p(text);
  e.root_ = p.parse();
  e.text_ = text;
  return e;
}

Complex Expression::evaluate(Complex x, Complex y, Complex z) const { return Parser::eval(*root_, {x, y, z}); }

Complex Expression::evaluate(const surface::FloatPoint& p) const {
  std::array<Complex, 3> v;
  for (int a = 0; a < 3; ++a)
    v[a] = p[a].w0 == 0.0 ? Complex(HUGE_VAL, 0.0) : p[a].w1 / p[a].w0;
  return Parser::eval(*root_, v);
}

bool Expression::bounded() const { return root_->bounded; }
bool Expression::real_valued() const { return root_->real; }

Expression parse_test_function(const std::string& text) {
  auto e = Expression::parse(text);
  if (!e.real_valued()) throw Error(ErrorKind::invalid_argument, "test function must be real-valued: " + text);
  if (!e.bounded())
    throw Error(ErrorKind::invalid_argument,
                "test function must be bounded (wrap coordinates in clip, fs, or real sin/cos): " + text);
  return e;
}

}  // namespace k3dyn::expr
