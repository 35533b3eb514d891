// Arithmetic expressions in one variable x: literals, + - * / ^, sqrt, ln,
// exp. Parsed to a small AST that supports symbolic differentiation with
// constant folding, so expression-defined boundary data can supply the
// analytic derivatives the solver requires. The corner exponent alpha is
// never inferred from an expression; callers declare it.
#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "darboux/abel.hpp"

namespace darboux {
namespace expr {

struct ParseError : std::invalid_argument {
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Num, Var, Add, Sub, Mul, Div, Pow, Sqrt, Ln, Exp };
  Kind kind;
  double value = 0.0;  // Num
  NodePtr a, b;

  Node(Kind k, double v) : kind(k), value(v) {}
  Node(Kind k, NodePtr x, NodePtr y = nullptr) : kind(k), a(std::move(x)), b(std::move(y)) {}
};

inline NodePtr num(double v) { return std::make_shared<Node>(Node::Kind::Num, v); }
inline NodePtr var() { return std::make_shared<Node>(Node::Kind::Var, 0.0); }

inline bool is_num(const NodePtr& n, double v) {
  return n->kind == Node::Kind::Num && n->value == v;
}

inline NodePtr make(Node::Kind k, NodePtr a, NodePtr b = nullptr) {
  // constant folding and the obvious identities keep derivative trees small
  auto both_num = [&] {
    return a->kind == Node::Kind::Num && b && b->kind == Node::Kind::Num;
  };
  switch (k) {
    case Node::Kind::Add:
      if (both_num()) return num(a->value + b->value);
      if (is_num(a, 0.0)) return b;
      if (is_num(b, 0.0)) return a;
      break;
    case Node::Kind::Sub:
      if (both_num()) return num(a->value - b->value);
      if (is_num(b, 0.0)) return a;
      break;
    case Node::Kind::Mul:
      if (both_num()) return num(a->value * b->value);
      if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
      if (is_num(a, 1.0)) return b;
      if (is_num(b, 1.0)) return a;
      break;
    case Node::Kind::Div:
      if (both_num() && b->value != 0.0) return num(a->value / b->value);
      if (is_num(a, 0.0)) return num(0.0);
      if (is_num(b, 1.0)) return a;
      break;
    case Node::Kind::Pow:
      if (both_num()) return num(std::pow(a->value, b->value));
      if (is_num(b, 1.0)) return a;
      if (is_num(b, 0.0)) return num(1.0);
      break;
    case Node::Kind::Sqrt:
    case Node::Kind::Ln:
    case Node::Kind::Exp:
      if (a->kind == Node::Kind::Num) {
        const double v = a->value;
        if (k == Node::Kind::Sqrt) return num(std::sqrt(v));
        if (k == Node::Kind::Ln) return num(std::log(v));
        return num(std::exp(v));
      }
      break;
    default:
      break;
  }
  return std::make_shared<Node>(k, std::move(a), std::move(b));
}

inline double eval(const NodePtr& n, double x) {
  switch (n->kind) {
    case Node::Kind::Num: return n->value;
    case Node::Kind::Var: return x;
    case Node::Kind::Add: return eval(n->a, x) + eval(n->b, x);
    case Node::Kind::Sub: return eval(n->a, x) - eval(n->b, x);
    case Node::Kind::Mul: return eval(n->a, x) * eval(n->b, x);
    case Node::Kind::Div: return eval(n->a, x) / eval(n->b, x);
    case Node::Kind::Pow: return std::pow(eval(n->a, x), eval(n->b, x));
    case Node::Kind::Sqrt: return std::sqrt(eval(n->a, x));
    case Node::Kind::Ln: return std::log(eval(n->a, x));
    case Node::Kind::Exp: return std::exp(eval(n->a, x));
  }
  return 0.0;
}

inline NodePtr differentiate(const NodePtr& n) {
  using K = Node::Kind;
  switch (n->kind) {
    case K::Num: return num(0.0);
    case K::Var: return num(1.0);
    case K::Add: return make(K::Add, differentiate(n->a), differentiate(n->b));
    case K::Sub: return make(K::Sub, differentiate(n->a), differentiate(n->b));
    case K::Mul:
      return make(K::Add, make(K::Mul, differentiate(n->a), n->b),
                  make(K::Mul, n->a, differentiate(n->b)));
    case K::Div:
      return make(K::Div,
                  make(K::Sub, make(K::Mul, differentiate(n->a), n->b),
                       make(K::Mul, n->a, differentiate(n->b))),
                  make(K::Mul, n->b, n->b));
    case K::Pow:
      if (n->b->kind == K::Num) {
        const double c = n->b->value;
        return make(K::Mul, num(c),
                    make(K::Mul, make(K::Pow, n->a, num(c - 1.0)), differentiate(n->a)));
      }
      // u^v = exp(v ln u)
      return make(K::Mul, make(K::Pow, n->a, n->b),
                  make(K::Add, make(K::Mul, differentiate(n->b), make(K::Ln, n->a)),
                       make(K::Div, make(K::Mul, n->b, differentiate(n->a)), n->a)));
    case K::Sqrt:
      return make(K::Div, differentiate(n->a),
                  make(K::Mul, num(2.0), make(K::Sqrt, n->a)));
    case K::Ln: return make(K::Div, differentiate(n->a), n->a);
    case K::Exp: return make(K::Mul, make(K::Exp, n->a), differentiate(n->a));
  }
  return num(0.0);
}

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip();
    if (pos_ != s_.size())
      throw ParseError("expression: trailing input at position " + std::to_string(pos_));
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool consume(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr e = term();
    for (;;) {
      if (consume('+')) e = make(Node::Kind::Add, e, term());
      else if (consume('-')) e = make(Node::Kind::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (consume('*')) e = make(Node::Kind::Mul, e, unary());
      else if (consume('/')) e = make(Node::Kind::Div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (consume('-')) return make(Node::Kind::Sub, num(0.0), unary());
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) return make(Node::Kind::Pow, base, unary());  // right assoc
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("expression: unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!consume(')')) throw ParseError("expression: missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return num(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string name = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "x") return var();
      if (name == "sqrt" || name == "ln" || name == "exp") {
        if (!consume('(')) throw ParseError("expression: '" + name + "' needs '('");
        NodePtr arg = expression();
        if (!consume(')')) throw ParseError("expression: missing ')'");
        if (name == "sqrt") return make(Node::Kind::Sqrt, arg);
        if (name == "ln") return make(Node::Kind::Ln, arg);
        return make(Node::Kind::Exp, arg);
      }
      throw ParseError("expression: unknown identifier '" + name + "'");
    }
    throw ParseError(std::string("expression: unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline NodePtr parse(const std::string& s) { return detail::Parser(s).parse(); }

/// Build the derivative family of an expression: derivs[j] evaluates the j-th
/// symbolic derivative. alpha must be declared by the caller.
inline SingularFunction to_singular_function(const NodePtr& root, double alpha,
                                             int nderiv) {
  std::vector<std::function<double(double)>> d;
  NodePtr cur = root;
  for (int j = 0; j <= nderiv; ++j) {
    d.emplace_back([cur](double x) { return eval(cur, x); });
    cur = differentiate(cur);
  }
  return SingularFunction(alpha, std::move(d));
}

}  // namespace expr
}  // namespace darboux
