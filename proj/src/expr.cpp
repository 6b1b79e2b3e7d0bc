#include "gammaflow/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "gammaflow/error.hpp"

namespace gammaflow {

struct SequenceExpr::Node {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Neg, Pow, PowK, Exp } kind;
  double value = 0.0;
  long exponent = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const SequenceExpr::Node>;
using Kind = SequenceExpr::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<SequenceExpr::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "sequence expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::Add, lhs, term());
      else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    skip();
    if (pos_ < text_.size() && text_[pos_] == 'k' && !ident_continues(pos_ + 1)) {
      ++pos_;
      return make(Kind::PowK, base);
    }
    const bool paren = accept('(');
    skip();
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    long e = 0;
    const char* first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), e);
    if (ec != std::errc() || ptr == first) fail("exponent must be an integer literal or k");
    pos_ += static_cast<std::size_t>(ptr - first);
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      fail("exponent must be an integer");
    if (paren) expect(')');
    auto n = std::make_shared<SequenceExpr::Node>();
    n->kind = Kind::Pow;
    n->exponent = negative ? -e : e;
    n->lhs = base;
    return n;
  }

  bool ident_continues(std::size_t at) const {
    return at < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[at])) || text_[at] == '_');
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (c == 'k' && !ident_continues(pos_ + 1)) {
      ++pos_;
      return make(Kind::Var);
    }
    if (text_.substr(pos_, 3) == "exp" && !ident_continues(pos_ + 3)) {
      pos_ += 3;
      expect('(');
      NodePtr inner = expr();
      expect(')');
      return make(Kind::Exp, inner);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* first = text_.data() + pos_;
      auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - first);
      auto n = std::make_shared<SequenceExpr::Node>();
      n->kind = Kind::Number;
      n->value = v;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const SequenceExpr::Node& n, double k) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Var: return k;
    case Kind::Add: return eval(*n.lhs, k) + eval(*n.rhs, k);
    case Kind::Sub: return eval(*n.lhs, k) - eval(*n.rhs, k);
    case Kind::Mul: return eval(*n.lhs, k) * eval(*n.rhs, k);
    case Kind::Div: return eval(*n.lhs, k) / eval(*n.rhs, k);
    case Kind::Neg: return -eval(*n.lhs, k);
    case Kind::Pow: {
      const double b = eval(*n.lhs, k);
      double r = 1.0;
      for (long i = 0; i < std::labs(n.exponent); ++i) r *= b;
      return n.exponent < 0 ? 1.0 / r : r;
    }
    case Kind::PowK: return std::pow(eval(*n.lhs, k), k);
    case Kind::Exp: return std::exp(eval(*n.lhs, k));
  }
  return 0.0;
}

}  // namespace

SequenceExpr SequenceExpr::parse(std::string_view text) {
  SequenceExpr e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

double SequenceExpr::operator()(std::int64_t k) const { return eval(*root_, static_cast<double>(k)); }

Sequence SequenceExpr::as_sequence() const {
  auto root = root_;
  return [root](std::int64_t k) { return eval(*root, static_cast<double>(k)); };
}

}  // namespace gammaflow
