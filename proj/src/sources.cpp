#include "convcool/sources.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <vector>

#include "convcool/errors.hpp"

namespace convcool {

SourceTerm example_source(int id) {
  const double pi = M_PI;
  switch (id) {
    case 1:
      return {[pi](double x, double y) { return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y); },
              "example1"};
    case 2:
      return {[](double x, double y) {
                return 1000.0 * ((x - 0.5) * (x - 0.5) + (y - 0.75) * (y - 0.75)) * x * (1.0 - x) *
                       y * (1.0 - y);
              },
              "example2"};
    case 3:
      return {[](double x, double y) {
                return 100.0 * std::exp(-100.0 * (x - 0.75) * (x - 0.75) -
                                        100.0 * (y - 0.75) * (y - 0.75));
              },
              "example3"};
    case 4:
      return {[](double x, double y) {
                const double a = (9.0 * x - 2.0) * (9.0 * x - 2.0) / 4.0 +
                                 (9.0 * y - 2.0) * (9.0 * y - 2.0) / 4.0;
                const double b = (9.0 * x - 4.0) * (9.0 * x - 4.0) / 4.0 +
                                 (9.0 * y - 7.0) * (9.0 * y - 7.0) / 4.0;
                return 75.0 * std::exp(-a) - 75.0 * std::exp(-b);
              },
              "example4"};
    default:
      throw InvalidArgument("example_source: id must be in 1..4");
  }
}

namespace {

// Small expression AST; nodes are immutable and shared by the closure.
struct Node {
  enum class Kind { constant, var_x, var_y, add, sub, mul, div, pow, neg, sin, cos, exp };
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::var_x: return x;
      case Kind::var_y: return y;
      case Kind::add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Kind::sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Kind::mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Kind::div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Kind::pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
      case Kind::neg: return -lhs->eval(x, y);
      case Kind::sin: return std::sin(lhs->eval(x, y));
      case Kind::cos: return std::cos(lhs->eval(x, y));
      case Kind::exp: return std::exp(lhs->eval(x, y));
    }
    return 0.0;
  }
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double v = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = v;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    auto node = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression error at position " << pos_ + 1 << ": " << what;
    throw ParseError(msg.str());
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expression() {
    auto node = term();
    while (true) {
      if (consume('+'))
        node = make(Node::Kind::add, node, term());
      else if (consume('-'))
        node = make(Node::Kind::sub, node, term());
      else
        return node;
    }
  }

  NodePtr term() {
    auto node = unary();
    while (true) {
      if (consume('*'))
        node = make(Node::Kind::mul, node, unary());
      else if (consume('/'))
        node = make(Node::Kind::div, node, unary());
      else
        return node;
    }
  }

  NodePtr unary() {
    if (consume('-')) return make(Node::Kind::neg, unary());
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (consume('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto node = expression();
      if (!consume(')')) fail("missing ')'");
      return node;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += size_t(end - begin);
    return make(Node::Kind::constant, nullptr, nullptr, v);
  }

  NodePtr identifier() {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Node::Kind::var_x);
    if (name == "y") return make(Node::Kind::var_y);
    if (name == "pi") return make(Node::Kind::constant, nullptr, nullptr, M_PI);
    Node::Kind fn;
    if (name == "sin")
      fn = Node::Kind::sin;
    else if (name == "cos")
      fn = Node::Kind::cos;
    else if (name == "exp")
      fn = Node::Kind::exp;
    else
      fail("unknown identifier '" + name + "'");
    if (peek() != '(') fail("'" + name + "' expects parentheses");
    ++pos_;
    auto arg = expression();
    if (!consume(')')) fail("missing ')'");
    return make(fn, arg);
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

SourceTerm parse_source_expression(const std::string& expr) {
  Parser parser(expr);
  NodePtr root = parser.parse();
  return {[root](double x, double y) { return root->eval(x, y); }, "custom"};
}

}  // namespace convcool
