#include "curvflow/expr.hpp"

#include <cctype>
#include <cstdlib>

namespace curvflow::symfun {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("function expression, offset " + std::to_string(pos) + ": " + msg);
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (start == pos) fail("expected a function name");
    return text.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }
};

FamilyNode parse_fn(Cursor& c, int n) {
  const std::string name = c.ident();
  if (name == "mean") return FamilyNode::power_mean(1.0);
  if (name == "gauss") return FamilyNode::gauss_power();
  if (name == "pmean") {
    c.expect('(');
    const double r = c.number();
    c.expect(')');
    if (!(r > 0.0)) c.fail("pmean exponent must be positive");
    return FamilyNode::power_mean(r);
  }
  if (name == "sym") {
    c.expect('(');
    const double kf = c.number();
    c.expect(')');
    const int k = static_cast<int>(kf);
    if (kf != k || k < 1 || k > n) c.fail("sym degree must be an integer in 1..n");
    return FamilyNode::elem_sym_root(k);
  }
  if (name == "product") {
    c.expect('(');
    std::vector<std::pair<FamilyNode, double>> factors;
    do {
      FamilyNode child = parse_fn(c, n);
      c.expect('^');
      const double w = c.number();
      factors.emplace_back(std::move(child), w);
    } while (c.eat(','));
    c.expect(')');
    return FamilyNode::weighted_product(std::move(factors));
  }
  c.fail("unknown function '" + name + "'");
}

}  // namespace

FamilyNode parse_function_expr(const std::string& text, int n) {
  if (n < 1) throw ValidationError("dimension must be >= 1");
  Cursor c{text};
  FamilyNode node = parse_fn(c, n);
  c.skip_ws();
  if (c.pos != text.size()) c.fail("trailing characters");
  return node;
}

CurvatureSpec parse_spec(const std::string& text, int n, double beta) {
  return CurvatureSpec(parse_function_expr(text, n), n, beta);
}

}  // namespace curvflow::symfun
