#include "hypan/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hypan {

namespace {

struct Parser {
  const std::string& text;
  const std::vector<std::string>& vars;
  int line_offset;
  size_t pos = 0;

  Parser(const std::string& t, const std::vector<std::string>& v, int lo)
      : text(t), vars(v), line_offset(lo) {}

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "parse error at line " << (line + line_offset) << ", column " << col << ": " << msg;
    throw config_error(os.str());
  }

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

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  int nvars() const { return static_cast<int>(vars.size()); }

  Polynomial parse_expr() {
    Polynomial lhs = parse_term();
    while (true) {
      skip_ws();
      if (eat('+')) {
        lhs = lhs + parse_term();
      } else if (eat('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Polynomial parse_term() {
    Polynomial lhs = parse_factor();
    while (true) {
      skip_ws();
      if (eat('*')) {
        lhs = lhs * parse_factor();
      } else {
        return lhs;
      }
    }
  }

  Polynomial parse_factor() {
    Polynomial base = parse_unary();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) fail("expected nonnegative integer exponent after '^'");
      int k = std::atoi(text.substr(start, pos - start).c_str());
      if (k > 64) fail("exponent too large");
      return base.pow(k);
    }
    return base;
  }

  Polynomial parse_unary() {
    skip_ws();
    if (eat('-')) return -parse_unary();
    if (eat('+')) return parse_unary();
    return parse_primary();
  }

  Polynomial parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Polynomial inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial parse_number() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == 'e' || text[pos] == 'E' ||
            ((text[pos] == '+' || text[pos] == '-') && pos > start &&
             (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
      ++pos;
    // Reject "2e" followed by nothing numeric as exponent of scientific form.
    std::string num = text.substr(start, pos - start);
    char* end = nullptr;
    double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0') fail("bad numeric literal '" + num + "'");
    // Trailing 'i' glued to a number means an imaginary literal.
    if (pos < text.size() && text[pos] == 'i' &&
        (pos + 1 >= text.size() ||
         !(std::isalnum(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '_'))) {
      ++pos;
      return Polynomial::constant(nvars(), cplx(0.0, v));
    }
    return Polynomial::constant(nvars(), cplx(v, 0.0));
  }

  Polynomial parse_name() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);
    if (name == "i") return Polynomial::constant(nvars(), cplx(0.0, 1.0));
    for (int k = 0; k < nvars(); ++k)
      if (vars[static_cast<size_t>(k)] == name) return Polynomial::variable(nvars(), k);
    fail("unknown variable '" + name + "'");
  }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables,
                            int line_offset) {
  Parser p(text, variables, line_offset);
  Polynomial out = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

cplx parse_complex(const std::string& text) {
  Polynomial p = parse_polynomial(text, {});
  return p.eval(std::span<const double>{});
}

}  // namespace hypan
