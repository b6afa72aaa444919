#include "diffgal/expr.hpp"

#include <cctype>

#include "diffgal/errors.hpp"

namespace diffgal {

namespace {

class Parser {
 public:
  Parser(std::string_view s, const std::set<std::string>& symbols) : s_(s), symbols_(symbols) {}

  RationalFunction parse_all() {
    RationalFunction r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

  MatrixRF parse_matrix_all() {
    std::vector<std::vector<RationalFunction>> rows;
    expect('[');
    do {
      expect('[');
      std::vector<RationalFunction> row;
      do row.push_back(expr());
      while (accept(','));
      expect(']');
      rows.push_back(std::move(row));
    } while (accept(','));
    expect(']');
    skip();
    if (pos_ != s_.size()) fail("trailing input after matrix");
    for (const auto& r : rows)
      if (r.size() != rows[0].size()) fail("ragged matrix rows");
    return MatrixRF::from_rows(rows);
  }

 private:
  std::string_view s_;
  const std::set<std::string>& symbols_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'",
                     std::to_string(pos_));
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

  RationalFunction expr() {
    RationalFunction acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  RationalFunction term() {
    RationalFunction acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        RationalFunction d = unary();
        if (d.is_zero()) fail("division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  long exponent() {
    bool paren = accept('(');
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (paren) expect(')');
    return neg ? -e : e;
  }

  RationalFunction power() {
    RationalFunction base = atom();
    if (accept('^')) {
      long e = exponent();
      if (e < 0 && base.is_zero()) fail("zero to a negative power");
      return base.pow(e);
    }
    return base;
  }

  RationalFunction atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      expect(')');
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RationalFunction(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!symbols_.count(name)) {
        pos_ = start;
        fail("undeclared symbol '" + name + "'");
      }
      return RationalFunction(Polynomial::var(name));
    }
    fail(std::string("unexpected '") + c + "'");
  }
};

}  // namespace

RationalFunction parse_expr(std::string_view text, const std::set<std::string>& symbols) {
  return Parser(text, symbols).parse_all();
}

MatrixRF parse_matrix(std::string_view text, const std::set<std::string>& symbols) {
  return Parser(text, symbols).parse_matrix_all();
}

}  // namespace diffgal
