#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "stabcoh/field.hpp"
#include "stabcoh/monomial.hpp"

namespace stabcoh {

// Presentation text `F101[x,y]/(x^3,y^3)` or `Q[x,y,z]/(x*y - z^2)` parsed to
// a field-agnostic form.  Semantic checks (homogeneity, degrees, minimality)
// happen when the typed ring is built, since they can depend on the field.
struct ParsedPresentation {
  FieldSpec field;
  std::vector<std::string> vars;
  std::vector<IntPolynomial> gens;
  std::string text;
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }
  std::size_t pos() const { return pos_; }

  long long integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    if (pos_ - start > 12) throw ParseError("integer literal too large", start);
    return std::stoll(s_.substr(start, pos_ - start));
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start || std::isdigit(static_cast<unsigned char>(s_[start])))
      fail("expected a variable name");
    return s_.substr(start, pos_ - start);
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

inline int var_index(Cursor& c, const std::string& name, const std::vector<std::string>& vars) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  c.fail("unknown variable '" + name + "'");
}

// term := factor ('*' factor)*;  factor := integer | var ('^' integer)?
inline void parse_term(Cursor& c, const std::vector<std::string>& vars, long long sign,
                       IntPolynomial& out) {
  long long coeff = sign;
  Monomial mono = Monomial::one(static_cast<int>(vars.size()));
  bool first = true;
  for (;;) {
    if (!first) {
      if (!c.accept('*')) break;
    }
    first = false;
    char ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      coeff *= c.integer();
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      int vi = var_index(c, c.ident(), vars);
      int exp = 1;
      if (c.accept('^')) {
        long long e = c.integer();
        if (e < 0 || e > 64) c.fail("exponent out of range");
        exp = static_cast<int>(e);
      }
      mono.e[vi] += exp;
    } else {
      c.fail("expected a coefficient or variable");
    }
  }
  int_poly_add(out, mono, coeff);
}

inline IntPolynomial parse_poly(Cursor& c, const std::vector<std::string>& vars) {
  IntPolynomial p;
  long long sign = 1;
  if (c.accept('-')) sign = -1;
  else c.accept('+');
  parse_term(c, vars, sign, p);
  for (;;) {
    if (c.accept('+')) sign = 1;
    else if (c.accept('-')) sign = -1;
    else break;
    parse_term(c, vars, sign, p);
  }
  return p;
}

}  // namespace detail

inline ParsedPresentation parse_presentation_text(const std::string& text) {
  detail::Cursor c(text);
  ParsedPresentation out;
  out.text = text;
  char f = c.peek();
  if (f == 'Q') {
    c.expect('Q');
    out.field.characteristic = 0;
  } else if (f == 'F') {
    c.expect('F');
    long long p = c.integer();
    if (p < 2) c.fail("field characteristic must be a prime >= 2");
    for (long long q = 2; q * q <= p; ++q)
      if (p % q == 0) c.fail("field characteristic must be prime");
    if (p > (1LL << 31)) c.fail("prime too large");
    out.field.characteristic = p;
  } else {
    c.fail("expected field 'Q' or 'F<p>'");
  }
  c.expect('[');
  out.vars.push_back(c.ident());
  while (c.accept(',')) out.vars.push_back(c.ident());
  for (std::size_t i = 0; i < out.vars.size(); ++i)
    for (std::size_t j = i + 1; j < out.vars.size(); ++j)
      if (out.vars[i] == out.vars[j]) c.fail("duplicate variable '" + out.vars[i] + "'");
  c.expect(']');
  c.expect('/');
  c.expect('(');
  if (c.peek() == ')') c.fail("presentation needs at least one relation (regular rings are out of scope)");
  out.gens.push_back(detail::parse_poly(c, out.vars));
  while (c.accept(',')) out.gens.push_back(detail::parse_poly(c, out.vars));
  c.expect(')');
  if (!c.done()) c.fail("trailing input");
  return out;
}

// Module spec: "k", or a comma-separated list of polynomials over the ring's
// variables (optionally parenthesised) presenting the cyclic module R/J.
struct ParsedModule {
  bool is_residue_field = false;
  std::vector<IntPolynomial> gens;
  std::string text;
};

inline ParsedModule parse_module_text(const std::string& text, const std::vector<std::string>& vars) {
  ParsedModule out;
  out.text = text;
  detail::Cursor c(text);
  if (c.peek() == 'k') {
    c.expect('k');
    if (!c.done()) c.fail("trailing input after 'k'");
    out.is_residue_field = true;
    return out;
  }
  bool paren = c.accept('(');
  out.gens.push_back(detail::parse_poly(c, vars));
  while (c.accept(',')) out.gens.push_back(detail::parse_poly(c, vars));
  if (paren) c.expect(')');
  if (!c.done()) c.fail("trailing input");
  return out;
}

}  // namespace stabcoh
