#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "stabcoh/errors.hpp"

namespace stabcoh {

// Commutative monomial as an exponent vector over the ring variables.
struct Monomial {
  std::vector<int> e;

  int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

  static Monomial one(int nvars) { return Monomial{std::vector<int>(nvars, 0)}; }
  static Monomial var(int i, int nvars) {
    Monomial m = one(nvars);
    m.e[i] = 1;
    return m;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
    return r;
  }

  bool operator==(const Monomial& o) const { return e == o.e; }
};

// Global order: degree first, then exponent vectors lexicographically with
// x1 > x2 > ... .  greater(a,b) means a comes earlier in printed bases.
inline bool deglex_greater(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a.e > b.e;
}

// Strict-weak-order functor for maps keyed by monomials, largest first.
struct DeglexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return deglex_greater(a, b) && !(a == b); }
};

// All monomials of total degree d in nvars variables, in descending deglex
// order (x1^d first, xn^d last).
inline std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  Monomial cur = Monomial::one(nvars);
  // descending lexicographic enumeration of compositions of d
  auto rec = [&](auto&& self, int var, int rem) -> void {
    if (var == nvars - 1) {
      cur.e[var] = rem;
      out.push_back(cur);
      cur.e[var] = 0;
      return;
    }
    for (int k = rem; k >= 0; --k) {
      cur.e[var] = k;
      self(self, var + 1, rem - k);
    }
    cur.e[var] = 0;
  };
  if (nvars == 0) {
    if (d == 0) out.push_back(Monomial{{}});
    return out;
  }
  rec(rec, 0, d);
  return out;
}

inline std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& vars) {
  std::string s;
  for (std::size_t i = 0; i < m.e.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars[i];
    if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
  }
  return s.empty() ? "1" : s;
}

// Integer-coefficient polynomial: the parser output, before any field is
// chosen.  Keyed largest monomial first.
using IntPolynomial = std::map<Monomial, long long, DeglexGreater>;

inline void int_poly_add(IntPolynomial& p, const Monomial& m, long long c) {
  auto it = p.find(m);
  if (it == p.end()) {
    if (c != 0) p.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

inline std::string int_poly_to_string(const IntPolynomial& p, const std::vector<std::string>& vars) {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : p) {
    if (!s.empty()) s += c >= 0 ? " + " : " - ";
    else if (c < 0) s += "-";
    long long a = c < 0 ? -c : c;
    std::string ms = monomial_to_string(m, vars);
    if (a != 1 || ms == "1") {
      s += std::to_string(a);
      if (ms != "1") s += "*" + ms;
    } else {
      s += ms;
    }
  }
  return s;
}

}  // namespace stabcoh
