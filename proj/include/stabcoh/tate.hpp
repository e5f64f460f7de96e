#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabcoh/resolution.hpp"

namespace stabcoh {

// Variable of the divided-power closure.  Odd homological degree means an
// exterior variable (square zero), even means a divided-power variable.
struct DpVariable {
  std::string name;
  int hom = 0;
  int deg = 0;  // internal degree
};

// Exponent vector over the closure variables in creation order, trailing
// zeros stripped so a monomial stays valid when later stages append
// variables.  Represents the ordered product v_0^(a_0) v_1^(a_1) ...
struct DpMonomial {
  std::vector<int> a;
  friend bool operator<(const DpMonomial& x, const DpMonomial& y) { return x.a < y.a; }
  friend bool operator==(const DpMonomial& x, const DpMonomial& y) { return x.a == y.a; }
};

inline DpMonomial dp_strip(std::vector<int> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return {std::move(a)};
}

inline int dp_exp(const DpMonomial& m, std::size_t i) {
  return i < m.a.size() ? m.a[i] : 0;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Homogeneous element of the closure: ring coefficients on divided-power
// monomials, all of the same homological degree and total internal degree.
template <class K>
struct TateElem {
  int hom = 0;
  std::map<DpMonomial, RingElement<K>> c;
};

// Degree-lowering map determined by its values on the closure variables,
// extended by the Leibniz rule and theta(v^(a)) = theta(v) v^(a-1).
template <class K>
struct GammaDerivation {
  std::string name;
  int drop = 0;   // homological degree lowered
  int idrop = 0;  // internal degree lowered
  std::vector<TateElem<K>> on_var;
};

// Splits a polynomial as sum over l <= m of r_{lm} x_l x_m by peeling the two
// smallest variables off each monomial.  Deterministic, so the same input
// always produces the same closure differentials.
inline std::map<std::pair<int, int>, IntPolynomial> quadratic_split(const IntPolynomial& g) {
  std::map<std::pair<int, int>, IntPolynomial> out;
  for (const auto& [mono, coef] : g) {
    int l = 0;
    while (l < static_cast<int>(mono.e.size()) && mono.e[l] == 0) ++l;
    Monomial rest = mono;
    rest.e[l] -= 1;
    int m = 0;
    while (m < static_cast<int>(rest.e.size()) && rest.e[m] == 0) ++m;
    rest.e[m] -= 1;
    out[{l, m}][rest] += coef;
  }
  return out;
}

// Free resolution of the residue field carrying a divided-power algebra
// structure.  Variables are adjoined stage by stage: exterior variables on
// the ring generators, divided-power variables on the relations (via the
// quadratic split above), then one variable per minimal generator of the
// homology left in each homological degree.  The result is minimal; that and
// d∘d = 0 and acyclicity within the degree bound are asserted.  Lengths whose
// variable search could outrun the degree bound are refused (levels_certified).
//
// Variable order: T1..Te (hom 1), S1..Ss (hom 2, input order of the
// relations), then V<h>_<k> in creation order.  Monomials within a
// homological degree are listed by descending exponent vectors.
template <class K>
class TateClosure {
 public:
  using Scalar = K;

  TateClosure(const GradedRing<K>& ring, int length) : ring_(&ring), len_(length) {
    if (len_ < 2) throw PreconditionError("closure length must be at least 2");
    build_variables();
    close();
    verify();
    if (len_ > levels_certified())
      throw TruncationError("closure length " + std::to_string(len_) +
                            " is not certified at ring bound " +
                            std::to_string(ring_->bound()) + " (certified through " +
                            std::to_string(levels_certified()) + ")");
  }

  const GradedRing<K>& ring() const { return *ring_; }
  int length() const { return len_; }
  bool resolves_residue_field() const { return true; }

  // Levels whose generators the adjunction provably all saw.  Over a certified
  // complete intersection the quadratic stage closes the construction, so
  // every level is covered; otherwise a stage is covered only when its chain
  // components vanish inside the scanned degree range, which needs the ring to
  // be artinian within its bound.
  int levels_certified() const {
    if (ring_->complete_intersection_certified()) return len_;
    if (!ring_->artinian_within_bound()) return 1;
    int top = ring_->top_degree();
    for (int l = 2; l <= len_; ++l) {
      if (degs_[l - 1].empty()) continue;
      int g = *std::max_element(degs_[l - 1].begin(), degs_[l - 1].end());
      if (g + top > ring_->bound()) return l - 1;
    }
    return len_;
  }

  Index rank(int n) const {
    return n < 0 || n > len_ ? 0 : static_cast<Index>(basis_[n].size());
  }
  const std::vector<int>& gen_degrees(int n) const { return degs_[n]; }

  std::vector<long long> betti() const {
    std::vector<long long> b;
    for (int n = 0; n <= len_; ++n) b.push_back(rank(n));
    return b;
  }

  std::map<int, long long> graded_betti(int n) const {
    std::map<int, long long> out;
    for (int t : degs_[n]) ++out[t];
    return out;
  }

  const PolyMatrix<K>& diff(int n) const {
    if (n < 1 || n > len_) throw InternalError("differential index out of range");
    return diff_[n];
  }

  const Mat<K>& boundary(int n, int t) const {
    auto key = std::make_pair(n, t);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Mat<K> m;
    if (n == 0) {
      m = Mat<K>::Zero(t == 0 ? 1 : 0, ring_->dim_certified(t));
      if (t == 0) m(0, 0) = make_scalar<K>(1, ring_->field());
    } else if (n > len_) {
      throw InternalError("boundary beyond the computed length");
    } else {
      m = realize(*ring_, diff_[n], t);
    }
    return cache_.emplace(key, std::move(m)).first->second;
  }

  const std::vector<DpVariable>& variables() const { return vars_; }

  std::vector<long long> variable_counts() const {
    std::vector<long long> out(len_ + 1, 0);
    for (const auto& v : vars_) ++out[v.hom];
    return out;
  }

  const std::vector<DpMonomial>& monomials(int n) const { return basis_[n]; }
  const TateElem<K>& d_variable(std::size_t i) const { return dvar_[i]; }

  Index mono_index(int n, const DpMonomial& m) const {
    auto it = index_[n].find(m);
    if (it == index_[n].end()) throw InternalError("monomial is not in the computed basis");
    return it->second;
  }

  // r_{lm} coefficients of relation j from the quadratic split, keyed l <= m.
  const std::map<std::pair<int, int>, IntPolynomial>& relation_split(std::size_t j) const {
    return rdec_[j];
  }

  int hom_degree(const DpMonomial& m) const {
    int out = 0;
    for (std::size_t i = 0; i < m.a.size(); ++i) out += m.a[i] * vars_[i].hom;
    return out;
  }

  int internal_degree(const DpMonomial& m) const {
    int out = 0;
    for (std::size_t i = 0; i < m.a.size(); ++i) out += m.a[i] * vars_[i].deg;
    return out;
  }

  TateElem<K> zero(int hom) const { return {hom, {}}; }

  TateElem<K> monomial_elem(const DpMonomial& m) const {
    TateElem<K> out = zero(hom_degree(m));
    out.c[m] = unit_coeff();
    return out;
  }

  TateElem<K> one() const { return monomial_elem(dp_strip({})); }

  TateElem<K> variable_elem(std::size_t i) const {
    std::vector<int> e(i + 1, 0);
    e[i] = 1;
    return monomial_elem(dp_strip(std::move(e)));
  }

  bool is_zero(const TateElem<K>& x) const {
    for (const auto& [m, r] : x.c)
      if (!ring_->is_zero(r)) return false;
    return true;
  }

  bool equal(const TateElem<K>& x, const TateElem<K>& y) const {
    return is_zero(subtract(x, y));
  }

  TateElem<K> add(const TateElem<K>& x, const TateElem<K>& y) const {
    if (x.c.empty()) return y;
    if (y.c.empty()) return x;
    if (x.hom != y.hom) throw InternalError("adding closure elements of different degrees");
    TateElem<K> out = x;
    for (const auto& [m, r] : y.c) accumulate(out, m, r);
    prune(out);
    return out;
  }

  TateElem<K> scale(const K& k, const TateElem<K>& x) const {
    TateElem<K> out = zero(x.hom);
    if (stabcoh::is_zero(k)) return out;
    for (const auto& [m, r] : x.c) out.c[m] = ring_->scale(k, r);
    return out;
  }

  TateElem<K> negate(const TateElem<K>& x) const {
    return scale(make_scalar<K>(-1, ring_->field()), x);
  }

  TateElem<K> subtract(const TateElem<K>& x, const TateElem<K>& y) const {
    return add(x, negate(y));
  }

  // v^(i) v^(j) = binom(i+j, i) v^(i+j) for divided-power variables, squares
  // of exterior variables vanish, and interchanging odd factors costs a sign.
  std::optional<std::pair<DpMonomial, long long>> mono_product(const DpMonomial& x,
                                                               const DpMonomial& y) const {
    std::size_t n = std::max(x.a.size(), y.a.size());
    std::vector<long long> suffix_odd(n + 1, 0);
    for (std::size_t j = n; j-- > 0;)
      suffix_odd[j] = suffix_odd[j + 1] + (var_odd(j) ? dp_exp(x, j) : 0);
    std::vector<int> e(n, 0);
    long long coef = 1, sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int xi = dp_exp(x, i), yi = dp_exp(y, i);
      if (var_odd(i)) {
        if (xi + yi > 1) return std::nullopt;
        sign += yi * suffix_odd[i + 1];
      } else if (xi > 0 && yi > 0) {
        coef *= binomial(xi + yi, xi);
      }
      e[i] = xi + yi;
    }
    if (sign % 2 != 0) coef = -coef;
    return std::make_pair(dp_strip(std::move(e)), coef);
  }

  TateElem<K> multiply(const TateElem<K>& x, const TateElem<K>& y) const {
    TateElem<K> out = zero(x.hom + y.hom);
    for (const auto& [mx, rx] : x.c)
      for (const auto& [my, ry] : y.c) {
        auto p = mono_product(mx, my);
        if (!p) continue;
        K c = make_scalar<K>(p->second, ring_->field());
        if (stabcoh::is_zero(c)) continue;
        accumulate(out, p->first, ring_->scale(c, ring_->multiply(rx, ry)));
      }
    prune(out);
    return out;
  }

  TateElem<K> coeff_times(const RingElement<K>& r, const TateElem<K>& x) const {
    TateElem<K> out = zero(x.hom);
    for (const auto& [m, v] : x.c) out.c[m] = ring_->multiply(r, v);
    prune(out);
    return out;
  }

  // d on one basis monomial, by the Leibniz rule with the sign of the passed
  // prefix and d(v^(a)) = (dv) v^(a-1).  Values never change once a variable
  // exists, so this is cached for good.
  const TateElem<K>& d_monomial(const DpMonomial& m) const {
    auto it = dcache_.find(m);
    if (it != dcache_.end()) return it->second;
    TateElem<K> out = zero(hom_degree(m) - 1);
    int prefix = 0;
    for (std::size_t i = 0; i < m.a.size(); ++i) {
      if (m.a[i] > 0) {
        std::vector<int> pre(m.a.begin(), m.a.begin() + static_cast<long>(i));
        std::vector<int> rest = m.a;
        rest[i] -= 1;
        for (std::size_t k = 0; k < i; ++k) rest[k] = 0;
        TateElem<K> term = multiply(monomial_elem(dp_strip(std::move(pre))),
                                    multiply(dvar_[i], monomial_elem(dp_strip(std::move(rest)))));
        if (prefix % 2 != 0) term = negate(term);
        out = add(out, term);
      }
      prefix += m.a[i] * vars_[i].hom;
    }
    return dcache_.emplace(m, std::move(out)).first->second;
  }

  TateElem<K> differential(const TateElem<K>& x) const {
    TateElem<K> out = zero(x.hom - 1);
    for (const auto& [m, r] : x.c) out = add(out, coeff_times(r, d_monomial(m)));
    return out;
  }

  // Realized coordinates of a homogeneous element of total internal degree t,
  // blocked by basis monomial exactly as realize() blocks the differentials.
  Vec<K> realize_elem(const TateElem<K>& x, int t) const {
    if (x.hom < 0 || x.hom > len_) throw InternalError("element outside the computed range");
    Index total = 0;
    std::vector<Index> off = block_offsets(*ring_, degs_[x.hom], t, total);
    Vec<K> out = Vec<K>::Zero(total);
    for (const auto& [m, r] : x.c) {
      Index i = mono_index(x.hom, m);
      if (r.deg != t - degs_[x.hom][i])
        throw InternalError("element is not homogeneous of internal degree " + std::to_string(t));
      if (r.c.size() != off[i + 1] - off[i])
        throw InternalError("coefficient block does not match the certified dimension");
      out.segment(off[i], r.c.size()) = r.c;
    }
    return out;
  }

  TateElem<K> elem_from_coords(int n, int t, const Vec<K>& v) const {
    Index total = 0;
    std::vector<Index> off = block_offsets(*ring_, degs_[n], t, total);
    if (v.size() != total) throw InternalError("coordinate vector has the wrong size");
    TateElem<K> out = zero(n);
    for (std::size_t i = 0; i < basis_[n].size(); ++i) {
      Index lo = off[i], len = off[i + 1] - off[i];
      if (len == 0) continue;
      Vec<K> seg = v.segment(lo, len);
      bool nz = false;
      for (Index j = 0; j < seg.size(); ++j)
        if (!stabcoh::is_zero(seg[j])) nz = true;
      if (nz) out.c[basis_[n][i]] = RingElement<K>{t - degs_[n][i], std::move(seg)};
    }
    return out;
  }

  std::string monomial_str(const DpMonomial& m) const {
    std::string out;
    for (std::size_t i = 0; i < m.a.size(); ++i) {
      if (m.a[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += vars_[i].name;
      if (m.a[i] > 1) out += "^(" + std::to_string(m.a[i]) + ")";
    }
    return out.empty() ? "1" : out;
  }

  std::string str(const TateElem<K>& x) const {
    std::string out;
    for (const auto& [m, r] : x.c) {
      if (ring_->is_zero(r)) continue;
      if (!out.empty()) out += " + ";
      out += "(" + ring_->str(r) + ")*" + monomial_str(m);
    }
    return out.empty() ? "0" : out;
  }

  // --- derivations ---

  TateElem<K> apply(const GammaDerivation<K>& th, const DpMonomial& m) const {
    if (th.on_var.size() != vars_.size())
      throw InternalError("derivation does not cover the closure variables");
    TateElem<K> out = zero(hom_degree(m) - th.drop);
    int prefix = 0;
    for (std::size_t i = 0; i < m.a.size(); ++i) {
      if (m.a[i] > 0 && !is_zero(th.on_var[i])) {
        std::vector<int> pre(m.a.begin(), m.a.begin() + static_cast<long>(i));
        std::vector<int> rest = m.a;
        rest[i] -= 1;
        for (std::size_t k = 0; k < i; ++k) rest[k] = 0;
        TateElem<K> term = multiply(monomial_elem(dp_strip(std::move(pre))),
                                    multiply(th.on_var[i], monomial_elem(dp_strip(std::move(rest)))));
        if ((prefix * th.drop) % 2 != 0) term = negate(term);
        out = add(out, term);
      }
      prefix += m.a[i] * vars_[i].hom;
    }
    return out;
  }

  TateElem<K> apply(const GammaDerivation<K>& th, const TateElem<K>& x) const {
    TateElem<K> out = zero(x.hom - th.drop);
    for (const auto& [m, r] : x.c) out = add(out, coeff_times(r, apply(th, m)));
    return out;
  }

  // The derivation dual to variable t: kronecker values on the variables of
  // the same homological degree, zero below, and above either the closed form
  // (values on the relation variables, from the quadratic split) or the
  // canonical solution of d(theta(V)) = (-1)^drop theta(dV).
  GammaDerivation<K> derivation_dual(std::size_t t) const {
    if (t >= vars_.size()) throw PreconditionError("no closure variable with that index");
    const DpVariable& vt = vars_[t];
    GammaDerivation<K> th;
    th.name = vt.name + "'";
    th.drop = vt.hom;
    th.idrop = vt.deg;
    th.on_var.resize(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const DpVariable& vi = vars_[i];
      th.on_var[i] = zero(vi.hom - th.drop);
      if (vi.hom == vt.hom) {
        if (i == t) th.on_var[i].c[dp_strip({})] = unit_coeff();
      } else if (vi.hom > vt.hom) {
        if (vt.hom == 1 && vi.hom == 2) {
          // value on S_j: minus the T-coefficients of the split that pair
          // with x_t, so that d(theta(S_j)) = -theta(d S_j) on the nose
          std::size_t j = i - static_cast<std::size_t>(ring_->nvars());
          TateElem<K> val = zero(1);
          for (const auto& [lm, poly] : rdec_[j]) {
            if (lm.second != static_cast<int>(t)) continue;
            if (ring_->type_poly(poly).terms.empty()) continue;
            std::vector<int> e(static_cast<std::size_t>(lm.first) + 1, 0);
            e[lm.first] = 1;
            accumulate(val, dp_strip(std::move(e)),
                       ring_->scale(make_scalar<K>(-1, ring_->field()), ring_->element(poly)));
          }
          prune(val);
          th.on_var[i] = std::move(val);
        } else {
          th.on_var[i] = extend_value(th, i);
        }
      }
    }
    return th;
  }

  // [a, b] = a b - (-1)^{|a||b|} b a, as values on the variables.
  GammaDerivation<K> bracket(const GammaDerivation<K>& a, const GammaDerivation<K>& b) const {
    GammaDerivation<K> out;
    out.name = "[" + a.name + "," + b.name + "]";
    out.drop = a.drop + b.drop;
    out.idrop = a.idrop + b.idrop;
    bool flip = (a.drop * b.drop) % 2 != 0;
    out.on_var.resize(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      TateElem<K> x = apply(a, b.on_var[i]);
      TateElem<K> y = apply(b, a.on_var[i]);
      out.on_var[i] = flip ? add(x, y) : subtract(x, y);
    }
    return out;
  }

  bool derivation_is_zero(const GammaDerivation<K>& th) const {
    for (const auto& v : th.on_var)
      if (!is_zero(v)) return false;
    return true;
  }

  // Cohomology class of the derivation: its values on the basis monomials of
  // degree drop, pushed through the augmentation.
  Cocycle<K> derivation_class(const GammaDerivation<K>& th) const {
    Cocycle<K> out{th.drop, th.idrop, Vec<K>::Zero(rank(th.drop))};
    for (Index j = 0; j < rank(th.drop); ++j) {
      TateElem<K> v = apply(th, basis_[th.drop][static_cast<std::size_t>(j)]);
      auto it = v.c.find(dp_strip({}));
      if (it == v.c.end() || it->second.deg != 0) continue;
      out.values[j] = it->second.c[0];
    }
    return out;
  }

 private:
  bool var_odd(std::size_t i) const { return vars_[i].hom % 2 != 0; }

  RingElement<K> unit_coeff() const {
    RingElement<K> r = ring_->zero(0);
    r.c[0] = make_scalar<K>(1, ring_->field());
    return r;
  }

  void accumulate(TateElem<K>& x, const DpMonomial& m, const RingElement<K>& r) const {
    auto it = x.c.find(m);
    if (it == x.c.end())
      x.c.emplace(m, r);
    else
      it->second = ring_->add(it->second, r);
  }

  void prune(TateElem<K>& x) const {
    for (auto it = x.c.begin(); it != x.c.end();)
      it = ring_->is_zero(it->second) ? x.c.erase(it) : std::next(it);
  }

  void build_variables() {
    const GradedRing<K>& R = *ring_;
    for (int v = 0; v < R.nvars(); ++v) {
      vars_.push_back({"T" + std::to_string(v + 1), 1, 1});
      TateElem<K> d = zero(0);
      d.c[dp_strip({})] = R.var(v);
      dvar_.push_back(std::move(d));
    }
    const auto& raw = R.relation_polys();
    for (std::size_t j = 0; j < raw.size(); ++j) {
      IntPolynomial surviving;
      for (const auto& [mono, coef] : raw[j])
        if (!stabcoh::is_zero(make_scalar<K>(coef, R.field()))) surviving[mono] = coef;
      rdec_.push_back(quadratic_split(surviving));
      vars_.push_back({"S" + std::to_string(j + 1), 2, R.type_poly(raw[j]).deg});
      // d S_j = sum over m of (sum over l of r_{lm} x_l) T_m
      std::map<int, IntPolynomial> per_var;
      for (const auto& [lm, poly] : rdec_.back())
        for (const auto& [mono, coef] : poly)
          per_var[lm.second][mono * Monomial::var(lm.first, R.nvars())] += coef;
      TateElem<K> d = zero(1);
      for (const auto& [v, poly] : per_var) {
        if (R.type_poly(poly).terms.empty()) continue;
        std::vector<int> e(static_cast<std::size_t>(v) + 1, 0);
        e[v] = 1;
        d.c[dp_strip(std::move(e))] = R.element(poly);
      }
      dvar_.push_back(std::move(d));
    }
  }

  // Adjoins, for each homological degree n < length, one variable per minimal
  // generator of H_n of the complex built so far.  Generators are selected
  // degree by degree: the classes at internal degree t that complete the span
  // of R_1 times the classes at t-1.
  void close() {
    rebuild();
    for (int n = 2; n < len_; ++n) {
      std::vector<std::pair<int, Vec<K>>> cycles;
      std::optional<QuotientSpace<K>> prev;
      for (int t = 0; t <= ring_->bound(); ++t) {
        QuotientSpace<K> h = homology(boundary(n, t), boundary(n + 1, t));
        std::vector<Vec<K>> pushed;
        if (t >= 1 && prev && prev->dim() > 0) {
          for (int v = 0; v < ring_->nvars(); ++v) {
            Mat<K> xv = realize_variable(*ring_, degs_[n], v, t - 1);
            for (Index c = 0; c < prev->reps.cols(); ++c)
              pushed.push_back(h.reduce(xv * prev->reps.col(c)));
          }
        }
        Mat<K> sub = Mat<K>::Zero(h.dim(), static_cast<Index>(pushed.size()));
        for (std::size_t c = 0; c < pushed.size(); ++c)
          sub.col(static_cast<Index>(c)) = pushed[c];
        QuotientSpace<K> fresh =
            QuotientSpace<K>::build(sub, Mat<K>::Identity(h.dim(), h.dim()));
        for (Index c = 0; c < fresh.reps.cols(); ++c)
          cycles.emplace_back(t, h.reps * fresh.reps.col(c));
        prev = std::move(h);
      }
      if (cycles.empty()) continue;
      for (std::size_t c = 0; c < cycles.size(); ++c) {
        vars_.push_back({"V" + std::to_string(n + 1) + "_" + std::to_string(c + 1), n + 1,
                         cycles[c].first});
        dvar_.push_back(elem_from_coords(n, cycles[c].first, cycles[c].second));
      }
      rebuild();
    }
  }

  void rebuild() {
    basis_.assign(len_ + 1, {});
    degs_.assign(len_ + 1, {});
    index_.assign(len_ + 1, {});
    diff_.assign(len_ + 1, {});
    cache_.clear();
    basis_[0] = {dp_strip({})};
    for (int n = 1; n <= len_; ++n) {
      std::vector<int> cur(vars_.size(), 0);
      enumerate(0, n, cur, basis_[n]);
    }
    for (int n = 0; n <= len_; ++n)
      for (std::size_t i = 0; i < basis_[n].size(); ++i) {
        degs_[n].push_back(internal_degree(basis_[n][i]));
        index_[n].emplace(basis_[n][i], static_cast<Index>(i));
      }
    for (int n = 1; n <= len_; ++n) diff_[n] = assemble(n);
  }

  void enumerate(std::size_t i, int rem, std::vector<int>& cur,
                 std::vector<DpMonomial>& out) const {
    if (rem == 0) {
      std::size_t top = i;
      while (top < cur.size()) cur[top++] = 0;
      out.push_back(dp_strip(cur));
      return;
    }
    if (i == cur.size()) return;
    int cap = rem / vars_[i].hom;
    if (var_odd(i)) cap = std::min(cap, 1);
    for (int a = cap; a >= 0; --a) {
      cur[i] = a;
      enumerate(i + 1, rem - a * vars_[i].hom, cur, out);
    }
    cur[i] = 0;
  }

  PolyMatrix<K> assemble(int n) const {
    PolyMatrix<K> pm = zero_poly_matrix(*ring_, degs_[n - 1], degs_[n], 0);
    for (std::size_t j = 0; j < basis_[n].size(); ++j) {
      const TateElem<K>& dm = d_monomial(basis_[n][j]);
      for (const auto& [m, r] : dm.c) {
        if (ring_->is_zero(r)) continue;
        Index i = mono_index(n - 1, m);
        if (r.deg != pm.entry_degree(i, static_cast<Index>(j)))
          throw InternalError("differential entry has the wrong internal degree");
        pm(i, static_cast<Index>(j)) = r;
      }
    }
    return pm;
  }

  TateElem<K> extend_value(const GammaDerivation<K>& th, std::size_t i) const {
    TateElem<K> rhs = apply(th, dvar_[i]);
    if (th.drop % 2 != 0) rhs = negate(rhs);
    int n = vars_[i].hom - th.drop;
    int t = vars_[i].deg - th.idrop;
    if (is_zero(rhs)) return zero(n);
    Vec<K> b = realize_elem(rhs, t);
    auto x = solve_linear(boundary(n, t), b);
    if (!x) throw InternalError("derivation does not extend; the closure fails acyclicity");
    return elem_from_coords(n, t, *x);
  }

  void verify() const {
    const GradedRing<K>& R = *ring_;
    for (int n = 2; n <= len_; ++n)
      if (!poly_matrix_is_zero(compose(R, diff_[n - 1], diff_[n])))
        throw InternalError("closure differential does not square to zero");
    for (int n = 1; n <= len_; ++n)
      for (Index i = 0; i < diff_[n].rows(); ++i)
        for (Index j = 0; j < diff_[n].cols(); ++j)
          if (diff_[n].entry_degree(i, j) < 1 && !entry_is_zero(diff_[n](i, j)))
            throw InternalError("closure is not minimal");
    for (int n = 0; n < len_; ++n)
      for (int t = 0; t <= R.bound(); ++t)
        if (homology(boundary(n, t), boundary(n + 1, t)).dim() != 0)
          throw InternalError("closure is not acyclic at homological degree " +
                              std::to_string(n));
  }

  const GradedRing<K>* ring_;
  int len_;
  std::vector<DpVariable> vars_;
  std::vector<TateElem<K>> dvar_;
  std::vector<std::map<std::pair<int, int>, IntPolynomial>> rdec_;
  std::vector<std::vector<DpMonomial>> basis_;
  std::vector<std::vector<int>> degs_;
  std::vector<std::map<DpMonomial, Index>> index_;
  std::vector<PolyMatrix<K>> diff_;
  mutable std::map<DpMonomial, TateElem<K>> dcache_;
  mutable std::map<std::pair<int, int>, Mat<K>> cache_;
};

}  // namespace stabcoh
