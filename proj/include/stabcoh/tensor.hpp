#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stabcoh/tate.hpp"

namespace stabcoh {

// Element of F (x)_R G for divided-power closures F, G over the same ring:
// ring coefficients on pairs (monomial of F, monomial of G), every pair of
// the same total homological degree.
template <class K>
struct TensorElem {
  int hom = 0;
  std::map<std::pair<DpMonomial, DpMonomial>, RingElement<K>> c;
};

// The complex F (x)_R G.  Its homology computes Tor^R(k,k) with canonical
// cycle representatives (both factors may be the same object).  Also hosts
// the factorwise derivation and chain-map applications that the
// homology-level module structures are assembled from: derive_first applies
// a derivation to the first factor with no sign, derive_second and
// chain_second cross signed past the first factor, chain_first applies a
// lifted cocycle to the first factor with no sign.
template <class K>
class TensorComplex {
 public:
  using Pair = std::pair<DpMonomial, DpMonomial>;

  // cap limits the computed window; the factors may extend further (useful
  // when they also feed window computations that need more levels)
  TensorComplex(const TateClosure<K>& f, const TateClosure<K>& g, int cap = -1)
      : a_(&f), b_(&g), ring_(&f.ring()) {
    if (&f.ring() != &g.ring()) throw PreconditionError("tensor factors over different rings");
    len_ = std::min(f.length(), g.length());
    if (cap >= 0) len_ = std::min(len_, cap);
    build();
  }

  const GradedRing<K>& ring() const { return *ring_; }
  const TateClosure<K>& first_factor() const { return *a_; }
  const TateClosure<K>& second_factor() const { return *b_; }
  int length() const { return len_; }

  Index rank(int n) const {
    if (n < 0 || n > len_) throw TruncationError("tensor complex rank outside computed window");
    return static_cast<Index>(basis_[n].size());
  }

  const std::vector<int>& gen_degrees(int n) const { return degs_[n]; }
  const std::vector<Pair>& pairs(int n) const { return basis_[n]; }

  Index pair_index(int n, const Pair& p) const {
    auto it = index_[n].find(p);
    if (it == index_[n].end()) throw InternalError("pair is not in the computed basis");
    return it->second;
  }

  const PolyMatrix<K>& diff(int n) const {
    if (n < 1 || n > len_) throw TruncationError("tensor differential outside computed window");
    return diff_[n];
  }

  // n = 0 has no augmentation: the outgoing map is zero.
  const Mat<K>& boundary(int n, int t) const {
    if (n < 0 || n > len_) throw TruncationError("tensor boundary outside computed window");
    auto key = std::make_pair(n, t);
    auto it = bcache_.find(key);
    if (it != bcache_.end()) return it->second;
    Mat<K> m;
    if (n == 0) {
      Index total = 0;
      block_offsets(*ring_, degs_[0], t, total);
      m = Mat<K>::Zero(0, total);
    } else {
      m = realize(*ring_, diff_[n], t);
    }
    return bcache_.emplace(key, std::move(m)).first->second;
  }

  TensorElem<K> zero(int hom) const { return {hom, {}}; }

  TensorElem<K> one() const {
    TensorElem<K> x{0, {}};
    x.c.emplace(Pair{dp_strip({}), dp_strip({})}, unit_coeff());
    return x;
  }

  TensorElem<K> pair_elem(const Pair& p) const {
    TensorElem<K> x{a_->hom_degree(p.first) + b_->hom_degree(p.second), {}};
    x.c.emplace(p, ring_->zero(0));
    x.c.begin()->second.c[0] = make_scalar<K>(1, ring_->field());
    return x;
  }

  // x (x) y expanded with coefficients multiplied into the ring.
  TensorElem<K> tensor_of(const TateElem<K>& x, const TateElem<K>& y) const {
    TensorElem<K> out{x.hom + y.hom, {}};
    for (const auto& [ma, ra] : x.c)
      for (const auto& [mb, rb] : y.c) accumulate(out, {ma, mb}, ring_->multiply(ra, rb));
    prune(out);
    return out;
  }

  // Left module structure over the first factor: a.(x (x) y) = (ax) (x) y.
  TensorElem<K> mult_first(const TateElem<K>& a, const TensorElem<K>& x) const {
    TensorElem<K> out{a.hom + x.hom, {}};
    for (const auto& [p, r] : x.c) {
      TateElem<K> ax = a_->multiply(a, a_->monomial_elem(p.first));
      for (const auto& [m1, r1] : ax.c) accumulate(out, {m1, p.second}, ring_->multiply(r, r1));
    }
    prune(out);
    return out;
  }

  TensorElem<K> coeff_scale(const RingElement<K>& r, const TensorElem<K>& x) const {
    TensorElem<K> out{x.hom, {}};
    for (const auto& [p, c] : x.c) accumulate(out, p, ring_->multiply(r, c));
    prune(out);
    return out;
  }

  bool is_zero(const TensorElem<K>& x) const {
    for (const auto& [p, r] : x.c)
      if (!entry_is_zero(r)) return false;
    return true;
  }

  bool equal(const TensorElem<K>& x, const TensorElem<K>& y) const {
    return is_zero(subtract(x, y));
  }

  TensorElem<K> add(const TensorElem<K>& x, const TensorElem<K>& y) const {
    if (x.hom != y.hom) throw PreconditionError("adding tensor elements of different degrees");
    TensorElem<K> out = x;
    for (const auto& [p, r] : y.c) accumulate(out, p, r);
    prune(out);
    return out;
  }

  TensorElem<K> scale(const K& k, const TensorElem<K>& x) const {
    TensorElem<K> out = x;
    for (auto& [p, r] : out.c) r.c = k * r.c;
    prune(out);
    return out;
  }

  TensorElem<K> negate(const TensorElem<K>& x) const {
    return scale(make_scalar<K>(-1, ring_->field()), x);
  }

  TensorElem<K> subtract(const TensorElem<K>& x, const TensorElem<K>& y) const {
    return add(x, negate(y));
  }

  TensorElem<K> differential(const TensorElem<K>& x) const {
    TensorElem<K> out{x.hom - 1, {}};
    for (const auto& [p, r] : x.c) {
      for (const auto& [m1, r1] : a_->d_monomial(p.first).c)
        accumulate(out, {m1, p.second}, ring_->multiply(r, r1));
      bool flip = a_->hom_degree(p.first) % 2 != 0;
      for (const auto& [m2, r2] : b_->d_monomial(p.second).c) {
        RingElement<K> v = ring_->multiply(r, r2);
        if (flip) v.c = -v.c;
        accumulate(out, {p.first, m2}, v);
      }
    }
    prune(out);
    return out;
  }

  // Derivation applied to the first factor, no sign.
  TensorElem<K> derive_first(const GammaDerivation<K>& th, const TensorElem<K>& x) const {
    TensorElem<K> out{x.hom - th.drop, {}};
    for (const auto& [p, r] : x.c) {
      TateElem<K> e = a_->apply(th, p.first);
      for (const auto& [m1, r1] : e.c) accumulate(out, {m1, p.second}, ring_->multiply(r, r1));
    }
    prune(out);
    return out;
  }

  // Derivation applied to the second factor, crossing sign (-1)^{|th| |m|}
  // over the first factor's homological degree.
  TensorElem<K> derive_second(const GammaDerivation<K>& th, const TensorElem<K>& x) const {
    TensorElem<K> out{x.hom - th.drop, {}};
    for (const auto& [p, r] : x.c) {
      bool flip = (th.drop * a_->hom_degree(p.first)) % 2 != 0;
      TateElem<K> e = b_->apply(th, p.second);
      for (const auto& [m2, r2] : e.c) {
        RingElement<K> v = ring_->multiply(r, r2);
        if (flip) v.c = -v.c;
        accumulate(out, {p.first, m2}, v);
      }
    }
    prune(out);
    return out;
  }

  // Chain map (e.g. a lifted cocycle) applied to the first factor, no sign.
  TensorElem<K> chain_first(const ChainMap<K>& cm, const TensorElem<K>& x) const {
    TensorElem<K> out{x.hom - cm.drop, {}};
    for (const auto& [p, r] : x.c) apply_chain(cm, *a_, p.first, p.second, r, false, true, out);
    prune(out);
    return out;
  }

  // Chain map applied to the second factor with the crossing sign.
  TensorElem<K> chain_second(const ChainMap<K>& cm, const TensorElem<K>& x) const {
    TensorElem<K> out{x.hom - cm.drop, {}};
    for (const auto& [p, r] : x.c) {
      bool flip = (cm.drop * a_->hom_degree(p.first)) % 2 != 0;
      apply_chain(cm, *b_, p.second, p.first, r, flip, false, out);
    }
    prune(out);
    return out;
  }

  Vec<K> realize_elem(const TensorElem<K>& x, int t) const {
    Index total = 0;
    std::vector<Index> off = block_offsets(*ring_, degs_[x.hom], t, total);
    Vec<K> out = Vec<K>::Zero(total);
    for (const auto& [p, r] : x.c) {
      Index i = pair_index(x.hom, p);
      if (r.deg != t - degs_[x.hom][i])
        throw PreconditionError("tensor element is not homogeneous of the requested degree");
      if (r.c.size() != off[i + 1] - off[i])
        throw InternalError("coefficient does not match the realized block");
      out.segment(off[i], r.c.size()) += r.c;
    }
    return out;
  }

  TensorElem<K> elem_from_coords(int n, int t, const Vec<K>& v) const {
    Index total = 0;
    std::vector<Index> off = block_offsets(*ring_, degs_[n], t, total);
    if (v.size() != total) throw PreconditionError("coordinate vector has the wrong size");
    TensorElem<K> out{n, {}};
    for (std::size_t i = 0; i < basis_[n].size(); ++i) {
      Index lo = off[i], len = off[i + 1] - off[i];
      if (len == 0) continue;
      Vec<K> seg = v.segment(lo, len);
      bool nz = false;
      for (Index j = 0; j < len; ++j) nz = nz || !stabcoh::is_zero(seg[j]);
      if (!nz) continue;
      out.c.emplace(basis_[n][i], RingElement<K>{t - degs_[n][i], seg});
    }
    return out;
  }

  bool is_cycle(const TensorElem<K>& x, int t) const {
    if (x.hom == 0) return true;
    Vec<K> v = realize_elem(x, t);
    Vec<K> img = boundary(x.hom, t) * v;
    for (Index i = 0; i < img.size(); ++i)
      if (!stabcoh::is_zero(img[i])) return false;
    return true;
  }

  // Homology window at (n, t); needs the differential at n + 1.
  const QuotientSpace<K>& homology_at(int n, int t) const {
    if (n + 1 > len_) throw TruncationError("tor window needs a longer closure");
    auto key = std::make_pair(n, t);
    auto it = hcache_.find(key);
    if (it != hcache_.end()) return it->second;
    QuotientSpace<K> h = homology(boundary(n, t), boundary(n + 1, t));
    return hcache_.emplace(key, std::move(h)).first->second;
  }

  // Class coordinates of a verified cycle.  A non-cycle input means a sign
  // fault upstream, so it is a hard error, never a wrong answer.
  Vec<K> reduce_checked(const TensorElem<K>& x, int t) const {
    if (!is_cycle(x, t)) throw InternalError("action output failed the cycle check");
    return homology_at(x.hom, t).reduce(realize_elem(x, t));
  }

  TensorElem<K> class_rep(int n, int t, Index j) const {
    return elem_from_coords(n, t, homology_at(n, t).reps.col(j));
  }

  std::map<int, long long> dims(int n) const {
    std::map<int, long long> out;
    if (degs_[n].empty()) return out;
    int lo = *std::min_element(degs_[n].begin(), degs_[n].end());
    int hi = *std::max_element(degs_[n].begin(), degs_[n].end());
    for (int t = lo; t <= hi; ++t) {
      Index d = homology_at(n, t).dim();
      if (d > 0) out[t] = d;
    }
    return out;
  }

  // Augmentation of the first factor: the k-coefficients on pairs (1, m).
  // Composing with it identifies H_n with the second factor's generators.
  Vec<K> eps_first(const TensorElem<K>& x) const {
    Vec<K> out = Vec<K>::Zero(b_->rank(x.hom));
    DpMonomial unit = dp_strip({});
    for (const auto& [p, r] : x.c) {
      if (!(p.first == unit) || r.deg != 0) continue;
      out[b_->mono_index(x.hom, p.second)] = r.c[0];
    }
    return out;
  }

  // Augmentation of the second factor: k-coefficients on pairs (m, 1).
  Vec<K> eps_second(const TensorElem<K>& x) const {
    Vec<K> out = Vec<K>::Zero(a_->rank(x.hom));
    DpMonomial unit = dp_strip({});
    for (const auto& [p, r] : x.c) {
      if (!(p.second == unit) || r.deg != 0) continue;
      out[a_->mono_index(x.hom, p.first)] = r.c[0];
    }
    return out;
  }

  std::string pair_str(const Pair& p) const {
    return a_->monomial_str(p.first) + "(x)" + b_->monomial_str(p.second);
  }

  std::string str(const TensorElem<K>& x) const {
    std::string out;
    for (const auto& [p, r] : x.c) {
      if (entry_is_zero(r)) continue;
      if (!out.empty()) out += " + ";
      out += "(" + ring_->str(r) + ")" + pair_str(p);
    }
    return out.empty() ? "0" : out;
  }

 private:
  RingElement<K> unit_coeff() const {
    RingElement<K> r = ring_->zero(0);
    r.c[0] = make_scalar<K>(1, ring_->field());
    return r;
  }

  void accumulate(TensorElem<K>& x, const Pair& p, const RingElement<K>& r) const {
    auto it = x.c.find(p);
    if (it == x.c.end())
      x.c.emplace(p, r);
    else
      it->second = ring_->add(it->second, r);
  }

  void prune(TensorElem<K>& x) const {
    for (auto it = x.c.begin(); it != x.c.end();) {
      if (entry_is_zero(it->second))
        it = x.c.erase(it);
      else
        ++it;
    }
  }

  // One chain-map application step: cm hits the monomial m of factor `fac`;
  // `other` is the untouched monomial of the opposite factor.  first = true
  // places results as (image, other), else as (other, image).
  void apply_chain(const ChainMap<K>& cm, const TateClosure<K>& fac, const DpMonomial& m,
                   const DpMonomial& other, const RingElement<K>& r, bool flip, bool first,
                   TensorElem<K>& out) const {
    int i = fac.hom_degree(m);
    if (i - cm.drop < 0) return;
    if (static_cast<std::size_t>(i) >= cm.comp.size()) return;
    const PolyMatrix<K>& pm = cm.comp[i];
    if (pm.cols() == 0) return;
    Index col = fac.mono_index(i, m);
    const std::vector<DpMonomial>& rows = fac.monomials(i - cm.drop);
    for (Index row = 0; row < pm.rows(); ++row) {
      if (entry_is_zero(pm(row, col))) continue;
      RingElement<K> v = ring_->multiply(r, pm(row, col));
      if (flip) v.c = -v.c;
      accumulate(out, first ? Pair{rows[row], other} : Pair{other, rows[row]}, v);
    }
  }

  void build() {
    basis_.resize(len_ + 1);
    degs_.resize(len_ + 1);
    index_.resize(len_ + 1);
    diff_.resize(len_ + 1);
    for (int n = 0; n <= len_; ++n) {
      for (int i = 0; i <= n; ++i) {
        for (const DpMonomial& ma : a_->monomials(i)) {
          int da = a_->internal_degree(ma);
          for (const DpMonomial& mb : b_->monomials(n - i)) {
            basis_[n].push_back({ma, mb});
            degs_[n].push_back(da + b_->internal_degree(mb));
          }
        }
      }
      for (std::size_t i = 0; i < basis_[n].size(); ++i)
        index_[n].emplace(basis_[n][i], static_cast<Index>(i));
    }
    for (int n = 1; n <= len_; ++n) {
      PolyMatrix<K> pm = zero_poly_matrix(*ring_, degs_[n - 1], degs_[n], 0);
      for (Index j = 0; j < pm.cols(); ++j) {
        const Pair& p = basis_[n][j];
        for (const auto& [m1, r1] : a_->d_monomial(p.first).c) {
          Index i = pair_index(n - 1, {m1, p.second});
          pm(i, j) = ring_->add(pm(i, j), r1);
        }
        bool flip = a_->hom_degree(p.first) % 2 != 0;
        for (const auto& [m2, r2] : b_->d_monomial(p.second).c) {
          RingElement<K> v = r2;
          if (flip) v.c = -v.c;
          Index i = pair_index(n - 1, {p.first, m2});
          pm(i, j) = ring_->add(pm(i, j), v);
        }
      }
      diff_[n] = std::move(pm);
    }
    for (int n = 2; n <= len_; ++n)
      if (!poly_matrix_is_zero(compose(*ring_, diff_[n - 1], diff_[n])))
        throw InternalError("tensor differential does not square to zero");
  }

  const TateClosure<K>* a_;
  const TateClosure<K>* b_;
  const GradedRing<K>* ring_;
  int len_ = 0;
  std::vector<std::vector<Pair>> basis_;
  std::vector<std::vector<int>> degs_;
  std::vector<std::map<Pair, Index>> index_;
  std::vector<PolyMatrix<K>> diff_;
  mutable std::map<std::pair<int, int>, Mat<K>> bcache_;
  mutable std::map<std::pair<int, int>, QuotientSpace<K>> hcache_;
};

}  // namespace stabcoh
