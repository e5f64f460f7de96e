#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stabcoh/resolution.hpp"
#include "stabcoh/tensor.hpp"

namespace stabcoh {

// Matrix of a Gamma derivation on the degree-i component, F_i -> F_{i-drop}.
template <class K>
PolyMatrix<K> derivation_matrix(const TateClosure<K>& F, const GammaDerivation<K>& th, int i) {
  PolyMatrix<K> pm =
      zero_poly_matrix(F.ring(), F.gen_degrees(i - th.drop), F.gen_degrees(i), th.idrop);
  const std::vector<DpMonomial>& cols = F.monomials(i);
  for (Index j = 0; j < pm.cols(); ++j) {
    TateElem<K> e = F.apply(th, cols[j]);
    for (const auto& [m, r] : e.c) {
      if (entry_is_zero(r)) continue;
      pm(F.mono_index(i - th.drop, m), j) = r;
    }
  }
  return pm;
}

// The derivation as a window chain map, components through the closure length.
template <class K>
ChainMap<K> derivation_chain(const TateClosure<K>& F, const GammaDerivation<K>& th) {
  ChainMap<K> out{th.drop, {}};
  out.comp.resize(F.length() + 1);
  for (int i = th.drop; i <= F.length(); ++i) out.comp[i] = derivation_matrix(F, th, i);
  return out;
}

template <class K>
int chain_idrop(const ChainMap<K>& cm) {
  for (const auto& pm : cm.comp)
    if (pm.cols() > 0 && pm.rows() > 0) return pm.idrop;
  return 0;
}

// A window chain map applied to a closure element.
template <class K>
TateElem<K> chain_apply(const TateClosure<K>& F, const ChainMap<K>& cm, const TateElem<K>& x) {
  TateElem<K> out = F.zero(x.hom - cm.drop);
  for (const auto& [m, r] : x.c) {
    int i = F.hom_degree(m);
    if (i - cm.drop < 0 || static_cast<std::size_t>(i) >= cm.comp.size()) continue;
    const PolyMatrix<K>& pm = cm.comp[i];
    if (pm.cols() == 0) continue;
    Index col = F.mono_index(i, m);
    const std::vector<DpMonomial>& rows = F.monomials(i - cm.drop);
    for (Index row = 0; row < pm.rows(); ++row) {
      if (entry_is_zero(pm(row, col))) continue;
      TateElem<K> term{x.hom - cm.drop,
                       {{rows[row], F.ring().multiply(r, pm(row, col))}}};
      out = F.add(out, term);
    }
  }
  return out;
}

// Composite a ∘ b of two window chain self-maps; components missing on
// either side stay empty and are skipped by every consumer.
template <class K>
ChainMap<K> chain_compose(const GradedRing<K>& R, const ChainMap<K>& a, const ChainMap<K>& b) {
  ChainMap<K> out{a.drop + b.drop, {}};
  out.comp.resize(b.comp.size());
  for (std::size_t i = 0; i < b.comp.size(); ++i) {
    int mid = static_cast<int>(i) - b.drop;
    if (mid < 0 || static_cast<std::size_t>(mid) >= a.comp.size()) continue;
    if (b.comp[i].cols() == 0 || a.comp[mid].cols() == 0) continue;
    out.comp[i] = compose(R, a.comp[mid], b.comp[i]);
  }
  return out;
}

// The j-th column of a chain-map component as a closure element of the given
// homological degree.
template <class K>
TateElem<K> column_elem(const TateClosure<K>& F, const PolyMatrix<K>& pm, int hom, Index j) {
  TateElem<K> out = F.zero(hom);
  const std::vector<DpMonomial>& rows = F.monomials(hom);
  for (Index i = 0; i < pm.rows(); ++i) {
    if (entry_is_zero(pm(i, j))) continue;
    TateElem<K> term{hom, {{rows[i], pm(i, j)}}};
    out = F.add(out, term);
  }
  return out;
}

// --- actions on Tor = H(F (x) G) ------------------------------------------

// Right action of a derivation class: the derivation crosses the whole cycle
// and lands on the first factor, z.theta = -(-1)^{|theta||z|} theta(x) (x) y.
template <class K>
TensorElem<K> tor_right_action(const TensorComplex<K>& T, const TensorElem<K>& z,
                               const GammaDerivation<K>& th) {
  TensorElem<K> out = T.derive_first(th, z);
  return (th.drop * z.hom) % 2 == 0 ? T.negate(out) : out;
}

// Left action: the class crosses only the first factor and hits the second.
template <class K>
TensorElem<K> tor_left_action(const TensorComplex<K>& T, const GammaDerivation<K>& th,
                              const TensorElem<K>& z) {
  return T.derive_second(th, z);
}

template <class K>
TensorElem<K> tor_left_action(const TensorComplex<K>& T, const ChainMap<K>& cm,
                              const TensorElem<K>& z) {
  return T.chain_second(cm, z);
}

// Right action by a lifted class: same shape as the derivation case, and
// compatible with it through products, (z.a).b = -(-1)^{|a||b|} z.[b ∘ a].
template <class K>
TensorElem<K> tor_right_action(const TensorComplex<K>& T, const TensorElem<K>& z,
                               const ChainMap<K>& cm) {
  TensorElem<K> out = T.chain_first(cm, z);
  return (cm.drop * z.hom) % 2 == 0 ? T.negate(out) : out;
}

// Right action in the dual-side convention: the class hits the second factor,
// signed by passing over the complete cycle.
template <class K>
TensorElem<K> tor_right_action_second(const TensorComplex<K>& T, const TensorElem<K>& z,
                                      const GammaDerivation<K>& th) {
  TensorElem<K> out = T.derive_second(th, z);
  return (th.drop * z.hom) % 2 == 0 ? T.negate(out) : out;
}

// --- structured Tor generators over a quadratic-split presentation ---------

// Degree-1 generators T_i (x) 1 - 1 (x) T_i, one per ring variable.
template <class K>
TensorElem<K> tor_gen_deg1(const TensorComplex<K>& T, std::size_t i) {
  const TateClosure<K>& F = T.first_factor();
  TateElem<K> v = F.variable_elem(i);
  return T.subtract(T.tensor_of(v, F.one()), T.tensor_of(F.one(), v));
}

// Degree-2 generators, one per defining relation: the S-variable commutator
// corrected by the quadratic-split coefficients r_{lm},
// S_j (x) 1 + sum r_{lm} (T_m (x) T_l - 1 (x) T_m T_l) - 1 (x) S_j.
template <class K>
TensorElem<K> tor_gen_deg2(const TensorComplex<K>& T, std::size_t j) {
  const TateClosure<K>& F = T.first_factor();
  const GradedRing<K>& R = T.ring();
  TateElem<K> s = F.variable_elem(R.nvars() + j);
  TensorElem<K> out = T.subtract(T.tensor_of(s, F.one()), T.tensor_of(F.one(), s));
  for (const auto& [lm, poly] : F.relation_split(j)) {
    RingElement<K> rb = R.element(poly);
    TateElem<K> tl = F.variable_elem(static_cast<std::size_t>(lm.first));
    TateElem<K> tm = F.variable_elem(static_cast<std::size_t>(lm.second));
    TensorElem<K> cross =
        T.subtract(T.tensor_of(tm, tl), T.tensor_of(F.one(), F.multiply(tm, tl)));
    out = T.add(out, T.coeff_scale(rb, cross));
  }
  return out;
}

// --- Hom(F, R) and the Ext_R(k, R) window ----------------------------------

// Homogeneous element of Hom_R(F_p, R) of internal degree u: the value on the
// j-th generator lies in R_{t_j - u}.
template <class K>
struct HomElem {
  int p = 0, u = 0;
  std::vector<RingElement<K>> vals;
};

template <class K>
HomElem<K> hom_zero(const TateClosure<K>& F, int p, int u) {
  HomElem<K> out{p, u, {}};
  for (int t : F.gen_degrees(p)) out.vals.push_back(F.ring().zero(t - u));
  return out;
}

template <class K>
bool hom_is_zero(const HomElem<K>& x) {
  for (const auto& r : x.vals)
    if (!entry_is_zero(r)) return false;
  return true;
}

template <class K>
HomElem<K> hom_add(const GradedRing<K>& R, const HomElem<K>& x, const HomElem<K>& y) {
  if (x.p != y.p || x.u != y.u) throw PreconditionError("adding maps of different degrees");
  HomElem<K> out = x;
  for (std::size_t j = 0; j < out.vals.size(); ++j) out.vals[j] = R.add(out.vals[j], y.vals[j]);
  return out;
}

template <class K>
HomElem<K> hom_scale(const K& k, const HomElem<K>& x) {
  HomElem<K> out = x;
  for (auto& r : out.vals) r.c = k * r.c;
  return out;
}

template <class K>
HomElem<K> hom_negate(const GradedRing<K>& R, const HomElem<K>& x) {
  return hom_scale(make_scalar<K>(-1, R.field()), x);
}

template <class K>
HomElem<K> hom_sub(const GradedRing<K>& R, const HomElem<K>& x, const HomElem<K>& y) {
  return hom_add(R, x, hom_negate(R, y));
}

template <class K>
bool hom_equal(const GradedRing<K>& R, const HomElem<K>& x, const HomElem<K>& y) {
  return hom_is_zero(hom_sub(R, x, y));
}

// Value on an internally homogeneous element of F_p of internal degree t.
template <class K>
RingElement<K> hom_value(const TateClosure<K>& F, const HomElem<K>& phi, const TateElem<K>& x,
                         int t) {
  const GradedRing<K>& R = F.ring();
  RingElement<K> out = R.zero(t - phi.u);
  for (const auto& [m, r] : x.c) {
    const RingElement<K>& v = phi.vals[F.mono_index(phi.p, m)];
    if (entry_is_zero(r) || entry_is_zero(v)) continue;
    out = R.add(out, R.multiply(r, v));
  }
  return out;
}

// Coordinates in the Hom(F_p, R)^u layout used by realize_precompose.
template <class K>
Vec<K> hom_coords(const TateClosure<K>& F, const HomElem<K>& phi) {
  const GradedRing<K>& R = F.ring();
  Index total = 0;
  std::vector<Index> off(phi.vals.size() + 1, 0);
  for (std::size_t j = 0; j < phi.vals.size(); ++j)
    off[j + 1] = off[j] + R.dim_certified(F.gen_degrees(phi.p)[j] - phi.u);
  total = off.back();
  Vec<K> out = Vec<K>::Zero(total);
  for (std::size_t j = 0; j < phi.vals.size(); ++j) {
    if (phi.vals[j].c.size() != off[j + 1] - off[j])
      throw InternalError("hom element does not match the realized block");
    out.segment(off[j], phi.vals[j].c.size()) = phi.vals[j].c;
  }
  return out;
}

template <class K>
HomElem<K> hom_from_coords(const TateClosure<K>& F, int p, int u, const Vec<K>& v) {
  const GradedRing<K>& R = F.ring();
  HomElem<K> out = hom_zero(F, p, u);
  Index at = 0;
  for (std::size_t j = 0; j < out.vals.size(); ++j) {
    Index len = R.dim_certified(F.gen_degrees(p)[j] - u);
    if (len > 0) out.vals[j].c = v.segment(at, len);
    at += len;
  }
  if (at != v.size()) throw PreconditionError("coordinate vector has the wrong size");
  return out;
}

// (phi.a)(f) = phi(a f): contraction by a closure element of internal degree
// adeg, the right F-module structure on Hom(F, R).
template <class K>
HomElem<K> hom_contract(const TateClosure<K>& F, const HomElem<K>& phi, const TateElem<K>& a,
                        int adeg) {
  int p = phi.p - a.hom;
  if (p < 0) throw PreconditionError("contraction drops below degree zero");
  HomElem<K> out = hom_zero(F, p, phi.u - adeg);
  const std::vector<DpMonomial>& gens = F.monomials(p);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    int tf = F.gen_degrees(p)[j];
    TateElem<K> af = F.multiply(a, F.monomial_elem(gens[j]));
    out.vals[j] = hom_value(F, phi, af, adeg + tf);
  }
  return out;
}

// d(phi) = -(-1)^p phi ∘ d_{p+1}.
template <class K>
HomElem<K> hom_differential(const TateClosure<K>& F, const HomElem<K>& phi) {
  const GradedRing<K>& R = F.ring();
  const PolyMatrix<K>& d = F.diff(phi.p + 1);
  HomElem<K> out = hom_zero(F, phi.p + 1, phi.u);
  for (Index j = 0; j < d.cols(); ++j) {
    RingElement<K> acc = out.vals[j];
    for (Index row = 0; row < d.rows(); ++row) {
      if (entry_is_zero(d(row, j)) || entry_is_zero(phi.vals[row])) continue;
      acc = R.add(acc, R.multiply(d(row, j), phi.vals[row]));
    }
    if (phi.p % 2 == 0) acc.c = -acc.c;
    out.vals[j] = acc;
  }
  return out;
}

// Plain precomposition phi ∘ cm with a chain self-map of F.
template <class K>
HomElem<K> hom_precompose(const TateClosure<K>& F, const HomElem<K>& phi, const ChainMap<K>& cm) {
  const GradedRing<K>& R = F.ring();
  int sp = phi.p + cm.drop;
  if (sp > F.length()) throw TruncationError("precomposition needs a longer closure");
  HomElem<K> out = hom_zero(F, sp, phi.u + chain_idrop(cm));
  if (static_cast<std::size_t>(sp) >= cm.comp.size()) return out;
  const PolyMatrix<K>& pm = cm.comp[sp];
  if (pm.cols() == 0) return out;
  for (Index j = 0; j < pm.cols(); ++j) {
    RingElement<K> acc = out.vals[j];
    for (Index row = 0; row < pm.rows(); ++row) {
      if (entry_is_zero(pm(row, j)) || entry_is_zero(phi.vals[row])) continue;
      acc = R.add(acc, R.multiply(pm(row, j), phi.vals[row]));
    }
    out.vals[j] = acc;
  }
  return out;
}

// Window of Ext_R(k, R) computed from Hom(F, R), with canonical cocycle
// representatives per bidegree (p, u).
template <class K>
class ExtRWindow {
 public:
  ExtRWindow(const TateClosure<K>& F, int pmax) : F_(&F), pmax_(pmax) {
    if (pmax_ + 1 > F.length()) throw TruncationError("ext window needs a longer closure");
  }

  int pmax() const { return pmax_; }
  const TateClosure<K>& closure() const { return *F_; }

  const QuotientSpace<K>& window(int p, int u) const {
    if (p < 0 || p > pmax_) throw TruncationError("ext window outside computed range");
    auto key = std::make_pair(p, u);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const GradedRing<K>& R = F_->ring();
    Mat<K> outof = realize_precompose(R, F_->diff(p + 1), u);
    Mat<K> into =
        p == 0 ? Mat<K>::Zero(outof.cols(), 0) : realize_precompose(R, F_->diff(p), u);
    QuotientSpace<K> h = homology(outof, into);
    return cache_.emplace(key, std::move(h)).first->second;
  }

  std::map<int, long long> dims(int p, int umin, int umax) const {
    std::map<int, long long> out;
    for (int u = umin; u <= umax; ++u) {
      Index d = window(p, u).dim();
      if (d > 0) out[u] = d;
    }
    return out;
  }

  HomElem<K> class_rep(int p, int u, Index j) const {
    return hom_from_coords(*F_, p, u, Vec<K>(window(p, u).reps.col(j)));
  }

  Vec<K> reduce_checked(const HomElem<K>& phi) const {
    if (!hom_is_zero(hom_differential(*F_, phi)))
      throw InternalError("ext class input is not a cocycle");
    return window(phi.p, phi.u).reduce(hom_coords(*F_, phi));
  }

 private:
  const TateClosure<K>* F_;
  int pmax_;
  mutable std::map<std::pair<int, int>, QuotientSpace<K>> cache_;
};

// --- Ext(k,k) as the dual of Tor -------------------------------------------

// Left action of a derivation class on functionals: lift the functional to a
// chain map, postcompose the derivation, read the counit values.
template <class K>
Cocycle<K> dual_tor_action(const TateClosure<K>& G, const GammaDerivation<K>& th,
                           const Cocycle<K>& alpha) {
  if (alpha.n + th.drop > G.length())
    throw TruncationError("dual action needs a longer closure");
  ChainMap<K> lift = lift_cocycle(G, alpha);
  int n = alpha.n + th.drop;
  Cocycle<K> out{n, alpha.u + th.idrop, Vec<K>::Zero(G.rank(n))};
  for (Index j = 0; j < G.rank(n); ++j) {
    TateElem<K> x = column_elem(G, lift.comp[n], th.drop, j);
    TateElem<K> y = G.apply(th, x);
    auto it = y.c.find(dp_strip({}));
    if (it == y.c.end() || it->second.deg != 0) continue;
    out.values[j] = it->second.c[0];
  }
  return out;
}

// Same with the acting class given as a lifted chain map.
template <class K>
Cocycle<K> dual_tor_action(const TateClosure<K>& G, const ChainMap<K>& cm,
                           const Cocycle<K>& alpha) {
  if (alpha.n + cm.drop > G.length())
    throw TruncationError("dual action needs a longer closure");
  ChainMap<K> lift = lift_cocycle(G, alpha);
  int n = alpha.n + cm.drop;
  Cocycle<K> out{n, alpha.u + chain_idrop(cm), Vec<K>::Zero(G.rank(n))};
  for (Index j = 0; j < G.rank(n); ++j) {
    TateElem<K> x = column_elem(G, lift.comp[n], cm.drop, j);
    TateElem<K> y = chain_apply(G, cm, x);
    auto it = y.c.find(dp_strip({}));
    if (it == y.c.end() || it->second.deg != 0) continue;
    out.values[j] = it->second.c[0];
  }
  return out;
}

// Pairing of a functional with a Tor class given by a cycle in F (x) G: the
// functional reads the second-factor augmentation image.
template <class K>
K dual_pairing(const TensorComplex<K>& T, const Cocycle<K>& alpha, const TensorElem<K>& z,
               int t) {
  const TateClosure<K>& A = T.first_factor();
  K out = make_scalar<K>(0, T.ring().field());
  if (alpha.n != z.hom) return out;
  Vec<K> image = T.eps_second(z);
  for (Index j = 0; j < image.size(); ++j) {
    if (A.gen_degrees(z.hom)[j] != t || alpha.u != t) continue;
    out += alpha.values[j] * image[j];
  }
  return out;
}

// --- bounded maps F -> G ----------------------------------------------------

// Window of a bounded map: component i sends F_i to G_{i-q} with internal
// degree v; components outside [0, W] are zero by fiat.
template <class K>
struct BndMap {
  int q = 0, v = 0;
  std::vector<PolyMatrix<K>> comp;
  int window() const { return static_cast<int>(comp.size()) - 1; }
};

template <class K>
BndMap<K> bnd_zero(const TateClosure<K>& F, const TateClosure<K>& G, int q, int v, int W) {
  if (W > F.length()) throw TruncationError("bounded window exceeds the source closure");
  BndMap<K> out{q, v, {}};
  out.comp.reserve(W + 1);
  for (int i = 0; i <= W; ++i) {
    int j = i - q;
    if (j > G.length()) throw TruncationError("bounded window exceeds the target closure");
    std::vector<int> rd = j >= 0 ? G.gen_degrees(j) : std::vector<int>{};
    out.comp.push_back(zero_poly_matrix(F.ring(), rd, F.gen_degrees(i), v));
  }
  return out;
}

template <class K>
void pm_accumulate(const GradedRing<K>& R, PolyMatrix<K>& dst, const PolyMatrix<K>& src,
                   bool negate) {
  if (dst.rdegs != src.rdegs || dst.cdegs != src.cdegs || dst.idrop != src.idrop)
    throw InternalError("accumulating mismatched matrices");
  for (std::size_t i = 0; i < dst.a.size(); ++i) {
    RingElement<K> e = src.a[i];
    if (negate) e.c = -e.c;
    dst.a[i] = R.add(dst.a[i], e);
  }
}

template <class K>
BndMap<K> bnd_add(const GradedRing<K>& R, const BndMap<K>& x, const BndMap<K>& y, bool negate_y) {
  if (x.q != y.q || x.v != y.v || x.window() != y.window())
    throw PreconditionError("combining bounded maps of different bidegrees");
  BndMap<K> out = x;
  for (int i = 0; i <= x.window(); ++i) pm_accumulate(R, out.comp[i], y.comp[i], negate_y);
  return out;
}

template <class K>
bool bnd_is_zero(const BndMap<K>& x) {
  for (const auto& pm : x.comp)
    if (!poly_matrix_is_zero(pm)) return false;
  return true;
}

template <class K>
bool bnd_equal(const GradedRing<K>& R, const BndMap<K>& x, const BndMap<K>& y) {
  return bnd_is_zero(bnd_add(R, x, y, true));
}

// (d beta)_i = d^G ∘ beta_i - (-1)^q beta_{i-1} ∘ d^F, on the window.
template <class K>
BndMap<K> bnd_differential(const TateClosure<K>& F, const TateClosure<K>& G, const BndMap<K>& b) {
  const GradedRing<K>& R = F.ring();
  int W = b.window();
  BndMap<K> out = bnd_zero(F, G, b.q + 1, b.v, W);
  for (int i = 0; i <= W; ++i) {
    int j = i - b.q;
    if (j >= 1 && j <= G.length() && b.comp[i].rows() > 0)
      pm_accumulate(R, out.comp[i], compose(R, G.diff(j), b.comp[i]), false);
    if (i >= 1 && out.comp[i].rows() > 0 && b.comp[i - 1].rows() > 0)
      pm_accumulate(R, out.comp[i], compose(R, b.comp[i - 1], F.diff(i)), b.q % 2 == 0);
  }
  return out;
}

// beta ∘ cm for a chain self-map of F (plain composition, no signs).
template <class K>
BndMap<K> bnd_precompose(const TateClosure<K>& F, const TateClosure<K>& G, const BndMap<K>& b,
                         const ChainMap<K>& cm) {
  const GradedRing<K>& R = F.ring();
  int W = b.window();
  BndMap<K> out = bnd_zero(F, G, b.q + cm.drop, b.v + chain_idrop(cm), W);
  for (int i = cm.drop; i <= W; ++i) {
    if (static_cast<std::size_t>(i) >= cm.comp.size() || cm.comp[i].cols() == 0) continue;
    if (b.comp[i - cm.drop].rows() == 0) continue;
    out.comp[i] = compose(R, b.comp[i - cm.drop], cm.comp[i]);
  }
  return out;
}

// cm ∘ beta for a chain self-map of G (plain composition, no signs).
template <class K>
BndMap<K> bnd_postcompose(const TateClosure<K>& F, const TateClosure<K>& G, const ChainMap<K>& cm,
                          const BndMap<K>& b) {
  const GradedRing<K>& R = F.ring();
  int W = b.window();
  BndMap<K> out = bnd_zero(F, G, b.q + cm.drop, b.v + chain_idrop(cm), W);
  for (int i = 0; i <= W; ++i) {
    int j = i - b.q;
    if (j < cm.drop || static_cast<std::size_t>(j) >= cm.comp.size()) continue;
    if (cm.comp[j].cols() == 0 || b.comp[i].rows() == 0) continue;
    out.comp[i] = compose(R, cm.comp[j], b.comp[i]);
  }
  return out;
}

// omega(phi (x) z): f -> (-1)^{|f||y|} phi(x f) y over the terms x (x) y of
// the cycle z, assembled as a bounded-map window.  t is z's internal degree.
template <class K>
BndMap<K> apply_omega(const TensorComplex<K>& T, const HomElem<K>& phi, const TensorElem<K>& z,
                      int t, int W) {
  const TateClosure<K>& F = T.first_factor();
  const TateClosure<K>& G = T.second_factor();
  const GradedRing<K>& R = T.ring();
  BndMap<K> out = bnd_zero(F, G, phi.p - z.hom, phi.u - t, W);
  for (const auto& [pr, r] : z.c) {
    if (entry_is_zero(r)) continue;
    int ha = F.hom_degree(pr.first);
    int hb = z.hom - ha;
    int i = phi.p - ha;
    if (i < 0 || i > W) continue;
    Index row = G.mono_index(hb, pr.second);
    bool flip = (i * hb) % 2 != 0;
    const std::vector<DpMonomial>& cols = F.monomials(i);
    for (Index j = 0; j < static_cast<Index>(cols.size()); ++j) {
      auto prod = F.mono_product(pr.first, cols[j]);
      if (!prod) continue;
      const RingElement<K>& val = phi.vals[F.mono_index(phi.p, prod->first)];
      if (entry_is_zero(val)) continue;
      RingElement<K> w = R.multiply(r, val);
      w.c = make_scalar<K>(prod->second, R.field()) * w.c;
      if (flip) w.c = -w.c;
      out.comp[i](row, j) = R.add(out.comp[i](row, j), w);
    }
  }
  return out;
}

// --- window cohomology of the bounded maps (the independent oracle) --------

// Flat coordinates for the bounded maps of bidegree (q, v) on the window
// 0..W: per component i, a block of dim R_{t_a - v - t_b} for each generator
// pair (a in F_i, b in G_{i-q}).
template <class K>
class BndWindowCoords {
 public:
  BndWindowCoords(const TateClosure<K>& F, const TateClosure<K>& G, int q, int v, int W)
      : F_(&F), G_(&G), q_(q), v_(v), w_(W) {
    const GradedRing<K>& R = F.ring();
    if (W > F.length()) throw TruncationError("oracle window exceeds the source closure");
    Index run = 0;
    start_.resize(W + 1);
    for (int i = 0; i <= W; ++i) {
      int j = i - q;
      if (j > G.length()) throw TruncationError("oracle window exceeds the target closure");
      if (j < 0) continue;
      const auto& ad = F.gen_degrees(i);
      const auto& bd = G.gen_degrees(j);
      start_[i].assign(ad.size() * bd.size() + 1, run);
      std::size_t idx = 0;
      for (std::size_t a = 0; a < ad.size(); ++a)
        for (std::size_t b = 0; b < bd.size(); ++b) {
          run += R.dim_certified(ad[a] - v - bd[b]);
          start_[i][++idx] = run;
        }
    }
    total_ = run;
  }

  int q() const { return q_; }
  int v() const { return v_; }
  int window() const { return w_; }
  Index total() const { return total_; }

  Index block(int i, Index a, Index b) const {
    return start_[i][static_cast<std::size_t>(a) * G_->rank(i - q_) + b];
  }

  Vec<K> pack(const BndMap<K>& m) const {
    if (m.q != q_ || m.v != v_ || m.window() != w_)
      throw PreconditionError("bounded map does not match the coordinate window");
    Vec<K> out = Vec<K>::Zero(total_);
    for (int i = 0; i <= w_; ++i) {
      int j = i - q_;
      if (j < 0 || j > G_->length()) continue;
      const PolyMatrix<K>& pm = m.comp[i];
      for (Index a = 0; a < pm.cols(); ++a)
        for (Index b = 0; b < pm.rows(); ++b) {
          const RingElement<K>& e = pm(b, a);
          if (e.c.size() > 0) out.segment(block(i, a, b), e.c.size()) = e.c;
        }
    }
    return out;
  }

 private:
  const TateClosure<K>* F_;
  const TateClosure<K>* G_;
  int q_, v_, w_;
  Index total_ = 0;
  std::vector<std::vector<Index>> start_;
};

// Matrix of the bounded differential from the (q, v) window into the
// (q+1, v) window.  With dst one window wider than src this is the full
// differential on maps supported in the source window, including the edge
// term that lands one level above it; with equal windows that term is cut.
template <class K>
Mat<K> bounded_block_matrix(const TateClosure<K>& F, const TateClosure<K>& G,
                            const BndWindowCoords<K>& src, const BndWindowCoords<K>& dst) {
  const GradedRing<K>& R = F.ring();
  int q = src.q(), v = src.v(), W = src.window();
  Mat<K> out = Mat<K>::Zero(dst.total(), src.total());
  for (int i = 0; i <= W; ++i) {
    int j = i - q;
    if (j < 0) continue;
    const auto& ad = F.gen_degrees(i);
    const auto& bd = G.gen_degrees(j);
    if (j >= 1) {
      const PolyMatrix<K>& dg = G.diff(j);
      for (std::size_t a = 0; a < ad.size(); ++a)
        for (Index b = 0; b < static_cast<Index>(bd.size()); ++b) {
          int sdeg = ad[a] - v - bd[b];
          if (R.dim_certified(sdeg) == 0) continue;
          for (Index b1 = 0; b1 < dg.rows(); ++b1) {
            if (entry_is_zero(dg(b1, b))) continue;
            Mat<K> blk = R.mult_matrix(dg(b1, b), sdeg);
            if (blk.rows() == 0 || blk.cols() == 0) continue;
            out.block(dst.block(i, static_cast<Index>(a), b1),
                      src.block(i, static_cast<Index>(a), b), blk.rows(), blk.cols()) += blk;
          }
        }
    }
    if (i + 1 <= dst.window()) {
      const PolyMatrix<K>& df = F.diff(i + 1);
      bool negate = q % 2 == 0;
      for (Index a = 0; a < static_cast<Index>(ad.size()); ++a)
        for (Index b = 0; b < static_cast<Index>(bd.size()); ++b) {
          int sdeg = ad[a] - v - bd[b];
          if (R.dim_certified(sdeg) == 0) continue;
          for (Index a1 = 0; a1 < df.cols(); ++a1) {
            if (entry_is_zero(df(a, a1))) continue;
            Mat<K> blk = R.mult_matrix(df(a, a1), sdeg);
            if (blk.rows() == 0 || blk.cols() == 0) continue;
            if (negate) blk = -blk;
            out.block(dst.block(i + 1, a1, b), src.block(i, a, b), blk.rows(), blk.cols()) +=
                blk;
          }
        }
    }
  }
  return out;
}

// Independent window cohomology of the bounded maps F -> G, with the
// stability of each answer assessed by recomputing on the window + 1.
struct WindowedDim {
  long long dim = 0;
  bool stable = false;
};

template <class K>
class BoundedHomOracle {
 public:
  BoundedHomOracle(const TateClosure<K>& F, const TateClosure<K>& G, int W)
      : F_(&F), G_(&G), w_(W) {}

  int window() const { return w_; }

  // Homology of the finitely supported maps at (q, v): cocycles are window
  // maps whose full differential vanishes, edge term included, and
  // boundaries come from maps supported one level lower.
  const QuotientSpace<K>& cohomology(int q, int v, int W) const {
    auto key = std::make_tuple(q, v, W);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    BndWindowCoords<K> at(*F_, *G_, q, v, W), up(*F_, *G_, q + 1, v, W + 1),
        down(*F_, *G_, q - 1, v, W - 1);
    Mat<K> outof = bounded_block_matrix(*F_, *G_, at, up);
    Mat<K> into = bounded_block_matrix(*F_, *G_, down, at);
    QuotientSpace<K> h = homology(outof, into);
    return cache_.emplace(key, std::move(h)).first->second;
  }

  WindowedDim dims(int q, int v) const {
    long long d0 = cohomology(q, v, w_).dim();
    long long d1 = cohomology(q, v, w_ + 1).dim();
    return {d0, d0 == d1};
  }

  // Class coordinates of a window map that is a full cocycle, edge term
  // included (hard error if not).
  Vec<K> reduce_checked(const BndMap<K>& m) const {
    BndWindowCoords<K> at(*F_, *G_, m.q, m.v, m.window()),
        up(*F_, *G_, m.q + 1, m.v, m.window() + 1);
    Vec<K> img = bounded_block_matrix(*F_, *G_, at, up) * at.pack(m);
    for (Index i = 0; i < img.size(); ++i)
      if (!is_zero(img[i])) throw InternalError("bounded map input is not a cocycle");
    return cohomology(m.q, m.v, m.window()).reduce(at.pack(m));
  }

 private:
  const TateClosure<K>* F_;
  const TateClosure<K>* G_;
  int w_;
  mutable std::map<std::tuple<int, int, int>, QuotientSpace<K>> cache_;
};

// --- symmetry scan ----------------------------------------------------------

struct SymmetryWitness {
  std::string ext_label;
  int ext_degree = 0;
  int tor_degree = 0, tor_internal = 0;
  Index tor_index = 0;
  std::string left_str, right_str;
};

struct SymmetryReport {
  bool symmetric = true;
  long long checked = 0;
  std::optional<SymmetryWitness> witness;
};

// Compares a.m with (-1)^{|a||m|} m.a for every generator class, and for
// every product of two generators, against every Tor basis class of degree
// at most max_degree.
template <class K>
SymmetryReport check_tor_symmetry(const TensorComplex<K>& T,
                                  const std::vector<GammaDerivation<K>>& gens, int max_degree) {
  SymmetryReport rep;
  auto record = [&](const std::string& label, int adeg, int n, int t, Index idx,
                    const TensorElem<K>& left, const TensorElem<K>& right, int tt) {
    ++rep.checked;
    TensorElem<K> flipped = (adeg * n) % 2 == 0 ? right : T.negate(right);
    Vec<K> lc = T.reduce_checked(left, tt);
    Vec<K> rc = T.reduce_checked(flipped, tt);
    Vec<K> diff = lc - rc;
    for (Index i = 0; i < diff.size(); ++i) {
      if (is_zero(diff[i])) continue;
      if (!rep.witness) {
        rep.symmetric = false;
        rep.witness = SymmetryWitness{label, adeg, n, t, idx, T.str(left), T.str(right)};
      }
      return;
    }
  };
  for (int n = 1; n <= max_degree; ++n) {
    for (auto [t, dim] : T.dims(n)) {
      for (Index idx = 0; idx < dim; ++idx) {
        TensorElem<K> z = T.class_rep(n, t, static_cast<Index>(idx));
        for (const auto& th : gens) {
          if (th.drop > n) continue;
          record(th.name, th.drop, n, t, idx, tor_left_action(T, th, z),
                 tor_right_action(T, z, th), t - th.idrop);
        }
        for (const auto& a : gens)
          for (const auto& b : gens) {
            if (a.drop + b.drop > n) continue;
            TensorElem<K> left = tor_left_action(T, a, tor_left_action(T, b, z));
            TensorElem<K> right = tor_right_action(T, tor_right_action(T, z, a), b);
            record(a.name + b.name, a.drop + b.drop, n, t, idx, left, right,
                   t - a.idrop - b.idrop);
          }
      }
    }
  }
  return rep;
}

}  // namespace stabcoh
