#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "stabcoh/actions.hpp"

namespace stabcoh {

// Window model of the bounded cohomology of the residue field: classes of
// bounded maps from the closure to itself are modeled by the tensor product
// of the ring-valued cohomology window with the Tor table.  Bidegrees are
// q = p - n (cohomological) and v = u - t (internal); every class is a sum
// of pure tensors phi (x) z with phi a ring-valued cocycle class and z a
// homology class of the tensor square.
template <class K>
class BoundedExt {
 public:
  struct Elt {
    int p = 0, u = 0;
    Index i = 0;
    int n = 0, t = 0;
    Index j = 0;
  };

  BoundedExt(const TateClosure<K>& F, int pmax, int nmax)
      : F_(&F), ext_(F, pmax), pmax_(pmax), nmax_(nmax) {
    if (nmax_ > F.levels_certified())
      throw TruncationError("tor side of the model exceeds the certified closure");
    const GradedRing<K>& R = F.ring();
    for (int p = 0; p <= pmax_; ++p) {
      const std::vector<int>& gd = F.gen_degrees(p);
      int hi = *std::max_element(gd.begin(), gd.end());
      // over a ring alive past its bound only internal degrees the Hilbert
      // window covers can be scanned; anything lower is taken as zero, and
      // the oracle comparison is what backs that reading
      int lo;
      if (R.artinian_within_bound()) {
        lo = *std::min_element(gd.begin(), gd.end()) - R.bound();
      } else {
        const std::vector<int>& gq = F.gen_degrees(p + 1);
        lo = *std::max_element(gq.begin(), gq.end()) - R.bound();
      }
      exts_.push_back(ext_.dims(p, lo, hi));
    }
    for (int n = 0; n <= nmax_; ++n) tors_.push_back(F.graded_betti(n));
    for (int p = 0; p <= pmax_; ++p)
      for (const auto& [u, du] : exts_[p])
        for (int n = 0; n <= nmax_; ++n)
          for (const auto& [t, dt] : tors_[n]) dims_[{p - n, u - t}] += du * dt;
  }

  const TateClosure<K>& closure() const { return *F_; }
  int pmax() const { return pmax_; }
  int nmax() const { return nmax_; }
  const ExtRWindow<K>& ext() const { return ext_; }
  const std::map<int, long long>& ext_dims(int p) const { return exts_[p]; }
  const std::map<int, long long>& tor_dims(int n) const { return tors_[n]; }
  const std::map<std::pair<int, int>, long long>& dims() const { return dims_; }

  long long dim(int q, int v) const {
    auto it = dims_.find({q, v});
    return it == dims_.end() ? 0 : it->second;
  }

  // basis of the (q, v) slot: outer loop ascending in (p, u), inner over the
  // class indices of both tensor legs; the tor level is pinned by n = p - q
  std::vector<Elt> basis(int q, int v) const {
    std::vector<Elt> out;
    for (int p = std::max(0, q); p <= pmax_; ++p) {
      int n = p - q;
      if (n < 0 || n > nmax_) continue;
      for (const auto& [u, du] : exts_[p]) {
        int t = u - v;
        auto it = tors_[n].find(t);
        if (it == tors_[n].end()) continue;
        for (Index i = 0; i < static_cast<Index>(du); ++i)
          for (Index j = 0; j < static_cast<Index>(it->second); ++j)
            out.push_back({p, u, i, n, t, j});
      }
    }
    return out;
  }

  Index elt_index(int q, int v, const Elt& e) const {
    std::vector<Elt> bas = basis(q, v);
    for (std::size_t k = 0; k < bas.size(); ++k) {
      const Elt& b = bas[k];
      if (b.p == e.p && b.u == e.u && b.i == e.i && b.t == e.t && b.j == e.j)
        return static_cast<Index>(k);
    }
    throw PreconditionError("element is not in the model window");
  }

 private:
  const TateClosure<K>* F_;
  ExtRWindow<K> ext_;
  int pmax_, nmax_;
  std::vector<std::map<int, long long>> exts_, tors_;
  std::map<std::pair<int, int>, long long> dims_;
};

// Right action of a dual-derivation class on one model basis element, as
// coordinates in the basis at (q + drop, v + idrop):
//   (phi (x) z).theta = (-1)^{|theta| n} ((phi theta) (x) z - phi (x) theta(z)),
// where phi theta precomposes with the derivation chain and theta(z) derives
// the first tensor leg.  cm must be the chain of th on the model closure.
template <class K>
Vec<K> model_right_action(const BoundedExt<K>& B, const TensorComplex<K>& T,
                          const GammaDerivation<K>& th, const ChainMap<K>& cm,
                          const typename BoundedExt<K>::Elt& e, int q, int v) {
  const TateClosure<K>& F = B.closure();
  if (e.p + th.drop > B.pmax()) throw TruncationError("right action leaves the model window");
  int q2 = q + th.drop, v2 = v + th.idrop;
  Vec<K> out = Vec<K>::Zero(static_cast<Index>(B.basis(q2, v2).size()));
  bool neg = (th.drop * e.n) % 2 != 0;

  HomElem<K> pt = hom_precompose(F, B.ext().class_rep(e.p, e.u, e.i), cm);
  Vec<K> ce = B.ext().reduce_checked(pt);
  for (Index i2 = 0; i2 < ce.size(); ++i2) {
    if (is_zero(ce[i2])) continue;
    typename BoundedExt<K>::Elt e2{e.p + th.drop, e.u + th.idrop, i2, e.n, e.t, e.j};
    Index at = B.elt_index(q2, v2, e2);
    if (neg)
      out[at] -= ce[i2];
    else
      out[at] += ce[i2];
  }

  if (e.n - th.drop >= 0) {
    TensorElem<K> tz = T.derive_first(th, T.class_rep(e.n, e.t, e.j));
    Vec<K> ct = T.reduce_checked(tz, e.t - th.idrop);
    for (Index j2 = 0; j2 < ct.size(); ++j2) {
      if (is_zero(ct[j2])) continue;
      typename BoundedExt<K>::Elt e2{e.p, e.u, e.i, e.n - th.drop, e.t - th.idrop, j2};
      Index at = B.elt_index(q2, v2, e2);
      if (neg)
        out[at] += ct[j2];
      else
        out[at] -= ct[j2];
    }
  }
  return out;
}

// Left action of a dual-derivation class through the second tensor leg:
//   alpha . (phi (x) z) = (-1)^{|alpha| p} phi (x) (alpha . z).
template <class K>
Vec<K> model_left_action(const BoundedExt<K>& B, const TensorComplex<K>& T,
                         const GammaDerivation<K>& th, const typename BoundedExt<K>::Elt& e,
                         int q, int v) {
  int q2 = q + th.drop, v2 = v + th.idrop;
  Vec<K> out = Vec<K>::Zero(static_cast<Index>(B.basis(q2, v2).size()));
  if (e.n - th.drop < 0) return out;
  TensorElem<K> az = tor_left_action(T, th, T.class_rep(e.n, e.t, e.j));
  Vec<K> ct = T.reduce_checked(az, e.t - th.idrop);
  bool neg = (th.drop * e.p) % 2 != 0;
  for (Index j2 = 0; j2 < ct.size(); ++j2) {
    if (is_zero(ct[j2])) continue;
    typename BoundedExt<K>::Elt e2{e.p, e.u, e.i, e.n - th.drop, e.t - th.idrop, j2};
    Index at = B.elt_index(q2, v2, e2);
    if (neg)
      out[at] -= ct[j2];
    else
      out[at] += ct[j2];
  }
  return out;
}

template <class K>
Mat<K> model_right_matrix(const BoundedExt<K>& B, const TensorComplex<K>& T,
                          const GammaDerivation<K>& th, const ChainMap<K>& cm, int q, int v) {
  std::vector<typename BoundedExt<K>::Elt> bas = B.basis(q, v);
  Index rows = static_cast<Index>(B.basis(q + th.drop, v + th.idrop).size());
  Mat<K> m = Mat<K>::Zero(rows, static_cast<Index>(bas.size()));
  for (std::size_t c = 0; c < bas.size(); ++c)
    m.col(static_cast<Index>(c)) = model_right_action(B, T, th, cm, bas[c], q, v);
  return m;
}

template <class K>
Mat<K> model_left_matrix(const BoundedExt<K>& B, const TensorComplex<K>& T,
                         const GammaDerivation<K>& th, int q, int v) {
  std::vector<typename BoundedExt<K>::Elt> bas = B.basis(q, v);
  Index rows = static_cast<Index>(B.basis(q + th.drop, v + th.idrop).size());
  Mat<K> m = Mat<K>::Zero(rows, static_cast<Index>(bas.size()));
  for (std::size_t c = 0; c < bas.size(); ++c)
    m.col(static_cast<Index>(c)) = model_left_action(B, T, th, bas[c], q, v);
  return m;
}

struct ModelOracleIso {
  long long model_dim = 0;
  long long oracle_dim = 0;
  bool bijective = false;
};

// Sends each model basis class through the evaluation-to-bounded-maps
// realization and reduces in the window oracle: the composite is a bijection
// exactly when the dimensions agree and the image matrix has full rank.
template <class K>
ModelOracleIso kappa_omega_iso(const BoundedExt<K>& B, const TensorComplex<K>& T,
                               const BoundedHomOracle<K>& O, int q, int v, int W) {
  std::vector<typename BoundedExt<K>::Elt> bas = B.basis(q, v);
  ModelOracleIso rep;
  rep.model_dim = static_cast<long long>(bas.size());
  rep.oracle_dim = O.cohomology(q, v, W).dim();
  Mat<K> img = Mat<K>::Zero(static_cast<Index>(rep.oracle_dim), static_cast<Index>(rep.model_dim));
  for (std::size_t c = 0; c < bas.size(); ++c) {
    const typename BoundedExt<K>::Elt& e = bas[c];
    BndMap<K> om = apply_omega(T, B.ext().class_rep(e.p, e.u, e.i),
                               T.class_rep(e.n, e.t, e.j), e.t, W);
    img.col(static_cast<Index>(c)) = O.reduce_checked(om);
  }
  rep.bijective = rep.model_dim == rep.oracle_dim && kernel_basis(img).cols() == 0;
  return rep;
}

// --- the evaluation realization on the dual side -----------------------------
//
// A window map phi between the closures evaluates to psi(g (x) f) = phi(g) f.
// Its two module structures transport to plain pre/post composition on phi,
// which the identity drivers below express valuewise.

template <class K>
TateElem<K> chi_value(const TensorComplex<K>& T, const BndMap<K>& phi, const TensorElem<K>& x) {
  const TateClosure<K>& A = T.first_factor();
  const TateClosure<K>& C = T.second_factor();
  TateElem<K> out = C.zero(x.hom - phi.q);
  for (const auto& [pr, r] : x.c) {
    if (entry_is_zero(r)) continue;
    int ha = A.hom_degree(pr.first);
    if (ha > phi.window()) continue;
    Index col = A.mono_index(ha, pr.first);
    TateElem<K> pg = column_elem(C, phi.comp[ha], ha - phi.q, col);
    out = C.add(out, C.coeff_times(r, C.multiply(pg, C.monomial_elem(pr.second))));
  }
  return out;
}

// theta . psi evaluated at x: theta(psi(x)) - (-1)^{|theta| |psi|} psi(theta
// applied to the second leg).
template <class K>
TateElem<K> chi_left_value(const TensorComplex<K>& T, const GammaDerivation<K>& th,
                           const BndMap<K>& phi, const TensorElem<K>& x) {
  const TateClosure<K>& C = T.second_factor();
  TateElem<K> a = C.apply(th, chi_value(T, phi, x));
  TateElem<K> b = chi_value(T, phi, T.derive_second(th, x));
  if ((th.drop * phi.q) % 2 == 0) b = C.negate(b);
  return C.add(a, b);
}

// psi . alpha evaluated at x: psi(alpha applied to the first leg), no sign.
template <class K>
TateElem<K> chi_right_value(const TensorComplex<K>& T, const BndMap<K>& phi,
                            const ChainMap<K>& cm, const TensorElem<K>& x) {
  return chi_value(T, phi, T.chain_first(cm, x));
}

}  // namespace stabcoh
