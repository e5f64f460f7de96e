#pragma once

#include <map>
#include <utility>
#include <vector>

#include "stabcoh/rcomplex.hpp"

namespace stabcoh {

// Block-diagonal matrix of x_v on (+)_i R_{t - degs[i]} -> (+)_i R_{t+1 - degs[i]}.
template <class K>
Mat<K> realize_variable(const GradedRing<K>& R, const std::vector<int>& degs, int v, int t) {
  Index rtot = 0, ctot = 0;
  std::vector<Index> roff = block_offsets(R, degs, t + 1, rtot);
  std::vector<Index> coff = block_offsets(R, degs, t, ctot);
  Mat<K> out = Mat<K>::Zero(rtot, ctot);
  for (std::size_t i = 0; i < degs.size(); ++i) {
    Index rows = roff[i + 1] - roff[i], cols = coff[i + 1] - coff[i];
    if (rows == 0 || cols == 0) continue;
    out.block(roff[i], coff[i], rows, cols) = R.var_matrix(v, t - degs[i]);
  }
  return out;
}

// Minimal graded free resolution of a cyclic module.  Kernels are computed
// per internal degree; the new generators at degree t are canonical
// representatives completing R_1 * (kernel at t-1) inside the kernel at t,
// which keeps every differential entry inside the maximal ideal.  d∘d = 0 is
// asserted as an identity of polynomial matrices.
template <class K>
class Resolution {
 public:
  using Scalar = K;

  Resolution(const GradedRing<K>& ring, CyclicModule<K> mod, int length)
      : ring_(&ring), module_(std::move(mod)), len_(length) {
    if (len_ < 1) throw PreconditionError("resolution length must be at least 1");
    build();
    verify();
  }

  const GradedRing<K>& ring() const { return *ring_; }
  const CyclicModule<K>& module() const { return module_; }
  bool resolves_residue_field() const { return module_.is_residue_field(); }
  int length() const { return len_; }

  Index rank(int n) const {
    return n < 0 || n > len_ ? 0 : static_cast<Index>(degs_[n].size());
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

  // Realized boundary at internal degree t; n = 0 is the augmentation onto
  // the module.  Cached, since lifts revisit the same bidegrees.
  const Mat<K>& boundary(int n, int t) const {
    auto key = std::make_pair(n, t);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Mat<K> m;
    if (n == 0) {
      m = augmentation(t);
    } else if (n > len_) {
      throw InternalError("boundary beyond the computed length");
    } else {
      m = realize(*ring_, diff_[n], t);
    }
    return cache_.emplace(key, std::move(m)).first->second;
  }

 private:
  Mat<K> augmentation(int t) const {
    if (t < 0) return Mat<K>::Zero(0, 0);
    Mat<K> out = Mat<K>::Zero(module_.dim_certified(t), ring_->dim_certified(t));
    for (Index j = 0; j < out.cols(); ++j) {
      Vec<K> unit = Vec<K>::Zero(out.cols());
      unit[j] = make_scalar<K>(1, ring_->field());
      out.col(j) = module_.reduce(t, unit);
    }
    return out;
  }

  void build() {
    const GradedRing<K>& R = *ring_;
    degs_.assign(len_ + 1, {});
    degs_[0] = {0};
    diff_.resize(len_ + 1);
    for (int n = 1; n <= len_; ++n) {
      std::vector<std::pair<int, Vec<K>>> gens;
      Mat<K> prev_kernel;  // kernel at t-1, in realized coordinates
      for (int t = 0; t <= R.bound(); ++t) {
        Mat<K> z = kernel_basis(boundary(n - 1, t));
        std::vector<Vec<K>> pushed;
        if (t >= 1 && prev_kernel.cols() > 0) {
          for (int v = 0; v < R.nvars(); ++v) {
            Mat<K> xv = realize_variable(R, degs_[n - 1], v, t - 1);
            for (Index c = 0; c < prev_kernel.cols(); ++c)
              pushed.push_back(xv * prev_kernel.col(c));
          }
        }
        Mat<K> sub = Mat<K>::Zero(z.rows(), static_cast<Index>(pushed.size()));
        for (std::size_t c = 0; c < pushed.size(); ++c)
          sub.col(static_cast<Index>(c)) = pushed[c];
        QuotientSpace<K> q = QuotientSpace<K>::build(sub, z);
        for (Index c = 0; c < q.reps.cols(); ++c) gens.emplace_back(t, q.reps.col(c));
        prev_kernel = std::move(z);
      }
      for (const auto& [t, vec] : gens) degs_[n].push_back(t);
      diff_[n] = zero_poly_matrix(R, degs_[n - 1], degs_[n], 0);
      for (std::size_t j = 0; j < gens.size(); ++j)
        set_column_from_coords(R, diff_[n], static_cast<Index>(j), gens[j].second);
    }
  }

  void verify() const {
    const GradedRing<K>& R = *ring_;
    for (int n = 2; n <= len_; ++n)
      if (!poly_matrix_is_zero(compose(R, diff_[n - 1], diff_[n])))
        throw InternalError("differential does not square to zero");
    for (int n = 1; n <= len_; ++n)
      for (Index i = 0; i < diff_[n].rows(); ++i)
        for (Index j = 0; j < diff_[n].cols(); ++j)
          if (diff_[n].entry_degree(i, j) < 1 && !entry_is_zero(diff_[n](i, j)))
            throw InternalError("resolution is not minimal");
    for (int t = 0; t <= R.bound(); ++t) {
      Mat<K> prod = boundary(0, t) * boundary(1, t);
      for (Index i = 0; i < prod.size(); ++i)
        if (!is_zero(*(prod.data() + i)))
          throw InternalError("first differential does not land in the kernel");
    }
  }

  const GradedRing<K>* ring_;
  CyclicModule<K> module_;
  int len_;
  std::vector<std::vector<int>> degs_;
  std::vector<PolyMatrix<K>> diff_;
  mutable std::map<std::pair<int, int>, Mat<K>> cache_;
};

// Cohomology class of Hom(F, k) for a minimal resolution F: the differential
// there is zero, so a class is exactly its vector of values on generators.
// Homogeneous of internal degree u: supported on the generators of degree u.
template <class K>
struct Cocycle {
  int n = 0, u = 0;
  Vec<K> values;
};

template <class K>
bool cocycle_is_zero(const Cocycle<K>& c) {
  for (Index i = 0; i < c.values.size(); ++i)
    if (!is_zero(c.values[i])) return false;
  return true;
}

// The functions below are generic over the resolution-shaped complex: any
// type with Scalar, ring(), length(), rank(n), gen_degrees(n), diff(n),
// boundary(n, t) and resolves_residue_field() qualifies.

template <class Res>
std::vector<Cocycle<typename Res::Scalar>> ext_basis(const Res& res, int n) {
  using K = typename Res::Scalar;
  std::vector<Cocycle<K>> out;
  for (Index j = 0; j < res.rank(n); ++j) {
    Cocycle<K> c{n, res.gen_degrees(n)[j], Vec<K>::Zero(res.rank(n))};
    c.values[j] = make_scalar<K>(1, res.ring().field());
    out.push_back(std::move(c));
  }
  return out;
}

// Lift of a cocycle on F_n to a chain map F -> F dropping homological degree
// by n and internal degree by u, normalized by d∘beta_i = (-1)^n beta_{i-1}∘d.
// Needs F to resolve the residue field (the first step factors through the
// augmentation, whose kernel must be the image of d_1).
template <class Res>
ChainMap<typename Res::Scalar> lift_cocycle(const Res& res,
                                            const Cocycle<typename Res::Scalar>& c) {
  using K = typename Res::Scalar;
  const GradedRing<K>& R = res.ring();
  if (!res.resolves_residue_field())
    throw PreconditionError("cocycle lifting requires a resolution of the residue field");
  if (c.values.size() != res.rank(c.n)) throw InternalError("cocycle has the wrong rank");

  ChainMap<K> out;
  out.drop = c.n;
  out.comp.resize(res.length() + 1);
  out.comp[c.n] = zero_poly_matrix(R, res.gen_degrees(0), res.gen_degrees(c.n), c.u);
  for (Index j = 0; j < res.rank(c.n); ++j) {
    if (is_zero(c.values[j])) continue;
    if (res.gen_degrees(c.n)[j] != c.u)
      throw PreconditionError("cocycle is not homogeneous of the stated internal degree");
    out.comp[c.n](0, j) = RingElement<K>{0, Vec<K>::Constant(1, c.values[j])};
  }

  K sign = make_scalar<K>(c.n % 2 == 0 ? 1 : -1, R.field());
  for (int i = c.n + 1; i <= res.length(); ++i) {
    PolyMatrix<K> rhs = compose(R, out.comp[i - 1], res.diff(i));
    scale_in_place(rhs, sign);
    out.comp[i] = zero_poly_matrix(R, res.gen_degrees(i - c.n), res.gen_degrees(i), c.u);
    for (Index j = 0; j < res.rank(i); ++j) {
      int t = res.gen_degrees(i)[j] - c.u;
      Vec<K> b = column_coords(R, rhs, j);
      auto x = solve_linear(res.boundary(i - c.n, t), b);
      if (!x) throw InternalError("chain-map lift is blocked; the complex is not exact here");
      set_column_from_coords(R, out.comp[i], j, *x);
    }
  }
  return out;
}

// Composition product on Ext(k, k): the class of a ∘ (lift of b), read off on
// the generators of F_{|a|+|b|} through the augmentation.
template <class Res>
Cocycle<typename Res::Scalar> yoneda_product(const Res& res,
                                             const Cocycle<typename Res::Scalar>& a,
                                             const Cocycle<typename Res::Scalar>& b) {
  using K = typename Res::Scalar;
  int n = a.n + b.n;
  if (n > res.length())
    throw TruncationError("resolution is too short for a product in degree " + std::to_string(n));
  ChainMap<K> lift = lift_cocycle(res, b);
  const PolyMatrix<K>& top = lift.comp[n];
  Cocycle<K> out{n, a.u + b.u, Vec<K>::Zero(res.rank(n))};
  for (Index j = 0; j < res.rank(n); ++j) {
    K acc = make_scalar<K>(0, res.ring().field());
    for (Index i = 0; i < top.rows(); ++i) {
      if (top.entry_degree(i, j) != 0 || entry_is_zero(top(i, j))) continue;
      acc += a.values[i] * top(i, j).c[0];
    }
    out.values[j] = acc;
  }
  return out;
}

// Homology dimensions of F (x) N by internal degree, for n up to length - 1.
template <class Res>
std::map<int, long long> tor_dims(const Res& res, const CyclicModule<typename Res::Scalar>& N,
                                  int n, int tmax) {
  using K = typename Res::Scalar;
  if (n < 0 || n >= res.length())
    throw TruncationError("homological degree " + std::to_string(n) +
                          " needs a longer resolution");
  std::map<int, long long> out;
  for (int t = 0; t <= tmax; ++t) {
    Mat<K> into = realize(N, res.diff(n + 1), t);
    Mat<K> outof = n == 0 ? Mat<K>::Zero(0, into.rows()) : realize(N, res.diff(n), t);
    Index dim = homology(outof, into).dim();
    if (dim > 0) out[t] = dim;
  }
  return out;
}

// Cohomology dimensions of Hom(F, R) by internal degree, for n up to
// length - 1.  Keys follow the convention that a map of internal degree u
// sends the generator of degree t_j into R_{t_j - u}.
template <class Res>
std::map<int, long long> ext_ring_dims(const Res& res, int n, int umin, int umax) {
  using K = typename Res::Scalar;
  if (n < 0 || n >= res.length())
    throw TruncationError("cohomological degree " + std::to_string(n) +
                          " needs a longer resolution");
  const GradedRing<K>& R = res.ring();
  std::map<int, long long> out;
  for (int u = umin; u <= umax; ++u) {
    Mat<K> outof = realize_precompose(R, res.diff(n + 1), u);
    Mat<K> into = n == 0 ? Mat<K>::Zero(outof.cols(), 0) : realize_precompose(R, res.diff(n), u);
    Index dim = homology(outof, into).dim();
    if (dim > 0) out[u] = dim;
  }
  return out;
}

}  // namespace stabcoh
