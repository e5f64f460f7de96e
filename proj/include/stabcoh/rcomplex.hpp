#pragma once

#include <utility>
#include <vector>

#include "stabcoh/ring.hpp"

namespace stabcoh {

// Matrix over the ring with homogeneous entries.  Rows and columns carry the
// internal degrees of the free-module generators they stand for; the entry at
// (i, j) is pinned to degree cdegs[j] - rdegs[i] - idrop (idrop = 0 for
// differentials, the internal degree of the map for chain maps).  Realizing
// at an internal degree t expands every entry to a multiplication matrix
// between graded components.
template <class K>
struct PolyMatrix {
  std::vector<int> rdegs, cdegs;
  int idrop = 0;
  std::vector<RingElement<K>> a;  // row-major

  Index rows() const { return static_cast<Index>(rdegs.size()); }
  Index cols() const { return static_cast<Index>(cdegs.size()); }
  RingElement<K>& operator()(Index i, Index j) { return a[i * cols() + j]; }
  const RingElement<K>& operator()(Index i, Index j) const { return a[i * cols() + j]; }
  int entry_degree(Index i, Index j) const { return cdegs[j] - rdegs[i] - idrop; }
};

template <class K>
bool entry_is_zero(const RingElement<K>& e) {
  for (Index i = 0; i < e.c.size(); ++i)
    if (!is_zero(e.c[i])) return false;
  return true;
}

template <class K>
PolyMatrix<K> zero_poly_matrix(const GradedRing<K>& R, std::vector<int> rdegs,
                               std::vector<int> cdegs, int idrop = 0) {
  PolyMatrix<K> m;
  m.rdegs = std::move(rdegs);
  m.cdegs = std::move(cdegs);
  m.idrop = idrop;
  m.a.reserve(m.rdegs.size() * m.cdegs.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m.a.push_back(R.zero(m.entry_degree(i, j)));
  return m;
}

template <class K>
PolyMatrix<K> compose(const GradedRing<K>& R, const PolyMatrix<K>& f, const PolyMatrix<K>& g) {
  if (f.cdegs != g.rdegs) throw InternalError("composing maps with mismatched generators");
  PolyMatrix<K> out = zero_poly_matrix(R, f.rdegs, g.cdegs, f.idrop + g.idrop);
  for (Index i = 0; i < out.rows(); ++i)
    for (Index k = 0; k < out.cols(); ++k) {
      for (Index j = 0; j < f.cols(); ++j) {
        if (entry_is_zero(f(i, j)) || entry_is_zero(g(j, k))) continue;
        out(i, k) = R.add(out(i, k), R.multiply(f(i, j), g(j, k)));
      }
    }
  return out;
}

template <class K>
void scale_in_place(PolyMatrix<K>& m, const K& s) {
  for (auto& e : m.a) e.c = s * e.c;
}

template <class K>
bool poly_matrix_is_zero(const PolyMatrix<K>& m) {
  for (const auto& e : m.a)
    if (!entry_is_zero(e)) return false;
  return true;
}

// Starting offsets of the generator blocks of (+)_i C_{t - degs[i]}, where C
// supplies certified component dimensions.
template <class C>
std::vector<Index> block_offsets(const C& comps, const std::vector<int>& degs, int t,
                                 Index& total) {
  std::vector<Index> off(degs.size() + 1, 0);
  for (std::size_t i = 0; i < degs.size(); ++i)
    off[i + 1] = off[i] + comps.dim_certified(t - degs[i]);
  total = off.empty() ? 0 : off.back();
  return off;
}

// Matrix of the map at internal degree t, with components taken in `comps`
// (the ring itself, or a cyclic module for the induced map on F (x) N).
// Source blocks live at t - cdegs[j], target blocks at t - idrop - rdegs[i].
template <class K, class C>
Mat<K> realize(const C& comps, const PolyMatrix<K>& m, int t) {
  Index rtot = 0, ctot = 0;
  std::vector<Index> roff = block_offsets(comps, m.rdegs, t - m.idrop, rtot);
  std::vector<Index> coff = block_offsets(comps, m.cdegs, t, ctot);
  Mat<K> out = Mat<K>::Zero(rtot, ctot);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (entry_is_zero(m(i, j))) continue;
      Mat<K> block = comps.mult_matrix(m(i, j), t - m.cdegs[j]);
      if (block.rows() == 0 || block.cols() == 0) continue;
      out.block(roff[i], coff[j], block.rows(), block.cols()) = block;
    }
  return out;
}

// Coordinates of the j-th column as an element of the realized row module at
// internal degree cdegs[j] - idrop (the entries' coefficient vectors, stacked).
template <class K>
Vec<K> column_coords(const GradedRing<K>& R, const PolyMatrix<K>& m, Index j) {
  int t = m.cdegs[j] - m.idrop;
  Index total = 0;
  std::vector<Index> off = block_offsets(R, m.rdegs, t, total);
  Vec<K> out = Vec<K>::Zero(total);
  for (Index i = 0; i < m.rows(); ++i) {
    const RingElement<K>& e = m(i, j);
    if (e.c.size() != off[i + 1] - off[i])
      throw InternalError("entry coordinates do not match the realized block");
    out.segment(off[i], e.c.size()) = e.c;
  }
  return out;
}

template <class K>
void set_column_from_coords(const GradedRing<K>& R, PolyMatrix<K>& m, Index j, const Vec<K>& v) {
  int t = m.cdegs[j] - m.idrop;
  Index total = 0;
  std::vector<Index> off = block_offsets(R, m.rdegs, t, total);
  if (v.size() != total) throw InternalError("column coordinates have the wrong size");
  for (Index i = 0; i < m.rows(); ++i)
    m(i, j) = RingElement<K>{t - m.rdegs[i], v.segment(off[i], off[i + 1] - off[i])};
}

// Hom(F_n, R) at internal degree u has blocks R_{t_j - u} over the generators
// of F_n (a map sends the generator of degree t_j into R_{t_j - u}).  This is
// the matrix of "precompose with d: F_{n+1} -> F_n" in those coordinates,
// i.e. Hom(F_n, R)^u -> Hom(F_{n+1}, R)^u.
template <class K>
Mat<K> realize_precompose(const GradedRing<K>& R, const PolyMatrix<K>& d, int u) {
  std::vector<Index> roff(d.cols() + 1, 0), coff(d.rows() + 1, 0);
  for (Index l = 0; l < d.cols(); ++l) roff[l + 1] = roff[l] + R.dim_certified(d.cdegs[l] - u);
  for (Index j = 0; j < d.rows(); ++j) coff[j + 1] = coff[j] + R.dim_certified(d.rdegs[j] - u);
  Mat<K> out = Mat<K>::Zero(roff.back(), coff.back());
  for (Index j = 0; j < d.rows(); ++j)
    for (Index l = 0; l < d.cols(); ++l) {
      if (entry_is_zero(d(j, l))) continue;
      Mat<K> block = R.mult_matrix(d(j, l), d.rdegs[j] - u);
      if (block.rows() == 0 || block.cols() == 0) continue;
      out.block(roff[l], coff[j], block.rows(), block.cols()) = block;
    }
  return out;
}

// Differential and cycle data of a two-step window C_{n+1} -> C_n -> C_{n-1}:
// homology classes with canonical cycle representatives.
template <class K>
QuotientSpace<K> homology(const Mat<K>& out_map, const Mat<K>& in_map) {
  if (out_map.cols() != in_map.rows())
    throw InternalError("homology window maps do not compose");
  if (in_map.cols() > 0 && out_map.rows() > 0) {
    Mat<K> square = out_map * in_map;
    for (Index i = 0; i < square.rows(); ++i)
      for (Index j = 0; j < square.cols(); ++j)
        if (!is_zero(square(i, j))) throw InternalError("boundaries are not cycles");
  }
  return QuotientSpace<K>::build(in_map, kernel_basis(out_map));
}

// Chain map F -> F lowering homological degree by `drop` and internal degree
// by the components' idrop; comp[i] is the piece F_i -> F_{i - drop}.
template <class K>
struct ChainMap {
  int drop = 0;
  std::vector<PolyMatrix<K>> comp;
};

}  // namespace stabcoh
