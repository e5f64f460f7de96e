#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabcoh/linalg.hpp"
#include "stabcoh/monomial.hpp"
#include "stabcoh/parser.hpp"

namespace stabcoh {

// Homogeneous element, stored as coordinates in the ring's standard-monomial
// basis of its degree.  The zero element of any degree is a zero vector.
template <class K>
struct RingElement {
  int deg = 0;
  Vec<K> c;
};

// Graded quotient of a polynomial ring by homogeneous relations of degree at
// least two, computed exactly degree by degree up to a fixed bound.  In each
// degree the relation span is row-reduced against the deglex-descending
// monomial list, so pivots land on the greatest monomials and the surviving
// standard monomials are canonical.
template <class K>
class GradedRing {
 public:
  GradedRing(const ParsedPresentation& pres, int bound)
      : spec_(pres.field), vars_(pres.vars), bound_(bound) {
    const int e = nvars();
    type_relations(pres.gens);
    int maxdeg = 0;
    for (const auto& g : gens_) maxdeg = std::max(maxdeg, g.deg);
    if (bound_ < maxdeg)
      throw PreconditionError("degree bound " + std::to_string(bound_) +
                              " is below the top relation degree " + std::to_string(maxdeg));
    if (bound_ < 2) throw PreconditionError("degree bound must be at least 2");

    monos_.resize(bound_ + 1);
    index_.resize(bound_ + 1);
    std_cols_.resize(bound_ + 1);
    nf_.resize(bound_ + 1);
    hilbert_.assign(bound_ + 1, 0);
    for (int d = 0; d <= bound_; ++d) {
      monos_[d] = monomials_of_degree(e, d);
      for (std::size_t i = 0; i < monos_[d].size(); ++i)
        index_[d].emplace(monos_[d][i], static_cast<Index>(i));
      reduce_degree(d);
    }
    for (int d = 0; d < bound_; ++d) {
      varmul_.emplace_back();
      auto& per_var = varmul_.back();
      for (int v = 0; v < e; ++v) per_var.push_back(build_var_matrix(v, d));
    }
    for (int d = 1; d <= bound_; ++d)
      if (hilbert_[d - 1] == 0 && hilbert_[d] != 0)
        throw InternalError("Hilbert function rose after vanishing");
  }

  const FieldSpec& field() const { return spec_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  int bound() const { return bound_; }
  const std::vector<std::string>& var_names() const { return vars_; }
  const std::vector<long long>& hilbert() const { return hilbert_; }
  const std::vector<int>& relation_degrees() const { return gen_degrees_; }
  int relation_count() const { return static_cast<int>(gens_.size()); }
  // Relations as given, in input order (relation_degrees is sorted, this is not).
  const std::vector<IntPolynomial>& relation_polys() const { return raw_gens_; }

  Index dim(int d) const {
    if (d < 0) return 0;
    require_in_bound(d);
    return hilbert_[d];
  }

  // Like dim, but past the bound returns 0 when the Hilbert function has
  // provably vanished (it cannot come back: R is generated in degree one) and
  // refuses to guess otherwise.
  Index dim_certified(int d) const {
    if (d < 0) return 0;
    if (d <= bound_) return hilbert_[d];
    if (artinian_within_bound()) return 0;
    throw TruncationError("component of degree " + std::to_string(d) +
                          " is not certified at bound " + std::to_string(bound_));
  }

  // Standard monomials of degree d, in deglex-descending order.
  const std::vector<Monomial>& basis(int d) const {
    require_in_bound(d);
    return basis_[d];
  }

  RingElement<K> zero(int d) const { return {d, Vec<K>::Zero(dim_or_zero(d))}; }

  RingElement<K> var(int v) const {
    RingElement<K> r = zero(1);
    Monomial m = Monomial::var(v, nvars());
    r.c[index_of_basis(1, m)] = make_scalar<K>(1, spec_);
    return r;
  }

  // Normal form of a homogeneous integer polynomial.  Rejects zero (after
  // coefficients are read into the field) and inhomogeneous input.
  RingElement<K> element(const IntPolynomial& p) const {
    auto typed = type_poly(p);
    if (typed.terms.empty())
      throw PreconditionError("polynomial is zero over " + spec_.name());
    require_in_bound(typed.deg);
    Vec<K> full = Vec<K>::Zero(static_cast<Index>(monos_[typed.deg].size()));
    for (const auto& [m, coef] : typed.terms) full[index_.at(typed.deg).at(m)] += coef;
    return {typed.deg, nf_[typed.deg] * full};
  }

  bool is_zero(const RingElement<K>& a) const {
    for (Index i = 0; i < a.c.size(); ++i)
      if (!stabcoh::is_zero(a.c[i])) return false;
    return true;
  }

  RingElement<K> add(const RingElement<K>& a, const RingElement<K>& b) const {
    if (a.deg != b.deg) throw InternalError("adding ring elements of different degrees");
    return {a.deg, a.c + b.c};
  }

  RingElement<K> scale(const K& k, const RingElement<K>& a) const { return {a.deg, k * a.c}; }

  RingElement<K> multiply(const RingElement<K>& a, const RingElement<K>& b) const {
    int d = a.deg + b.deg;
    require_in_bound(d);
    Vec<K> full = Vec<K>::Zero(static_cast<Index>(monos_[d].size()));
    for (Index i = 0; i < a.c.size(); ++i) {
      if (stabcoh::is_zero(a.c[i])) continue;
      for (Index j = 0; j < b.c.size(); ++j) {
        if (stabcoh::is_zero(b.c[j])) continue;
        Monomial m = basis_[a.deg][i] * basis_[b.deg][j];
        full[index_.at(d).at(m)] += a.c[i] * b.c[j];
      }
    }
    return {d, nf_[d] * full};
  }

  // Multiplication by x_v as a matrix R_d -> R_{d+1} in standard bases.
  const Mat<K>& var_matrix(int v, int d) const {
    require_in_bound(d + 1);
    if (d < 0) throw InternalError("var_matrix below degree zero");
    return varmul_[d][v];
  }

  // Multiplication by a as a matrix R_d -> R_{d+|a|}.
  Mat<K> mult_matrix(const RingElement<K>& a, int d) const {
    Mat<K> out = Mat<K>::Zero(dim_certified(d + a.deg), dim_certified(d));
    if (out.rows() == 0 || out.cols() == 0) return out;
    for (Index j = 0; j < out.cols(); ++j) {
      RingElement<K> unit = zero(d);
      unit.c[j] = make_scalar<K>(1, spec_);
      out.col(j) = multiply(a, unit).c;
    }
    return out;
  }

  std::string str(const RingElement<K>& a) const {
    std::string out;
    for (Index i = 0; i < a.c.size(); ++i) {
      if (stabcoh::is_zero(a.c[i])) continue;
      std::string coef = a.c[i].str();
      std::string mono = monomial_to_string(basis_[a.deg][i], vars_);
      if (!out.empty()) out += " + ";
      if (coef == "1" && mono != "1")
        out += mono;
      else if (mono == "1")
        out += coef;
      else
        out += coef + "*" + mono;
    }
    return out.empty() ? "0" : out;
  }

  bool artinian_within_bound() const {
    return std::find(hilbert_.begin(), hilbert_.end(), 0) != hilbert_.end();
  }

  // The Hilbert function matches the complete-intersection prediction
  // prod (1 - t^{d_i}) / (1 - t)^e through the bound.  A match certifies the
  // regular-sequence pattern at this scale; degrees past the bound are not
  // examined.
  bool complete_intersection_certified() const {
    std::vector<long long> s(bound_ + 1, 0);
    s[0] = 1;
    for (int d : gen_degrees_)
      for (int i = bound_; i >= d; --i) s[i] -= s[i - d];
    for (int v = 0; v < nvars(); ++v) {
      long long run = 0;
      for (int i = 0; i <= bound_; ++i) {
        run += s[i];
        s[i] = run;
      }
    }
    for (int i = 0; i <= bound_; ++i)
      if (s[i] != hilbert_[i]) return false;
    return true;
  }

  // Last degree with a nonzero component (== bound when not artinian).
  int top_degree() const {
    for (int d = bound_; d >= 0; --d)
      if (hilbert_[d] != 0) return d;
    throw InternalError("ring has no nonzero component");
  }

  // dim_k of the annihilator of the maximal ideal; needs the Hilbert function
  // to vanish inside the bound so no socle can hide past the truncation.
  Index socle_dim() const {
    if (!artinian_within_bound())
      throw TruncationError("socle is only certified for rings that vanish within the bound");
    Index total = 0;
    for (int d = 0; d <= top_degree(); ++d) total += kernel_basis(stacked_vars(d)).cols();
    return total;
  }

  std::vector<int> socle_degrees() const {
    if (!artinian_within_bound())
      throw TruncationError("socle is only certified for rings that vanish within the bound");
    std::vector<int> out;
    for (int d = 0; d <= top_degree(); ++d) {
      Index k = kernel_basis(stacked_vars(d)).cols();
      for (Index i = 0; i < k; ++i) out.push_back(d);
    }
    return out;
  }

  struct TypedPoly {
    int deg = 0;
    std::vector<std::pair<Monomial, K>> terms;  // nonzero coefficients only
  };

  // Reads integer coefficients into the field and drops the ones that vanish
  // there; homogeneity is checked on what survives.
  TypedPoly type_poly(const IntPolynomial& p) const {
    TypedPoly out;
    int deg = -1;
    for (const auto& [m, c] : p) {
      K coef = make_scalar<K>(c, spec_);
      if (stabcoh::is_zero(coef)) continue;
      if (deg == -1) deg = m.degree();
      if (m.degree() != deg)
        throw PreconditionError("polynomial is not homogeneous: " + int_poly_to_string(p, vars_));
      out.terms.emplace_back(m, coef);
    }
    out.deg = deg == -1 ? 0 : deg;
    return out;
  }

 private:
  void require_in_bound(int d) const {
    if (d > bound_)
      throw TruncationError("degree " + std::to_string(d) + " exceeds the computed bound " +
                            std::to_string(bound_));
  }

  Index dim_or_zero(int d) const { return d < 0 || d > bound_ ? 0 : hilbert_[d]; }

  Index index_of_basis(int d, const Monomial& m) const {
    const auto& bs = basis_[d];
    for (std::size_t i = 0; i < bs.size(); ++i)
      if (bs[i] == m) return static_cast<Index>(i);
    throw InternalError("monomial is not a standard monomial");
  }

  void type_relations(const std::vector<IntPolynomial>& raw) {
    raw_gens_ = raw;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      TypedPoly t = type_poly(raw[i]);
      if (t.terms.empty())
        throw PreconditionError("relation " + std::to_string(i + 1) + " is zero over " +
                                spec_.name());
      if (t.deg < 2)
        throw PreconditionError("relation " + int_poly_to_string(raw[i], vars_) +
                                " does not lie in the square of the maximal ideal");
      gens_.push_back({t.deg, {}});
      gens_.back().terms = std::move(t.terms);
      gen_degrees_.push_back(t.deg);
    }
    std::sort(gen_degrees_.begin(), gen_degrees_.end());
  }

  // Row vector of m * g over the degree-(|m|+|g|) monomial list.
  Vec<K> span_row(const Monomial& m, const TypedPoly& g) const {
    int d = m.degree() + g.deg;
    Vec<K> row = Vec<K>::Zero(static_cast<Index>(monos_[d].size()));
    for (const auto& [gm, coef] : g.terms) row[index_.at(d).at(m * gm)] += coef;
    return row;
  }

  void reduce_degree(int d) {
    const Index cols = static_cast<Index>(monos_[d].size());
    std::vector<Vec<K>> rows, pushed;
    int provided = 0;
    for (const auto& g : gens_) {
      if (g.deg > d) continue;
      if (g.deg == d) ++provided;
      for (const Monomial& m : monomials_of_degree(nvars(), d - g.deg)) {
        rows.push_back(span_row(m, g));
        if (m.degree() > 0) pushed.push_back(rows.back());
      }
    }
    Mat<K> span = Mat<K>::Zero(static_cast<Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) span.row(static_cast<Index>(i)) = rows[i];
    RrefResult<K> r = rref(span);

    if (provided > 0) {
      Mat<K> ps = Mat<K>::Zero(static_cast<Index>(pushed.size()), cols);
      for (std::size_t i = 0; i < pushed.size(); ++i) ps.row(static_cast<Index>(i)) = pushed[i];
      Index needed = r.rank - rank(ps);
      if (needed != provided)
        throw PreconditionError("relations are not a minimal generating set: degree " +
                                std::to_string(d) + " lists " + std::to_string(provided) +
                                " but needs " + std::to_string(needed));
    }

    std::vector<bool> is_pivot(cols, false);
    for (Index c : r.pivots) is_pivot[c] = true;
    basis_.emplace_back();
    for (Index c = 0; c < cols; ++c) {
      if (!is_pivot[c]) {
        std_cols_[d].push_back(c);
        basis_[d].push_back(monos_[d][c]);
      }
    }
    hilbert_[d] = static_cast<long long>(std_cols_[d].size());

    const Index s = static_cast<Index>(std_cols_[d].size());
    nf_[d] = Mat<K>::Zero(s, cols);
    for (Index k = 0; k < s; ++k) nf_[d](k, std_cols_[d][k]) = make_scalar<K>(1, spec_);
    for (Index pr = 0; pr < r.rank; ++pr)
      for (Index k = 0; k < s; ++k) nf_[d](k, r.pivots[pr]) = -r.mat(pr, std_cols_[d][k]);
  }

  Mat<K> build_var_matrix(int v, int d) const {
    Mat<K> out = Mat<K>::Zero(dim_or_zero(d + 1), dim_or_zero(d));
    Monomial xv = Monomial::var(v, nvars());
    for (Index j = 0; j < out.cols(); ++j) {
      Monomial m = xv * basis_[d][j];
      out.col(j) = nf_[d + 1].col(index_.at(d + 1).at(m));
    }
    return out;
  }

  Mat<K> stacked_vars(int d) const {
    const int e = nvars();
    Mat<K> out(dim_or_zero(d + 1) * e, dim_or_zero(d));
    for (int v = 0; v < e; ++v) out.middleRows(dim_or_zero(d + 1) * v, dim_or_zero(d + 1)) = varmul_[d][v];
    return out;
  }

  FieldSpec spec_;
  std::vector<std::string> vars_;
  int bound_;
  std::vector<TypedPoly> gens_;
  std::vector<IntPolynomial> raw_gens_;
  std::vector<int> gen_degrees_;
  std::vector<std::vector<Monomial>> monos_;  // all monomials, deglex descending
  std::vector<std::map<Monomial, Index, DeglexGreater>> index_;
  std::vector<std::vector<Index>> std_cols_;
  std::vector<std::vector<Monomial>> basis_;  // standard monomials per degree
  std::vector<Mat<K>> nf_;                    // full coords -> standard coords
  std::vector<long long> hilbert_;
  std::vector<std::vector<Mat<K>>> varmul_;  // [d][v]: R_d -> R_{d+1}
};

// Cyclic module R/J for a homogeneous ideal J, including J = 0 (the ring as a
// module over itself) and J = m (the residue field).  Each degree is held as
// a quotient of the ring's component, with canonical representatives.
template <class K>
class CyclicModule {
 public:
  CyclicModule(const GradedRing<K>& ring, const std::vector<IntPolynomial>& gens,
               std::string label)
      : ring_(&ring), label_(std::move(label)) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      RingElement<K> g = ring.element(gens[i]);
      if (ring.is_zero(g))
        throw PreconditionError("module relation " + std::to_string(i + 1) +
                                " is zero in the ring");
      if (g.deg < 1)
        throw PreconditionError("module relations must lie in the maximal ideal");
      gens_.push_back(std::move(g));
      gen_degrees_.push_back(gens_.back().deg);
    }
    std::sort(gen_degrees_.begin(), gen_degrees_.end());
    build();
  }

  static CyclicModule residue_field(const GradedRing<K>& ring) {
    std::vector<IntPolynomial> vars;
    for (int v = 0; v < ring.nvars(); ++v) {
      IntPolynomial p;
      int_poly_add(p, Monomial::var(v, ring.nvars()), 1);
      vars.push_back(std::move(p));
    }
    return CyclicModule(ring, vars, "k");
  }

  static CyclicModule free_rank_one(const GradedRing<K>& ring) {
    return CyclicModule(ring, {}, "R");
  }

  const GradedRing<K>& ring() const { return *ring_; }
  const std::string& label() const { return label_; }
  bool is_residue_field() const { return dim(0) == 1 && dim(1) == 0; }
  const std::vector<int>& relation_degrees() const { return gen_degrees_; }

  Index dim(int d) const {
    if (d < 0) return 0;
    if (d > ring_->bound())
      throw TruncationError("module degree " + std::to_string(d) + " exceeds the computed bound");
    return spaces_[d].dim();
  }

  // A cyclic module is generated in degree zero, so once a component vanishes
  // every later one does too; past the bound that is the only certainty.
  Index dim_certified(int d) const {
    if (d < 0) return 0;
    if (d <= ring_->bound()) return spaces_[d].dim();
    for (int t = 0; t <= ring_->bound(); ++t)
      if (spaces_[t].dim() == 0) return 0;
    throw TruncationError("module component of degree " + std::to_string(d) +
                          " is not certified at bound " + std::to_string(ring_->bound()));
  }

  // Chosen representatives, as columns in the ring's standard coordinates.
  const Mat<K>& reps(int d) const { return spaces_[d].reps; }

  // Ring coordinates -> module coordinates at degree d.
  Vec<K> reduce(int d, const Vec<K>& ring_coords) const { return spaces_[d].reduce(ring_coords); }

  // Multiplication by a as a matrix M_d -> M_{d+|a|}.
  Mat<K> mult_matrix(const RingElement<K>& a, int d) const {
    int dt = d + a.deg;
    Mat<K> out = Mat<K>::Zero(dim_certified(dt), dim_certified(d));
    if (out.rows() == 0 || out.cols() == 0) return out;
    for (Index j = 0; j < out.cols(); ++j) {
      RingElement<K> rep{d, spaces_[d].reps.col(j)};
      out.col(j) = spaces_[dt].reduce(ring_->multiply(a, rep).c);
    }
    return out;
  }

  Mat<K> var_matrix(int v, int d) const {
    Mat<K> out = Mat<K>::Zero(dim(d + 1), dim(d));
    for (Index j = 0; j < out.cols(); ++j)
      out.col(j) = spaces_[d + 1].reduce(ring_->var_matrix(v, d) * spaces_[d].reps.col(j));
    return out;
  }

 private:
  void build() {
    const auto& R = *ring_;
    std::vector<std::vector<Vec<K>>> ideal(R.bound() + 1);  // J_d in ring coords
    for (const auto& g : gens_) {
      for (int d = g.deg; d <= R.bound(); ++d) {
        for (const Monomial& m : monomials_of_degree(R.nvars(), d - g.deg)) {
          IntPolynomial mono;
          int_poly_add(mono, m, 1);
          RingElement<K> me = m.degree() == 0
                                  ? g
                                  : R.multiply(R.element(mono), g);
          ideal[d].push_back(me.c);
        }
      }
    }
    minimality_check(ideal);
    for (int d = 0; d <= R.bound(); ++d) {
      Mat<K> killed = Mat<K>::Zero(R.dim(d), static_cast<Index>(ideal[d].size()));
      for (std::size_t j = 0; j < ideal[d].size(); ++j) killed.col(static_cast<Index>(j)) = ideal[d][j];
      Mat<K> amb = Mat<K>::Identity(R.dim(d), R.dim(d));
      spaces_.push_back(QuotientSpace<K>::build(killed, amb));
    }
  }

  // Degreewise: generators listed in degree d must match dim J_d - dim(R_1 J_{d-1}).
  void minimality_check(const std::vector<std::vector<Vec<K>>>& ideal) const {
    const auto& R = *ring_;
    for (int d = 1; d <= R.bound(); ++d) {
      int provided = 0;
      for (const auto& g : gens_)
        if (g.deg == d) ++provided;
      if (provided == 0) continue;
      Mat<K> full = Mat<K>::Zero(R.dim(d), static_cast<Index>(ideal[d].size()));
      for (std::size_t j = 0; j < ideal[d].size(); ++j) full.col(static_cast<Index>(j)) = ideal[d][j];
      std::vector<Vec<K>> pushed_cols;
      for (const auto& w : ideal[d - 1])
        for (int v = 0; v < R.nvars(); ++v) pushed_cols.push_back(R.var_matrix(v, d - 1) * w);
      Mat<K> pushed = Mat<K>::Zero(R.dim(d), static_cast<Index>(pushed_cols.size()));
      for (std::size_t j = 0; j < pushed_cols.size(); ++j)
        pushed.col(static_cast<Index>(j)) = pushed_cols[j];
      Index needed = rank(full) - rank(pushed);
      if (needed != provided)
        throw PreconditionError("module relations are not a minimal generating set: degree " +
                                std::to_string(d) + " lists " + std::to_string(provided) +
                                " but needs " + std::to_string(needed));
    }
  }

  const GradedRing<K>* ring_;
  std::string label_;
  std::vector<RingElement<K>> gens_;
  std::vector<int> gen_degrees_;
  std::vector<QuotientSpace<K>> spaces_;
};

}  // namespace stabcoh
