#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "stabcoh/field.hpp"

namespace stabcoh {

template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Throws FieldMismatchError if entries are bound to different primes.
// Cheap no-op over Q.
template <class K>
void require_single_field(const Mat<K>& a) {
  if constexpr (std::is_same_v<K, Fp>) {
    long long p = 0;
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i) {
        long long q = a(i, j).modulus();
        if (q == 0) continue;
        if (p == 0)
          p = q;
        else if (p != q)
          throw FieldMismatchError("matrix mixes F_" + std::to_string(p) + " and F_" +
                                   std::to_string(q) + " entries");
      }
  }
}

template <class K>
struct RrefResult {
  Mat<K> mat;                 // reduced row echelon form
  std::vector<Index> pivots;  // pivot column per pivot row
  Index rank = 0;
};

// Gauss-Jordan over an exact field: first nonzero pivot, no magnitude games.
template <class K>
RrefResult<K> rref(Mat<K> a) {
  require_single_field(a);
  RrefResult<K> out;
  const Index rows = a.rows(), cols = a.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index piv = -1;
    for (Index i = r; i < rows; ++i)
      if (!is_zero(a(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) a.row(piv).swap(a.row(r));
    K inv = a(r, c).inverse();
    for (Index j = c; j < cols; ++j) a(r, j) *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      K f = a(i, c);
      for (Index j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.mat = std::move(a);
  return out;
}

template <class K>
Index rank(const Mat<K>& a) {
  return rref(a).rank;
}

// Columns span ker(a); free variables are set to 1 in ascending column order,
// so the result is deterministic.
template <class K>
Mat<K> kernel_basis(const Mat<K>& a) {
  RrefResult<K> r = rref(a);
  const Index cols = a.cols();
  std::vector<bool> is_pivot(cols, false);
  for (Index c : r.pivots) is_pivot[c] = true;
  std::vector<Index> free_cols;
  for (Index c = 0; c < cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat<K> ker = Mat<K>::Zero(cols, static_cast<Index>(free_cols.size()));
  for (Index j = 0; j < static_cast<Index>(free_cols.size()); ++j) {
    Index fc = free_cols[j];
    ker(fc, j) = K(1);
    for (Index pr = 0; pr < r.rank; ++pr) ker(r.pivots[pr], j) = -r.mat(pr, fc);
  }
  return ker;
}

// One solution of a x = b, or nullopt when inconsistent.  Free variables 0.
template <class K>
std::optional<Vec<K>> solve_linear(const Mat<K>& a, const Vec<K>& b) {
  Mat<K> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  RrefResult<K> r = rref(std::move(aug));
  for (Index pr = 0; pr < r.rank; ++pr)
    if (r.pivots[pr] == a.cols()) return std::nullopt;
  Vec<K> x = Vec<K>::Zero(a.cols());
  for (Index pr = 0; pr < r.rank; ++pr) x(r.pivots[pr]) = r.mat(pr, a.cols());
  return x;
}

// Columnwise solve of a X = B; nullopt if any column is inconsistent.
template <class K>
std::optional<Mat<K>> solve_linear_many(const Mat<K>& a, const Mat<K>& b) {
  Mat<K> aug(a.rows(), a.cols() + b.cols());
  aug.leftCols(a.cols()) = a;
  aug.rightCols(b.cols()) = b;
  RrefResult<K> r = rref(std::move(aug));
  for (Index pr = 0; pr < r.rank; ++pr)
    if (r.pivots[pr] >= a.cols()) return std::nullopt;
  Mat<K> x = Mat<K>::Zero(a.cols(), b.cols());
  for (Index pr = 0; pr < r.rank; ++pr)
    for (Index j = 0; j < b.cols(); ++j) x(r.pivots[pr], j) = r.mat(pr, a.cols() + j);
  return x;
}

// Columns of `a` that form a basis of its column space (original columns,
// picked left to right).
template <class K>
Mat<K> image_basis(const Mat<K>& a) {
  RrefResult<K> r = rref(a);
  Mat<K> out(a.rows(), r.rank);
  for (Index j = 0; j < r.rank; ++j) out.col(j) = a.col(r.pivots[j]);
  return out;
}

// A subquotient V / W presented by explicit vectors: `sub` spans W (the part
// to kill), `amb` spans V.  Representatives are the columns of `amb` whose
// classes complete `sub` to a basis, chosen first-to-last.
template <class K>
struct QuotientSpace {
  Mat<K> killed;  // basis of W, as columns
  Mat<K> reps;    // chosen representative columns (subset of amb)
  std::vector<Index> rep_cols;

  Index dim() const { return reps.cols(); }

  static QuotientSpace build(const Mat<K>& sub, const Mat<K>& amb) {
    QuotientSpace q;
    q.killed = image_basis(sub);
    Mat<K> joint(amb.rows(), q.killed.cols() + amb.cols());
    joint.leftCols(q.killed.cols()) = q.killed;
    joint.rightCols(amb.cols()) = amb;
    RrefResult<K> r = rref(joint);
    for (Index pr = 0; pr < r.rank; ++pr)
      if (r.pivots[pr] >= q.killed.cols()) q.rep_cols.push_back(r.pivots[pr] - q.killed.cols());
    q.reps.resize(amb.rows(), static_cast<Index>(q.rep_cols.size()));
    for (Index j = 0; j < q.reps.cols(); ++j) q.reps.col(j) = amb.col(q.rep_cols[j]);
    return q;
  }

  // Coordinates of [v] in the representative basis.  Throws InternalError if
  // v is not in span(W + reps), i.e. not in the subquotient at all.
  Vec<K> reduce(const Vec<K>& v) const {
    Mat<K> sys(v.rows(), killed.cols() + reps.cols());
    sys.leftCols(killed.cols()) = killed;
    sys.rightCols(reps.cols()) = reps;
    auto x = solve_linear(sys, v);
    if (!x) throw InternalError("vector lies outside the computed subquotient");
    return x->tail(reps.cols());
  }
};

}  // namespace stabcoh
