#pragma once

#include <optional>
#include <vector>

#include "stabcoh/ring.hpp"

namespace stabcoh {

// Truncated coefficients of prod_i (1 - t^{d_i}) / (1 - t)^e.  A graded
// quotient's Hilbert function equals this exactly when the relations form a
// regular sequence, which is the test used for the complete_intersection flag.
inline std::vector<long long> koszul_series(const std::vector<int>& degrees, int e, int bound) {
  std::vector<long long> s(bound + 1, 0);
  s[0] = 1;
  for (int dg : degrees)
    for (int i = bound; i >= dg; --i) s[i] -= s[i - dg];
  for (int k = 0; k < e; ++k)
    for (int i = 1; i <= bound; ++i) s[i] += s[i - 1];
  return s;
}

struct Classification {
  int embdim = 0;
  int relation_count = 0;  // size of the (required minimal) relation set
  std::vector<int> relation_degrees;
  std::vector<long long> hilbert;

  bool m2_zero = false;                // the maximal ideal squares to zero
  bool hypersurface = false;           // one relation
  bool complete_intersection = false;  // Hilbert data matches the Koszul product to the bound
  bool artinian = false;               // Hilbert function vanishes within the bound
  bool gorenstein_artinian = false;    // artinian with one-dimensional socle
  bool relations_in_cube = false;      // every relation inside m^3

  // nullopt when the bound is too small to decide (not artinian within the
  // bound and not recognized as a complete intersection).
  std::optional<int> krull_dim;
  std::optional<Index> socle_dim;
  int top_degree = 0;  // last degree with a nonzero component (bound if none vanish)
};

template <class K>
Classification classify(const GradedRing<K>& ring) {
  Classification c;
  c.embdim = ring.nvars();
  c.relation_count = ring.relation_count();
  c.relation_degrees = ring.relation_degrees();
  c.hilbert = ring.hilbert();
  c.top_degree = ring.top_degree();

  c.m2_zero = ring.dim(2) == 0;
  c.hypersurface = c.relation_count == 1;
  c.complete_intersection = ring.complete_intersection_certified();
  c.artinian = ring.artinian_within_bound();
  c.relations_in_cube = c.relation_degrees.front() >= 3;

  if (c.artinian) {
    c.socle_dim = ring.socle_dim();
    c.gorenstein_artinian = *c.socle_dim == 1;
    c.krull_dim = 0;
    if (c.complete_intersection && c.embdim != c.relation_count)
      throw InternalError("artinian complete intersection with codim below embedding dimension");
  } else if (c.complete_intersection) {
    c.krull_dim = c.embdim - c.relation_count;
  }
  return c;
}

}  // namespace stabcoh
