#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "stabcoh/parser.hpp"
#include "stabcoh/tate.hpp"

using namespace stabcoh;

namespace {

GradedRing<Rational> ring_q(const std::string& text, int bound) {
  return GradedRing<Rational>(parse_presentation_text(text), bound);
}

GradedRing<Fp> ring_p(const std::string& text, int bound) {
  return GradedRing<Fp>(parse_presentation_text(text), bound);
}

template <class K>
Resolution<K> resolve_k(const GradedRing<K>& r, int len) {
  return Resolution<K>(r, CyclicModule<K>::residue_field(r), len);
}

template <class K>
K scalar(long long n, const GradedRing<K>& r) {
  return make_scalar<K>(n, r.field());
}

// d(theta(m)) = (-1)^drop theta(d m), the compatibility every derivation of
// the closure has to satisfy.
template <class K>
bool chain_ok(const TateClosure<K>& C, const GammaDerivation<K>& th, const DpMonomial& m) {
  TateElem<K> lhs = C.differential(C.apply(th, m));
  TateElem<K> rhs = C.apply(th, C.d_monomial(m));
  if (th.drop % 2 != 0) rhs = C.negate(rhs);
  return C.equal(lhs, rhs);
}

template <class K>
GammaDerivation<K> scale_der(const TateClosure<K>& C, const K& k, GammaDerivation<K> th) {
  for (auto& v : th.on_var) v = C.scale(k, v);
  return th;
}

template <class K>
GammaDerivation<K> add_der(const TateClosure<K>& C, const GammaDerivation<K>& a,
                           const GammaDerivation<K>& b) {
  REQUIRE(a.drop == b.drop);
  REQUIRE(a.idrop == b.idrop);
  GammaDerivation<K> out = a;
  for (std::size_t i = 0; i < out.on_var.size(); ++i)
    out.on_var[i] = C.add(a.on_var[i], b.on_var[i]);
  return out;
}

template <class K>
bool ders_equal(const TateClosure<K>& C, const GammaDerivation<K>& a,
                const GammaDerivation<K>& b) {
  if (a.drop != b.drop || a.idrop != b.idrop) return false;
  if (a.on_var.size() != b.on_var.size()) return false;
  for (std::size_t i = 0; i < a.on_var.size(); ++i)
    if (!C.equal(a.on_var[i], b.on_var[i])) return false;
  return true;
}

template <class K>
bool cocycles_equal(const Cocycle<K>& a, const Cocycle<K>& b) {
  if (a.n != b.n || a.values.size() != b.values.size()) return false;
  for (Index i = 0; i < a.values.size(); ++i)
    if (a.values[i] != b.values[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("divided power products carry binomial coefficients and Koszul signs") {
  GradedRing<Rational> r = ring_q("Q[x,y]/(x*y)", 8);
  TateClosure<Rational> C(r, 6);
  REQUIRE(C.variables().size() == 3);
  CHECK(C.variables()[0].name == "T1");
  CHECK(C.variables()[2].name == "S1");
  TateElem<Rational> t1 = C.variable_elem(0), t2 = C.variable_elem(1), s = C.variable_elem(2);

  CHECK(C.is_zero(C.multiply(t1, t1)));
  CHECK(C.is_zero(C.multiply(t2, t2)));
  CHECK(C.equal(C.multiply(t2, t1), C.negate(C.multiply(t1, t2))));
  CHECK(C.equal(C.multiply(t1, t2), C.monomial_elem(dp_strip({1, 1}))));

  // y^(i) y^(j) = binom(i+j, i) y^(i+j); in particular y^i = i! y^(i)
  CHECK(C.equal(C.multiply(s, s), C.scale(scalar(2, r), C.monomial_elem(dp_strip({0, 0, 2})))));
  TateElem<Rational> power = s;
  long long factorial = 1;
  for (int i = 2; i <= 4; ++i) {
    power = C.multiply(power, s);
    factorial *= i;
    std::vector<int> e{0, 0, i};
    CHECK(C.equal(power, C.scale(scalar(factorial, r), C.monomial_elem(dp_strip(e)))));
  }
  CHECK(C.equal(C.multiply(C.monomial_elem(dp_strip({0, 0, 2})), C.monomial_elem(dp_strip({0, 0, 3}))),
                C.scale(scalar(10, r), C.monomial_elem(dp_strip({0, 0, 5})))));

  // moving an exterior factor past another one flips the sign
  CHECK(C.equal(C.multiply(t2, C.multiply(t1, s)),
                C.negate(C.monomial_elem(dp_strip({1, 1, 1})))));
  CHECK(C.equal(C.multiply(C.multiply(t1, s), t2), C.multiply(t1, C.multiply(s, t2))));

  CHECK(C.hom_degree(dp_strip({1, 0, 2})) == 5);
  CHECK(C.internal_degree(dp_strip({1, 0, 2})) == 5);
  CHECK(C.monomial_str(dp_strip({1, 0, 2})) == "T1*S1^(2)");
}

TEST_CASE("the Leibniz differential divides powers down by one") {
  GradedRing<Rational> r = ring_q("Q[x,y]/(x*y)", 8);
  TateClosure<Rational> C(r, 6);

  TateElem<Rational> dT1{0, {}};
  dT1.c[dp_strip({})] = r.var(0);
  CHECK(C.equal(C.d_variable(0), dT1));

  // the quadratic split of xy peels the smaller variable: d S = x T2
  TateElem<Rational> dS{1, {}};
  dS.c[dp_strip({0, 1})] = r.var(0);
  CHECK(C.equal(C.d_variable(2), dS));

  TateElem<Rational> expect{3, {}};
  expect.c[dp_strip({0, 1, 1})] = r.var(0);
  expect.c[dp_strip({1, 0, 1})] = r.scale(scalar(-1, r), r.var(1));
  CHECK(C.equal(C.differential(C.monomial_elem(dp_strip({1, 1, 1}))), expect));

  TateElem<Rational> dS2{3, {}};
  dS2.c[dp_strip({0, 1, 1})] = r.var(0);
  CHECK(C.equal(C.differential(C.monomial_elem(dp_strip({0, 0, 2}))), dS2));

  for (int n = 1; n <= 6; ++n)
    for (const DpMonomial& m : C.monomials(n))
      CHECK(C.is_zero(C.differential(C.differential(C.monomial_elem(m)))));
}

TEST_CASE("the closure reproduces the minimal resolution of the residue field") {
  struct Case {
    std::string text;
    int bound, len;
  };
  std::vector<Case> cases{{"Q[x,y]/(x*y)", 8, 5},
                          {"Q[x,y]/(x^3,y^3)", 8, 5},
                          {"Q[x,y]/(x^2,x*y,y^2)", 6, 5},
                          {"Q[x]/(x^2)", 8, 6}};
  for (const Case& c : cases) {
    CAPTURE(c.text);
    GradedRing<Rational> r = ring_q(c.text, c.bound);
    TateClosure<Rational> C(r, c.len);
    Resolution<Rational> res = resolve_k(r, c.len);
    CHECK(C.betti() == res.betti());
    for (int n = 0; n <= c.len; ++n) CHECK(C.graded_betti(n) == res.graded_betti(n));
  }
}

TEST_CASE("variable counts per homological degree") {
  GradedRing<Rational> hyper = ring_q("Q[x,y]/(x*y)", 8);
  CHECK(TateClosure<Rational>(hyper, 5).variable_counts() ==
        std::vector<long long>{0, 2, 1, 0, 0, 0});

  GradedRing<Rational> ci = ring_q("Q[x,y]/(x^3,y^3)", 8);
  TateClosure<Rational> C(ci, 5);
  CHECK(C.variable_counts() == std::vector<long long>{0, 2, 2, 0, 0, 0});
  CHECK(C.variables()[2].deg == 3);
  CHECK(C.variables()[3].deg == 3);

  GradedRing<Rational> node = ring_q("Q[x]/(x^2)", 8);
  CHECK(TateClosure<Rational>(node, 6).variable_counts() ==
        std::vector<long long>{0, 1, 1, 0, 0, 0, 0});

  // not a complete intersection: variables keep appearing, and for this
  // Koszul ring the internal degree of every variable equals its homological
  // degree
  GradedRing<Rational> sq = ring_q("Q[x,y]/(x^2,x*y,y^2)", 6);
  TateClosure<Rational> D(sq, 4);
  CHECK(D.variable_counts() == std::vector<long long>{0, 2, 3, 2, 3});
  for (const DpVariable& v : D.variables()) CHECK(v.deg == v.hom);
}

TEST_CASE("derivations dual to the closure variables") {
  GradedRing<Rational> r = ring_q("Q[x,y]/(x*y)", 8);
  TateClosure<Rational> C(r, 6);
  TateElem<Rational> t1 = C.variable_elem(0), s = C.variable_elem(2);
  GammaDerivation<Rational> xi1 = C.derivation_dual(0);
  GammaDerivation<Rational> xi2 = C.derivation_dual(1);
  GammaDerivation<Rational> chi = C.derivation_dual(2);

  CHECK(xi1.drop == 1);
  CHECK(chi.drop == 2);
  CHECK(chi.idrop == 2);
  CHECK(C.equal(xi1.on_var[0], C.one()));
  CHECK(C.is_zero(xi1.on_var[1]));
  // the split of xy pairs x with T2, so only the T2-dual sees S
  CHECK(C.is_zero(xi1.on_var[2]));
  CHECK(C.equal(xi2.on_var[2], C.negate(t1)));
  CHECK(C.equal(chi.on_var[2], C.one()));
  CHECK(C.is_zero(chi.on_var[0]));

  // theta(v^(a)) = theta(v) v^(a-1)
  CHECK(C.equal(C.apply(xi2, C.monomial_elem(dp_strip({0, 0, 2}))),
                C.negate(C.monomial_elem(dp_strip({1, 0, 1})))));
  // Leibniz with the sign of the passed prefix
  CHECK(C.equal(C.apply(xi2, C.monomial_elem(dp_strip({0, 1, 1}))),
                C.subtract(s, C.monomial_elem(dp_strip({1, 1})))));

  for (const auto& th : {xi1, xi2, chi})
    for (int n = 1; n <= 6; ++n)
      for (const DpMonomial& m : C.monomials(n)) CHECK(chain_ok(C, th, m));

  // values on the variables of the same degree are kronecker deltas
  CHECK(cocycles_equal(C.derivation_class(xi1), ext_basis(C, 1)[0]));
  CHECK(cocycles_equal(C.derivation_class(xi2), ext_basis(C, 1)[1]));
}

TEST_CASE("dual derivations extend past the quadratic stage") {
  GradedRing<Rational> r = ring_q("Q[x,y]/(x^2,x*y,y^2)", 6);
  TateClosure<Rational> C(r, 4);
  // variables: T1 T2, S1 S2 S3 on x^2, xy, y^2, then two of degree 3 and
  // three of degree 4
  REQUIRE(C.variables().size() == 10);
  TateElem<Rational> t1 = C.variable_elem(0), t2 = C.variable_elem(1);
  GammaDerivation<Rational> xi1 = C.derivation_dual(0);
  GammaDerivation<Rational> xi2 = C.derivation_dual(1);

  CHECK(C.equal(xi1.on_var[2], C.negate(t1)));
  CHECK(C.is_zero(xi1.on_var[3]));
  CHECK(C.is_zero(xi1.on_var[4]));
  CHECK(C.is_zero(xi2.on_var[2]));
  CHECK(C.equal(xi2.on_var[3], C.negate(t1)));
  CHECK(C.equal(xi2.on_var[4], C.negate(t2)));

  std::vector<GammaDerivation<Rational>> duals;
  for (std::size_t i = 0; i < 6; ++i) duals.push_back(C.derivation_dual(i));
  for (const auto& th : duals)
    for (int n = 1; n <= 4; ++n)
      for (const DpMonomial& m : C.monomials(n)) CHECK(chain_ok(C, th, m));
}

TEST_CASE("brackets of dual derivations") {
  GradedRing<Rational> hyper = ring_q("Q[x,y]/(x*y)", 8);
  TateClosure<Rational> C(hyper, 6);
  GammaDerivation<Rational> xi1 = C.derivation_dual(0);
  GammaDerivation<Rational> xi2 = C.derivation_dual(1);
  GammaDerivation<Rational> chi = C.derivation_dual(2);

  // the relation is quadratic, so the degree-one duals do not commute:
  // [xi1, xi2] = -chi
  GammaDerivation<Rational> b = C.bracket(xi1, xi2);
  CHECK(C.is_zero(b.on_var[0]));
  CHECK(C.is_zero(b.on_var[1]));
  CHECK(C.equal(b.on_var[2], C.negate(C.one())));
  auto bcls = C.derivation_class(b);
  auto ccls = C.derivation_class(chi);
  CHECK(cocycles_equal(bcls, Cocycle<Rational>{ccls.n, ccls.u, Vec<Rational>(-ccls.values)}));

  // relations inside the cube of the maximal ideal: all brackets of duals
  // vanish in cohomology, and the chi-duals commute outright
  GradedRing<Rational> ci = ring_q("Q[x,y]/(x^3,y^3)", 8);
  TateClosure<Rational> D(ci, 5);
  std::vector<GammaDerivation<Rational>> xs{D.derivation_dual(0), D.derivation_dual(1)};
  std::vector<GammaDerivation<Rational>> cs{D.derivation_dual(2), D.derivation_dual(3)};
  for (const auto& a : xs)
    for (const auto& b2 : xs) CHECK(cocycle_is_zero(D.derivation_class(D.bracket(a, b2))));
  for (const auto& a : xs)
    for (const auto& c2 : cs) CHECK(D.derivation_is_zero(D.bracket(a, c2)));
  for (const auto& a : cs)
    for (const auto& c2 : cs) CHECK(D.derivation_is_zero(D.bracket(a, c2)));

  // quadratic monomial relations: [xi1, xi1] picks up twice the split of x^2
  GradedRing<Rational> sq = ring_q("Q[x,y]/(x^2,x*y,y^2)", 6);
  TateClosure<Rational> E(sq, 4);
  GammaDerivation<Rational> e1 = E.derivation_dual(0);
  GammaDerivation<Rational> sqb = E.bracket(e1, e1);
  CHECK(E.equal(sqb.on_var[2], E.scale(scalar(-2, sq), E.one())));
  CHECK(E.is_zero(sqb.on_var[3]));
  CHECK(E.is_zero(sqb.on_var[4]));
}

TEST_CASE("graded antisymmetry and Jacobi hold for random derivations") {
  GradedRing<Fp> r = ring_p("F101[x,y]/(x^2,x*y,y^2)", 6);
  TateClosure<Fp> C(r, 4);
  std::vector<GammaDerivation<Fp>> pool;
  for (std::size_t i = 0; i < 5; ++i) pool.push_back(C.derivation_dual(i));

  std::mt19937 rng(20260814u);
  std::uniform_int_distribution<int> pick(0, 4), coef(1, 100);
  auto draw = [&]() {
    return scale_der(C, make_scalar<Fp>(coef(rng), r.field()), pool[pick(rng)]);
  };
  for (int it = 0; it < 110; ++it) {
    GammaDerivation<Fp> a = draw(), b = draw(), c = draw();
    Fp minus = make_scalar<Fp>(-1, r.field());
    // [a,b] = -(-1)^{|a||b|} [b,a]
    GammaDerivation<Fp> ba = C.bracket(b, a);
    if ((a.drop * b.drop) % 2 == 0) ba = scale_der(C, minus, ba);
    CHECK(ders_equal(C, C.bracket(a, b), ba));
    // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
    GammaDerivation<Fp> lhs = C.bracket(a, C.bracket(b, c));
    GammaDerivation<Fp> r1 = C.bracket(C.bracket(a, b), c);
    GammaDerivation<Fp> r2 = C.bracket(b, C.bracket(a, c));
    if ((a.drop * b.drop) % 2 != 0) r2 = scale_der(C, minus, r2);
    CHECK(ders_equal(C, lhs, add_der(C, r1, r2)));
  }
}

TEST_CASE("divided powers keep the closure minimal in positive characteristic") {
  GradedRing<Fp> f2 = ring_p("F2[x]/(x^2)", 8);
  TateClosure<Fp> C(f2, 6);
  CHECK(C.betti() == std::vector<long long>{1, 1, 1, 1, 1, 1, 1});
  TateElem<Fp> s = C.variable_elem(1);
  CHECK(C.is_zero(C.multiply(s, s)));  // 2 = 0, but S^(2) is still a basis monomial
  CHECK(C.rank(4) == 1);
  Resolution<Fp> res = resolve_k(f2, 6);
  CHECK(C.betti() == res.betti());

  GradedRing<Fp> f3 = ring_p("F3[x]/(x^3)", 8);
  TateClosure<Fp> D(f3, 4);
  Resolution<Fp> res3 = resolve_k(f3, 4);
  CHECK(D.betti() == std::vector<long long>{1, 1, 1, 1, 1});
  for (int n = 0; n <= 4; ++n) CHECK(D.graded_betti(n) == res3.graded_betti(n));
}

TEST_CASE("the closure computes products and functors like any minimal resolution") {
  GradedRing<Rational> node = ring_q("Q[x]/(x^2)", 8);
  TateClosure<Rational> C(node, 6);
  Cocycle<Rational> xi = C.derivation_class(C.derivation_dual(0));
  Cocycle<Rational> chi = C.derivation_class(C.derivation_dual(1));
  Cocycle<Rational> p = yoneda_product(C, xi, xi);
  CHECK(!cocycle_is_zero(p));
  bool matches = cocycles_equal(p, chi) ||
                 cocycles_equal(p, Cocycle<Rational>{chi.n, chi.u, Vec<Rational>(-chi.values)});
  CHECK(matches);
  Cocycle<Rational> q = yoneda_product(C, p, p);
  CHECK(!cocycle_is_zero(q));
  CHECK(q.n == 4);
  CHECK(q.u == 4);

  GradedRing<Rational> ci = ring_q("Q[x,y]/(x^3,y^3)", 8);
  TateClosure<Rational> D(ci, 4);
  Resolution<Rational> res = resolve_k(ci, 4);
  std::map<int, long long> socle{{-4, 1}};
  CHECK(ext_ring_dims(D, 0, -6, 0) == socle);
  for (int n = 0; n <= 2; ++n)
    CHECK(ext_ring_dims(D, n, -6, 2) == ext_ring_dims(res, n, -6, 2));

  ParsedModule mx = parse_module_text("x", ci.var_names());
  CyclicModule<Rational> N(ci, mx.gens, mx.text);
  for (int n = 0; n <= 3; ++n) CHECK(tor_dims(D, N, n, 8) == tor_dims(res, N, n, 8));
}
