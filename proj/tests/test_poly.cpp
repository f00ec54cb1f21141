#include "doctest.h"

#include <cstdint>
#include <set>
#include <string>

#include "bunched/poly.hpp"

using namespace bunched;
using namespace bunched::poly;

namespace {

GradedPoly quadric() {
  // T1*T2 + T3^2 + T4*T5
  return make_poly(5, {{Rat(1), ivec({1, 1, 0, 0, 0})},
                       {Rat(1), ivec({0, 0, 2, 0, 0})},
                       {Rat(1), ivec({0, 0, 0, 1, 1})}});
}

}  // namespace

TEST_CASE("polynomial normalization") {
  GradedPoly p = make_poly(2, {{Rat(2), ivec({1, 0})},
                               {Rat(3), ivec({0, 1})},
                               {Rat(-2), ivec({1, 0})}});
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms[0].coeff == Rat(3));
  CHECK(p.terms[0].exps == ivec({0, 1}));

  GradedPoly q = make_poly(2, {{Rat(1), ivec({0, 1})}, {Rat(1), ivec({1, 0})}});
  CHECK(q.terms[0].exps == ivec({0, 1}));  // terms sorted lex by exponents
  CHECK(q.terms[1].exps == ivec({1, 0}));
  CHECK(poly_eq(q, make_poly(2, {{Rat(1), ivec({1, 0})}, {Rat(1), ivec({0, 1})}})));
  CHECK(!poly_eq(q, p));
  CHECK(make_poly(2, {{Rat(1), ivec({1, 1})}, {Rat(-1), ivec({1, 1})}}).is_zero());

  CHECK_THROWS_AS(make_poly(2, {{Rat(1), ivec({-1, 0})}}), Error);
  CHECK_THROWS_AS(make_poly(2, {{Rat(1), ivec({1, 0, 0})}}), Error);
}

TEST_CASE("term supports") {
  GradedPoly f = quadric();
  CHECK(term_support(f.terms[0]) == 0b11000);  // T4*T5 sorts first
  CHECK(term_support(f.terms[1]) == 0b00100);
  CHECK(term_support(f.terms[2]) == 0b00011);
}

TEST_CASE("degree computation under a grading") {
  groups::AbelianGroup K = groups::make_group(2, {});
  IMat Q = imat({{1, -1, 0, -1, 1}, {1, 1, 1, 0, 2}});
  groups::GradingMap g = groups::make_grading(K, Q, IMat(0, 5));
  groups::GroupElement d = k_degree(quadric(), g);
  CHECK(d.free == ivec({0, 2}));

  // an inhomogeneous polynomial is rejected, naming two offending monomials
  GradedPoly bad = make_poly(5, {{Rat(1), ivec({1, 0, 0, 0, 0})},
                                 {Rat(1), ivec({0, 0, 1, 0, 0})}});
  try {
    k_degree(bad, g);
    FAIL("expected an error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("T1") != std::string::npos);
    CHECK(msg.find("T3") != std::string::npos);
  }

  // torsion degrees participate in the homogeneity check
  groups::AbelianGroup Kt = groups::make_group(1, {Int(3)});
  groups::GradingMap gt = groups::make_grading(Kt, imat({{1, 1}}), imat({{1, 2}}));
  GradedPoly hb = make_poly(2, {{Rat(1), ivec({2, 0})}, {Rat(1), ivec({0, 0})}});
  CHECK_THROWS_AS(k_degree(hb, gt), Error);  // free parts differ
  GradedPoly tb = make_poly(2, {{Rat(1), ivec({1, 0})}, {Rat(1), ivec({0, 1})}});
  CHECK_THROWS_AS(k_degree(tb, gt), Error);  // same free part, torsion differs
  GradedPoly ok = make_poly(2, {{Rat(1), ivec({3, 0})}, {Rat(1), ivec({0, 3})}});
  groups::GroupElement dt = k_degree(ok, gt);
  CHECK(dt.free[0] == 3);
  CHECK(dt.torsion[0] == 0);

  CHECK_THROWS_AS(k_degree(make_poly(5, {}), g), Error);
}

TEST_CASE("restriction to coordinate faces") {
  GradedPoly f = quadric();
  GradedPoly r12 = restrict_to_face(f, 0b00011);
  REQUIRE(r12.terms.size() == 1);
  CHECK(r12.terms[0].exps == ivec({1, 1, 0, 0, 0}));
  CHECK(restrict_to_face(f, 0b01001).terms.empty());  // {T1, T4}
  CHECK(restrict_to_face(f, 0b00111).terms.size() == 2);
  CHECK(restrict_to_face(f, 0b11111).terms.size() == 3);
  CHECK(restricted_term_count(f, 0b10100) == 1);  // {T3, T5}: just T3^2
  CHECK(restricted_term_count(f, 0) == 0);

  cones::FaceOfOrthant fo = cones::face_from_mask(0b00111, 5);
  CHECK(poly_eq(restrict_to_face(f, fo), restrict_to_face(f, 0b00111)));
}

TEST_CASE("coordinate faces of the quadric against a hand enumeration") {
  // the rule: a face is compatible iff the restriction keeps 0 or >= 2 terms
  GradedPoly f = quadric();
  std::vector<GradedPoly> rel = {f};
  std::set<uint64_t> expected = {
      0b00000, 0b00001, 0b00010, 0b01000, 0b10000,
      0b01001, 0b10001, 0b01010, 0b10010,
      0b00111, 0b11100,
      0b01111, 0b10111, 0b11011, 0b11101, 0b11110,
      0b11111};
  int hits = 0;
  for (uint64_t mask = 0; mask < 32; ++mask) {
    bool got = is_f_face(rel, mask);
    bool want = expected.count(mask) > 0;
    CHECK(got == want);
    if (got) ++hits;
  }
  CHECK(hits == 17);

  // with no relations every coordinate face qualifies
  std::vector<GradedPoly> none;
  for (uint64_t mask = 0; mask < 32; ++mask) CHECK(is_f_face(none, mask));

  std::vector<GradedPoly> two = {f, f};
  CHECK_THROWS_AS(is_f_face(two, 0b11111), Error);
}

TEST_CASE("auxiliary grading decomposition") {
  GradedPoly f = quadric();
  IVec a = ivec({1, 0, 2, 1, 0});
  auto parts = aux_grading_decompose(f, a);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].degree == 1);
  CHECK(parts[0].part.terms.size() == 2);  // T1*T2 and T4*T5
  CHECK(parts[1].degree == 4);
  REQUIRE(parts[1].part.terms.size() == 1);
  CHECK(parts[1].part.terms[0].exps == ivec({0, 0, 2, 0, 0}));

  CHECK(aux_grading_decompose(make_poly(3, {}), ivec({1, 1, 1})).empty());
  CHECK_THROWS_AS(aux_grading_decompose(f, ivec({1, 1})), Error);
}

TEST_CASE("variable surgery") {
  GradedPoly f = quadric();
  GradedPoly lifted = scale_var_exponent(f, 2, Int(3));  // T3^2 -> T3^6
  bool found = false;
  for (auto& t : lifted.terms)
    if (t.exps == ivec({0, 0, 6, 0, 0})) found = true;
  CHECK(found);

  GradedPoly shifted = mul_var_power(f, 2, Int(1));
  for (auto& t : shifted.terms) CHECK(t.exps[2] >= 1);
  CHECK_THROWS_AS(mul_var_power(f, 0, Int(-1)), Error);  // T2 term lacks T1

  GradedPoly g = make_poly(3, {{Rat(1), ivec({1, 0, 0})}, {Rat(1), ivec({0, 2, 0})}});
  GradedPoly dropped = drop_var(g, 2);
  CHECK(dropped.nvars == 2);
  CHECK(dropped.terms.size() == 2);
  CHECK_THROWS_AS(drop_var(g, 1), Error);  // T2 still occurs

  GradedPoly wide = append_var(g);
  CHECK(wide.nvars == 4);
  for (auto& t : wide.terms) CHECK(t.exps[3] == 0);
}

TEST_CASE("formal partial derivatives") {
  GradedPoly f = quadric();
  GradedPoly d3 = partial(f, 2);
  REQUIRE(d3.terms.size() == 1);
  CHECK(d3.terms[0].coeff == Rat(2));
  CHECK(d3.terms[0].exps == ivec({0, 0, 1, 0, 0}));

  GradedPoly d1 = partial(f, 0);
  REQUIRE(d1.terms.size() == 1);
  CHECK(d1.terms[0].exps == ivec({0, 1, 0, 0, 0}));

  GradedPoly constant = make_poly(2, {{Rat(5), ivec({0, 0})}});
  CHECK(partial(constant, 0).terms.empty());
}

TEST_CASE("printing") {
  GradedPoly f = quadric();
  CHECK(poly_string(f) == "T1*T2 + T3^2 + T4*T5");
  GradedPoly m = make_poly(3, {{Rat(-2), ivec({0, 1, 2})}});
  CHECK(poly_string(m) == "-2*T2*T3^2");
  CHECK(poly_string(make_poly(2, {})) == "0");
  CHECK(monomial_string(ivec({0, 0})) == "1");
  GradedPoly mixed = make_poly(2, {{Rat(1), ivec({1, 0})}, {Rat(-3), ivec({0, 1})}});
  CHECK(poly_string(mixed) == "T1 - 3*T2");
}
