#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bunched/cones.hpp"
#include "bunched/errors.hpp"
#include "bunched/groups.hpp"
#include "bunched/scalar.hpp"

namespace bunched::poly {

struct Term {
  Rat coeff;
  IVec exps;  // length nvars, entries >= 0
};

// terms sorted lex by exponent vector, distinct, nonzero coefficients
struct GradedPoly {
  Index nvars = 0;
  std::vector<Term> terms;

  bool is_zero() const { return terms.empty(); }
};

GradedPoly make_poly(Index nvars, std::vector<Term> terms);
bool poly_eq(const GradedPoly& a, const GradedPoly& b);

// support of a term as a bitmask over the variables
uint64_t term_support(const Term& t);

std::string monomial_string(const IVec& exps);
std::string poly_string(const GradedPoly& f);

// kill every term using a variable outside the face
GradedPoly restrict_to_face(const GradedPoly& f, uint64_t face_mask);
GradedPoly restrict_to_face(const GradedPoly& f, const cones::FaceOfOrthant& fo);

// the common K-degree of all terms; error names two offending terms
groups::GroupElement k_degree(const GradedPoly& f, const groups::GradingMap& Q);

// number of terms surviving restriction to the face
Index restricted_term_count(const GradedPoly& f, uint64_t face_mask);

// zero or at least two surviving terms decides the F-face test for a
// single relation; no relations means every face qualifies
bool is_f_face(const std::vector<GradedPoly>& relations, uint64_t face_mask);

// split into parts of constant auxiliary degree <a, exps>, ascending
struct AuxPart {
  Int degree;
  GradedPoly part;
};
std::vector<AuxPart> aux_grading_decompose(const GradedPoly& f, const IVec& a);

// variable surgery used by the modification calculus
GradedPoly scale_var_exponent(const GradedPoly& f, Index var, const Int& m);
GradedPoly mul_var_power(const GradedPoly& f, Index var, const Int& e);
GradedPoly drop_var(const GradedPoly& f, Index var);
GradedPoly append_var(const GradedPoly& f);

// derivative with respect to one variable
GradedPoly partial(const GradedPoly& f, Index var);

}  // namespace bunched::poly
