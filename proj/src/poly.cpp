#include "bunched/poly.hpp"

#include <algorithm>
#include <map>

namespace bunched::poly {

GradedPoly make_poly(Index nvars, std::vector<Term> terms) {
  if (nvars > 64) fail_unsupported("at most 64 variables are supported");
  std::map<std::vector<Int>, Rat> acc;
  for (Term& t : terms) {
    if (t.exps.size() != nvars)
      fail_validation("term exponent vector has wrong length");
    std::vector<Int> key(t.exps.size());
    for (Index i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] < 0) fail_validation("negative exponent in polynomial");
      key[static_cast<size_t>(i)] = t.exps[i];
    }
    Rat c = t.coeff;
    c.canonicalize();
    acc[key] += c;
  }
  GradedPoly f;
  f.nvars = nvars;
  for (auto& [key, c] : acc) {
    Rat cc = c;
    cc.canonicalize();
    if (cc == 0) continue;
    IVec e(nvars);
    for (Index i = 0; i < nvars; ++i) e[i] = key[static_cast<size_t>(i)];
    f.terms.push_back(Term{cc, std::move(e)});
  }
  return f;
}

bool poly_eq(const GradedPoly& a, const GradedPoly& b) {
  if (a.nvars != b.nvars || a.terms.size() != b.terms.size()) return false;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].coeff != b.terms[i].coeff) return false;
    if (a.terms[i].exps != b.terms[i].exps) return false;
  }
  return true;
}

uint64_t term_support(const Term& t) {
  uint64_t m = 0;
  for (Index i = 0; i < t.exps.size(); ++i)
    if (t.exps[i] != 0) m |= uint64_t(1) << i;
  return m;
}

std::string monomial_string(const IVec& exps) {
  std::string s;
  for (Index i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "T" + std::to_string(i + 1);
    if (exps[i] != 1) s += "^" + exps[i].get_str();
  }
  return s.empty() ? "1" : s;
}

std::string poly_string(const GradedPoly& f) {
  if (f.terms.empty()) return "0";
  std::string s;
  // display order: leading variables first
  for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
    const Term& t = *it;
    Rat c = t.coeff;
    std::string mono = monomial_string(t.exps);
    if (s.empty()) {
      if (c == 1 && mono != "1")
        s = mono;
      else if (c == -1 && mono != "1")
        s = "-" + mono;
      else
        s = to_string(c) + (mono == "1" ? "" : "*" + mono);
    } else {
      bool neg = c < 0;
      Rat a = neg ? Rat(-c) : c;
      s += neg ? " - " : " + ";
      if (a == 1 && mono != "1")
        s += mono;
      else
        s += to_string(a) + (mono == "1" ? "" : "*" + mono);
    }
  }
  return s;
}

GradedPoly restrict_to_face(const GradedPoly& f, uint64_t face_mask) {
  GradedPoly g;
  g.nvars = f.nvars;
  for (const Term& t : f.terms)
    if ((term_support(t) & ~face_mask) == 0) g.terms.push_back(t);
  return g;
}

GradedPoly restrict_to_face(const GradedPoly& f,
                            const cones::FaceOfOrthant& fo) {
  return restrict_to_face(f, cones::mask_of(fo));
}

groups::GroupElement k_degree(const GradedPoly& f,
                              const groups::GradingMap& Q) {
  if (f.terms.empty()) fail_validation("cannot grade the zero polynomial");
  groups::GroupElement d = Q.apply(f.terms[0].exps);
  for (size_t i = 1; i < f.terms.size(); ++i) {
    groups::GroupElement di = Q.apply(f.terms[i].exps);
    if (!groups::ge_eq(d, di))
      fail_validation("polynomial is not homogeneous: deg(" +
                      monomial_string(f.terms[0].exps) + ") differs from deg(" +
                      monomial_string(f.terms[i].exps) + ")");
  }
  return d;
}

Index restricted_term_count(const GradedPoly& f, uint64_t face_mask) {
  Index c = 0;
  for (const Term& t : f.terms)
    if ((term_support(t) & ~face_mask) == 0) ++c;
  return c;
}

bool is_f_face(const std::vector<GradedPoly>& relations, uint64_t face_mask) {
  if (relations.empty()) return true;
  if (relations.size() > 1)
    fail_unsupported(
        "multi-relation F-face test requires radical membership");
  Index c = restricted_term_count(relations[0], face_mask);
  return c == 0 || c >= 2;
}

std::vector<AuxPart> aux_grading_decompose(const GradedPoly& f,
                                           const IVec& a) {
  if (f.nvars != a.size())
    fail_validation("auxiliary degree vector has wrong length");
  std::map<Int, std::vector<Term>> buckets;
  for (const Term& t : f.terms) {
    Int k = 0;
    for (Index i = 0; i < a.size(); ++i) k += a[i] * t.exps[i];
    buckets[k].push_back(t);
  }
  std::vector<AuxPart> out;
  for (auto& [k, ts] : buckets)
    out.push_back(AuxPart{k, make_poly(f.nvars, std::move(ts))});
  return out;
}

GradedPoly scale_var_exponent(const GradedPoly& f, Index var, const Int& m) {
  GradedPoly g;
  g.nvars = f.nvars;
  for (Term t : f.terms) {
    t.exps[var] *= m;
    g.terms.push_back(std::move(t));
  }
  return make_poly(g.nvars, std::move(g.terms));
}

GradedPoly mul_var_power(const GradedPoly& f, Index var, const Int& e) {
  GradedPoly g;
  g.nvars = f.nvars;
  for (Term t : f.terms) {
    t.exps[var] += e;
    if (t.exps[var] < 0)
      fail_validation("negative exponent produced while shifting " +
                      monomial_string(t.exps));
    g.terms.push_back(std::move(t));
  }
  return make_poly(g.nvars, std::move(g.terms));
}

GradedPoly drop_var(const GradedPoly& f, Index var) {
  std::vector<Term> terms;
  for (const Term& t : f.terms) {
    if (t.exps[var] != 0)
      fail_validation("cannot drop a variable still present in " +
                      monomial_string(t.exps));
    Term s;
    s.coeff = t.coeff;
    s.exps.resize(f.nvars - 1);
    Index j = 0;
    for (Index i = 0; i < f.nvars; ++i)
      if (i != var) s.exps[j++] = t.exps[i];
    terms.push_back(std::move(s));
  }
  return make_poly(f.nvars - 1, std::move(terms));
}

GradedPoly append_var(const GradedPoly& f) {
  std::vector<Term> terms;
  for (const Term& t : f.terms) {
    Term s;
    s.coeff = t.coeff;
    s.exps.resize(f.nvars + 1);
    s.exps.head(f.nvars) = t.exps;
    s.exps[f.nvars] = 0;
    terms.push_back(std::move(s));
  }
  return make_poly(f.nvars + 1, std::move(terms));
}

GradedPoly partial(const GradedPoly& f, Index var) {
  std::vector<Term> terms;
  for (const Term& t : f.terms) {
    if (t.exps[var] == 0) continue;
    Term s = t;
    s.coeff = t.coeff * Rat(t.exps[var]);
    s.exps[var] -= 1;
    terms.push_back(std::move(s));
  }
  return make_poly(f.nvars, std::move(terms));
}

}  // namespace bunched::poly
