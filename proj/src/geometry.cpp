#include "bunched/geometry.hpp"

#include <algorithm>

namespace bunched::geometry {

using bunch::BunchedRing;
using cones::Cone;
using groups::GroupElement;
using groups::Subgroup;

const char* tri_string(Tri t) {
  switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    default: return "unknown";
  }
}

DivisorCones divisor_cones(const BunchedRing& B) {
  DivisorCones d{B.orbits.weight_cone(), bunch::moving_cone(B.pres),
                 cones::intersect(B.bunch, B.pres.grading.target.rank)};
  return d;
}

bool is_ample(const BunchedRing& B, const QVec& w) {
  for (const Cone& tau : B.bunch)
    if (!tau.rel_interior_contains(w)) return false;
  return true;
}

namespace {

std::vector<Index> mask_columns(uint64_t mask, Index n) {
  std::vector<Index> cols;
  for (Index j = 0; j < n; ++j)
    if (mask >> j & 1) cols.push_back(j);
  return cols;
}

Subgroup face_subgroup(const BunchedRing& B, uint64_t mask) {
  std::vector<GroupElement> gens;
  for (Index j : mask_columns(mask, B.pres.nvars))
    gens.push_back(B.pres.grading.column(j));
  return groups::subgroup_from_generators(B.pres.grading.target,
                                          std::move(gens));
}

// smoothness of the characteristic space along the stratum of a face:
// a partial derivative restricting to a single monomial never vanishes
// there, while all partials restricting to zero means the gradient does
Tri ambient_smooth(const bunch::CoxPresentation& pres, uint64_t mask) {
  if (pres.relations.empty()) return Tri::Yes;
  const poly::GradedPoly& f = pres.relations[0];
  bool all_zero = true;
  for (Index i = 0; i < pres.nvars; ++i) {
    poly::GradedPoly g = poly::restrict_to_face(poly::partial(f, i), mask);
    size_t terms = g.terms.size();
    if (terms == 1) return Tri::Yes;
    if (terms > 1) all_zero = false;
  }
  return all_zero ? Tri::No : Tri::Unknown;
}

StratumInfo stratum_info(const BunchedRing& B, uint64_t mask) {
  StratumInfo s;
  s.face = mask;
  auto idx =
      groups::subgroup_index(face_subgroup(B, mask));
  s.factorial = idx.has_value() && *idx == 1;
  s.q_factorial = B.orbits.cone_of(mask).is_full_dim();
  if (!s.factorial)
    s.smooth = Tri::No;
  else
    s.smooth = ambient_smooth(B.pres, mask);
  return s;
}

}  // namespace

StratumInfo stratum_properties(const BunchedRing& B, uint64_t mask) {
  if (!std::binary_search(B.rlv.begin(), B.rlv.end(), mask))
    fail_validation("face is not relevant for this bunch");
  return stratum_info(B, mask);
}

SingularityReport singularity_report(const BunchedRing& B) {
  SingularityReport rep;
  rep.x_factorial = true;
  rep.x_q_factorial = true;
  bool all_yes = true, any_no = false;
  for (uint64_t mask : B.rlv) {
    StratumInfo s = stratum_info(B, mask);
    rep.x_factorial = rep.x_factorial && s.factorial;
    rep.x_q_factorial = rep.x_q_factorial && s.q_factorial;
    if (s.smooth != Tri::Yes) all_yes = false;
    if (s.smooth == Tri::No) any_no = true;
    rep.strata.push_back(std::move(s));
  }
  rep.x_smooth = any_no ? Tri::No : (all_yes ? Tri::Yes : Tri::Unknown);
  return rep;
}

Subgroup picard_group(const BunchedRing& B) {
  std::vector<Subgroup> parts;
  for (uint64_t mask : B.cov) parts.push_back(face_subgroup(B, mask));
  return groups::subgroup_intersect(parts);
}

CanonicalReport canonical_report(const BunchedRing& B) {
  const groups::GradingMap& Q = B.pres.grading;
  const groups::AbelianGroup& K = Q.target;

  GroupElement can = groups::ge_zero(K);
  for (const poly::GradedPoly& f : B.pres.relations)
    can = groups::ge_add(K, can, poly::k_degree(f, Q));
  for (Index j = 0; j < B.pres.nvars; ++j)
    can = groups::ge_sub(K, can, Q.column(j));

  CanonicalReport rep;
  rep.canonical = can;
  rep.anticanonical = groups::ge_neg(K, can);
  QVec w0 = to_rat(rep.anticanonical.free);

  rep.q_gorenstein = true;
  for (const Cone& tau : B.bunch) {
    std::vector<IVec> gens = tau.extreme_rays();
    for (const IVec& g : tau.lineality_gens()) gens.push_back(g);
    size_t base = gens.size();
    for (size_t i = 0; i < base; ++i) gens.push_back(IVec(-gens[i]));
    Cone span = Cone::from_generators(K.rank, std::move(gens));
    if (!span.contains(w0)) rep.q_gorenstein = false;
  }
  rep.gorenstein = groups::subgroup_member(picard_group(B), rep.anticanonical);
  rep.q_fano = is_ample(B, w0);
  rep.fano = rep.gorenstein && rep.q_fano;
  return rep;
}

VarietyReport variety_report(const BunchedRing& B) {
  VarietyReport rep;
  rep.dim = B.pres.nvars - Index(B.pres.relations.size()) -
            B.pres.grading.target.rank;
  rep.cones = divisor_cones(B);
  rep.combinatorially_minimal = rep.cones.effective.equals(rep.cones.moving);
  rep.picard = picard_group(B);
  rep.picard_index = groups::subgroup_index(rep.picard);
  rep.sing = singularity_report(B);
  rep.canonical = canonical_report(B);
  return rep;
}

}  // namespace bunched::geometry
