#include "bunched/modify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>

namespace bunched::modify {

using bunch::BunchedRing;
using bunch::CoxPresentation;
using cones::Cone;
using cones::Fan;

namespace {

// columns of P whose rays appear among the extreme rays of the cone
std::vector<Index> cone_column_set(const Cone& c, const IMat& P) {
  const std::vector<IVec>& rays = c.extreme_rays();
  std::vector<Index> out;
  for (Index j = 0; j < P.cols(); ++j) {
    IVec pj = primitive(IVec(P.col(j)));
    for (const IVec& r : rays)
      if (pj == r) {
        out.push_back(j);
        break;
      }
  }
  return out;
}

bool is_zero_vec(const IVec& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

}  // namespace

StellarData stellar_data(const Fan& fan, const IMat& P, const IVec& v) {
  if (v.size() != P.rows()) fail_validation("subdivision center has wrong size");
  if (is_zero_vec(v)) fail_validation("subdivision center is zero");
  if (content(v) != 1) fail_validation("subdivision center must be primitive");

  const Cone* home = nullptr;
  for (const Cone& c : fan.max_cones)
    if (c.contains(v)) {
      home = &c;
      break;
    }
  if (!home) fail_validation("subdivision center lies outside the fan support");

  StellarData sd;
  sd.sigma0 = cones::face_containing(*home, v);
  sd.v = v;
  if (sd.sigma0.dim() <= 1)
    fail_validation("subdivision center lies on a ray of the fan");

  std::vector<Index> J = cone_column_set(sd.sigma0, P);
  if (Index(J.size()) != sd.sigma0.dim())
    fail_unsupported("subdivision center lies in a non-simplicial cone");

  Index n = P.rows(), d = Index(J.size());
  QMat A(n, d);
  for (Index t = 0; t < d; ++t) A.col(t) = to_rat(IVec(P.col(J[t])));
  QVec x = Eigen::FullPivLU<QMat>(A).solve(to_rat(v));
  QVec back = A * x;
  QVec vr = to_rat(v);
  for (Index i = 0; i < n; ++i)
    if (back[i] != vr[i]) fail_validation("center is not in the cone's span");

  Int m = 1;
  for (Index t = 0; t < d; ++t) m = ilcm(m, Int(x[t].get_den()));
  sd.m = m;
  sd.a = IVec::Zero(P.cols());
  for (Index t = 0; t < d; ++t) {
    sd.a[J[t]] = Int(x[t].get_num() * (m / Int(x[t].get_den())));
    if (sd.a[J[t]] <= 0) fail_validation("center is not interior to its cone");
  }
  return sd;
}

namespace {

// rank of the symmetric form when f is a quadric in the standard sense
Index quadric_rank(const poly::GradedPoly& f) {
  for (const poly::Term& t : f.terms) {
    Int total = 0;
    for (Index j = 0; j < t.exps.size(); ++j) total += t.exps[j];
    if (total != 2) return 0;
  }
  Index r = f.nvars;
  QMat A = QMat::Zero(r, r);
  for (const poly::Term& t : f.terms) {
    std::vector<Index> vars;
    for (Index j = 0; j < r; ++j)
      for (Int e = 0; e < t.exps[j]; ++e) vars.push_back(j);
    if (vars[0] == vars[1])
      A(vars[0], vars[0]) += Rat(2) * t.coeff;
    else {
      A(vars[0], vars[1]) += t.coeff;
      A(vars[1], vars[0]) += t.coeff;
    }
  }
  return Eigen::FullPivLU<QMat>(A).rank();
}

}  // namespace

AdmissibilityEvidence check_blowup_admissible(const CoxPresentation& pres,
                                              const StellarData& sd) {
  AdmissibilityEvidence ev;
  ev.ok = true;
  if (pres.relations.empty()) return ev;

  const poly::GradedPoly& f = pres.relations[0];
  std::vector<poly::AuxPart> parts = poly::aux_grading_decompose(f, sd.a);
  Int k0 = parts.front().degree;
  for (const poly::AuxPart& p : parts)
    if (Int((p.degree - k0) % sd.m) != 0) {
      ev.ok = false;
      ev.failures.push_back(
          "auxiliary degrees are not congruent modulo the multiplicity");
      break;
    }

  const poly::GradedPoly& g0 = parts.front().part;
  if (g0.terms.size() < 2) {
    ev.ok = false;
    ev.failures.push_back("lowest auxiliary part is a monomial");
  } else {
    uint64_t support = 0;
    for (const poly::Term& t : g0.terms) support |= poly::term_support(t);
    if (__builtin_popcountll(support) < 2) {
      ev.ok = false;
      ev.failures.push_back("lowest auxiliary part uses a single variable");
    }
  }

  if (quadric_rank(f) >= 3)
    ev.primality_automatic = true;
  else if (!pres.relation_prime_attested) {
    ev.ok = false;
    ev.failures.push_back(
        "cannot certify the transformed relation stays prime; supply an "
        "attestation");
  }
  return ev;
}

poly::GradedPoly blowup_cox_relation(const poly::GradedPoly& f,
                                     const StellarData& sd) {
  std::vector<poly::AuxPart> parts = poly::aux_grading_decompose(f, sd.a);
  Int k0 = parts.front().degree;
  std::vector<poly::Term> terms;
  for (const poly::AuxPart& p : parts) {
    Int diff = p.degree - k0;
    if (Int(diff % sd.m) != 0)
      fail_validation(
          "admissibility hypotheses violated: auxiliary degrees are not "
          "congruent modulo the multiplicity");
    Int e = Int(diff / sd.m);
    for (const poly::Term& t : p.part.terms) {
      IVec exps(f.nvars + 1);
      exps.head(f.nvars) = t.exps;
      exps[f.nvars] = e;
      terms.push_back({t.coeff, std::move(exps)});
    }
  }
  return poly::make_poly(f.nvars + 1, std::move(terms));
}

ContractionResult contract_cox_relation(const poly::GradedPoly& f, Index i,
                                        const StellarData& sd) {
  if (i < 0 || i >= f.nvars) fail_validation("contraction index out of range");
  bool have_c = false;
  Int c = 0;
  for (const poly::Term& t : f.terms) {
    Int deg = sd.m * t.exps[i];
    for (Index j = 0; j < f.nvars; ++j) deg -= sd.a[j] * t.exps[j];
    if (!have_c) {
      c = deg;
      have_c = true;
    } else if (deg != c) {
      fail_validation("relation is not homogeneous for the contraction grading");
    }
  }
  if (c > 0) fail_validation("contraction requires a nonpositive degree shift");

  std::vector<poly::Term> terms;
  for (const poly::Term& t : f.terms) {
    Int ei = Int(sd.m * t.exps[i] - c);
    Int want = 0;
    for (Index j = 0; j < f.nvars; ++j) want += sd.a[j] * t.exps[j];
    if (ei != want) fail_validation("contraction residue check failed");
    IVec exps(f.nvars - 1);
    Index out = 0;
    for (Index j = 0; j < f.nvars; ++j)
      if (j != i) exps[out++] = t.exps[j];
    terms.push_back({t.coeff, std::move(exps)});
  }
  ContractionResult res;
  res.f0 = poly::make_poly(f.nvars - 1, std::move(terms));
  res.c = c;
  return res;
}

groups::GradingMap regrade(const IMat& P) {
  groups::CokernelPresentation cok = groups::cokernel(IMat(P.transpose()));
  return groups::make_grading(cok.group, cok.to_free, cok.to_torsion);
}

namespace {

// recover the toric chamber of a fan and rebuild the bunched ring there
ModelState assemble(CoxPresentation pres, IMat P, const Fan& fan,
                    Index max_vars) {
  Index k = pres.grading.target.rank;
  IMat F = groups::free_part(pres.grading);
  std::vector<Cone> pieces;
  for (const Cone& sigma : fan.max_cones) {
    std::vector<Index> in = cone_column_set(sigma, P);
    std::vector<bool> used(P.cols(), false);
    for (Index j : in) used[j] = true;
    std::vector<IVec> gens;
    for (Index j = 0; j < P.cols(); ++j)
      if (!used[j]) gens.push_back(F.col(j));
    pieces.push_back(Cone::from_generators(k, std::move(gens)));
  }
  Cone eta = cones::intersect(pieces, k);
  if (!eta.is_full_dim())
    fail_validation("the modified ambient structure admits no chamber");

  bunch::OrbitConeSet S = bunch::orbit_cones(pres, false, max_vars);
  Cone lam = bunch::git_cone(S, to_rat(eta.interior_point()));
  BunchedRing ring = bunch::bunch_from_chamber(pres, lam, max_vars);
  return ModelState{std::move(ring), std::move(P), std::move(eta)};
}

void check_primitive_columns(const IMat& P) {
  for (Index j = 0; j < P.cols(); ++j)
    if (content(IVec(P.col(j))) != 1)
      fail_unsupported(
          "ray columns must be primitive for the modification calculus");
}

bool common_facet(const Cone& A, const Cone& B, Index k) {
  Cone F = cones::intersect(A, B);
  return F.dim() == k - 1 && cones::is_face(F, A) && cones::is_face(F, B);
}

}  // namespace

ModelState make_model(const BunchedRing& B, Index max_vars,
                      std::optional<IMat> P_override,
                      std::optional<Cone> eta_override) {
  cones::GaleResult g = cones::gale_transform(B.pres.grading);
  if (g.degenerate)
    fail_validation("grading has a trivial kernel; there is no ambient fan");
  IMat P = g.P;
  if (P_override) {
    if (P_override->rows() != g.n_rank || P_override->cols() != P.cols())
      fail_validation("fan basis has the wrong shape");
    groups::HermiteBasis ours = groups::hermite_basis(IMat(g.P.transpose()));
    groups::HermiteBasis theirs =
        groups::hermite_basis(IMat(P_override->transpose()));
    if (!groups::lattice_eq(ours, theirs))
      fail_validation("fan basis does not span the kernel of the grading");
    P = *P_override;
  }
  check_primitive_columns(P);

  Cone lam1 = geometry::divisor_cones(B).semiample;
  Index k = B.pres.grading.target.rank;
  if (lam1.dim() != k)
    fail_validation("the bunch does not determine a projective chamber");

  bunch::OrbitConeSet T = bunch::orbit_cones(B.pres, true, max_vars);
  bunch::ChamberFan FZ = bunch::enumerate_chamber_fan(T);
  std::vector<Cone> fitting;
  for (const Cone& eta : FZ.chambers)
    if (cones::rel_interior_subset(eta, lam1)) fitting.push_back(eta);
  if (fitting.empty())
    fail_validation("no toric chamber refines the semiample cone");

  Cone eta = fitting.front();
  if (eta_override) {
    bool found = false;
    for (const Cone& c : fitting)
      if (c.equals(*eta_override)) found = true;
    if (!found)
      fail_validation("the given chamber is not compatible with the bunch");
    eta = *eta_override;
  }
  return ModelState{B, std::move(P), std::move(eta)};
}

std::vector<Index> exceptional_weights(const BunchedRing& B) {
  IMat F = groups::free_part(B.pres.grading);
  std::vector<Index> out;
  Cone eff = B.orbits.weight_cone();
  for (const IVec& ray : eff.extreme_rays()) {
    std::vector<Index> on_ray;
    for (Index j = 0; j < F.cols(); ++j) {
      IVec w = F.col(j);
      if (!is_zero_vec(w) && primitive(w) == ray) on_ray.push_back(j);
    }
    if (on_ray.size() == 1) out.push_back(on_ray.front());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ModificationStep execute_blowup(const ModelState& st, const IVec& v,
                                Index max_vars) {
  const CoxPresentation& pres = st.ring.pres;
  Fan Sigma = bunch::ambient_fan(st.P, pres.grading, st.eta, max_vars);
  StellarData sd = stellar_data(Sigma, st.P, v);

  AdmissibilityEvidence ev = check_blowup_admissible(pres, sd);
  if (!ev.ok)
    fail_validation("admissibility hypotheses violated: " + ev.failures[0]);

  CoxPresentation p1;
  p1.nvars = pres.nvars + 1;
  IMat P1(st.P.rows(), st.P.cols() + 1);
  P1.leftCols(st.P.cols()) = st.P;
  P1.col(st.P.cols()) = v;
  p1.grading = regrade(P1);
  Int k0 = 0;
  if (!pres.relations.empty()) {
    k0 = poly::aux_grading_decompose(pres.relations[0], sd.a).front().degree;
    p1.relations = {blowup_cox_relation(pres.relations[0], sd)};
  }
  p1.gens_prime_attested = pres.gens_prime_attested;
  // primality of the exceptional coordinate comes with the same hypotheses
  // that keep the transformed relation prime
  if (!p1.gens_prime_attested.empty()) p1.gens_prime_attested.push_back(true);
  p1.relation_prime_attested = true;
  p1.factorial_grading_attested = pres.factorial_grading_attested;
  bunch::validate_presentation(p1);
  bunch::AdmissibilityReport rep = bunch::validate_admissible(p1);
  if (!rep.admissible)
    fail_validation("inadmissible generator system after subdivision: " +
                    rep.failures[0]);

  ModificationRecord rec;
  rec.kind = "blowup";
  rec.var_index = pres.nvars;
  rec.center = v;
  rec.multiplicity = sd.m;
  rec.shift = k0;
  rec.exceptional_class = p1.grading.column(pres.nvars);
  rec.note = "m=" + sd.m.get_str() + ", k0=" + k0.get_str();

  Fan S1 = cones::stellar_subdivide(Sigma, v);
  ModelState ns = assemble(std::move(p1), std::move(P1), S1, max_vars);
  return ModificationStep{std::move(ns), std::move(rec)};
}

std::vector<ContractionCandidate> find_contractions(const ModelState& st,
                                                    Index max_vars) {
  const CoxPresentation& pres = st.ring.pres;
  Index k = pres.grading.target.rank;
  IMat F = groups::free_part(pres.grading);

  Cone lam1 = geometry::divisor_cones(st.ring).semiample;
  bunch::ChamberFan FX = bunch::enumerate_chamber_fan(st.ring.orbits);
  bunch::OrbitConeSet T = bunch::orbit_cones(pres, true, max_vars);
  bunch::ChamberFan FZ = bunch::enumerate_chamber_fan(T);

  std::vector<ContractionCandidate> out;
  for (Index i : exceptional_weights(st.ring)) {
    QVec wi = to_rat(IVec(F.col(i)));
    IVec vi = primitive(IVec(st.P.col(i)));
    bool done = false;
    for (const Cone& lam0 : FX.chambers) {
      if (done) break;
      if (lam0.equals(lam1) || !lam0.contains(wi)) continue;
      if (!common_facet(lam0, lam1, k)) continue;
      for (const Cone& eta0 : FZ.chambers) {
        if (done) break;
        if (!cones::rel_interior_subset(eta0, lam0) || !eta0.contains(wi))
          continue;
        for (const Cone& eta1 : FZ.chambers) {
          if (!cones::rel_interior_subset(eta1, lam1)) continue;
          if (!common_facet(eta0, eta1, k)) continue;
          try {
            Fan S0 = bunch::ambient_fan(st.P, pres.grading, eta0, max_vars);
            if (Index(S0.rays.size()) != pres.nvars - 1) continue;
            bool vi_absent = true;
            for (const IVec& r : S0.rays)
              if (r == vi) vi_absent = false;
            if (!vi_absent) continue;
            Fan S1 = bunch::ambient_fan(st.P, pres.grading, eta1, max_vars);
            if (Index(S1.rays.size()) != pres.nvars) continue;
            if (!cones::fan_eq(cones::stellar_subdivide(S0, vi), S1)) continue;
            out.push_back({i, lam0, lam1, eta0, eta1});
            done = true;
            break;
          } catch (const Error&) {
            continue;
          }
        }
      }
    }
  }
  return out;
}

ModificationStep execute_contraction(const ModelState& st,
                                     const ContractionCandidate& cand,
                                     Index max_vars) {
  const CoxPresentation& pres = st.ring.pres;
  Fan S0 = bunch::ambient_fan(st.P, pres.grading, cand.eta0, max_vars);
  IVec vi = primitive(IVec(st.P.col(cand.i)));
  for (const IVec& r : S0.rays)
    if (r == vi) fail_validation("chamber does not contract this ray");
  if (Index(S0.rays.size()) != pres.nvars - 1)
    fail_validation("chamber does not contract exactly one ray");

  StellarData sd = stellar_data(S0, st.P, vi);
  CoxPresentation p0;
  p0.nvars = pres.nvars - 1;
  Int c = 0;
  if (!pres.relations.empty()) {
    ContractionResult cr = contract_cox_relation(pres.relations[0], cand.i, sd);
    p0.relations = {std::move(cr.f0)};
    c = cr.c;
  }
  IMat P0(st.P.rows(), st.P.cols() - 1);
  Index out = 0;
  for (Index j = 0; j < st.P.cols(); ++j)
    if (j != cand.i) P0.col(out++) = st.P.col(j);
  p0.grading = regrade(P0);
  p0.gens_prime_attested = pres.gens_prime_attested;
  if (!p0.gens_prime_attested.empty())
    p0.gens_prime_attested.erase(p0.gens_prime_attested.begin() + cand.i);
  p0.relation_prime_attested = pres.relation_prime_attested;
  p0.factorial_grading_attested = pres.factorial_grading_attested;
  bunch::validate_presentation(p0);
  bunch::AdmissibilityReport rep = bunch::validate_admissible(p0);
  if (!rep.admissible)
    fail_validation("inadmissible generator system after contraction: " +
                    rep.failures[0]);

  ModificationRecord rec;
  rec.kind = "contraction";
  rec.var_index = cand.i;
  rec.center = vi;
  rec.multiplicity = sd.m;
  rec.shift = c;
  rec.exceptional_class = pres.grading.column(cand.i);
  rec.note = "m=" + sd.m.get_str() + ", c=" + c.get_str();

  ModelState ns = assemble(std::move(p0), std::move(P0), S0, max_vars);
  return ModificationStep{std::move(ns), std::move(rec)};
}

ModelState retarget_chamber(const ModelState& st, const QVec& w,
                            Index max_vars) {
  const CoxPresentation& pres = st.ring.pres;
  Cone lam = bunch::git_cone(st.ring.orbits, w);
  BunchedRing ring = bunch::bunch_from_chamber(pres, lam, max_vars);
  bunch::OrbitConeSet T = bunch::orbit_cones(pres, true, max_vars);
  Cone eta = bunch::git_cone(T, w);
  if (!eta.is_full_dim())
    fail_validation("target class lies on a wall of the toric GIT fan");
  return ModelState{std::move(ring), st.P, std::move(eta)};
}

ReduceResult reduce_to_minimal(const ModelState& st, Index max_vars) {
  ReduceResult rr;
  rr.final_state = st;
  for (;;) {
    geometry::DivisorCones dc = geometry::divisor_cones(rr.final_state.ring);
    if (dc.effective.equals(dc.moving)) {
      rr.minimal = true;
      return rr;
    }
    std::vector<ContractionCandidate> cands =
        find_contractions(rr.final_state, max_vars);
    if (cands.empty()) {
      rr.diagnostic =
          "no admissible chamber geometry for the remaining exceptional "
          "classes";
      return rr;
    }
    ModificationStep step =
        execute_contraction(rr.final_state, cands.front(), max_vars);
    rr.steps.push_back(std::move(step.record));
    rr.final_state = std::move(step.state);
  }
}

}  // namespace bunched::modify
