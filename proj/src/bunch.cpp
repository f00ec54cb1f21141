#include "bunched/bunch.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bunched/parallel.hpp"

namespace bunched::bunch {

using cones::Cone;

void validate_presentation(const CoxPresentation& pres) {
  if (pres.nvars < 1) fail_validation("presentation needs at least one variable");
  if (pres.grading.source_rank() != pres.nvars)
    fail_validation("grading has wrong number of columns");
  if (pres.relations.size() > 1)
    fail_unsupported("at most one relation is supported");
  for (const auto& f : pres.relations) {
    if (f.nvars != pres.nvars)
      fail_validation("relation has wrong variable count");
    if (f.terms.empty()) fail_validation("relation must be nonzero");
    poly::k_degree(f, pres.grading);  // throws when inhomogeneous
  }
  if (!pres.gens_prime_attested.empty() &&
      static_cast<Index>(pres.gens_prime_attested.size()) != pres.nvars)
    fail_validation("per-generator attestation list has wrong length");
}

AdmissibilityReport validate_admissible(const CoxPresentation& pres) {
  AdmissibilityReport rep;
  Index r = pres.nvars;
  for (Index i = 0; i < r; ++i) {
    std::vector<Index> cols;
    for (Index j = 0; j < r; ++j)
      if (j != i) cols.push_back(j);
    auto im = groups::sublattice_image(pres.grading, cols);
    if (!im.index) {
      rep.admissible = false;
      rep.failures.push_back("facet dropping T" + std::to_string(i + 1) +
                             " generates a subgroup of infinite index");
    } else if (*im.index != 1) {
      rep.admissible = false;
      rep.failures.push_back("facet dropping T" + std::to_string(i + 1) +
                             " generates a subgroup of index " +
                             to_string(*im.index));
    }
  }
  return rep;
}

const Cone& OrbitConeSet::cone_of(uint64_t mask) const {
  auto id = id_of(mask);
  if (!id) fail_validation("face is not in the orbit cone set");
  return cones[static_cast<size_t>(*id)];
}

std::optional<int> OrbitConeSet::id_of(uint64_t mask) const {
  auto it = std::lower_bound(faces.begin(), faces.end(), mask);
  if (it == faces.end() || *it != mask) return std::nullopt;
  return cone_id[static_cast<size_t>(it - faces.begin())];
}

cones::Cone OrbitConeSet::weight_cone() const {
  std::vector<IVec> gens;
  for (Index j = 0; j < weights0.cols(); ++j) gens.push_back(weights0.col(j));
  return Cone::from_generators(weights0.rows(), std::move(gens));
}

OrbitConeSet orbit_cones(const CoxPresentation& pres, bool all_faces,
                         Index max_vars) {
  validate_presentation(pres);
  Index r = pres.nvars;
  if (r > max_vars)
    fail_unsupported("refusing to enumerate 2^" + std::to_string(r) +
                     " faces; raise the variable cap explicitly");
  if (r > 63) fail_unsupported("face enumeration supports at most 63 variables");

  OrbitConeSet S;
  S.r = r;
  S.all_faces = all_faces;
  S.weights0 = groups::free_part(pres.grading);

  uint64_t total = uint64_t(1) << r;
  std::vector<uint64_t> accepted;
  if (all_faces || pres.relations.empty()) {
    accepted.resize(total);
    for (uint64_t m = 0; m < total; ++m) accepted[m] = m;
  } else {
    const poly::GradedPoly& f = pres.relations[0];
    std::vector<uint64_t> supports;
    for (const auto& t : f.terms) supports.push_back(poly::term_support(t));
    unsigned workers = thread_count();
    std::vector<std::vector<uint64_t>> chunk_out(workers);
    parallel_chunks(total, workers, [&](unsigned c, uint64_t b, uint64_t e) {
      auto& out = chunk_out[c];
      for (uint64_t m = b; m < e; ++m) {
        int cnt = 0;
        for (uint64_t s : supports) {
          if ((s & ~m) == 0) ++cnt;
          if (cnt >= 2) break;
        }
        if (cnt != 1) out.push_back(m);
      }
    });
    for (auto& v : chunk_out)
      accepted.insert(accepted.end(), v.begin(), v.end());
  }

  // faces sharing the same generator set share a cone; a second pass keys
  // on the canonical cone itself
  std::map<std::string, int> by_gens;
  std::map<std::string, int> by_cone;
  std::vector<int> gens_to_cone;
  Index k = S.weights0.rows();
  for (uint64_t m : accepted) {
    std::set<std::string> gk;
    std::vector<IVec> gens;
    for (Index j = 0; j < r; ++j)
      if (m & (uint64_t(1) << j)) {
        IVec w = primitive(S.weights0.col(j));
        std::string key = to_string(w);
        if (gk.insert(key).second) gens.push_back(std::move(w));
      }
    std::string gkey;
    for (const auto& s : gk) gkey += s + "|";
    auto it = by_gens.find(gkey);
    int cid;
    if (it != by_gens.end()) {
      cid = gens_to_cone[static_cast<size_t>(it->second)];
    } else {
      Cone C = Cone::from_generators(k, std::move(gens));
      auto jt = by_cone.find(C.key());
      if (jt == by_cone.end()) {
        cid = static_cast<int>(S.cones.size());
        by_cone.emplace(C.key(), cid);
        S.cones.push_back(std::move(C));
        S.rep_face.push_back(m);
      } else {
        cid = jt->second;
      }
      by_gens.emplace(std::move(gkey), static_cast<int>(gens_to_cone.size()));
      gens_to_cone.push_back(cid);
    }
    S.faces.push_back(m);
    S.cone_id.push_back(cid);
  }
  return S;
}

cones::Cone git_cone(const OrbitConeSet& S, const QVec& w) {
  Cone omega = S.weight_cone();
  if (!omega.contains(w))
    fail_validation("degree lies outside the weight cone");
  std::vector<Cone> containing;
  for (const Cone& C : S.cones)
    if (C.contains(w)) containing.push_back(C);
  if (containing.empty())
    fail_validation("degree is not contained in any orbit cone");
  return cones::intersect(containing, omega.ambient_dim());
}

ChamberFan enumerate_chamber_fan(const OrbitConeSet& S) {
  Index k = S.weights0.rows();
  Cone omega = S.weight_cone();
  if (omega.dim() == 0) fail_validation("weight cone is trivial");
  if (!omega.is_pointed())
    fail_unsupported("weight cone is not pointed; chamber enumeration refused");

  std::set<std::string> hseen;
  std::vector<IVec> hyperplanes;
  auto add_h = [&](const IVec& u) {
    IVec p = primitive_signfixed(u);
    std::string key = to_string(p);
    if (hseen.insert(key).second) hyperplanes.push_back(std::move(p));
  };
  for (const Cone& C : S.cones) {
    if (C.dim() == omega.dim())
      for (const IVec& u : C.facet_desc().facets) add_h(u);
    if (C.dim() == omega.dim() - 1)
      for (const IVec& u : C.facet_desc().span_eqs) add_h(u);
  }

  std::vector<Cone> cells{omega};
  for (const IVec& u : hyperplanes) {
    std::vector<Cone> next;
    for (Cone& cell : cells) {
      bool pos = false, neg = false;
      for (const IVec& rray : cell.extreme_rays()) {
        Int d = u.dot(rray);
        if (d > 0) pos = true;
        if (d < 0) neg = true;
      }
      if (!(pos && neg)) {
        next.push_back(std::move(cell));
        continue;
      }
      std::vector<IVec> base = cell.facet_desc().facets;
      const std::vector<IVec>& eqs = cell.facet_desc().span_eqs;
      std::vector<IVec> ip = base;
      ip.push_back(u);
      std::vector<IVec> im = base;
      im.push_back(-u);
      next.push_back(Cone::from_inequalities(k, ip, eqs));
      next.push_back(Cone::from_inequalities(k, im, eqs));
    }
    cells = std::move(next);
  }

  std::map<std::string, Cone> chambers;
  for (const Cone& cell : cells) {
    QVec h = to_rat(cell.interior_point());
    Cone lam = git_cone(S, h);
    chambers.emplace(lam.key(), std::move(lam));
  }
  ChamberFan F;
  F.k = k;
  F.source = S.all_faces ? "toric" : "hypersurface";
  for (auto& [key, C] : chambers) F.chambers.push_back(std::move(C));
  return F;
}

void validate_bunch(const CoxPresentation& pres, const OrbitConeSet& S,
                    const std::vector<Cone>& phi) {
  if (phi.empty()) fail_validation("bunch must be nonempty");
  std::set<std::string> valid;
  for (const Cone& C : S.cones) valid.insert(C.key());
  std::set<std::string> phi_keys;
  for (const Cone& t : phi) {
    if (!valid.count(t.key()))
      fail_validation("listed cone is not a projected F-face");
    phi_keys.insert(t.key());
  }

  auto pair_ok = [](const Cone& tau, const Cone& sigma) {
    return cones::rel_interiors_meet(tau, sigma) &&
           !cones::rel_interior_subset(sigma, tau);
  };

  for (const Cone& omega : S.cones) {
    bool member = phi_keys.count(omega.key()) > 0;
    bool rhs = true;
    for (const Cone& sigma : phi) {
      if (sigma.key() == omega.key()) continue;
      if (!pair_ok(omega, sigma)) {
        rhs = false;
        break;
      }
    }
    if (member && !rhs)
      fail_validation(
          "bunch members violate the pairwise overlap condition");
    if (!member && rhs)
      fail_validation(
          "bunch is not maximal: another projected F-face satisfies the "
          "overlap condition against every member");
  }

  Index r = pres.nvars;
  Index k = S.weights0.rows();
  for (Index i = 0; i < r; ++i) {
    std::vector<IVec> gens;
    for (Index j = 0; j < r; ++j)
      if (j != i) gens.push_back(S.weights0.col(j));
    Cone facet_cone = Cone::from_generators(k, std::move(gens));
    bool covered = false;
    for (const Cone& t : phi)
      if (cones::rel_interior_subset(t, facet_cone)) {
        covered = true;
        break;
      }
    if (!covered)
      fail_validation("facet dropping T" + std::to_string(i + 1) +
                      " is not covered by the bunch");
  }
}

std::vector<uint64_t> relevant_faces(const OrbitConeSet& S,
                                     const std::vector<Cone>& phi) {
  std::vector<char> qual(S.cones.size(), 0);
  for (size_t c = 0; c < S.cones.size(); ++c)
    for (const Cone& t : phi)
      if (cones::rel_interior_subset(t, S.cones[c])) {
        qual[c] = 1;
        break;
      }
  std::vector<uint64_t> rlv;
  for (size_t i = 0; i < S.faces.size(); ++i)
    if (qual[static_cast<size_t>(S.cone_id[i])]) rlv.push_back(S.faces[i]);
  return rlv;
}

std::vector<uint64_t> covering_collection(const std::vector<uint64_t>& rlv) {
  std::vector<uint64_t> cov;
  for (uint64_t a : rlv) {
    bool minimal = true;
    for (uint64_t b : rlv)
      if (b != a && (b & ~a) == 0) {
        minimal = false;
        break;
      }
    if (minimal) cov.push_back(a);
  }
  return cov;
}

BunchedRing make_bunched_ring(CoxPresentation pres, std::vector<Cone> phi,
                              Index max_vars) {
  validate_presentation(pres);
  auto adm = validate_admissible(pres);
  if (!adm.admissible) {
    std::string msg = "inadmissible generator system:";
    for (const auto& f : adm.failures) msg += " " + f + ";";
    fail_validation(msg);
  }
  OrbitConeSet S = orbit_cones(pres, false, max_vars);

  std::map<std::string, Cone> dedup;
  for (Cone& t : phi) dedup.emplace(t.key(), std::move(t));
  std::vector<Cone> phi2;
  for (auto& [k, c] : dedup) phi2.push_back(std::move(c));

  validate_bunch(pres, S, phi2);

  BunchedRing B;
  B.rlv = relevant_faces(S, phi2);
  B.cov = covering_collection(B.rlv);
  B.pres = std::move(pres);
  B.bunch = std::move(phi2);
  B.orbits = std::move(S);
  return B;
}

cones::Cone moving_cone(const CoxPresentation& pres) {
  Index r = pres.nvars;
  IMat W = groups::free_part(pres.grading);
  std::vector<Cone> drops;
  for (Index i = 0; i < r; ++i) {
    std::vector<IVec> gens;
    for (Index j = 0; j < r; ++j)
      if (j != i) gens.push_back(W.col(j));
    drops.push_back(Cone::from_generators(W.rows(), std::move(gens)));
  }
  return cones::intersect(drops, W.rows());
}

BunchedRing bunch_from_chamber(const CoxPresentation& pres,
                               const Cone& lambda, Index max_vars) {
  validate_presentation(pres);
  Index k = pres.grading.target.rank;
  Cone mov = moving_cone(pres);
  if (lambda.dim() != k || !cones::rel_interior_subset(lambda, mov))
    fail_validation("no Q-factorial projective model for this chamber");

  OrbitConeSet S = orbit_cones(pres, false, max_vars);
  std::vector<const Cone*> qualifying;
  for (const Cone& C : S.cones)
    if (cones::rel_interior_subset(lambda, C)) qualifying.push_back(&C);
  std::vector<Cone> phi;
  for (const Cone* C : qualifying) {
    bool minimal = true;
    for (const Cone* D : qualifying)
      if (D != C && C->contains_cone(*D) && !D->contains_cone(*C)) {
        minimal = false;
        break;
      }
    if (minimal) phi.push_back(*C);
  }
  return make_bunched_ring(pres, std::move(phi), max_vars);
}

cones::Fan ambient_fan(const IMat& P, const groups::GradingMap& Q,
                       const cones::Cone& eta, Index max_vars) {
  Index r = P.cols();
  Index n = P.rows();
  Index k = Q.target.rank;
  if (r > max_vars)
    fail_unsupported("ambient fan enumeration is exponential in the "
                     "variables; cap exceeded");
  if (eta.ambient_dim() != k || eta.dim() != k)
    fail_validation("ambient fan needs a full-dimensional chamber");
  for (Index j = 0; j < r; ++j) {
    bool zero = true;
    for (Index i = 0; i < n; ++i)
      if (P(i, j) != 0) zero = false;
    if (zero) fail_validation("degenerate fan data: zero ray");
  }

  IMat W = groups::free_part(Q);
  IVec h = eta.interior_point();

  auto qualifies = [&](uint64_t mask) {
    std::vector<IVec> gens;
    for (Index j = 0; j < r; ++j)
      if (mask & (uint64_t(1) << j)) gens.push_back(W.col(j));
    Cone C = Cone::from_generators(k, std::move(gens));
    return C.contains_cone(eta) && C.rel_interior_contains(h);
  };

  std::vector<uint64_t> minima;
  uint64_t total = uint64_t(1) << r;
  std::vector<std::vector<uint64_t>> by_size(static_cast<size_t>(r) + 1);
  for (uint64_t m = 0; m < total; ++m)
    by_size[static_cast<size_t>(__builtin_popcountll(m))].push_back(m);
  for (const auto& bucket : by_size)
    for (uint64_t m : bucket) {
      bool above = false;
      for (uint64_t q : minima)
        if ((q & ~m) == 0) {
          above = true;
          break;
        }
      if (above) continue;
      if (qualifies(m)) minima.push_back(m);
    }
  if (minima.empty())
    fail_validation("chamber interior meets no projected face cone");

  std::vector<Cone> max_cones;
  for (uint64_t m : minima) {
    std::vector<IVec> gens;
    for (Index j = 0; j < r; ++j)
      if (!(m & (uint64_t(1) << j))) gens.push_back(P.col(j));
    max_cones.push_back(Cone::from_generators(n, std::move(gens)));
  }

  std::set<std::string> ray_keys;
  for (const Cone& C : max_cones)
    for (const IVec& ray : C.extreme_rays()) ray_keys.insert(to_string(ray));
  std::vector<IVec> order;
  std::set<std::string> used;
  for (Index j = 0; j < r; ++j) {
    IVec p = primitive(P.col(j));
    std::string key = to_string(p);
    if (ray_keys.count(key) && used.insert(key).second)
      order.push_back(std::move(p));
  }
  return cones::make_fan(n, std::move(max_cones), std::move(order));
}

}  // namespace bunched::bunch
