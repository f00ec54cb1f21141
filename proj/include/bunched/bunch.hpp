#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bunched/cones.hpp"
#include "bunched/groups.hpp"
#include "bunched/poly.hpp"

namespace bunched::bunch {

// graded polynomial ring presentation with at most one relation
struct CoxPresentation {
  Index nvars = 0;
  groups::GradingMap grading;
  std::vector<poly::GradedPoly> relations;
  std::vector<bool> gens_prime_attested;
  bool relation_prime_attested = false;
  bool factorial_grading_attested = false;
};

// structural checks: sizes, at most one relation, homogeneity
void validate_presentation(const CoxPresentation& pres);

// each drop-one facet of the orthant must map onto the full grading group
struct AdmissibilityReport {
  bool admissible = true;
  std::vector<std::string> failures;  // one line per bad facet
};
AdmissibilityReport validate_admissible(const CoxPresentation& pres);

// default guard against enumerating 2^r faces for large r
inline constexpr Index kDefaultMaxVars = 20;

// projected cones of the qualifying faces; cones deduplicated
struct OrbitConeSet {
  Index r = 0;
  bool all_faces = false;                // toric total coordinate space
  IMat weights0;                         // free part of the grading, k x r
  std::vector<uint64_t> faces;           // ascending masks
  std::vector<int> cone_id;              // parallel to faces
  std::vector<cones::Cone> cones;        // distinct projected cones
  std::vector<uint64_t> rep_face;        // one witness face per cone

  const cones::Cone& cone_of(uint64_t mask) const;
  std::optional<int> id_of(uint64_t mask) const;
  cones::Cone weight_cone() const;  // projected cone of the full face
};

OrbitConeSet orbit_cones(const CoxPresentation& pres, bool all_faces,
                         Index max_vars = kDefaultMaxVars);

// intersection of all orbit cones containing w
cones::Cone git_cone(const OrbitConeSet& S, const QVec& w);

struct ChamberFan {
  Index k = 0;  // rank of the free part
  std::vector<cones::Cone> chambers;
  std::string source;  // "hypersurface" or "toric"
};

// all full-dimensional GIT cones, as a fan subdividing the weight cone
ChamberFan enumerate_chamber_fan(const OrbitConeSet& S);

struct BunchedRing {
  CoxPresentation pres;
  std::vector<cones::Cone> bunch;  // the collection Phi, sorted by key
  OrbitConeSet orbits;             // F-face orbit cones
  std::vector<uint64_t> rlv;
  std::vector<uint64_t> cov;
};

// checks the defining conditions of a bunch against the orbit cone set;
// throws with a diagnostic on failure
void validate_bunch(const CoxPresentation& pres, const OrbitConeSet& S,
                    const std::vector<cones::Cone>& phi);

std::vector<uint64_t> relevant_faces(const OrbitConeSet& S,
                                     const std::vector<cones::Cone>& phi);
std::vector<uint64_t> covering_collection(const std::vector<uint64_t>& rlv);

// bunched ring from an explicit bunch, validating everything
BunchedRing make_bunched_ring(CoxPresentation pres,
                              std::vector<cones::Cone> phi,
                              Index max_vars = kDefaultMaxVars);

// bunched ring of the Q-factorial projective model attached to a chamber
BunchedRing bunch_from_chamber(const CoxPresentation& pres,
                               const cones::Cone& lambda,
                               Index max_vars = kDefaultMaxVars);

// moving cone: intersection of the drop-one projected cones
cones::Cone moving_cone(const CoxPresentation& pres);

// maximal cones are spanned by the ray complements of the minimal faces
// whose projected cone interior contains the chamber interior
cones::Fan ambient_fan(const IMat& P, const groups::GradingMap& Q,
                       const cones::Cone& eta, Index max_vars = 12);

}  // namespace bunched::bunch
