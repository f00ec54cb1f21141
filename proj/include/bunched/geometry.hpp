#pragma once

// geometric invariants of the variety attached to a bunched ring:
// divisor class cones, local factoriality, smoothness, canonical class

#include <optional>
#include <vector>

#include "bunched/bunch.hpp"

namespace bunched::geometry {

enum class Tri { No, Yes, Unknown };

const char* tri_string(Tri t);

// cones of divisor classes inside K_Q; the ample classes form the
// relative interior of the semiample cone
struct DivisorCones {
  cones::Cone effective;
  cones::Cone moving;
  cones::Cone semiample;
};

DivisorCones divisor_cones(const bunch::BunchedRing& B);

bool is_ample(const bunch::BunchedRing& B, const QVec& w);

struct StratumInfo {
  uint64_t face = 0;
  bool factorial = false;    // weights of the face generate all of K
  bool q_factorial = false;  // projected cone is full-dimensional
  Tri smooth = Tri::Unknown;
};

// properties of the points over the stratum of a relevant face;
// rejects faces that are not relevant for the bunch
StratumInfo stratum_properties(const bunch::BunchedRing& B, uint64_t mask);

struct SingularityReport {
  std::vector<StratumInfo> strata;  // one entry per relevant face
  bool x_factorial = false;
  bool x_q_factorial = false;
  Tri x_smooth = Tri::Unknown;
};

SingularityReport singularity_report(const bunch::BunchedRing& B);

// Picard group as a subgroup of K: the intersection of the weight
// subgroups of the minimal relevant faces
groups::Subgroup picard_group(const bunch::BunchedRing& B);

struct CanonicalReport {
  groups::GroupElement canonical;
  groups::GroupElement anticanonical;
  bool q_gorenstein = false;
  bool gorenstein = false;
  bool q_fano = false;
  bool fano = false;
};

CanonicalReport canonical_report(const bunch::BunchedRing& B);

struct VarietyReport {
  Index dim = 0;
  bool combinatorially_minimal = false;
  DivisorCones cones;
  groups::Subgroup picard;
  std::optional<Int> picard_index;
  SingularityReport sing;
  CanonicalReport canonical;
};

VarietyReport variety_report(const bunch::BunchedRing& B);

}  // namespace bunched::geometry
