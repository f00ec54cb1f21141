#pragma once

// modification calculus: stellar subdivisions of the ambient fan, the
// induced transforms of the defining relation and grading, contractions,
// and the reduction toward a combinatorially minimal model

#include <optional>
#include <string>
#include <vector>

#include "bunched/geometry.hpp"

namespace bunched::modify {

// data of a point v of the fan support relative to the smallest cone
// containing it: m * v = sum a_j * column_j over that cone's columns
struct StellarData {
  cones::Cone sigma0;
  IVec v;
  IVec a;  // one entry per column of P, zero outside sigma0
  Int m = 1;
};

StellarData stellar_data(const cones::Fan& fan, const IMat& P, const IVec& v);

struct AdmissibilityEvidence {
  bool ok = false;
  bool primality_automatic = false;  // full rank quadric argument applies
  std::vector<std::string> failures;
};

// hypotheses under which the proper transform of the relation stays prime
// and the subdivided system is again a valid presentation
AdmissibilityEvidence check_blowup_admissible(const bunch::CoxPresentation& pres,
                                              const StellarData& sd);

// proper transform of the relation under the subdivision at sd: split into
// parts of auxiliary degree and attach powers of the new last variable
poly::GradedPoly blowup_cox_relation(const poly::GradedPoly& f,
                                     const StellarData& sd);

struct ContractionResult {
  poly::GradedPoly f0;
  Int c = 0;  // nonpositive degree shift absorbed into the dropped variable
};

// inverse transform: eliminate variable i using the relation
// m * v_i = sum a_j v_j recorded in sd
ContractionResult contract_cox_relation(const poly::GradedPoly& f, Index i,
                                        const StellarData& sd);

// grading of Z^r by the cokernel of the transposed ray matrix
groups::GradingMap regrade(const IMat& P);

// a projective model: bunched ring plus a pinned ray matrix and the
// chamber of the toric GIT fan that carves out the ambient variety
struct ModelState {
  bunch::BunchedRing ring;
  IMat P;
  cones::Cone eta;
};

ModelState make_model(const bunch::BunchedRing& B,
                      Index max_vars = bunch::kDefaultMaxVars,
                      std::optional<IMat> P_override = std::nullopt,
                      std::optional<cones::Cone> eta_override = std::nullopt);

// indices whose classes span an extreme ray of the effective cone and are
// alone on it: the candidates for contraction
std::vector<Index> exceptional_weights(const bunch::BunchedRing& B);

struct ModificationRecord {
  std::string kind;  // "blowup" or "contraction"
  Index var_index = 0;
  IVec center;
  Int multiplicity = 1;
  Int shift = 0;  // lowest auxiliary degree for blowups, else the shift c
  groups::GroupElement exceptional_class;
  std::string note;
};

struct ModificationStep {
  ModelState state;
  ModificationRecord record;
};

ModificationStep execute_blowup(const ModelState& st, const IVec& v,
                                Index max_vars = bunch::kDefaultMaxVars);

struct ContractionCandidate {
  Index i = 0;
  cones::Cone lambda0, lambda1;  // adjacent chambers of the model GIT fan
  cones::Cone eta0, eta1;        // compatible adjacent toric chambers
};

std::vector<ContractionCandidate> find_contractions(
    const ModelState& st, Index max_vars = bunch::kDefaultMaxVars);

ModificationStep execute_contraction(const ModelState& st,
                                     const ContractionCandidate& cand,
                                     Index max_vars = bunch::kDefaultMaxVars);

// move the model to the GIT chamber containing the given class
ModelState retarget_chamber(const ModelState& st, const QVec& w,
                            Index max_vars = bunch::kDefaultMaxVars);

struct ReduceResult {
  std::vector<ModificationRecord> steps;
  ModelState final_state;
  bool minimal = false;
  std::string diagnostic;
};

// contract exceptional classes (smallest variable index first) until the
// effective and moving cones agree or no admissible contraction remains
ReduceResult reduce_to_minimal(const ModelState& st,
                               Index max_vars = bunch::kDefaultMaxVars);

}  // namespace bunched::modify
