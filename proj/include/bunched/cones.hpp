#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bunched/errors.hpp"
#include "bunched/groups.hpp"
#include "bunched/scalar.hpp"

namespace bunched::cones {

// {x : <c,x> >= 0 for all constraints}, described by extreme rays modulo a
// lineality space
struct DDResult {
  std::vector<IVec> rays;       // primitive
  std::vector<IVec> lineality;  // lattice basis of the lineality space
};

DDResult dual_description(Index n, const std::vector<IVec>& constraints);

// facet inequalities plus span equations of a generated cone
struct FacetDesc {
  std::vector<IVec> facets;    // <u,x> >= 0
  std::vector<IVec> span_eqs;  // <u,x> = 0 on the cone
};

class Cone {
 public:
  Cone() = default;
  static Cone from_generators(Index n, std::vector<IVec> gens);
  // one generator per column
  static Cone from_generators(const IMat& columns);
  static Cone from_inequalities(Index n, const std::vector<IVec>& ineqs,
                                const std::vector<IVec>& eqs = {});
  static Cone zero(Index n);
  static Cone full_space(Index n);

  Index ambient_dim() const { return n_; }
  const std::vector<IVec>& generators() const { return gens_; }

  const FacetDesc& facet_desc() const;
  Index dim() const;
  Index lineality_dim() const;
  bool is_pointed() const { return lineality_dim() == 0; }
  bool is_full_dim() const { return dim() == n_; }

  bool contains(const IVec& v) const;
  bool contains(const QVec& v) const;
  bool contains_cone(const Cone& other) const;
  bool rel_interior_contains(const IVec& v) const;
  bool rel_interior_contains(const QVec& v) const;

  // extreme rays (modulo lineality), via iterated redundancy elimination;
  // sorted lex, cached
  const std::vector<IVec>& extreme_rays() const;
  // lineality space lattice basis, canonical
  const std::vector<IVec>& lineality_gens() const;

  // a lattice point of the relative interior: sum of extreme rays
  IVec interior_point() const;

  // stable dedup and equality key
  const std::string& key() const;
  bool equals(const Cone& other) const;

 private:
  Index n_ = 0;
  std::vector<IVec> gens_;
  struct Cache;
  std::shared_ptr<Cache> cache_;  // shared so copies reuse computed data
  Cache& cache() const;
};

Cone dual_cone(const Cone& C);
Cone intersect(const Cone& A, const Cone& B);
Cone intersect(const std::vector<Cone>& list, Index n);
Cone sum(const Cone& A, const Cone& B);

// faces as generator-incidence classes; includes the cone itself and the
// minimal face
std::vector<Cone> all_faces(const Cone& C);
std::vector<Cone> faces(const Cone& C, Index d);
bool is_face(const Cone& F, const Cone& C);

// smallest face of C whose relative interior contains v; v must lie in C
Cone face_containing(const Cone& C, const IVec& v);

// relative interiors meet
bool rel_interiors_meet(const Cone& A, const Cone& B);
// A's relative interior inside B's
bool rel_interior_subset(const Cone& A, const Cone& B);

struct Fan {
  Index n = 0;
  std::vector<Cone> max_cones;
  std::vector<IVec> rays;  // primitive ray generators in declared order
};

// builds rays in first-seen order over the max cones unless an explicit
// order is supplied; validates the fan axioms
Fan make_fan(Index n, std::vector<Cone> max_cones,
             std::vector<IVec> ray_order = {});

void validate_fan(const Fan& F);
bool fan_is_complete(const Fan& F);
bool support_contains(const Fan& F, const IVec& v);
bool fan_eq(const Fan& A, const Fan& B);

Fan stellar_subdivide(const Fan& F, const IVec& v);

// subsets of {0..r-1}, the faces of the positive orthant
struct FaceOfOrthant {
  std::vector<Index> idx;  // strictly increasing

  bool operator==(const FaceOfOrthant& o) const { return idx == o.idx; }
  bool operator<(const FaceOfOrthant& o) const { return idx < o.idx; }
};

FaceOfOrthant face_from_mask(uint64_t mask, Index r);
uint64_t mask_of(const FaceOfOrthant& f);
FaceOfOrthant face_complement(const FaceOfOrthant& f, Index r);

// Gale transform: presentation matrix of the dual lattice
struct GaleResult {
  IMat P;        // n x r, columns are the fan ray candidates
  Index n_rank;  // rank of the kernel lattice
  bool degenerate;                         // kernel rank 0
  std::vector<IVec> primitive_columns;     // per variable
  std::vector<Int> column_multiplicities;  // content of each column
};

GaleResult gale_transform(const groups::GradingMap& Q);

}  // namespace bunched::cones
