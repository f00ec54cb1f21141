#pragma once

#include <optional>
#include <vector>

#include "bunched/errors.hpp"
#include "bunched/scalar.hpp"

namespace bunched::groups {

// U * A * V = D with U, V unimodular; D diagonal, d_i >= 0, d_i | d_{i+1}
struct SmithResult {
  IMat U, D, V;
};

SmithResult smith_normal_form(const IMat& A);

// Column-style Hermite normal form of the column lattice of A.
// Zero columns are dropped; pivot rows strictly increase; pivots positive;
// entries above a pivot in its column are zero, entries left of a pivot in
// its row are reduced into [0, pivot). Unique per lattice, so usable as a
// canonical form and an equality key.
struct HermiteBasis {
  IMat basis;                     // m x s, s = rank
  std::vector<Index> pivot_rows;  // length s, strictly increasing
};

HermiteBasis hermite_basis(const IMat& A);

bool lattice_member(const HermiteBasis& H, const IVec& x);
bool lattice_eq(const HermiteBasis& A, const HermiteBasis& B);

// basis of the intersection of two column lattices
IMat lattice_intersect(const IMat& A, const IMat& B);

// integer kernel of A : Z^n -> Z^m, returned as n x s basis (saturated)
IMat kernel_basis(const IMat& A);

Index rank_of(const IMat& A);

// |det| of a square integer matrix
Int abs_det(const IMat& A);

struct AbelianGroup {
  Index rank = 0;
  std::vector<Int> torsion_orders;  // each >= 2, ascending divisibility

  Index torsion_count() const { return static_cast<Index>(torsion_orders.size()); }
  Index coord_count() const { return rank + torsion_count(); }
  bool operator==(const AbelianGroup& o) const {
    return rank == o.rank && torsion_orders == o.torsion_orders;
  }
};

// checks the normalization invariants
AbelianGroup make_group(Index rank, std::vector<Int> torsion_orders);

struct GroupElement {
  IVec free;     // length = rank
  IVec torsion;  // length = torsion_count, reduced into [0, d_i)
};

GroupElement ge_reduce(const AbelianGroup& G, IVec free, IVec torsion);
GroupElement ge_zero(const AbelianGroup& G);
GroupElement ge_add(const AbelianGroup& G, const GroupElement& a,
                    const GroupElement& b);
GroupElement ge_sub(const AbelianGroup& G, const GroupElement& a,
                    const GroupElement& b);
GroupElement ge_neg(const AbelianGroup& G, const GroupElement& a);
GroupElement ge_scale(const AbelianGroup& G, const Int& n,
                      const GroupElement& a);
bool ge_eq(const GroupElement& a, const GroupElement& b);

// lift to Z^{rank + t} using the stored torsion representatives
IVec ge_lift(const GroupElement& a);

// grading map Q : Z^r -> K, columns are the generator degrees
struct GradingMap {
  AbelianGroup target;
  IMat free_rows;     // rank x r
  IMat torsion_rows;  // t x r, reduced

  Index source_rank() const { return free_rows.cols(); }
  GroupElement column(Index j) const;
  GroupElement apply(const IVec& u) const;
};

GradingMap make_grading(AbelianGroup target, IMat free_rows, IMat torsion_rows);

// free coordinates only: the matrix of Q^0
IMat free_part(const GradingMap& Q);

// Subgroup of K, stored as the canonical Hermite basis of its full
// preimage lattice in Z^{rank + t} (relation columns d_i e_{rank+i}
// are always included).
struct Subgroup {
  AbelianGroup ambient;
  std::vector<GroupElement> gens;
  HermiteBasis lattice;
};

Subgroup subgroup_from_generators(const AbelianGroup& G,
                                  std::vector<GroupElement> gens);
bool subgroup_member(const Subgroup& S, const GroupElement& w);
bool subgroup_eq(const Subgroup& A, const Subgroup& B);

// nullopt = infinite index
std::optional<Int> subgroup_index(const Subgroup& S);

Subgroup subgroup_intersect(const std::vector<Subgroup>& list);

// subgroup generated by the chosen columns of Q, with its index in K
struct SublatticeImage {
  Subgroup subgroup;
  std::optional<Int> index;
};

SublatticeImage sublattice_image(const GradingMap& Q,
                                 const std::vector<Index>& columns);

// presentation of Z^m / column-lattice(B) as a normalized abelian group,
// with the projection in coordinates
struct CokernelPresentation {
  AbelianGroup group;
  IMat to_free;     // rank x m
  IMat to_torsion;  // t x m

  GroupElement apply(const IVec& x) const;
};

CokernelPresentation cokernel(const IMat& B);

}  // namespace bunched::groups
