#include "bunched/groups.hpp"

#include <algorithm>
#include <utility>

namespace bunched::groups {

namespace {

void swap_rows(IMat& M, Index a, Index b) {
  if (a != b) M.row(a).swap(M.row(b));
}
void swap_cols(IMat& M, Index a, Index b) {
  if (a != b) M.col(a).swap(M.col(b));
}

// unimodular row mix making D(t,t) = gcd(D(t,t), D(i,t)) and D(i,t) = 0
void row_gcd_step(IMat& D, IMat& U, Index t, Index i) {
  Int a = D(t, t), b = D(i, t);
  if (b == 0) return;
  if (a != 0 && b % a == 0) {
    Int q = b / a;
    D.row(i) -= q * D.row(t);
    U.row(i) -= q * U.row(t);
    return;
  }
  Int s, u;
  Int g = igcdext(a, b, s, u);
  Int p = a / g, q = b / g;
  IVec rt = s * D.row(t).transpose() + u * D.row(i).transpose();
  IVec ri = Int(-q) * D.row(t).transpose() + p * D.row(i).transpose();
  D.row(t) = rt.transpose();
  D.row(i) = ri.transpose();
  IVec ut = s * U.row(t).transpose() + u * U.row(i).transpose();
  IVec ui = Int(-q) * U.row(t).transpose() + p * U.row(i).transpose();
  U.row(t) = ut.transpose();
  U.row(i) = ui.transpose();
}

void col_gcd_step(IMat& D, IMat& V, Index t, Index j) {
  Int a = D(t, t), b = D(t, j);
  if (b == 0) return;
  if (a != 0 && b % a == 0) {
    Int q = b / a;
    D.col(j) -= q * D.col(t);
    V.col(j) -= q * V.col(t);
    return;
  }
  Int s, u;
  Int g = igcdext(a, b, s, u);
  Int p = a / g, q = b / g;
  IVec ct = s * D.col(t) + u * D.col(j);
  IVec cj = Int(-q) * D.col(t) + p * D.col(j);
  D.col(t) = ct;
  D.col(j) = cj;
  IVec vt = s * V.col(t) + u * V.col(j);
  IVec vj = Int(-q) * V.col(t) + p * V.col(j);
  V.col(t) = vt;
  V.col(j) = vj;
}

}  // namespace

SmithResult smith_normal_form(const IMat& A) {
  Index m = A.rows(), n = A.cols();
  SmithResult r;
  r.D = A;
  r.U = IMat::Identity(m, m);
  r.V = IMat::Identity(n, n);
  IMat& D = r.D;

  Index steps = std::min(m, n);
  for (Index t = 0; t < steps; ++t) {
    // smallest nonzero entry of the trailing block as pivot
    Index pi = -1, pj = -1;
    Int best = 0;
    for (Index i = t; i < m; ++i)
      for (Index j = t; j < n; ++j) {
        if (D(i, j) == 0) continue;
        Int a = abs(D(i, j));
        if (pi < 0 || a < best) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    swap_rows(D, t, pi);
    swap_rows(r.U, t, pi);
    swap_cols(D, t, pj);
    swap_cols(r.V, t, pj);

    for (;;) {
      for (Index i = t + 1; i < m; ++i) row_gcd_step(D, r.U, t, i);
      bool row_clear = true;
      for (Index j = t + 1; j < n; ++j)
        if (D(t, j) != 0) row_clear = false;
      if (row_clear) {
        // column already clear by construction of the row steps
        bool col_clear = true;
        for (Index i = t + 1; i < m; ++i)
          if (D(i, t) != 0) col_clear = false;
        if (col_clear) {
          // divisibility sweep; a violation pulls the column in and loops
          Index bi = -1, bj = -1;
          for (Index i = t + 1; i < m && bi < 0; ++i)
            for (Index j = t + 1; j < n; ++j)
              if (D(i, j) % D(t, t) != 0) {
                bi = i;
                bj = j;
                break;
              }
          if (bi < 0) break;
          D.col(t) += D.col(bj);
          r.V.col(t) += r.V.col(bj);
          continue;
        }
      }
      for (Index j = t + 1; j < n; ++j) col_gcd_step(D, r.V, t, j);
      bool col_clear = true;
      for (Index i = t + 1; i < m; ++i)
        if (D(i, t) != 0) col_clear = false;
      bool row_clear2 = true;
      for (Index j = t + 1; j < n; ++j)
        if (D(t, j) != 0) row_clear2 = false;
      if (col_clear && row_clear2) continue;  // go test divisibility
    }

    if (D(t, t) < 0) {
      D.row(t) = -D.row(t);
      r.U.row(t) = -r.U.row(t);
    }
  }
  return r;
}

HermiteBasis hermite_basis(const IMat& A) {
  Index m = A.rows(), n = A.cols();
  IMat W = A;
  HermiteBasis H;
  Index cur = 0;
  for (Index row = 0; row < m && cur < n; ++row) {
    Index found = -1;
    for (Index j = cur; j < n; ++j)
      if (W(row, j) != 0) {
        found = j;
        break;
      }
    if (found < 0) continue;
    swap_cols(W, cur, found);
    for (Index j = cur + 1; j < n; ++j) {
      while (W(row, j) != 0) {
        Int a = W(row, cur), b = W(row, j);
        if (a != 0 && b % a == 0) {
          W.col(j) -= Int(b / a) * W.col(cur);
        } else {
          Int s, u;
          Int g = igcdext(a, b, s, u);
          Int p = a / g, q = b / g;
          IVec cc = s * W.col(cur) + u * W.col(j);
          IVec cj = Int(-q) * W.col(cur) + p * W.col(j);
          W.col(cur) = cc;
          W.col(j) = cj;
        }
      }
    }
    if (W(row, cur) < 0) W.col(cur) = -W.col(cur);
    for (Index l = 0; l < cur; ++l) {
      Int q = ifdiv(W(row, l), W(row, cur));
      if (q != 0) W.col(l) -= q * W.col(cur);
    }
    H.pivot_rows.push_back(row);
    ++cur;
  }
  H.basis = W.leftCols(cur);
  return H;
}

bool lattice_member(const HermiteBasis& H, const IVec& x) {
  IVec v = x;
  Index s = H.basis.cols();
  for (Index k = 0; k < s; ++k) {
    Index r = H.pivot_rows[static_cast<size_t>(k)];
    if (v[r] % H.basis(r, k) != 0) return false;
    Int q = v[r] / H.basis(r, k);
    if (q != 0) v -= q * H.basis.col(k);
  }
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

bool lattice_eq(const HermiteBasis& A, const HermiteBasis& B) {
  return A.pivot_rows == B.pivot_rows && A.basis.rows() == B.basis.rows() &&
         A.basis.cols() == B.basis.cols() && A.basis == B.basis;
}

IMat lattice_intersect(const IMat& A, const IMat& B) {
  Index m = A.rows();
  IMat M(m, A.cols() + B.cols());
  M << A, -B;
  IMat W = kernel_basis(M);
  IMat top = W.topRows(A.cols());
  IMat gens = A * top;
  return hermite_basis(gens).basis;
}

IMat kernel_basis(const IMat& A) {
  SmithResult s = smith_normal_form(A);
  Index n = A.cols(), m = A.rows();
  Index steps = std::min(m, n);
  Index rank = 0;
  for (Index i = 0; i < steps; ++i)
    if (s.D(i, i) != 0) ++rank;
  // A V = U^{-1} D, so kernel = V columns past the rank
  return s.V.rightCols(n - rank);
}

Index rank_of(const IMat& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::FullPivLU<QMat> lu(to_rat(A));
  return lu.rank();
}

Int abs_det(const IMat& A) {
  // Smith diagonal product; |det U| = |det V| = 1
  SmithResult s = smith_normal_form(A);
  Int d = 1;
  for (Index i = 0; i < std::min(A.rows(), A.cols()); ++i) d *= s.D(i, i);
  return abs(d);
}

AbelianGroup make_group(Index rank, std::vector<Int> torsion_orders) {
  if (rank < 0) fail_validation("group rank must be nonnegative");
  for (size_t i = 0; i < torsion_orders.size(); ++i) {
    if (torsion_orders[i] < 2)
      fail_validation("torsion orders must be at least 2");
    if (i && torsion_orders[i] % torsion_orders[i - 1] != 0)
      fail_validation("torsion orders must form a divisibility chain");
  }
  AbelianGroup g;
  g.rank = rank;
  g.torsion_orders = std::move(torsion_orders);
  return g;
}

GroupElement ge_reduce(const AbelianGroup& G, IVec free, IVec torsion) {
  if (free.size() != G.rank || torsion.size() != G.torsion_count())
    fail_validation("group element has wrong coordinate count");
  for (Index i = 0; i < torsion.size(); ++i)
    torsion[i] = imod(torsion[i], G.torsion_orders[static_cast<size_t>(i)]);
  return GroupElement{std::move(free), std::move(torsion)};
}

GroupElement ge_zero(const AbelianGroup& G) {
  return GroupElement{IVec::Zero(G.rank), IVec::Zero(G.torsion_count())};
}

GroupElement ge_add(const AbelianGroup& G, const GroupElement& a,
                    const GroupElement& b) {
  return ge_reduce(G, a.free + b.free, a.torsion + b.torsion);
}

GroupElement ge_sub(const AbelianGroup& G, const GroupElement& a,
                    const GroupElement& b) {
  return ge_reduce(G, a.free - b.free, a.torsion - b.torsion);
}

GroupElement ge_neg(const AbelianGroup& G, const GroupElement& a) {
  return ge_reduce(G, -a.free, -a.torsion);
}

GroupElement ge_scale(const AbelianGroup& G, const Int& n,
                      const GroupElement& a) {
  return ge_reduce(G, n * a.free, n * a.torsion);
}

bool ge_eq(const GroupElement& a, const GroupElement& b) {
  return a.free == b.free && a.torsion == b.torsion;
}

IVec ge_lift(const GroupElement& a) {
  IVec v(a.free.size() + a.torsion.size());
  v << a.free, a.torsion;
  return v;
}

GroupElement GradingMap::column(Index j) const {
  return groups::ge_reduce(target, free_rows.col(j), torsion_rows.col(j));
}

GroupElement GradingMap::apply(const IVec& u) const {
  return groups::ge_reduce(target, free_rows * u, torsion_rows * u);
}

GradingMap make_grading(AbelianGroup target, IMat free_rows,
                        IMat torsion_rows) {
  if (free_rows.rows() != target.rank)
    fail_validation("grading free rows do not match group rank");
  if (torsion_rows.rows() != target.torsion_count())
    fail_validation("grading torsion rows do not match torsion count");
  if (torsion_rows.cols() != free_rows.cols() && target.torsion_count() > 0)
    fail_validation("grading torsion rows have wrong length");
  if (target.torsion_count() == 0)
    torsion_rows = IMat::Zero(0, free_rows.cols());
  for (Index i = 0; i < torsion_rows.rows(); ++i)
    for (Index j = 0; j < torsion_rows.cols(); ++j)
      torsion_rows(i, j) =
          imod(torsion_rows(i, j), target.torsion_orders[static_cast<size_t>(i)]);
  GradingMap q;
  q.target = std::move(target);
  q.free_rows = std::move(free_rows);
  q.torsion_rows = std::move(torsion_rows);
  return q;
}

IMat free_part(const GradingMap& Q) { return Q.free_rows; }

namespace {

// full preimage lattice in Z^{rank+t}: lifted generators plus d_i e_{rank+i}
IMat augmented_lattice(const AbelianGroup& G,
                       const std::vector<GroupElement>& gens) {
  Index k = G.rank, t = G.torsion_count();
  IMat M(k + t, static_cast<Index>(gens.size()) + t);
  Index c = 0;
  for (const auto& g : gens) M.col(c++) = ge_lift(g);
  for (Index i = 0; i < t; ++i) {
    IVec e = IVec::Zero(k + t);
    e[k + i] = G.torsion_orders[static_cast<size_t>(i)];
    M.col(c++) = e;
  }
  return M;
}

}  // namespace

Subgroup subgroup_from_generators(const AbelianGroup& G,
                                  std::vector<GroupElement> gens) {
  Subgroup s;
  s.ambient = G;
  s.lattice = hermite_basis(augmented_lattice(G, gens));
  s.gens = std::move(gens);
  return s;
}

bool subgroup_member(const Subgroup& S, const GroupElement& w) {
  return lattice_member(S.lattice, ge_lift(w));
}

bool subgroup_eq(const Subgroup& A, const Subgroup& B) {
  return A.ambient == B.ambient && lattice_eq(A.lattice, B.lattice);
}

std::optional<Int> subgroup_index(const Subgroup& S) {
  Index full = S.ambient.coord_count();
  if (S.lattice.basis.cols() < full) return std::nullopt;
  Int idx = 1;
  for (Index i = 0; i < full; ++i) idx *= S.lattice.basis(i, i);
  return idx;
}

Subgroup subgroup_intersect(const std::vector<Subgroup>& list) {
  if (list.empty()) fail_validation("nothing to intersect");
  IMat cur = list[0].lattice.basis;
  for (size_t i = 1; i < list.size(); ++i) {
    if (!(list[i].ambient == list[0].ambient))
      fail_validation("subgroup intersection needs a common ambient group");
    cur = lattice_intersect(cur, list[i].lattice.basis);
  }
  Subgroup s;
  s.ambient = list[0].ambient;
  s.lattice = hermite_basis(cur);
  const AbelianGroup& G = s.ambient;
  for (Index j = 0; j < s.lattice.basis.cols(); ++j) {
    IVec col = s.lattice.basis.col(j);
    s.gens.push_back(
        ge_reduce(G, col.head(G.rank), col.tail(G.torsion_count())));
  }
  return s;
}

SublatticeImage sublattice_image(const GradingMap& Q,
                                 const std::vector<Index>& columns) {
  std::vector<GroupElement> gens;
  for (Index j : columns) {
    if (j < 0 || j >= Q.source_rank())
      fail_validation("sublattice_image: column index out of range");
    gens.push_back(Q.column(j));
  }
  SublatticeImage out{subgroup_from_generators(Q.target, std::move(gens)), {}};
  out.index = subgroup_index(out.subgroup);
  return out;
}

CokernelPresentation cokernel(const IMat& B) {
  Index m = B.rows();
  SmithResult s = smith_normal_form(B);
  Index steps = std::min(B.rows(), B.cols());
  Index rank = 0;
  for (Index i = 0; i < steps; ++i)
    if (s.D(i, i) != 0) ++rank;

  CokernelPresentation p;
  std::vector<Int> tors;
  std::vector<Index> tors_rows;
  for (Index i = 0; i < rank; ++i)
    if (s.D(i, i) >= 2) {
      tors.push_back(s.D(i, i));
      tors_rows.push_back(i);
    }
  p.group = make_group(m - rank, tors);
  p.to_free = s.U.bottomRows(m - rank);
  p.to_torsion.resize(static_cast<Index>(tors_rows.size()), m);
  for (size_t i = 0; i < tors_rows.size(); ++i)
    p.to_torsion.row(static_cast<Index>(i)) = s.U.row(tors_rows[i]);
  return p;
}

GroupElement CokernelPresentation::apply(const IVec& x) const {
  return ge_reduce(group, to_free * x, to_torsion * x);
}

}  // namespace bunched::groups
