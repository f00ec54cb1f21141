#include "bunched/cones.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace bunched::cones {

namespace {

std::string vec_key(const IVec& v) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) {
    s += v[i].get_str();
    s += ',';
  }
  s += ';';
  return s;
}

bool is_zero_vec(const IVec& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

Int dot(const IVec& a, const IVec& b) {
  Int s = 0;
  for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dotq(const IVec& a, const QVec& b) {
  Rat s = 0;
  for (Index i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

void sort_dedupe(std::vector<IVec>& v) {
  std::sort(v.begin(), v.end(), lex_less);
  v.erase(std::unique(v.begin(), v.end(),
                      [](const IVec& a, const IVec& b) { return a == b; }),
          v.end());
}

// tight set of already processed constraints at a ray
std::vector<int> tight_set(const std::vector<IVec>& done, const IVec& r) {
  std::vector<int> z(done.size());
  for (size_t i = 0; i < done.size(); ++i) z[i] = (dot(done[i], r) == 0);
  return z;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

DDResult dual_description(Index n, const std::vector<IVec>& constraints) {
  std::vector<IVec> L, R;
  for (Index i = 0; i < n; ++i) {
    IVec e = IVec::Zero(n);
    e[i] = 1;
    L.push_back(e);
  }
  std::vector<IVec> done;
  std::set<std::string> seen;
  for (const IVec& c0 : constraints) {
    IVec c = primitive(c0);
    if (is_zero_vec(c)) continue;
    if (!seen.insert(vec_key(c)).second) continue;

    Index hit = -1;
    for (size_t i = 0; i < L.size(); ++i)
      if (dot(c, L[i]) != 0) {
        hit = static_cast<Index>(i);
        break;
      }
    if (hit >= 0) {
      IVec l0 = L[static_cast<size_t>(hit)];
      Int d = dot(c, l0);
      if (d < 0) {
        l0 = -l0;
        d = -d;
      }
      std::vector<IVec> newL;
      for (size_t i = 0; i < L.size(); ++i) {
        if (static_cast<Index>(i) == hit) continue;
        Int e = dot(c, L[i]);
        IVec w = e == 0 ? L[i] : IVec(d * L[i] - e * l0);
        w = primitive(std::move(w));
        if (!is_zero_vec(w)) newL.push_back(std::move(w));
      }
      std::vector<IVec> newR;
      for (const IVec& r : R) {
        Int e = dot(c, r);
        IVec w = e == 0 ? r : IVec(d * r - e * l0);
        w = primitive(std::move(w));
        if (!is_zero_vec(w)) newR.push_back(std::move(w));
      }
      newR.push_back(primitive(std::move(l0)));
      L = std::move(newL);
      R = std::move(newR);
    } else {
      std::vector<size_t> P, N;
      std::vector<IVec> newR;
      for (size_t i = 0; i < R.size(); ++i) {
        Int e = dot(c, R[i]);
        if (e > 0)
          P.push_back(i);
        else if (e < 0)
          N.push_back(i);
        else
          newR.push_back(R[i]);
      }
      if (N.empty()) {
        done.push_back(c);
        continue;
      }
      for (size_t i : P) newR.push_back(R[i]);
      if (!P.empty()) {
        // Chernikova: combine only adjacent pairs
        std::vector<std::vector<int>> Z(R.size());
        for (size_t i = 0; i < R.size(); ++i) Z[i] = tight_set(done, R[i]);
        std::set<std::string> ded;
        for (const IVec& r : newR) ded.insert(vec_key(r));
        for (size_t p : P)
          for (size_t q : N) {
            std::vector<int> common(done.size());
            for (size_t i = 0; i < done.size(); ++i)
              common[i] = Z[p][i] && Z[q][i];
            bool adjacent = true;
            for (size_t i = 0; i < R.size() && adjacent; ++i) {
              if (i == p || i == q) continue;
              if (subset_of(common, Z[i])) adjacent = false;
            }
            if (!adjacent) continue;
            IVec w = dot(c, R[p]) * R[q] - dot(c, R[q]) * R[p];
            w = primitive(std::move(w));
            if (is_zero_vec(w)) continue;
            if (ded.insert(vec_key(w)).second) newR.push_back(std::move(w));
          }
      }
      R = std::move(newR);
    }
    done.push_back(c);
  }
  DDResult out;
  out.rays = std::move(R);
  out.lineality = std::move(L);
  sort_dedupe(out.rays);
  return out;
}

struct Cone::Cache {
  std::optional<FacetDesc> fd;
  std::optional<std::vector<IVec>> lin;  // canonical lattice basis
  std::optional<std::vector<IVec>> ext;
  std::optional<std::string> key;
};

Cone::Cache& Cone::cache() const {
  if (!cache_) const_cast<Cone*>(this)->cache_ = std::make_shared<Cache>();
  return *cache_;
}

Cone Cone::from_generators(Index n, std::vector<IVec> gens) {
  Cone c;
  c.n_ = n;
  for (IVec& g : gens) {
    if (g.size() != n) fail_validation("cone generator has wrong dimension");
    g = primitive(std::move(g));
    if (!is_zero_vec(g)) c.gens_.push_back(std::move(g));
  }
  sort_dedupe(c.gens_);
  c.cache_ = std::make_shared<Cache>();
  return c;
}

Cone Cone::from_generators(const IMat& columns) {
  std::vector<IVec> gens;
  for (Index j = 0; j < columns.cols(); ++j) gens.push_back(columns.col(j));
  return from_generators(columns.rows(), std::move(gens));
}

Cone Cone::from_inequalities(Index n, const std::vector<IVec>& ineqs,
                             const std::vector<IVec>& eqs) {
  std::vector<IVec> cs = ineqs;
  for (const IVec& e : eqs) {
    cs.push_back(e);
    cs.push_back(-e);
  }
  DDResult dd = dual_description(n, cs);
  std::vector<IVec> gens = dd.rays;
  for (const IVec& l : dd.lineality) {
    gens.push_back(l);
    gens.push_back(-l);
  }
  return from_generators(n, std::move(gens));
}

Cone Cone::zero(Index n) { return from_generators(n, {}); }

Cone Cone::full_space(Index n) {
  std::vector<IVec> gens;
  for (Index i = 0; i < n; ++i) {
    IVec e = IVec::Zero(n);
    e[i] = 1;
    gens.push_back(e);
    gens.push_back(-e);
  }
  return from_generators(n, std::move(gens));
}

const FacetDesc& Cone::facet_desc() const {
  Cache& c = cache();
  if (!c.fd) {
    DDResult dd = dual_description(n_, gens_);
    FacetDesc fd;
    fd.facets = std::move(dd.rays);
    fd.span_eqs = std::move(dd.lineality);
    c.fd = std::move(fd);
  }
  return *c.fd;
}

Index Cone::dim() const {
  return n_ - static_cast<Index>(facet_desc().span_eqs.size());
}

const std::vector<IVec>& Cone::lineality_gens() const {
  Cache& c = cache();
  if (!c.lin) {
    const FacetDesc& fd = facet_desc();
    IMat M(static_cast<Index>(fd.facets.size() + fd.span_eqs.size()), n_);
    Index r = 0;
    for (const IVec& u : fd.facets) M.row(r++) = u.transpose();
    for (const IVec& u : fd.span_eqs) M.row(r++) = u.transpose();
    IMat K = groups::kernel_basis(M);
    auto H = groups::hermite_basis(K);
    std::vector<IVec> lin;
    for (Index j = 0; j < H.basis.cols(); ++j) lin.push_back(H.basis.col(j));
    c.lin = std::move(lin);
  }
  return *c.lin;
}

Index Cone::lineality_dim() const {
  return static_cast<Index>(lineality_gens().size());
}

bool Cone::contains(const IVec& v) const {
  const FacetDesc& fd = facet_desc();
  for (const IVec& u : fd.span_eqs)
    if (dot(u, v) != 0) return false;
  for (const IVec& u : fd.facets)
    if (dot(u, v) < 0) return false;
  return true;
}

bool Cone::contains(const QVec& v) const {
  const FacetDesc& fd = facet_desc();
  for (const IVec& u : fd.span_eqs)
    if (dotq(u, v) != 0) return false;
  for (const IVec& u : fd.facets)
    if (dotq(u, v) < 0) return false;
  return true;
}

bool Cone::contains_cone(const Cone& other) const {
  for (const IVec& g : other.gens_)
    if (!contains(g)) return false;
  return true;
}

bool Cone::rel_interior_contains(const IVec& v) const {
  const FacetDesc& fd = facet_desc();
  for (const IVec& u : fd.span_eqs)
    if (dot(u, v) != 0) return false;
  for (const IVec& u : fd.facets)
    if (dot(u, v) <= 0) return false;
  return true;
}

bool Cone::rel_interior_contains(const QVec& v) const {
  const FacetDesc& fd = facet_desc();
  for (const IVec& u : fd.span_eqs)
    if (dotq(u, v) != 0) return false;
  for (const IVec& u : fd.facets)
    if (dotq(u, v) <= 0) return false;
  return true;
}

namespace {

// canonical ray representative modulo the span of L: rational projection
// onto the orthogonal complement, scaled back to a primitive vector
IVec project_ray(const IVec& g, const std::vector<IVec>& L, Index n) {
  if (L.empty()) return primitive(g);
  QMat Lq(n, static_cast<Index>(L.size()));
  for (size_t j = 0; j < L.size(); ++j)
    for (Index i = 0; i < n; ++i) Lq(i, static_cast<Index>(j)) = Rat(L[j][i]);
  QMat gram = Lq.transpose() * Lq;
  QVec rhs = Lq.transpose() * to_rat(g);
  Eigen::FullPivLU<QMat> lu(gram);
  QVec z = lu.solve(rhs);
  QVec p = to_rat(g) - Lq * z;
  bool zero = true;
  for (Index i = 0; i < n; ++i)
    if (p[i] != 0) zero = false;
  if (zero) return IVec::Zero(n);
  return ray_of(p);
}

}  // namespace

const std::vector<IVec>& Cone::extreme_rays() const {
  Cache& c = cache();
  if (c.ext) return *c.ext;
  const std::vector<IVec>& L = lineality_gens();
  std::vector<IVec> cand;
  for (const IVec& g : gens_) {
    IVec p = project_ray(g, L, n_);
    if (!is_zero_vec(p)) cand.push_back(std::move(p));
  }
  sort_dedupe(cand);

  std::vector<char> alive(cand.size(), 1);
  for (size_t i = 0; i < cand.size(); ++i) {
    std::vector<IVec> others;
    for (size_t j = 0; j < cand.size(); ++j)
      if (j != i && alive[j]) others.push_back(cand[j]);
    for (const IVec& l : L) {
      others.push_back(l);
      others.push_back(-l);
    }
    Cone sub = Cone::from_generators(n_, std::move(others));
    if (sub.contains(cand[i])) alive[i] = 0;
  }
  std::vector<IVec> ext;
  for (size_t i = 0; i < cand.size(); ++i)
    if (alive[i]) ext.push_back(cand[i]);
  c.ext = std::move(ext);
  return *c.ext;
}

IVec Cone::interior_point() const {
  IVec h = IVec::Zero(n_);
  for (const IVec& r : extreme_rays()) h += r;
  return h;
}

const std::string& Cone::key() const {
  Cache& c = cache();
  if (!c.key) {
    std::string s = "L";
    for (const IVec& l : lineality_gens()) s += vec_key(l);
    s += "R";
    for (const IVec& r : extreme_rays()) s += vec_key(r);
    c.key = std::move(s);
  }
  return *c.key;
}

bool Cone::equals(const Cone& other) const {
  if (n_ != other.n_) return false;
  return contains_cone(other) && other.contains_cone(*this);
}

Cone dual_cone(const Cone& C) {
  const FacetDesc& fd = C.facet_desc();
  std::vector<IVec> gens = fd.facets;
  for (const IVec& u : fd.span_eqs) {
    gens.push_back(u);
    gens.push_back(-u);
  }
  return Cone::from_generators(C.ambient_dim(), std::move(gens));
}

Cone intersect(const Cone& A, const Cone& B) {
  if (A.ambient_dim() != B.ambient_dim())
    fail_validation("cone intersection needs a common ambient space");
  std::vector<IVec> ineqs = A.facet_desc().facets;
  for (const IVec& u : B.facet_desc().facets) ineqs.push_back(u);
  std::vector<IVec> eqs = A.facet_desc().span_eqs;
  for (const IVec& u : B.facet_desc().span_eqs) eqs.push_back(u);
  return Cone::from_inequalities(A.ambient_dim(), ineqs, eqs);
}

Cone intersect(const std::vector<Cone>& list, Index n) {
  if (list.empty()) return Cone::full_space(n);
  std::vector<IVec> ineqs, eqs;
  for (const Cone& C : list) {
    for (const IVec& u : C.facet_desc().facets) ineqs.push_back(u);
    for (const IVec& u : C.facet_desc().span_eqs) eqs.push_back(u);
  }
  return Cone::from_inequalities(n, ineqs, eqs);
}

Cone sum(const Cone& A, const Cone& B) {
  std::vector<IVec> gens = A.generators();
  for (const IVec& g : B.generators()) gens.push_back(g);
  return Cone::from_generators(A.ambient_dim(), std::move(gens));
}

std::vector<Cone> all_faces(const Cone& C) {
  const std::vector<IVec>& rays = C.extreme_rays();
  const std::vector<IVec>& L = C.lineality_gens();
  const std::vector<IVec>& facets = C.facet_desc().facets;

  auto build = [&](const std::vector<Index>& idx) {
    std::vector<IVec> gens;
    for (Index i : idx) gens.push_back(rays[static_cast<size_t>(i)]);
    for (const IVec& l : L) {
      gens.push_back(l);
      gens.push_back(-l);
    }
    return Cone::from_generators(C.ambient_dim(), std::move(gens));
  };

  std::set<std::vector<Index>> seen;
  std::vector<std::vector<Index>> queue;
  std::vector<Index> all;
  for (size_t i = 0; i < rays.size(); ++i) all.push_back(static_cast<Index>(i));
  seen.insert(all);
  queue.push_back(all);
  while (!queue.empty()) {
    std::vector<Index> s = queue.back();
    queue.pop_back();
    for (const IVec& u : facets) {
      std::vector<Index> child;
      for (Index i : s)
        if (dot(u, rays[static_cast<size_t>(i)]) == 0) child.push_back(i);
      if (child.size() == s.size()) continue;
      if (seen.insert(child).second) queue.push_back(child);
    }
  }
  std::vector<Cone> out;
  for (const auto& s : seen) out.push_back(build(s));
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.key() < b.key();
  });
  return out;
}

std::vector<Cone> faces(const Cone& C, Index d) {
  std::vector<Cone> out;
  for (Cone& f : all_faces(C))
    if (f.dim() == d) out.push_back(std::move(f));
  return out;
}

bool is_face(const Cone& F, const Cone& C) {
  if (F.ambient_dim() != C.ambient_dim()) return false;
  if (!C.contains_cone(F)) return false;
  std::vector<IVec> tight;
  for (const IVec& u : C.facet_desc().facets) {
    bool all0 = true;
    for (const IVec& g : F.generators())
      if (dot(u, g) != 0) {
        all0 = false;
        break;
      }
    if (all0) tight.push_back(u);
  }
  std::vector<IVec> gens;
  for (const IVec& g : C.generators()) {
    bool ok = true;
    for (const IVec& u : tight)
      if (dot(u, g) != 0) {
        ok = false;
        break;
      }
    if (ok) gens.push_back(g);
  }
  for (const IVec& l : C.lineality_gens()) {
    gens.push_back(l);
    gens.push_back(-l);
  }
  Cone face = Cone::from_generators(C.ambient_dim(), std::move(gens));
  return F.contains_cone(face);
}

Cone face_containing(const Cone& C, const IVec& v) {
  if (!C.contains(v)) fail_validation("point is not contained in the cone");
  std::vector<IVec> tight;
  for (const IVec& u : C.facet_desc().facets)
    if (dot(u, v) == 0) tight.push_back(u);
  std::vector<IVec> gens;
  for (const IVec& g : C.generators()) {
    bool ok = true;
    for (const IVec& u : tight)
      if (dot(u, g) != 0) {
        ok = false;
        break;
      }
    if (ok) gens.push_back(g);
  }
  for (const IVec& l : C.lineality_gens()) {
    gens.push_back(l);
    gens.push_back(-l);
  }
  return Cone::from_generators(C.ambient_dim(), std::move(gens));
}

bool rel_interiors_meet(const Cone& A, const Cone& B) {
  // an interior point of the intersection lies in both open cones exactly
  // when the open cones meet; works in every dimension, {0} included
  IVec h = intersect(A, B).interior_point();
  return A.rel_interior_contains(h) && B.rel_interior_contains(h);
}

bool rel_interior_subset(const Cone& A, const Cone& B) {
  if (!B.contains_cone(A)) return false;
  return B.rel_interior_contains(A.interior_point());
}

Fan make_fan(Index n, std::vector<Cone> max_cones, std::vector<IVec> ray_order) {
  Fan F;
  F.n = n;
  F.max_cones = std::move(max_cones);
  std::vector<IVec> seen_rays;
  std::set<std::string> seen;
  for (const Cone& C : F.max_cones) {
    if (C.ambient_dim() != n) fail_validation("fan cone in wrong ambient space");
    for (const IVec& r : C.extreme_rays())
      if (seen.insert(vec_key(r)).second) seen_rays.push_back(r);
  }
  if (ray_order.empty()) {
    F.rays = std::move(seen_rays);
  } else {
    std::set<std::string> given;
    for (const IVec& r : ray_order) given.insert(vec_key(r));
    if (given != seen)
      fail_validation("declared ray order does not match the fan rays");
    F.rays = std::move(ray_order);
  }
  validate_fan(F);
  return F;
}

void validate_fan(const Fan& F) {
  for (const Cone& C : F.max_cones)
    if (!C.is_pointed()) fail_validation("fan cones must be pointed");
  for (size_t i = 0; i < F.max_cones.size(); ++i)
    for (size_t j = i + 1; j < F.max_cones.size(); ++j) {
      const Cone& A = F.max_cones[i];
      const Cone& B = F.max_cones[j];
      if (A.contains_cone(B) || B.contains_cone(A))
        fail_validation("fan has a cone contained in another");
      Cone I = intersect(A, B);
      if (!is_face(I, A) || !is_face(I, B))
        fail_validation("fan cones do not intersect in a common face");
    }
}

bool fan_is_complete(const Fan& F) {
  std::map<std::string, int> facet_count;
  for (const Cone& C : F.max_cones) {
    if (!C.is_full_dim()) return false;
    for (const Cone& f : faces(C, F.n - 1)) facet_count[f.key()] += 1;
  }
  for (const auto& [k, c] : facet_count)
    if (c != 2) return false;
  return !F.max_cones.empty();
}

bool support_contains(const Fan& F, const IVec& v) {
  for (const Cone& C : F.max_cones)
    if (C.contains(v)) return true;
  return false;
}

bool fan_eq(const Fan& A, const Fan& B) {
  if (A.n != B.n || A.max_cones.size() != B.max_cones.size()) return false;
  std::multiset<std::string> ka, kb;
  for (const Cone& c : A.max_cones) ka.insert(c.key());
  for (const Cone& c : B.max_cones) kb.insert(c.key());
  return ka == kb;
}

Fan stellar_subdivide(const Fan& F, const IVec& v) {
  if (is_zero_vec(v)) fail_validation("subdivision point must be nonzero");
  if (content(v) != 1)
    fail_validation("subdivision point must be a primitive lattice vector");
  std::vector<size_t> star;
  for (size_t i = 0; i < F.max_cones.size(); ++i)
    if (F.max_cones[i].contains(v)) star.push_back(i);
  if (star.empty())
    fail_validation("subdivision point lies outside the fan support");
  Cone sigma0 = face_containing(F.max_cones[star[0]], v);
  if (sigma0.dim() <= 1)
    fail_validation("subdivision point lies on a ray of the fan");

  std::vector<Cone> out;
  std::set<size_t> star_set(star.begin(), star.end());
  for (size_t i = 0; i < F.max_cones.size(); ++i)
    if (!star_set.count(i)) out.push_back(F.max_cones[i]);
  for (size_t i : star) {
    const Cone& sigma = F.max_cones[i];
    for (const Cone& facet : faces(sigma, sigma.dim() - 1)) {
      if (facet.contains_cone(sigma0)) continue;
      std::vector<IVec> gens = facet.generators();
      gens.push_back(v);
      out.push_back(Cone::from_generators(F.n, std::move(gens)));
    }
  }
  std::vector<IVec> order = F.rays;
  order.push_back(primitive(v));
  return make_fan(F.n, std::move(out), std::move(order));
}

FaceOfOrthant face_from_mask(uint64_t mask, Index r) {
  FaceOfOrthant f;
  for (Index i = 0; i < r; ++i)
    if (mask & (uint64_t(1) << i)) f.idx.push_back(i);
  return f;
}

uint64_t mask_of(const FaceOfOrthant& f) {
  uint64_t m = 0;
  for (Index i : f.idx) m |= uint64_t(1) << i;
  return m;
}

FaceOfOrthant face_complement(const FaceOfOrthant& f, Index r) {
  uint64_t full = (r == 64) ? ~uint64_t(0) : ((uint64_t(1) << r) - 1);
  return face_from_mask(full & ~mask_of(f), r);
}

GaleResult gale_transform(const groups::GradingMap& Q) {
  Index r = Q.source_rank();
  Index k = Q.target.rank;
  Index t = Q.target.torsion_count();
  IMat M = IMat::Zero(k + t, r + t);
  M.topLeftCorner(k, r) = Q.free_rows;
  if (t > 0) {
    M.bottomLeftCorner(t, r) = Q.torsion_rows;
    for (Index i = 0; i < t; ++i)
      M(k + i, r + i) = Q.target.torsion_orders[static_cast<size_t>(i)];
  }
  IMat W = groups::kernel_basis(M);
  IMat proj = W.topRows(r);
  auto H = groups::hermite_basis(proj);

  GaleResult g;
  g.n_rank = H.basis.cols();
  g.degenerate = (g.n_rank == 0);
  g.P = H.basis.transpose();
  for (Index j = 0; j < r; ++j) {
    IVec col = g.P.col(j);
    g.column_multiplicities.push_back(content(col));
    g.primitive_columns.push_back(primitive(col));
  }
  return g;
}

}  // namespace bunched::cones
