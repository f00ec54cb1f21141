#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <Eigen/LU>

#include <string>
#include <vector>

// Eigen glue for GMP scalars. Cost constants are rough guesses; they only
// steer Eigen's evaluator heuristics, never correctness.
namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  typedef mpz_class Real;
  typedef mpz_class NonInteger;
  typedef mpz_class Nested;
  typedef mpz_class Literal;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 50
  };
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  typedef mpq_class Literal;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 60,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace bunched {

using Int = mpz_class;
using Rat = mpq_class;

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using IMat = MatX<Int>;
using IVec = VecX<Int>;
using QMat = MatX<Rat>;
using QVec = VecX<Rat>;

using Index = Eigen::Index;

inline Int igcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int ilcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// g = gcd(a,b) = s*a + t*b
inline Int igcdext(const Int& a, const Int& b, Int& s, Int& t) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return g;
}

// floor division and the matching remainder in [0, |b|)
inline Int ifdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int imod(const Int& a, const Int& b) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int content(const IVec& v) {
  Int g = 0;
  for (Index i = 0; i < v.size(); ++i) g = igcd(g, v[i]);
  return g;
}

// divide out the content, keep direction; zero vector stays zero
inline IVec primitive(IVec v) {
  Int g = content(v);
  if (g > 1)
    for (Index i = 0; i < v.size(); ++i) v[i] /= g;
  return v;
}

// primitive with the first nonzero entry positive: key for sign-free dedup
inline IVec primitive_signfixed(IVec v) {
  v = primitive(std::move(v));
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

inline bool lex_less(const IVec& a, const IVec& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Index i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

inline bool vec_eq(const IVec& a, const IVec& b) {
  return a.size() == b.size() && a == b;
}

// clear denominators, then make primitive; preserves the ray direction
inline IVec ray_of(const QVec& v) {
  Int l = 1;
  for (Index i = 0; i < v.size(); ++i) l = ilcm(l, v[i].get_den());
  IVec out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    Rat s = v[i] * Rat(l);
    s.canonicalize();
    out[i] = s.get_num();
  }
  return primitive(std::move(out));
}

inline QVec to_rat(const IVec& v) {
  QVec out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

inline QMat to_rat(const IMat& m) {
  QMat out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = Rat(m(i, j));
  return out;
}

inline std::string to_string(const Int& x) { return x.get_str(); }
inline std::string to_string(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string to_string(const IVec& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

inline IVec ivec(std::initializer_list<long> xs) {
  IVec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (long x : xs) v[i++] = x;
  return v;
}

inline IMat imat(std::initializer_list<std::initializer_list<long>> rows) {
  Index r = static_cast<Index>(rows.size());
  Index c = r ? static_cast<Index>(rows.begin()->size()) : 0;
  IMat m(r, c);
  Index i = 0;
  for (auto& row : rows) {
    Index j = 0;
    for (long x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

}  // namespace bunched
