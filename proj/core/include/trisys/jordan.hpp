#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trisys/comp.hpp"
#include "trisys/mat.hpp"
#include "trisys/rng.hpp"

namespace trisys {

// Commutative unital Jordan algebras feeding the catalog: the degree-3
// algebras (hermitian 3x3 matrices over a split composition algebra, and
// k x Jord(q,e)) plus the quadratic-form algebras Jord(q,e) themselves.
struct JordanAlgebra {
  enum class Variant { Cubic, QuadraticForm };

  Variant variant = Variant::Cubic;
  int dim = 0;
  int64_t p = 3;
  std::vector<Vec> mul_table;  // dim*dim
  Vec unit;
  Vec trace_vec;  // t(e_i)
  std::string name;

  Vec mul(const Vec& x, const Vec& y) const;
  int64_t trace(const Vec& x) const;
  // trace bilinear form t(x, y) = t(x . y)
  int64_t trace_form(const Vec& x, const Vec& y) const;
  Matrix trace_gram() const;
};

// H_3(C): hermitian 3x3 matrices over a composition algebra, Jordan product
// x . y = 1/2 (xy + yx); dim = 3 + 3 dim C.
JordanAlgebra make_h3(const CompositionAlgebra& C);

// Jord(q, e): J = k e + W with x . y = -1/2 q(x, y) e on W, e the unit.
// gram_w is the polar form on W; the full polar form is <2> on ke plus gram_w.
JordanAlgebra make_jordq(int dim_w, const Matrix& gram_w, int64_t p);

// k x Jord(q, e) with componentwise product: a cubic Jordan algebra.
JordanAlgebra make_k_plus_jordq(int dim_w, const Matrix& gram_w, int64_t p);

// Cubic data of a degree-3 Jordan algebra:
//   t(x), t(x,y) = t(x.y), s(x) = (t(x)^2 - t(x^2))/2,
//   sharp(x) = x^2 - t(x) x + s(x) 1, cross(x,y) = (x+y)# - x# - y#,
//   n(x) from x . x# = n(x) 1.
// Construction probes that x . x# is scalar on basis vectors, pairwise sums
// and a few seeded random elements, rejecting non-degree-3 inputs.
struct CubicData {
  const JordanAlgebra* J = nullptr;
  Matrix tgram;                 // t(e_i, e_j)
  std::vector<Vec> cross_table; // dim*dim; identically zero for Jord(q,e)

  int64_t t(const Vec& x) const;
  int64_t t2(const Vec& x, const Vec& y) const;
  int64_t s(const Vec& x) const;
  Vec sharp(const Vec& x) const;
  Vec cross(const Vec& x, const Vec& y) const;
  int64_t norm(const Vec& x) const;  // throws if x . x# is not scalar
};
CubicData cubic_data(const JordanAlgebra& J);

// x^3 - t(x) x^2 + s(x) x - n(x) 1 = 0 on all basis vectors and on `samples`
// seeded random elements (the identity is not multilinear, so random
// sampling supplements the basis sweep).
struct CubicIdentityReport {
  std::vector<Vec> failures;
  bool pass() const { return failures.empty(); }
};
CubicIdentityReport check_cubic_identity(const JordanAlgebra& J, uint64_t seed = 0xc0b1c,
                                         int samples = 100);

// D_{x,y}: z -> x.(y.z) - y.(x.z). Annihilates the unit and preserves the
// zero-trace subspace (both asserted).
Matrix jordan_inner_derivation(const JordanAlgebra& J, const Vec& x, const Vec& y);

}  // namespace trisys
