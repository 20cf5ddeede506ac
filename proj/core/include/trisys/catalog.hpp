#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trisys/jordan.hpp"
#include "trisys/triples.hpp"

namespace trisys {

// Catalog of concrete triple systems. Every constructor verifies the axiom
// set of its output at build time (so a returned system is already marked
// verified) and records its key in the system.

// 2-dimensional STS over GF(3); case I has [aaa] = alpha b, case II has
// [aab] = eps a, [abb] = -eps b on a symplectic basis {a, b}.
TripleSystem sts_dim2_case_i(int32_t alpha, int64_t p = 3);
TripleSystem sts_dim2_case_ii(int32_t eps, int64_t p = 3);

// The 8-dimensional STS over GF(3): module W = (V1 x sp(V2)) + V2 for the
// 10-dimensional algebra g built from the eps = 1 two-dimensional system,
// with the action rho verified as a representation before the triple
// product is assembled.
TripleSystem sts8();

// STS from a Jordan algebra via the boxed 2x2 construction. J must be cubic
// with nondegenerate trace form, or a quadratic-form algebra (cross = 0).
// At p = 3 the inputs J = 0 and the 1-dimensional cubic algebra are rejected
// (their trace data degenerates).
TripleSystem sts_from_jordan(const JordanAlgebra& J);

// Classical STS families.
TripleSystem sts_symplectic(int n, int64_t p);                      // [xyz] = psi_{x,y}(z)
TripleSystem sts_special(int m, int64_t p);                         // T = W + W*
TripleSystem sts_orthogonal(int m, const Matrix& gram_w, int64_t p);// T = V x W
TripleSystem sts_g2(int64_t p);                                     // binary cubic forms, p >= 5

// Classical OTS families.
TripleSystem ots_orthogonal(int n, const Matrix& gram, int64_t p);  // [xyz] = sigma_{x,y}(z)
TripleSystem ots_unitarian_split(int m, int64_t p);                 // T = W + W*, dim 2m, m >= 3
TripleSystem ots_symplectic_split(int m, int64_t p);                // T = V x W, dim W = 2m >= 4

// Dim-4 systems from a 4-form Phi = lambda det: {xyz} solved from
// Phi(x,y,z,.) = ({xyz}|.); product {xyz} + sigma (OTS) or {xyz} (null OTS).
struct DmuSystem {
  TripleSystem system;
  int32_t mu;  // ({a1a2a3}|{b1b2b3}) = mu det((a_i|b_j)), checked on 20 seeded triples
};
DmuSystem ots_dmu(int32_t lambda, const Matrix& gram, bool with_sigma, int64_t p);

// The one-parameter tensor family on V x V: an OTS for alpha != -1, and the
// null OTS with d_{x,y} = <x2|y2> gamma_{x1,y1} - <x1|y1> gamma_{x2,y2} at
// alpha = -1.
TripleSystem ots_dalpha_tensor(int32_t alpha, int64_t p = 3);

// G-type: T = trace-zero split octonions, [xyz] = alpha [[x,y],z],
// (x|y) = -2 alpha t(xy); p = 3.
TripleSystem ots_gtype(int32_t alpha, int64_t p = 3);

// F-type at p = 3: the split octonions with the 3-fold cross product X,
// selected by sign search over X(x,y,z) = (x conj(y))z +- b(x,y)z +- b(y,z)x
// +- b(z,x)y and accepted only if X is alternating and satisfies
// b(X(a), X(a)) = det(b(a_i, a_j)) on 200 seeded random triples.
TripleSystem ots_ftype();

// Jordan-type OTS at p = 3: the quotient J_0 / k1 with the product induced
// by the inner derivations D_{x,y} and the induced trace form.
TripleSystem ots_jordan(const JordanAlgebra& J);

// Catalog key grammar (family:variant:params). Parses and builds; throws
// std::invalid_argument on unknown keys or bad parameters.
TripleSystem build_from_key(const std::string& key, int64_t p);
std::vector<std::string> catalog_key_examples();

// Cartan-relation verifier for g(T_{2,eps}) over GF(3): constructs
//   e1 = 1/2 gamma_{v2,v2}, f1 = -gamma_{w2,w2}, h1 = -gamma_{v2,w2},
//   e2 = v1 @ w2,           f2 = -w1 @ v2,       h2 = gamma_{v1,w1} + eps gamma_{v2,w2}
// and checks h1 = [e1,f1], h2 = [e2,f2],
//   [h1,e1] = 2e1, [h1,e2] = -e2, [h2,e1] = -2 eps e1, [h2,e2] = (eps-1) e2.
struct CartanReport {
  bool pass = true;
  std::vector<std::string> failures;
};
CartanReport verify_Leps_cartan(int32_t eps);

}  // namespace trisys
