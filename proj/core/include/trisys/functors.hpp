#pragma once

#include "trisys/galg.hpp"
#include "trisys/triples.hpp"

namespace trisys {

// Construction functors from triple systems to graded algebras.
//
// Basis layout of the built algebras (recorded in provenance):
//   g_sts / g_ots:   [ gamma_vv gamma_vw gamma_ww | inder | v@T | w@T ]
//   gtilde_sts/_ots: [ inder | T ]
//   g_null:          [ inder | v@T | w@T ]
// where {v, w} is a symplectic basis of the auxiliary 2-dim space and the
// inder block is the greedy pair basis of inder(T).

// STS -> Z2-graded Lie algebra, odd bracket
//   [u@x, v@y] = (x|y) gamma_{u,v} + <u|v> d_{x,y}
GradedAlgebra build_g_sts(const TripleSystem& t);

// STS -> Lie superalgebra over GF(3): even = inder(T), odd = T, [x,y] = d_{x,y}.
// Rejects p != 3 unless force_any_char (the super Jacobi identity needs 3 = 0;
// forcing exists so the failure is observable).
GradedAlgebra build_gtilde_sts(const TripleSystem& t, bool force_any_char = false);

// OTS -> Lie superalgebra, odd bracket
//   [u@x, v@y] = (x|y) gamma_{u,v} - <u|v> d_{x,y}
GradedAlgebra build_g_ots(const TripleSystem& t);

// OTS or null OTS -> Z2-graded Lie algebra over GF(3): inder(T) + T.
GradedAlgebra build_gtilde_ots(const TripleSystem& t, bool force_any_char = false);

// Null STS -> Z2-graded Lie algebra / null OTS -> Lie superalgebra:
//   [u@x, v@y] = <u|v> d_{x,y}
GradedAlgebra build_g_null(const TripleSystem& t);

// Recomputes the form and the d-operators of t from g's odd-odd brackets and
// the provenance layout, and requires bit-equality with t's data.
struct RoundtripReport {
  bool pass = true;
  std::vector<std::string> mismatches;
};
RoundtripReport verify_roundtrip(const GradedAlgebra& g, const TripleSystem& t);

}  // namespace trisys
