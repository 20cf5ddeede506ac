#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trisys/galg.hpp"
#include "trisys/mat.hpp"

namespace trisys {

// Compressed sparse rows; enough for repeated matvecs during spinning.
struct SparseMat {
  int n = 0;
  int64_t p = 3;
  std::vector<int32_t> rowptr;                      // size n+1
  std::vector<std::pair<int32_t, int32_t>> entries; // (col, val)

  static SparseMat from_dense(const Matrix& m);
  Vec apply(const Vec& x) const;
  Vec apply_transposed(const Vec& x) const;
};

struct SimplicityCertificate {
  enum class Verdict { Simple, NotSimple, ProbablySimple };
  Verdict verdict = Verdict::ProbablySimple;

  // NotSimple: a proper nonzero invariant subspace, verified against all
  // generators. Absent only in degenerate cases (zero product in dim 1)
  // where no proper nonzero subspace exists.
  std::optional<Subspace> witness;

  // Simple: Norton-style record. The nullspace of the certifying element and
  // of its transpose were swept line by line; every line spins to the full
  // space (resp. full dual space under the transposed generators).
  uint64_t seed = 0;
  int trials_used = 0;
  int word_length = 0;
  int nullity = 0;
  int lines_checked = 0;
  std::string reason;  // "norton", "zero_product", "witness", "budget_exhausted", ...
};

// Irreducibility of the module k^n over the associative algebra generated by
// `gens`, by the randomized Meataxe with Norton certification. "Simple" and
// "NotSimple" verdicts carry certificates; "ProbablySimple" reports the
// exhausted trial budget.
SimplicityCertificate module_irreducible(const std::vector<SparseMat>& gens, int n,
                                         int64_t p, uint64_t seed, int trial_budget = 64);

// Ideals of a Lie (super)algebra are exactly the invariant subspaces of the
// adjoint module, so simplicity reduces to module_irreducible over the ad
// operators, plus a nonzero-product check. For superalgebras this tests
// plain (not graded) invariant subspaces, which is the stronger property.
SimplicityCertificate is_simple(const GradedAlgebra& g, uint64_t seed,
                                int trial_budget = 64);

// Spin span of v under gens; stops early once the span is full.
Subspace spin(const Vec& v, const std::vector<SparseMat>& gens, bool transposed);

}  // namespace trisys
