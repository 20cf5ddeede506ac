#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trisys/mat.hpp"

namespace trisys {

// Split composition algebras over GF(p): k, k x k, 2x2 matrices, and the
// split octonions as Zorn vector matrices ((alpha, a), (b, beta)) with a, b
// in k^3. Construction verifies the composition identities (polarized
// multiplicativity of the norm, x + conj(x) = t(x) 1, x conj(x) = n(x) 1),
// so the stated tables are normative only through these checks.
struct CompositionAlgebra {
  enum class Kind { Unit, Binarion, Quaternion, Octonion };

  Kind kind = Kind::Unit;
  int dim = 1;
  int64_t p = 3;
  std::vector<Vec> mul_table;  // dim*dim entries
  Matrix conj_mat;
  Vec unit;
  Vec trace_vec;       // t(e_i)
  Matrix norm_polar;   // b(x, y) with b(x, x) = n(x)

  Vec mul(const Vec& x, const Vec& y) const;
  Vec conj(const Vec& x) const { return conj_mat.apply(x); }
  int64_t trace(const Vec& x) const;
  int64_t trace_mul(const Vec& x, const Vec& y) const;  // t(xy)
  int64_t norm(const Vec& x) const;                     // n(x) = b(x,x)
  int64_t polar(const Vec& x, const Vec& y) const { return norm_polar_form().eval(x, y); }
  BilinForm norm_polar_form() const { return BilinForm(norm_polar, BilinForm::Symmetry::Symmetric); }

  static std::string kind_name(Kind k);
};

CompositionAlgebra make_composition(CompositionAlgebra::Kind kind, int64_t p);

}  // namespace trisys
