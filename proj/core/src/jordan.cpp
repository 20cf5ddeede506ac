#include "trisys/jordan.hpp"

#include <array>
#include <stdexcept>

namespace trisys {

Vec JordanAlgebra::mul(const Vec& x, const Vec& y) const {
  Vec out(dim, 0);
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j] == 0) continue;
      vec_axpy(out, fp_mul(x[i], y[j], p), mul_table[static_cast<size_t>(i) * dim + j], p);
    }
  }
  return out;
}

int64_t JordanAlgebra::trace(const Vec& x) const {
  int64_t acc = 0;
  for (int i = 0; i < dim; ++i) acc += static_cast<int64_t>(trace_vec[i]) * x[i];
  return fp_norm(acc, p);
}

int64_t JordanAlgebra::trace_form(const Vec& x, const Vec& y) const {
  return trace(mul(x, y));
}

Matrix JordanAlgebra::trace_gram() const {
  Matrix g(dim, dim, p);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g.set(i, j, trace(mul_table[static_cast<size_t>(i) * dim + j]));
  return g;
}

namespace {

void verify_jordan_basics(const JordanAlgebra& J) {
  int d = J.dim;
  // commutative product, unit acts as identity
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    if (J.mul(J.unit, e) != e) throw std::logic_error("jordan: unit failure");
    for (int j = i + 1; j < d; ++j) {
      if (J.mul_table[static_cast<size_t>(i) * d + j] !=
          J.mul_table[static_cast<size_t>(j) * d + i])
        throw std::logic_error("jordan: product not commutative");
    }
  }
}

}  // namespace

JordanAlgebra make_h3(const CompositionAlgebra& C) {
  int64_t p = C.p;
  int dc = C.dim;
  int d = 3 + 3 * dc;
  // coordinates: alpha_1, alpha_2, alpha_3, then c_1, c_2, c_3 in C with the
  // hermitian layout
  //   [ a1    c3     conj(c2) ]
  //   [ conj(c3) a2  c1       ]
  //   [ c2    conj(c1) a3     ]
  JordanAlgebra J;
  J.variant = JordanAlgebra::Variant::Cubic;
  J.dim = d;
  J.p = p;
  J.name = "H3(" + CompositionAlgebra::kind_name(C.kind) + ")";

  // represent an element as a 3x3 array of C-vectors
  using CMat = std::array<Vec, 9>;
  auto to_cmat = [&](const Vec& x) {
    CMat m;
    for (auto& e : m) e = Vec(dc, 0);
    Vec c1(dc, 0), c2(dc, 0), c3(dc, 0);
    for (int a = 0; a < dc; ++a) {
      c1[a] = x[3 + a];
      c2[a] = x[3 + dc + a];
      c3[a] = x[3 + 2 * dc + a];
    }
    auto scal = [&](int32_t v) { return vec_scale(C.unit, v, p); };
    m[0] = scal(x[0]);
    m[4] = scal(x[1]);
    m[8] = scal(x[2]);
    m[1] = c3;
    m[2] = C.conj(c2);
    m[3] = C.conj(c3);
    m[5] = c1;
    m[6] = c2;
    m[7] = C.conj(c1);
    return m;
  };
  auto from_cmat = [&](const CMat& m) {
    // read hermitian coordinates; diagonal entries must be scalar
    Vec x(d, 0);
    auto scalar_of = [&](const Vec& v) -> int32_t {
      for (int i = 0; i < dc; ++i)
        if (C.unit[i] != 0) {
          int32_t lam = fp_mul(v[i], fp_inv(C.unit[i], p), p);
          if (vec_scale(C.unit, lam, p) != v)
            throw std::logic_error("h3: diagonal entry not scalar");
          return lam;
        }
      return 0;
    };
    x[0] = scalar_of(m[0]);
    x[1] = scalar_of(m[4]);
    x[2] = scalar_of(m[8]);
    for (int a = 0; a < dc; ++a) {
      x[3 + a] = m[5][a];
      x[3 + dc + a] = m[6][a];
      x[3 + 2 * dc + a] = m[1][a];
    }
    // hermitian consistency
    if (C.conj(m[1]) != m[3] || C.conj(m[2]) != m[6] || C.conj(m[5]) != m[7])
      throw std::logic_error("h3: product not hermitian");
    return x;
  };
  auto cmat_mul = [&](const CMat& a, const CMat& b) {
    CMat out;
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) {
        Vec acc(dc, 0);
        for (int k = 0; k < 3; ++k)
          acc = vec_add(acc, C.mul(a[r * 3 + k], b[k * 3 + s]), p);
        out[r * 3 + s] = acc;
      }
    return out;
  };

  J.mul_table.assign(static_cast<size_t>(d) * d, Vec(d, 0));
  int32_t half = fp_half(p);
  for (int i = 0; i < d; ++i) {
    Vec ei(d, 0);
    ei[i] = 1;
    CMat mi = to_cmat(ei);
    for (int j = i; j < d; ++j) {
      Vec ej(d, 0);
      ej[j] = 1;
      CMat mj = to_cmat(ej);
      CMat ab = cmat_mul(mi, mj), ba = cmat_mul(mj, mi);
      CMat sym;
      for (int e = 0; e < 9; ++e)
        sym[e] = vec_scale(vec_add(ab[e], ba[e], p), half, p);
      Vec prod = from_cmat(sym);
      J.mul_table[static_cast<size_t>(i) * d + j] = prod;
      J.mul_table[static_cast<size_t>(j) * d + i] = prod;
    }
  }
  J.unit.assign(d, 0);
  J.unit[0] = J.unit[1] = J.unit[2] = 1;
  J.trace_vec.assign(d, 0);
  J.trace_vec[0] = J.trace_vec[1] = J.trace_vec[2] = 1;
  verify_jordan_basics(J);
  return J;
}

JordanAlgebra make_jordq(int dim_w, const Matrix& gram_w, int64_t p) {
  if (gram_w.rows() != dim_w || gram_w.cols() != dim_w)
    throw std::invalid_argument("make_jordq: gram shape");
  if (rref(gram_w).rank != dim_w) throw std::invalid_argument("make_jordq: degenerate gram");
  int d = 1 + dim_w;
  JordanAlgebra J;
  J.variant = JordanAlgebra::Variant::QuadraticForm;
  J.dim = d;
  J.p = p;
  J.name = "Jord(q,e)[" + std::to_string(dim_w) + "]";
  J.mul_table.assign(static_cast<size_t>(d) * d, Vec(d, 0));
  int32_t mhalf = fp_neg(fp_half(p), p);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec out(d, 0);
      if (i == 0 && j == 0) {
        out[0] = 1;
      } else if (i == 0) {
        out[j] = 1;
      } else if (j == 0) {
        out[i] = 1;
      } else {
        out[0] = fp_mul(mhalf, gram_w.at(i - 1, j - 1), p);
      }
      J.mul_table[static_cast<size_t>(i) * d + j] = out;
    }
  J.unit.assign(d, 0);
  J.unit[0] = 1;
  // t(x) = q(x, e); q(e, e) = 2
  J.trace_vec.assign(d, 0);
  J.trace_vec[0] = 2 % static_cast<int32_t>(p);
  verify_jordan_basics(J);
  return J;
}

JordanAlgebra make_k_plus_jordq(int dim_w, const Matrix& gram_w, int64_t p) {
  JordanAlgebra base = make_jordq(dim_w, gram_w, p);
  int db = base.dim;
  int d = 1 + db;
  JordanAlgebra J;
  J.variant = JordanAlgebra::Variant::Cubic;
  J.dim = d;
  J.p = p;
  J.name = "k x " + base.name;
  J.mul_table.assign(static_cast<size_t>(d) * d, Vec(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec out(d, 0);
      if (i == 0 && j == 0) {
        out[0] = 1;
      } else if (i > 0 && j > 0) {
        const Vec& b = base.mul_table[static_cast<size_t>(i - 1) * db + (j - 1)];
        for (int r = 0; r < db; ++r) out[1 + r] = b[r];
      }
      J.mul_table[static_cast<size_t>(i) * d + j] = out;
    }
  J.unit.assign(d, 0);
  J.unit[0] = 1;
  for (int r = 0; r < db; ++r) J.unit[1 + r] = base.unit[r];
  J.trace_vec.assign(d, 0);
  J.trace_vec[0] = 1;
  for (int r = 0; r < db; ++r) J.trace_vec[1 + r] = base.trace_vec[r];
  verify_jordan_basics(J);
  return J;
}

int64_t CubicData::t(const Vec& x) const { return J->trace(x); }

int64_t CubicData::t2(const Vec& x, const Vec& y) const {
  int64_t acc = 0;
  for (int i = 0; i < J->dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < J->dim; ++j)
      acc += static_cast<int64_t>(x[i]) * y[j] % J->p * tgram.at(i, j);
  }
  return fp_norm(acc, J->p);
}

int64_t CubicData::s(const Vec& x) const {
  int64_t tx = t(x);
  int64_t tx2 = J->trace(J->mul(x, x));
  return fp_mul(fp_half(J->p), static_cast<int32_t>(fp_norm(tx * tx - tx2, J->p)), J->p);
}

Vec CubicData::sharp(const Vec& x) const {
  int64_t p = J->p;
  Vec x2 = J->mul(x, x);
  Vec out = vec_sub(x2, vec_scale(x, static_cast<int32_t>(t(x)), p), p);
  return vec_add(out, vec_scale(J->unit, static_cast<int32_t>(s(x)), p), p);
}

Vec CubicData::cross(const Vec& x, const Vec& y) const {
  Vec out(J->dim, 0);
  for (int i = 0; i < J->dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < J->dim; ++j) {
      if (y[j] == 0) continue;
      vec_axpy(out, fp_mul(x[i], y[j], J->p), cross_table[static_cast<size_t>(i) * J->dim + j],
               J->p);
    }
  }
  return out;
}

int64_t CubicData::norm(const Vec& x) const {
  Vec xs = J->mul(x, sharp(x));
  int64_t p = J->p;
  for (int i = 0; i < J->dim; ++i)
    if (J->unit[i] != 0) {
      int32_t lam = fp_mul(xs[i], fp_inv(J->unit[i], p), p);
      if (vec_scale(J->unit, lam, p) != xs)
        throw std::logic_error("cubic_data: x . x# is not scalar");
      return lam;
    }
  throw std::logic_error("cubic_data: zero unit");
}

CubicData cubic_data(const JordanAlgebra& J) {
  if (J.variant != JordanAlgebra::Variant::Cubic)
    throw std::invalid_argument("cubic_data: cubic variant required");
  CubicData cd;
  cd.J = &J;
  cd.tgram = J.trace_gram();
  int d = J.dim;
  int64_t p = J.p;
  // cross table from polarized sharp
  std::vector<Vec> sharps(d);
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    sharps[i] = cd.sharp(e);
  }
  cd.cross_table.assign(static_cast<size_t>(d) * d, Vec(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec ei(d, 0), ej(d, 0);
      ei[i] = 1;
      ej[j] = 1;
      Vec sum = cd.sharp(vec_add(ei, ej, p));
      cd.cross_table[static_cast<size_t>(i) * d + j] =
          vec_sub(vec_sub(sum, sharps[i], p), sharps[j], p);
    }
  // degree-3 probes: x . x# scalar on basis vectors, pairwise sums, and a few
  // seeded random elements
  auto probe = [&](const Vec& x) { (void)cd.norm(x); };
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    probe(e);
    for (int j = i + 1; j < d; ++j) {
      Vec f(d, 0);
      f[j] = 1;
      probe(vec_add(e, f, p));
    }
  }
  Rng rng(0x5a4b);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.fp(p);
    probe(x);
  }
  return cd;
}

CubicIdentityReport check_cubic_identity(const JordanAlgebra& J, uint64_t seed, int samples) {
  if (J.variant != JordanAlgebra::Variant::Cubic)
    throw std::invalid_argument("check_cubic_identity: cubic variant required");
  CubicData cd = cubic_data(J);
  CubicIdentityReport report;
  int d = J.dim;
  int64_t p = J.p;
  auto holds = [&](const Vec& x) {
    Vec x2 = J.mul(x, x);
    Vec x3 = J.mul(x2, x);
    Vec lhs = vec_sub(x3, vec_scale(x2, static_cast<int32_t>(cd.t(x)), p), p);
    lhs = vec_add(lhs, vec_scale(x, static_cast<int32_t>(cd.s(x)), p), p);
    lhs = vec_sub(lhs, vec_scale(J.unit, static_cast<int32_t>(cd.norm(x)), p), p);
    return vec_is_zero(lhs);
  };
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    if (!holds(e)) report.failures.push_back(e);
  }
  Rng rng(seed);
  for (int trial = 0; trial < samples; ++trial) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.fp(p);
    if (!holds(x)) report.failures.push_back(x);
  }
  return report;
}

Matrix jordan_inner_derivation(const JordanAlgebra& J, const Vec& x, const Vec& y) {
  int d = J.dim;
  int64_t p = J.p;
  Matrix m(d, d, p);
  for (int k = 0; k < d; ++k) {
    Vec e(d, 0);
    e[k] = 1;
    Vec v = vec_sub(J.mul(x, J.mul(y, e)), J.mul(y, J.mul(x, e)), p);
    for (int r = 0; r < d; ++r) m.set(r, k, v[r]);
  }
  if (!vec_is_zero(m.apply(J.unit)))
    throw std::logic_error("jordan_inner_derivation: D(1) != 0");
  // preserves the zero-trace subspace
  Matrix trow(1, d, p);
  for (int i = 0; i < d; ++i) trow.set(0, i, J.trace_vec[i]);
  Subspace kert = rank_kernel(trow).kernel;
  for (int r = 0; r < kert.dim(); ++r) {
    Vec z = kert.basis.row_vec(r);
    if (J.trace(m.apply(z)) != 0)
      throw std::logic_error("jordan_inner_derivation: zero-trace space not preserved");
  }
  return m;
}

}  // namespace trisys
