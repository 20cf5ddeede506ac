#include "trisys/comp.hpp"

#include <stdexcept>

namespace trisys {

std::string CompositionAlgebra::kind_name(Kind k) {
  switch (k) {
    case Kind::Unit: return "k";
    case Kind::Binarion: return "kxk";
    case Kind::Quaternion: return "mat2";
    case Kind::Octonion: return "octonion";
  }
  return "?";
}

Vec CompositionAlgebra::mul(const Vec& x, const Vec& y) const {
  Vec out(dim, 0);
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j] == 0) continue;
      int32_t c = fp_mul(x[i], y[j], p);
      vec_axpy(out, c, mul_table[static_cast<size_t>(i) * dim + j], p);
    }
  }
  return out;
}

int64_t CompositionAlgebra::trace(const Vec& x) const {
  int64_t acc = 0;
  for (int i = 0; i < dim; ++i) acc += static_cast<int64_t>(trace_vec[i]) * x[i];
  return fp_norm(acc, p);
}

int64_t CompositionAlgebra::trace_mul(const Vec& x, const Vec& y) const {
  return trace(mul(x, y));
}

int64_t CompositionAlgebra::norm(const Vec& x) const {
  int64_t acc = 0;
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim; ++j)
      acc += static_cast<int64_t>(x[i]) * x[j] % p * norm_polar.at(i, j);
  }
  // b(x, x) = n(x) with the half-polar convention
  return fp_norm(acc, p);
}

namespace {

void verify_composition(const CompositionAlgebra& c) {
  int d = c.dim;
  int64_t p = c.p;
  // unit
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    if (c.mul(c.unit, e) != e || c.mul(e, c.unit) != e)
      throw std::logic_error("composition: unit failure");
  }
  // x + conj(x) = t(x) 1 and x conj(x) = n(x) 1 on basis and pairwise sums
  auto check_elem = [&](const Vec& x) {
    Vec cx = c.conj(x);
    Vec sum = vec_add(x, cx, p);
    Vec t1 = vec_scale(c.unit, static_cast<int32_t>(c.trace(x)), p);
    if (sum != t1) throw std::logic_error("composition: trace identity failure");
    Vec prod = c.mul(x, cx);
    Vec n1 = vec_scale(c.unit, static_cast<int32_t>(c.norm(x)), p);
    if (prod != n1) throw std::logic_error("composition: norm identity failure");
  };
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    check_elem(e);
    for (int j = i + 1; j < d; ++j) {
      Vec f(d, 0);
      f[j] = 1;
      check_elem(vec_add(e, f, p));
    }
  }
  // fully polarized multiplicativity of the norm:
  //   b(x1 y1, x2 y2) + b(x1 y2, x2 y1) = 2 b(x1, x2) b(y1, y2)
  BilinForm b = c.norm_polar_form();
  for (int x1 = 0; x1 < d; ++x1)
    for (int x2 = 0; x2 < d; ++x2)
      for (int y1 = 0; y1 < d; ++y1)
        for (int y2 = 0; y2 < d; ++y2) {
          const Vec& a11 = c.mul_table[static_cast<size_t>(x1) * d + y1];
          const Vec& a22 = c.mul_table[static_cast<size_t>(x2) * d + y2];
          const Vec& a12 = c.mul_table[static_cast<size_t>(x1) * d + y2];
          const Vec& a21 = c.mul_table[static_cast<size_t>(x2) * d + y1];
          int64_t lhs = fp_norm(b.eval(a11, a22) + b.eval(a12, a21), p);
          int64_t rhs = fp_norm(2 * b.gram.at(x1, x2) % p * b.gram.at(y1, y2), p);
          if (lhs != rhs) throw std::logic_error("composition: norm not multiplicative");
        }
  if (rref(c.norm_polar).rank != d)
    throw std::logic_error("composition: degenerate norm form");
}

void finish(CompositionAlgebra& c) {
  int d = c.dim;
  int64_t p = c.p;
  // trace and polar norm from the tables: t(x) via x + conj(x), b via
  // b(x,y) = 1/2 (t(x) t(y) - t(x conj(y)))... equivalently from x conj(x):
  // n is read off as the coefficient of 1 in x conj(x); polarize with 1/2.
  c.trace_vec.assign(d, 0);
  // unit coordinate functional: solve <unit coeff> via the position of 1
  // (all our models have a unit supported on basis vectors)
  auto unit_coeff = [&](const Vec& x) -> int32_t {
    // x = lambda * unit must hold; find lambda from the first nonzero unit slot
    for (int i = 0; i < d; ++i)
      if (c.unit[i] != 0) {
        int32_t lam = fp_mul(x[i], fp_inv(c.unit[i], p), p);
        Vec expect = vec_scale(c.unit, lam, p);
        if (expect != x) throw std::logic_error("composition: value not scalar");
        return lam;
      }
    throw std::logic_error("composition: zero unit");
  };
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    c.trace_vec[i] = unit_coeff(vec_add(e, c.conj(e), p));
  }
  Matrix polar(d, d, p);
  int32_t half = fp_half(p);
  for (int i = 0; i < d; ++i) {
    Vec ei(d, 0);
    ei[i] = 1;
    for (int j = 0; j < d; ++j) {
      Vec ej(d, 0);
      ej[j] = 1;
      // n(x) 1 = x conj(x); polar b(ei,ej) = 1/2 (n(ei+ej) - n(ei) - n(ej))
      auto n_of = [&](const Vec& x) {
        return unit_coeff(c.mul(x, c.conj(x)));
      };
      int64_t v = n_of(vec_add(ei, ej, p)) - n_of(ei) - n_of(ej);
      polar.set(i, j, static_cast<int64_t>(half) * fp_norm(v, p));
    }
  }
  c.norm_polar = polar;
  verify_composition(c);
}

}  // namespace

CompositionAlgebra make_composition(CompositionAlgebra::Kind kind, int64_t p) {
  require_odd_prime(p);
  CompositionAlgebra c;
  c.kind = kind;
  c.p = p;
  switch (kind) {
    case CompositionAlgebra::Kind::Unit: {
      c.dim = 1;
      c.mul_table = {{1}};
      c.conj_mat = Matrix::identity(1, p);
      c.unit = {1};
      break;
    }
    case CompositionAlgebra::Kind::Binarion: {
      c.dim = 2;
      c.mul_table.assign(4, Vec(2, 0));
      // (a,b)(c,d) = (ac, bd)
      c.mul_table[0] = {1, 0};  // e0 e0
      c.mul_table[1] = {0, 0};  // e0 e1
      c.mul_table[2] = {0, 0};
      c.mul_table[3] = {0, 1};
      c.conj_mat = Matrix(2, 2, p);
      c.conj_mat.set(0, 1, 1);
      c.conj_mat.set(1, 0, 1);
      c.unit = {1, 1};
      break;
    }
    case CompositionAlgebra::Kind::Quaternion: {
      // 2x2 matrices, basis E11, E12, E21, E22
      c.dim = 4;
      c.mul_table.assign(16, Vec(4, 0));
      auto idx = [](int r, int s) { return r * 2 + s; };
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) {
              Vec out(4, 0);
              if (s == u) out[idx(r, v)] = 1;
              c.mul_table[static_cast<size_t>(idx(r, s)) * 4 + idx(u, v)] = out;
            }
      // conj = adjugate: [[d,-b],[-c,a]]
      c.conj_mat = Matrix(4, 4, p);
      c.conj_mat.set(0, 3, 1);
      c.conj_mat.set(3, 0, 1);
      c.conj_mat.set(1, 1, -1);
      c.conj_mat.set(2, 2, -1);
      c.unit = {1, 0, 0, 1};
      break;
    }
    case CompositionAlgebra::Kind::Octonion: {
      // Zorn: (alpha, a; b, beta), basis order alpha, a1..a3, b1..b3, beta.
      // (al,a;b,be)(ga,c;d,de) = (al ga + a.d, al c + de a - b x d;
      //                           ga b + be d + a x c, be de + b.c)
      c.dim = 8;
      int64_t q = p;
      auto cross = [&](const Vec& u, const Vec& v) {
        Vec w(3, 0);
        w[0] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(u[1]) * v[2] - static_cast<int64_t>(u[2]) * v[1], q));
        w[1] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(u[2]) * v[0] - static_cast<int64_t>(u[0]) * v[2], q));
        w[2] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(u[0]) * v[1] - static_cast<int64_t>(u[1]) * v[0], q));
        return w;
      };
      auto dot = [&](const Vec& u, const Vec& v) {
        int64_t s = 0;
        for (int i = 0; i < 3; ++i) s += static_cast<int64_t>(u[i]) * v[i];
        return static_cast<int32_t>(fp_norm(s, q));
      };
      auto zorn_mul = [&](const Vec& x, const Vec& y) {
        int32_t al = x[0], be = x[7], ga = y[0], de = y[7];
        Vec a{x[1], x[2], x[3]}, b{x[4], x[5], x[6]};
        Vec cvec{y[1], y[2], y[3]}, dvec{y[4], y[5], y[6]};
        Vec out(8, 0);
        out[0] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(al) * ga + dot(a, dvec), q));
        Vec top = vec_add(vec_add(vec_scale(cvec, al, q), vec_scale(a, de, q), q),
                          vec_scale(cross(b, dvec), -1 + static_cast<int32_t>(q), q), q);
        Vec bot = vec_add(vec_add(vec_scale(b, ga, q), vec_scale(dvec, be, q), q),
                          cross(a, cvec), q);
        out[1] = top[0];
        out[2] = top[1];
        out[3] = top[2];
        out[4] = bot[0];
        out[5] = bot[1];
        out[6] = bot[2];
        out[7] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(be) * de + dot(b, cvec), q));
        return out;
      };
      c.mul_table.assign(64, Vec(8, 0));
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          Vec ei(8, 0), ej(8, 0);
          ei[i] = 1;
          ej[j] = 1;
          c.mul_table[static_cast<size_t>(i) * 8 + j] = zorn_mul(ei, ej);
        }
      // conjugation swaps alpha and beta and negates a, b
      c.conj_mat = Matrix(8, 8, p);
      c.conj_mat.set(0, 7, 1);
      c.conj_mat.set(7, 0, 1);
      for (int i = 1; i <= 6; ++i) c.conj_mat.set(i, i, -1);
      c.unit = {1, 0, 0, 0, 0, 0, 0, 1};
      break;
    }
  }
  finish(c);
  return c;
}

}  // namespace trisys
