#include "trisys/catalog.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "trisys/functors.hpp"

namespace trisys {

namespace {

Matrix standard_alternating(int n, int64_t p) {
  if (n % 2 != 0) throw std::invalid_argument("alternating form needs even dimension");
  Matrix g(n, n, p);
  for (int i = 0; i < n; i += 2) {
    g.set(i, i + 1, 1);
    g.set(i + 1, i, -1);
  }
  return g;
}

TripleSystem finish(TripleSystem t) {
  AxiomReport rep = check_axioms(t);
  if (!rep.pass()) {
    std::string msg = "catalog: '" + t.key() + "' fails its identity set:";
    for (size_t i = 0; i < rep.violations.size() && i < 4; ++i) {
      msg += " [";
      msg += rep.violations[i].tag;
      for (int v : rep.violations[i].tuple) msg += " " + std::to_string(v);
      msg += "]";
    }
    throw std::logic_error(msg);
  }
  return t;
}

Vec unit_vec(int n, int i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

}  // namespace

TripleSystem sts_dim2_case_i(int32_t alpha, int64_t p) {
  if (p != 3) throw std::invalid_argument("sts_dim2: the 2-dim families live over GF(3)");
  alpha = static_cast<int32_t>(fp_norm(alpha, p));
  std::vector<Matrix> d(3, Matrix(2, 2, p));
  d[0].set(1, 0, alpha);  // [aaa] = alpha b
  BilinForm form(standard_alternating(2, p), BilinForm::Symmetry::Alternating);
  return finish(TripleSystem(p, 2, TsKind::STS, std::move(d), form, {"a", "b"},
                             "sts:dim2:i:alpha=" + std::to_string(alpha)));
}

TripleSystem sts_dim2_case_ii(int32_t eps, int64_t p) {
  if (p != 3) throw std::invalid_argument("sts_dim2: the 2-dim families live over GF(3)");
  eps = static_cast<int32_t>(fp_norm(eps, p));
  if (eps == 0) throw std::invalid_argument("sts_dim2_case_ii: eps must be nonzero");
  std::vector<Matrix> d(3, Matrix(2, 2, p));
  d[0].set(0, 1, eps);              // [aab] = eps a
  d[1].set(0, 0, eps);              // [aba] = eps a
  d[1].set(1, 1, fp_neg(eps, p));   // [abb] = -eps b
  d[2].set(1, 0, fp_neg(eps, p));   // [bba] = -eps b
  BilinForm form(standard_alternating(2, p), BilinForm::Symmetry::Alternating);
  return finish(TripleSystem(p, 2, TsKind::STS, std::move(d), form, {"a", "b"},
                             "sts:dim2:ii:eps=" + std::to_string(eps)));
}

TripleSystem sts8() {
  const int64_t p = 3;
  TripleSystem t2 = sts_dim2_case_ii(1, p);
  GradedAlgebra g = build_g_sts(t2);  // dim 10: [sp(V1) | inder | v@T | w@T]
  if (g.dim() != 10) throw std::logic_error("sts8: base algebra has wrong dimension");

  // sp(V2) = inder(T2) in the gamma basis {gamma_aa, gamma_ab, gamma_bb},
  // realized as psi operators for the form on T2.
  const BilinForm& f2 = *t2.form();
  Vec ea{1, 0}, eb{0, 1};
  std::array<Matrix, 3> gam2 = {psi_op(f2, ea, ea), psi_op(f2, ea, eb), psi_op(f2, eb, eb)};
  std::vector<Vec> gam2_flat;
  for (auto& m : gam2) gam2_flat.push_back(m.flatten());
  SpanBasis gam2_span = span_and_coords(gam2_flat, p, 4);
  auto sp2_coords = [&](const Matrix& m) {
    auto c = gam2_span.coords(m.flatten());
    if (!c) throw std::logic_error("sts8: operator outside sp(V2)");
    return *c;
  };
  auto gamma2_of = [&](const Vec& x, const Vec& y) { return psi_op(f2, x, y); };

  // V1 data
  Matrix g1(2, 2, p);
  g1.set(0, 1, 1);
  g1.set(1, 0, -1);
  BilinForm f1(g1, BilinForm::Symmetry::Alternating);
  auto gamma1_of = [&](const Vec& a, const Vec& b) { return psi_op(f1, a, b); };

  // W = (V1 x sp(V2)) + V2, basis: (q, sigma) -> 3q + sigma for q < 2,
  // then V2 basis at 6, 7.
  const int NW = 8;
  auto rho_even = [&](const Matrix& s1, const Matrix& d2) {
    // s1 in gl(V1) acting on the first factor of W0; d2 in sp(V2) acting by
    // the commutator on the sp(V2) factor and naturally on W1
    Matrix r(NW, NW, p);
    for (int q = 0; q < 2; ++q)
      for (int c = 0; c < 2; ++c)
        for (int sig = 0; sig < 3; ++sig)
          if (s1.at(q, c) != 0) r.set(3 * q + sig, 3 * c + sig, s1.at(q, c));
    for (int sig = 0; sig < 3; ++sig) {
      Matrix comm = d2 * gam2[sig] - gam2[sig] * d2;
      Vec cc = sp2_coords(comm);
      for (int q = 0; q < 2; ++q)
        for (int tau = 0; tau < 3; ++tau)
          r.set(3 * q + tau, 3 * q + sig, fp_add(r.at(3 * q + tau, 3 * q + sig), cc[tau], p));
    }
    for (int rr = 0; rr < 2; ++rr)
      for (int cc2 = 0; cc2 < 2; ++cc2)
        if (d2.at(rr, cc2) != 0) r.set(6 + rr, 6 + cc2, d2.at(rr, cc2));
    return r;
  };
  auto rho_odd = [&](const Vec& a1, const Vec& a2) {
    Matrix r(NW, NW, p);
    // on W0: b1 x s2 -> -<a1|b1> s2(a2) in W1
    for (int q = 0; q < 2; ++q) {
      int64_t pair = f1.eval(a1, unit_vec(2, q));
      if (pair == 0) continue;
      for (int sig = 0; sig < 3; ++sig) {
        Vec s2a2 = gam2[sig].apply(a2);
        for (int rr = 0; rr < 2; ++rr)
          r.set(6 + rr, 3 * q + sig,
                fp_norm(-pair * s2a2[rr], p));
      }
    }
    // on W1: b2 -> -a1 x gamma_{a2, b2} in W0
    for (int s = 0; s < 2; ++s) {
      Vec cc = sp2_coords(gamma2_of(a2, unit_vec(2, s)));
      for (int q = 0; q < 2; ++q) {
        if (a1[q] == 0) continue;
        for (int sig = 0; sig < 3; ++sig)
          r.set(3 * q + sig, 6 + s,
                fp_norm(-static_cast<int64_t>(a1[q]) * cc[sig], p));
      }
    }
    return r;
  };

  // rho on the basis of g, in the functor's layout
  std::vector<Matrix> rho(10, Matrix(NW, NW, p));
  {
    // sp(V1) block: gamma_vv, gamma_vw, gamma_ww
    Vec v{1, 0}, w{0, 1};
    rho[0] = rho_even(gamma1_of(v, v), Matrix(2, 2, p));
    rho[1] = rho_even(gamma1_of(v, w), Matrix(2, 2, p));
    rho[2] = rho_even(gamma1_of(w, w), Matrix(2, 2, p));
    // inder block: the selected pair operators of inder(T2)
    InderResult ind2 = inder(t2, false);
    if (ind2.dim() != 3) throw std::logic_error("sts8: inder(T2) should be sp(V2)");
    for (int l = 0; l < 3; ++l) rho[3 + l] = rho_even(Matrix(2, 2, p), ind2.basis_ops[l]);
    // odd block: v@a, v@b, w@a, w@b
    rho[6] = rho_odd(v, ea);
    rho[7] = rho_odd(v, eb);
    rho[8] = rho_odd(w, ea);
    rho[9] = rho_odd(w, eb);
  }

  // rho is a representation: rho([x,y]) = [rho x, rho y] on basis pairs
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      Vec br = g.bracket_basis_dense(i, j);
      Matrix lhs(NW, NW, p);
      for (int k = 0; k < 10; ++k)
        if (br[k] != 0) lhs = lhs + rho[k].scaled(br[k]);
      Matrix rhs = rho[i] * rho[j] - rho[j] * rho[i];
      if (!(lhs == rhs)) throw std::logic_error("sts8: rho is not a representation");
    }

  // the alternating form on W
  Matrix gw(NW, NW, p);
  for (int q = 0; q < 2; ++q)
    for (int q2 = 0; q2 < 2; ++q2) {
      int64_t pair = f1.eval(unit_vec(2, q), unit_vec(2, q2));
      if (pair == 0) continue;
      for (int sig = 0; sig < 3; ++sig)
        for (int tau = 0; tau < 3; ++tau) {
          Matrix prod = gam2[sig] * gam2[tau];
          gw.set(3 * q + sig, 3 * q2 + tau, fp_norm(pair * prod.trace(p), p));
        }
    }
  gw.set(6, 7, 1);
  gw.set(7, 6, -1);
  BilinForm wform(gw, BilinForm::Symmetry::Alternating);
  if (rref(gw).rank != 8) throw std::logic_error("sts8: degenerate form on W");

  // the triple product through its d operators
  auto d_pair = [&](int A, int B) -> Matrix {
    auto is_w0 = [](int X) { return X < 6; };
    if (is_w0(A) && is_w0(B)) {
      int qa = A / 3, sa = A % 3, qb = B / 3, sb = B % 3;
      Matrix prod = gam2[sa] * gam2[sb];
      int32_t tr = static_cast<int32_t>(prod.trace(p));
      Matrix s1 = gamma1_of(unit_vec(2, qa), unit_vec(2, qb)).scaled(tr);
      Matrix comm = gam2[sa] * gam2[sb] - gam2[sb] * gam2[sa];
      int32_t pair = static_cast<int32_t>(f1.eval(unit_vec(2, qa), unit_vec(2, qb)));
      Matrix d2 = comm.scaled(fp_neg(pair, p));
      return rho_even(s1, d2);
    }
    if (is_w0(A) && !is_w0(B)) {
      int qa = A / 3, sa = A % 3, r = B - 6;
      return rho_odd(unit_vec(2, qa), gam2[sa].apply(unit_vec(2, r)));
    }
    // only called with A <= B, so both lie in W1 here
    int r = A - 6, s = B - 6;
    // d_{a2,b2} = -rho_{gamma_{a2,b2}}
    return rho_even(Matrix(2, 2, p), gamma2_of(unit_vec(2, r), unit_vec(2, s)))
        .scaled(fp_neg(1, p));
  };
  std::vector<Matrix> dtab;
  for (int i = 0; i < NW; ++i)
    for (int j = i; j < NW; ++j) dtab.push_back(d_pair(i, j));

  std::vector<std::string> labels = {"v.gaa", "v.gab", "v.gbb", "w.gaa",
                                     "w.gab", "w.gbb", "a2", "b2"};
  TripleSystem t(p, NW, TsKind::STS, std::move(dtab), wform, labels, "sts:sts8");
  t = finish(std::move(t));

  // inder(T) must be 10-dimensional and equal to the image of rho
  InderResult ind = inder(t, false);
  if (ind.dim() != 10) throw std::logic_error("sts8: inder dimension != 10");
  std::vector<Vec> rho_flat;
  for (auto& m : rho) rho_flat.push_back(m.flatten());
  Subspace rho_span = Subspace::from_vectors(rho_flat, p, NW * NW);
  if (!(rho_span == ind.span.space)) throw std::logic_error("sts8: inder != image of rho");
  return t;
}

namespace {

struct BoxAlgebra {
  int dj;
  int64_t p;
  Matrix tg;                     // trace gram
  const std::vector<Vec>* cross; // dim^2 table or nullptr for zero cross

  int64_t t2(const Vec& a, const Vec& b) const {
    int64_t acc = 0;
    for (int i = 0; i < dj; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < dj; ++j) acc += static_cast<int64_t>(a[i]) * b[j] % p * tg.at(i, j);
    }
    return fp_norm(acc, p);
  }
  Vec cr(const Vec& a, const Vec& b) const {
    Vec out(dj, 0);
    if (!cross) return out;
    for (int i = 0; i < dj; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < dj; ++j) {
        if (b[j] == 0) continue;
        vec_axpy(out, fp_mul(a[i], b[j], p), (*cross)[static_cast<size_t>(i) * dj + j], p);
      }
    }
    return out;
  }
};

struct Box {
  int32_t al = 0, be = 0;
  Vec a, b;
};

}  // namespace

TripleSystem sts_from_jordan(const JordanAlgebra& J) {
  int64_t p = J.p;
  int dj = J.dim;
  bool cubic = J.variant == JordanAlgebra::Variant::Cubic;
  if (p == 3 && (dj == 0 || (cubic && dj == 1)))
    throw std::invalid_argument("sts_from_jordan: trace data degenerates at p = 3 for this J");

  Matrix tg = dj == 0 ? Matrix(0, 0, p) : J.trace_gram();
  std::optional<CubicData> cd;
  if (cubic && dj > 0) {
    cd = cubic_data(J);
    tg = cd->tgram;
  }
  if (dj > 0 && rref(tg).rank != dj)
    throw std::invalid_argument("sts_from_jordan: degenerate trace form");
  BoxAlgebra box{dj, p, tg, cd ? &cd->cross_table : nullptr};

  int n = 2 * dj + 2;
  int oa = 1, ob = dj + 2;  // slots: [alpha | a_0..a_{dj-1} | beta | b_0..]
  auto to_box = [&](const Vec& x) {
    Box out;
    out.al = x[0];
    out.be = x[dj + 1];
    out.a.assign(dj, 0);
    out.b.assign(dj, 0);
    for (int r = 0; r < dj; ++r) {
      out.a[r] = x[oa + r];
      out.b[r] = x[ob + r];
    }
    return out;
  };
  auto from_box = [&](int64_t ga, const Vec& c, int64_t de, const Vec& d) {
    Vec x(n, 0);
    x[0] = static_cast<int32_t>(fp_norm(ga, p));
    x[dj + 1] = static_cast<int32_t>(fp_norm(de, p));
    for (int r = 0; r < dj; ++r) {
      x[oa + r] = c[r];
      x[ob + r] = d[r];
    }
    return x;
  };

  // the boxed triple product; delta and d follow from gamma and c by the
  // alpha<->beta, a<->b swap with a global sign
  auto half = [&](const Box& x1, const Box& x2, const Box& x3, bool swapped) {
    auto A = [&](const Box& x) { return swapped ? x.b : x.a; };
    auto B = [&](const Box& x) { return swapped ? x.a : x.b; };
    auto AL = [&](const Box& x) { return swapped ? x.be : x.al; };
    auto BE = [&](const Box& x) { return swapped ? x.al : x.be; };
    int64_t s12 = fp_norm(static_cast<int64_t>(AL(x1)) * BE(x2) +
                          static_cast<int64_t>(AL(x2)) * BE(x1), p);
    int64_t tab = fp_norm(box.t2(A(x1), B(x2)) + box.t2(A(x2), B(x1)), p);
    int64_t ga = fp_norm((fp_norm(-3 * s12 + tab, p)) * AL(x3) +
                         2 * (static_cast<int64_t>(AL(x1)) * box.t2(B(x2), A(x3)) % p +
                              static_cast<int64_t>(AL(x2)) * box.t2(B(x1), A(x3)) % p -
                              box.t2(box.cr(A(x1), A(x2)), A(x3))),
                         p);
    Vec c(dj, 0);
    vec_axpy(c, static_cast<int32_t>(fp_norm(-s12 + tab, p)), A(x3), p);
    vec_axpy(c, static_cast<int32_t>(fp_norm(2 * (box.t2(B(x2), A(x3)) -
                                                  static_cast<int64_t>(BE(x2)) * AL(x3)), p)),
             A(x1), p);
    vec_axpy(c, static_cast<int32_t>(fp_norm(2 * (box.t2(B(x1), A(x3)) -
                                                  static_cast<int64_t>(BE(x1)) * AL(x3)), p)),
             A(x2), p);
    vec_axpy(c, fp_mul(2 % p, AL(x1), p), box.cr(B(x2), B(x3)), p);
    vec_axpy(c, fp_mul(2 % p, AL(x2), p), box.cr(B(x1), B(x3)), p);
    vec_axpy(c, fp_mul(2 % p, AL(x3), p), box.cr(B(x1), B(x2)), p);
    int32_t m2 = fp_neg(2 % p, p);
    vec_axpy(c, m2, box.cr(box.cr(A(x1), A(x2)), B(x3)), p);
    vec_axpy(c, m2, box.cr(box.cr(A(x1), A(x3)), B(x2)), p);
    vec_axpy(c, m2, box.cr(box.cr(A(x2), A(x3)), B(x1)), p);
    return std::make_pair(ga, c);
  };
  auto triple = [&](const Vec& v1, const Vec& v2, const Vec& v3) {
    Box x1 = to_box(v1), x2 = to_box(v2), x3 = to_box(v3);
    auto [ga, c] = half(x1, x2, x3, false);
    auto [gs, cs] = half(x1, x2, x3, true);
    return from_box(ga, c, fp_norm(-gs, p), vec_scale(cs, -1 + static_cast<int32_t>(p), p));
  };

  std::vector<Matrix> dtab;
  dtab.reserve(static_cast<size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix m(n, n, p);
      for (int k = 0; k < n; ++k) {
        Vec prod = triple(unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
        for (int r = 0; r < n; ++r) m.set(r, k, prod[r]);
      }
      dtab.push_back(std::move(m));
    }

  Matrix g(n, n, p);
  g.set(0, dj + 1, 1);
  g.set(dj + 1, 0, -1);
  for (int r = 0; r < dj; ++r)
    for (int s = 0; s < dj; ++s) {
      g.set(oa + r, ob + s, -tg.at(r, s));
      g.set(ob + s, oa + r, tg.at(s, r));
    }
  BilinForm form(g, BilinForm::Symmetry::Alternating);

  std::vector<std::string> labels;
  labels.push_back("u+");
  for (int r = 0; r < dj; ++r) labels.push_back("a" + std::to_string(r));
  labels.push_back("u-");
  for (int r = 0; r < dj; ++r) labels.push_back("b" + std::to_string(r));
  return finish(TripleSystem(p, n, TsKind::STS, std::move(dtab), form, labels,
                             "sts:jordan[" + J.name + "]"));
}

TripleSystem sts_symplectic(int n, int64_t p) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("sts_symplectic: even n >= 2");
  BilinForm form(standard_alternating(n, p), BilinForm::Symmetry::Alternating);
  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      dtab.push_back(psi_op(form, unit_vec(n, i), unit_vec(n, j)));
  return finish(TripleSystem(p, n, TsKind::STS, std::move(dtab), form, {},
                             "sts:classical:symplectic:n=" + std::to_string(n)));
}

TripleSystem sts_special(int m, int64_t p) {
  if (m < 1) throw std::invalid_argument("sts_special: m >= 1");
  int n = 2 * m;
  auto X = [&](int i) { return i; };
  auto F = [&](int i) { return m + i; };
  Matrix g(n, n, p);
  for (int i = 0; i < m; ++i) {
    g.set(F(i), X(i), 1);   // (f|x) = f(x)
    g.set(X(i), F(i), -1);  // (x|f) = -f(x)
  }
  BilinForm form(g, BilinForm::Symmetry::Alternating);
  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix d(n, n, p);
      bool i_in_w = i < m, j_in_w = j < m;
      if (i_in_w != j_in_w) {
        int xi = i_in_w ? i : j - m;   // index in W
        int fj = i_in_w ? j - m : i;   // index in W*
        // [x f y] = f(x) y + 2 f(y) x ; [x f g'] = -f(x) g' - 2 g'(x) f
        for (int k = 0; k < m; ++k) {
          if (xi == fj) d.set(X(k), X(k), fp_add(d.at(X(k), X(k)), 1, p));
          if (k == fj) d.set(X(xi), X(k), fp_add(d.at(X(xi), X(k)), 2 % p, p));
          if (xi == fj) d.set(F(k), F(k), fp_sub(d.at(F(k), F(k)), 1, p));
          if (k == xi) d.set(F(fj), F(k), fp_sub(d.at(F(fj), F(k)), 2 % p, p));
        }
      }
      dtab.push_back(std::move(d));
    }
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back("x" + std::to_string(i));
  for (int i = 0; i < m; ++i) labels.push_back("f" + std::to_string(i));
  return finish(TripleSystem(p, n, TsKind::STS, std::move(dtab), form, labels,
                             "sts:classical:special:m=" + std::to_string(m)));
}

TripleSystem sts_orthogonal(int m, const Matrix& gram_w, int64_t p) {
  if (m < 3) throw std::invalid_argument("sts_orthogonal: dim W >= 3");
  if (gram_w.rows() != m || rref(gram_w).rank != m)
    throw std::invalid_argument("sts_orthogonal: gram must be m x m nondegenerate");
  BilinForm qw(gram_w, BilinForm::Symmetry::Symmetric);
  Matrix g1(2, 2, p);
  g1.set(0, 1, 1);
  g1.set(1, 0, -1);
  BilinForm fv(g1, BilinForm::Symmetry::Alternating);
  int n = 2 * m;
  auto IDX = [&](int q, int r) { return q * m + r; };
  int32_t half = fp_half(p);
  Matrix g(n, n, p);
  for (int q = 0; q < 2; ++q)
    for (int q2 = 0; q2 < 2; ++q2) {
      int64_t c = fv.eval(unit_vec(2, q), unit_vec(2, q2));
      if (c == 0) continue;
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
          g.set(IDX(q, r), IDX(q2, s), c * half % p * gram_w.at(r, s));
    }
  BilinForm form(g, BilinForm::Symmetry::Alternating);
  std::vector<Matrix> dtab;
  for (int A = 0; A < n; ++A)
    for (int B = A; B < n; ++B) {
      int qa = A / m, ra = A % m, qb = B / m, rb = B % m;
      // d(w' x z) = 1/2 q(x,y) gamma_{u,v}(w') x z + <u|v> w' x sigma_{x,y}(z)
      Matrix gam = gamma_op(fv, unit_vec(2, qa), unit_vec(2, qb));
      Matrix sig = sigma_op(qw, unit_vec(m, ra), unit_vec(m, rb));
      int32_t qxy = fp_mul(half, static_cast<int32_t>(gram_w.at(ra, rb)), p);
      int32_t uv = static_cast<int32_t>(fv.eval(unit_vec(2, qa), unit_vec(2, qb)));
      Matrix d(n, n, p);
      for (int qc = 0; qc < 2; ++qc)
        for (int k = 0; k < m; ++k) {
          for (int q2 = 0; q2 < 2; ++q2) {
            int32_t c = fp_mul(qxy, static_cast<int32_t>(gam.at(q2, qc)), p);
            if (c != 0) d.set(IDX(q2, k), IDX(qc, k), fp_add(d.at(IDX(q2, k), IDX(qc, k)), c, p));
          }
          if (uv != 0)
            for (int r = 0; r < m; ++r) {
              int32_t c = fp_mul(uv, static_cast<int32_t>(sig.at(r, k)), p);
              if (c != 0)
                d.set(IDX(qc, r), IDX(qc, k), fp_add(d.at(IDX(qc, r), IDX(qc, k)), c, p));
            }
        }
      dtab.push_back(std::move(d));
    }
  return finish(TripleSystem(p, n, TsKind::STS, std::move(dtab), form, {},
                             "sts:classical:orthogonal:m=" + std::to_string(m)));
}

namespace {

// homogeneous binary forms of degree d as coefficient vectors over x^{d-i} y^i
Vec poly_dx(const Vec& f, int deg, int64_t p) {
  Vec out(deg, 0);
  for (int i = 0; i < deg; ++i) out[i] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(deg - i) * f[i], p));
  return out;
}
Vec poly_dy(const Vec& f, int deg, int64_t p) {
  Vec out(deg, 0);
  for (int i = 1; i <= deg; ++i) out[i - 1] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(i) * f[i], p));
  return out;
}
Vec poly_mul(const Vec& f, int df, const Vec& g, int dg, int64_t p) {
  Vec out(df + dg + 1, 0);
  for (int i = 0; i <= df; ++i)
    for (int j = 0; j <= dg; ++j)
      out[i + j] = static_cast<int32_t>(fp_norm(out[i + j] + static_cast<int64_t>(f[i]) * g[j], p));
  return out;
}

// Classical q-th transvectant of homogeneous binary forms (Cayley Omega
// process): the i-th term carries the binomial weight C(q, i); dropping it
// breaks sl_2-invariance of the pairing.
Vec transvection(const Vec& f, int nn, const Vec& g, int mm, int q, int64_t p) {
  if (q > std::min(nn, mm)) return Vec(1, 0);
  auto falling = [&](int a, int k) {
    int64_t acc = 1;
    for (int i = 0; i < k; ++i) acc = acc * fp_norm(a - i, p) % p;
    return static_cast<int32_t>(acc);
  };
  auto binom = [&](int a, int k) {
    int64_t num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
      num = num * (a - i);
      den = den * (i + 1);
    }
    return static_cast<int32_t>(fp_mul(static_cast<int32_t>(fp_norm(num, p)),
                                       fp_inv(fp_norm(den, p), p), p));
  };
  int32_t coeff = fp_mul(fp_inv(falling(nn, q), p), fp_inv(falling(mm, q), p), p);
  Vec acc(nn + mm - 2 * q + 1, 0);
  for (int i = 0; i <= q; ++i) {
    Vec df = f;
    int dfd = nn;
    for (int s = 0; s < q - i; ++s) {
      df = poly_dx(df, dfd, p);
      --dfd;
    }
    for (int s = 0; s < i; ++s) {
      df = poly_dy(df, dfd, p);
      --dfd;
    }
    Vec dg = g;
    int dgd = mm;
    for (int s = 0; s < i; ++s) {
      dg = poly_dx(dg, dgd, p);
      --dgd;
    }
    for (int s = 0; s < q - i; ++s) {
      dg = poly_dy(dg, dgd, p);
      --dgd;
    }
    Vec term = poly_mul(df, dfd, dg, dgd, p);
    int32_t w = binom(q, i);
    if (i % 2 != 0) w = fp_neg(w, p);
    for (size_t e = 0; e < acc.size(); ++e) acc[e] = fp_add(acc[e], fp_mul(w, term[e], p), p);
  }
  for (auto& v : acc) v = fp_mul(v, coeff, p);
  return acc;
}

}  // namespace

TripleSystem sts_g2(int64_t p) {
  if (p < 5) throw std::invalid_argument("sts_g2: transvections divide by 3!, need p >= 5");
  const int n = 4;  // binary cubics
  Matrix g(n, n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec fi = unit_vec(n, i), fj = unit_vec(n, j);
      Vec t3 = transvection(fi, 3, fj, 3, 3, p);
      g.set(i, j, t3[0]);
    }
  BilinForm form(g, BilinForm::Symmetry::Alternating);
  // product c ((F,G)_2, H)_1 against form (F,G)_3: the identity set pins the
  // ratio of the two constants to 6 (any common scaling gives an isomorphic
  // system), so c = 6.
  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix d(n, n, p);
      Vec t2 = transvection(unit_vec(n, i), 3, unit_vec(n, j), 3, 2, p);  // degree 2
      for (int k = 0; k < n; ++k) {
        Vec prod = transvection(t2, 2, unit_vec(n, k), 3, 1, p);  // degree 3
        for (int r = 0; r < n; ++r) d.set(r, k, 6 * static_cast<int64_t>(prod[r]));
      }
      dtab.push_back(std::move(d));
    }
  return finish(TripleSystem(p, n, TsKind::STS, std::move(dtab), form,
                             {"x3", "x2y", "xy2", "y3"}, "sts:classical:g2"));
}

TripleSystem ots_orthogonal(int n, const Matrix& gram, int64_t p) {
  if (gram.rows() != n || rref(gram).rank != n)
    throw std::invalid_argument("ots_orthogonal: gram must be n x n nondegenerate");
  BilinForm form(gram, BilinForm::Symmetry::Symmetric);
  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dtab.push_back(sigma_op(form, unit_vec(n, i), unit_vec(n, j)));
  return finish(TripleSystem(p, n, TsKind::OTS, std::move(dtab), form, {},
                             "ots:classical:orthogonal:n=" + std::to_string(n)));
}

TripleSystem ots_unitarian_split(int m, int64_t p) {
  if (m < 3) throw std::invalid_argument("ots_unitarian_split: m >= 3");
  int n = 2 * m;
  auto X = [&](int i) { return i; };
  auto F = [&](int i) { return m + i; };
  Matrix g(n, n, p);
  for (int i = 0; i < m; ++i) {
    g.set(X(i), F(i), 1);
    g.set(F(i), X(i), 1);
  }
  BilinForm form(g, BilinForm::Symmetry::Symmetric);
  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix d(n, n, p);
      bool i_in_w = i < m, j_in_w = j < m;
      if (i_in_w && !j_in_w) {
        int xi = i, fj = j - m;
        // [x f y] = f(x) y - 2 f(y) x ; [x f g'] = -f(x) g' + 2 g'(x) f
        for (int k = 0; k < m; ++k) {
          if (xi == fj) d.set(X(k), X(k), fp_add(d.at(X(k), X(k)), 1, p));
          if (k == fj) d.set(X(xi), X(k), fp_sub(d.at(X(xi), X(k)), 2 % p, p));
          if (xi == fj) d.set(F(k), F(k), fp_sub(d.at(F(k), F(k)), 1, p));
          if (k == xi) d.set(F(fj), F(k), fp_add(d.at(F(fj), F(k)), 2 % p, p));
        }
      }
      dtab.push_back(std::move(d));
    }
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back("x" + std::to_string(i));
  for (int i = 0; i < m; ++i) labels.push_back("f" + std::to_string(i));
  return finish(TripleSystem(p, n, TsKind::OTS, std::move(dtab), form, labels,
                             "ots:classical:unitarian:m=" + std::to_string(m)));
}

TripleSystem ots_symplectic_split(int m, int64_t p) {
  if (m < 2) throw std::invalid_argument("ots_symplectic_split: dim W = 2m >= 4");
  int mw = 2 * m;
  int n = 2 * mw;
  Matrix g1(2, 2, p);
  g1.set(0, 1, 1);
  g1.set(1, 0, -1);
  BilinForm fv(g1, BilinForm::Symmetry::Alternating);
  BilinForm fw(standard_alternating(mw, p), BilinForm::Symmetry::Alternating);
  auto IDX = [&](int q, int r) { return q * mw + r; };
  Matrix g(n, n, p);
  for (int q = 0; q < 2; ++q)
    for (int q2 = 0; q2 < 2; ++q2) {
      int64_t c = fv.eval(unit_vec(2, q), unit_vec(2, q2));
      if (c == 0) continue;
      for (int r = 0; r < mw; ++r)
        for (int s = 0; s < mw; ++s)
          g.set(IDX(q, r), IDX(q2, s), fp_norm(-c * fw.gram.at(r, s), p));
    }
  BilinForm form(g, BilinForm::Symmetry::Symmetric);
  std::vector<Matrix> dtab;
  for (int A = 0; A < n; ++A)
    for (int B = A + 1; B < n; ++B) {
      int qa = A / mw, ra = A % mw, qb = B / mw, rb = B % mw;
      Matrix gam = gamma_op(fv, unit_vec(2, qa), unit_vec(2, qb));
      Matrix psi = psi_op(fw, unit_vec(mw, ra), unit_vec(mw, rb));
      int32_t pxy = static_cast<int32_t>(fw.eval(unit_vec(mw, ra), unit_vec(mw, rb)));
      int32_t uv = static_cast<int32_t>(fv.eval(unit_vec(2, qa), unit_vec(2, qb)));
      int32_t m2uv = fp_mul(fp_neg(2 % p, p), uv, p);
      Matrix d(n, n, p);
      for (int qc = 0; qc < 2; ++qc)
        for (int k = 0; k < mw; ++k) {
          for (int q2 = 0; q2 < 2; ++q2) {
            int32_t c = fp_mul(pxy, static_cast<int32_t>(gam.at(q2, qc)), p);
            if (c != 0) d.set(IDX(q2, k), IDX(qc, k), fp_add(d.at(IDX(q2, k), IDX(qc, k)), c, p));
          }
          if (m2uv != 0)
            for (int r = 0; r < mw; ++r) {
              int32_t c = fp_mul(m2uv, static_cast<int32_t>(psi.at(r, k)), p);
              if (c != 0)
                d.set(IDX(qc, r), IDX(qc, k), fp_add(d.at(IDX(qc, r), IDX(qc, k)), c, p));
            }
        }
      dtab.push_back(std::move(d));
    }
  return finish(TripleSystem(p, n, TsKind::OTS, std::move(dtab), form, {},
                             "ots:classical:symplectic:m=" + std::to_string(m)));
}

DmuSystem ots_dmu(int32_t lambda, const Matrix& gram, bool with_sigma, int64_t p) {
  lambda = static_cast<int32_t>(fp_norm(lambda, p));
  if (lambda == 0) throw std::invalid_argument("ots_dmu: lambda must be nonzero");
  const int n = 4;
  if (gram.rows() != n || gram.cols() != n || rref(gram).rank != n)
    throw std::invalid_argument("ots_dmu: gram must be 4 x 4 nondegenerate");
  BilinForm form(gram, BilinForm::Symmetry::Symmetric);
  // signature of (i, j, k, l) as a permutation of (0..3), 0 if repeats
  auto eps4 = [](int i, int j, int k, int l) -> int {
    int a[4] = {i, j, k, l};
    int sgn = 1;
    for (int x = 0; x < 4; ++x)
      for (int y = x + 1; y < 4; ++y) {
        if (a[x] == a[y]) return 0;
        if (a[x] > a[y]) sgn = -sgn;
      }
    return sgn;
  };
  // {e_i e_j e_k} from ( {xyz} | . ) = Phi(x, y, z, .)
  std::vector<Matrix> brace;  // pairs i < j
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix m(n, n, p);
      for (int k = 0; k < n; ++k) {
        Vec rhs(n, 0);
        for (int l = 0; l < n; ++l)
          rhs[l] = static_cast<int32_t>(fp_norm(static_cast<int64_t>(lambda) * eps4(i, j, k, l), p));
        auto sol = solve(gram, rhs);
        if (!sol) throw std::logic_error("ots_dmu: gram solve failed");
        for (int r = 0; r < n; ++r) m.set(r, k, (*sol)[r]);
      }
      brace.push_back(std::move(m));
    }
  auto brace_of = [&](int i, int j) -> Matrix {
    if (i == j) return Matrix(n, n, p);
    int a = std::min(i, j), b = std::max(i, j);
    const Matrix& m = brace[static_cast<size_t>(a) * n - a * (a + 1) / 2 + (b - a - 1)];
    return i < j ? m : m.scaled(-1 + static_cast<int32_t>(p));
  };
  auto brace_eval = [&](const Vec& x, const Vec& y, const Vec& z) {
    Vec out(n, 0);
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (y[j] == 0 || i == j) continue;
        Vec mz = brace_of(i, j).apply(z);
        vec_axpy(out, fp_mul(x[i], y[j], p), mz, p);
      }
    }
    return out;
  };

  // mu from the first basis triple with invertible minor, then 20 seeded probes
  std::optional<int32_t> mu;
  for (int i = 0; i < n && !mu; ++i)
    for (int j = i + 1; j < n && !mu; ++j)
      for (int k = j + 1; k < n && !mu; ++k) {
        Matrix minor(3, 3, p);
        int idxs[3] = {i, j, k};
        for (int r = 0; r < 3; ++r)
          for (int s = 0; s < 3; ++s) minor.set(r, s, gram.at(idxs[r], idxs[s]));
        // det of 3x3
        int64_t det = 0;
        int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
        for (int t = 0; t < 6; ++t) {
          int64_t prod = static_cast<int64_t>(minor.at(0, perm[t][0])) *
                         minor.at(1, perm[t][1]) % p * minor.at(2, perm[t][2]);
          det += t < 3 ? prod : -prod;
        }
        det = fp_norm(det, p);
        if (det == 0) continue;
        Vec br = brace_of(i, j).apply(unit_vec(n, k));
        int64_t self = form.eval(br, br);
        mu = fp_mul(static_cast<int32_t>(self), fp_inv(det, p), p);
      }
  if (!mu) throw std::logic_error("ots_dmu: no invertible basis minor");
  Rng rng(0xd3u);
  for (int trial = 0; trial < 20; ++trial) {
    Vec a[3], b[3];
    for (int s = 0; s < 3; ++s) {
      a[s].assign(n, 0);
      b[s].assign(n, 0);
      for (int r = 0; r < n; ++r) {
        a[s][r] = rng.fp(p);
        b[s][r] = rng.fp(p);
      }
    }
    Vec ba = brace_eval(a[0], a[1], a[2]);
    Vec bb = brace_eval(b[0], b[1], b[2]);
    int64_t lhs = form.eval(ba, bb);
    Matrix mm(3, 3, p);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) mm.set(r, s, form.eval(a[r], b[s]));
    int64_t det = 0;
    int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    for (int t = 0; t < 6; ++t) {
      int64_t prod = static_cast<int64_t>(mm.at(0, perm[t][0])) * mm.at(1, perm[t][1]) % p *
                     mm.at(2, perm[t][2]);
      det += t < 3 ? prod : -prod;
    }
    if (lhs != fp_mul(*mu, static_cast<int32_t>(fp_norm(det, p)), p))
      throw std::logic_error("ots_dmu: mu inconsistent across probes");
  }

  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix m = brace_of(i, j);
      if (with_sigma) m = m + sigma_op(form, unit_vec(n, i), unit_vec(n, j));
      dtab.push_back(std::move(m));
    }
  std::string key = std::string("ots:dmu:lambda=") + std::to_string(lambda) +
                    (with_sigma ? "" : ":null");
  DmuSystem out{TripleSystem(p, n, with_sigma ? TsKind::OTS : TsKind::NullOTS, std::move(dtab),
                             with_sigma ? std::optional<BilinForm>(form) : std::nullopt, {}, key),
                *mu};
  out.system.meta()["mu"] = *mu;
  out.system = finish(std::move(out.system));
  return out;
}

TripleSystem ots_dalpha_tensor(int32_t alpha, int64_t p) {
  alpha = static_cast<int32_t>(fp_norm(alpha, p));
  if (alpha == 0) throw std::invalid_argument("ots_dalpha_tensor: alpha must be nonzero");
  Matrix g2m(2, 2, p);
  g2m.set(0, 1, 1);
  g2m.set(1, 0, -1);
  BilinForm f2(g2m, BilinForm::Symmetry::Alternating);
  const int n = 4;
  auto IDX = [](int q, int r) { return 2 * q + r; };
  int32_t one_plus = static_cast<int32_t>(fp_norm(1 + static_cast<int64_t>(alpha), p));
  bool null_case = one_plus == 0;

  auto dmat = [&](int A, int B) {
    int qa = A / 2, ra = A % 2, qb = B / 2, rb = B % 2;
    Matrix gam1 = gamma_op(f2, unit_vec(2, qa), unit_vec(2, qb));
    Matrix gam2 = gamma_op(f2, unit_vec(2, ra), unit_vec(2, rb));
    int32_t c2 = static_cast<int32_t>(f2.eval(unit_vec(2, ra), unit_vec(2, rb)));
    int32_t c1 = static_cast<int32_t>(f2.eval(unit_vec(2, qa), unit_vec(2, qb)));
    Matrix d(n, n, p);
    int32_t w1, w2;
    if (null_case) {
      // d = <x2|y2> gamma_{x1,y1} (x) 1 - <x1|y1> 1 (x) gamma_{x2,y2}
      w1 = c2;
      w2 = fp_neg(c1, p);
    } else {
      // d = -alpha <x2|y2> gamma_{x1,y1} (x) 1 + (1+alpha) <x1|y1> 1 (x) gamma_{x2,y2}
      w1 = fp_mul(fp_neg(alpha, p), c2, p);
      w2 = fp_mul(one_plus, c1, p);
    }
    for (int q = 0; q < 2; ++q)
      for (int c = 0; c < 2; ++c) {
        if (gam1.at(q, c) != 0)
          for (int r = 0; r < 2; ++r)
            d.set(IDX(q, r), IDX(c, r),
                  fp_add(d.at(IDX(q, r), IDX(c, r)), fp_mul(w1, static_cast<int32_t>(gam1.at(q, c)), p), p));
        if (gam2.at(q, c) != 0)
          for (int r = 0; r < 2; ++r)
            d.set(IDX(r, q), IDX(r, c),
                  fp_add(d.at(IDX(r, q), IDX(r, c)), fp_mul(w2, static_cast<int32_t>(gam2.at(q, c)), p), p));
      }
    return d;
  };

  std::vector<Matrix> dtab;
  for (int A = 0; A < n; ++A)
    for (int B = A + 1; B < n; ++B) dtab.push_back(dmat(A, B));
  std::string key = "ots:dalpha:alpha=" + std::to_string(alpha);
  if (null_case)
    return finish(TripleSystem(p, n, TsKind::NullOTS, std::move(dtab), std::nullopt,
                               {"va", "vb", "wa", "wb"}, key));
  Matrix g(n, n, p);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      int qa = A / 2, ra = A % 2, qb = B / 2, rb = B % 2;
      g.set(A, B, fp_norm(f2.gram.at(qa, qb) * static_cast<int64_t>(f2.gram.at(ra, rb)), p));
    }
  BilinForm form(g, BilinForm::Symmetry::Symmetric);
  return finish(TripleSystem(p, n, TsKind::OTS, std::move(dtab), form,
                             {"va", "vb", "wa", "wb"}, key));
}

TripleSystem ots_gtype(int32_t alpha, int64_t p) {
  if (p != 3) throw std::invalid_argument("ots_gtype: characteristic 3 construction");
  alpha = static_cast<int32_t>(fp_norm(alpha, p));
  if (alpha == 0) throw std::invalid_argument("ots_gtype: alpha must be nonzero");
  CompositionAlgebra C = make_composition(CompositionAlgebra::Kind::Octonion, p);
  // trace-zero basis: e0 - e7, a-slots, b-slots
  std::vector<Vec> basis;
  {
    Vec u(8, 0);
    u[0] = 1;
    u[7] = static_cast<int32_t>(p - 1);
    basis.push_back(u);
    for (int i = 1; i <= 6; ++i) basis.push_back(unit_vec(8, i));
  }
  const int n = 7;
  Matrix bmat_t = Matrix::from_rows(basis, p).transposed();
  auto coords = [&](const Vec& x) {
    auto c = solve(bmat_t, x);
    if (!c) throw std::logic_error("ots_gtype: element outside the trace-zero space");
    return *c;
  };
  auto comm = [&](const Vec& x, const Vec& y) {
    return vec_sub(C.mul(x, y), C.mul(y, x), p);
  };
  std::vector<Matrix> dtab;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec bij = comm(basis[i], basis[j]);
      Matrix d(n, n, p);
      for (int k = 0; k < n; ++k) {
        Vec v = coords(comm(bij, basis[k]));
        for (int r = 0; r < n; ++r) d.set(r, k, fp_mul(alpha, v[r], p));
      }
      dtab.push_back(std::move(d));
    }
  Matrix g(n, n, p);
  int32_t m2a = fp_mul(fp_neg(2 % p, p), alpha, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.set(i, j, fp_mul(m2a, static_cast<int32_t>(C.trace_mul(basis[i], basis[j])), p));
  BilinForm form(g, BilinForm::Symmetry::Symmetric);
  TripleSystem t = finish(TripleSystem(p, n, TsKind::OTS, std::move(dtab), form, {},
                                       "ots:gtype:alpha=" + std::to_string(alpha)));
  if (inder(t, false).dim() != 7) throw std::logic_error("ots_gtype: inder dimension != 7");
  return t;
}

TripleSystem ots_ftype() {
  const int64_t p = 3;
  CompositionAlgebra C = make_composition(CompositionAlgebra::Kind::Octonion, p);
  const int n = 8;
  const BilinForm b = C.norm_polar_form();

  auto X_of = [&](int s1, int s2, int s3, const Vec& x, const Vec& y, const Vec& z) {
    Vec out = C.mul(C.mul(x, C.conj(y)), z);
    auto signed_scale = [&](int s, int64_t coeff) {
      return static_cast<int32_t>(fp_norm(s * coeff, p));
    };
    vec_axpy(out, signed_scale(s1, b.eval(x, y)), z, p);
    vec_axpy(out, signed_scale(s2, b.eval(y, z)), x, p);
    vec_axpy(out, signed_scale(s3, b.eval(z, x)), y, p);
    return out;
  };

  const int signs[2] = {1, -1};
  for (int s1 : signs)
    for (int s2 : signs)
      for (int s3 : signs) {
        // (a) alternating on all basis triples
        bool alternating = true;
        std::vector<Vec> table(static_cast<size_t>(n) * n * n);
        for (int i = 0; i < n && alternating; ++i)
          for (int j = 0; j < n && alternating; ++j)
            for (int k = 0; k < n; ++k) {
              table[(static_cast<size_t>(i) * n + j) * n + k] =
                  X_of(s1, s2, s3, unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
            }
        auto at = [&](int i, int j, int k) -> const Vec& {
          return table[(static_cast<size_t>(i) * n + j) * n + k];
        };
        for (int i = 0; i < n && alternating; ++i)
          for (int j = 0; j < n && alternating; ++j)
            for (int k = 0; k < n && alternating; ++k) {
              if (at(i, j, k) != vec_scale(at(j, i, k), -1 + 3, p)) alternating = false;
              if (alternating && at(i, j, k) != vec_scale(at(i, k, j), -1 + 3, p))
                alternating = false;
            }
        if (!alternating) continue;
        // (b) determinant identity on 200 seeded random triples
        Rng rng(0xf17e);
        bool det_ok = true;
        for (int trial = 0; trial < 200 && det_ok; ++trial) {
          Vec a[3];
          for (int s = 0; s < 3; ++s) {
            a[s].assign(n, 0);
            for (int r = 0; r < n; ++r) a[s][r] = rng.fp(p);
          }
          Vec xa = X_of(s1, s2, s3, a[0], a[1], a[2]);
          int64_t lhs = b.eval(xa, xa);
          Matrix mm(3, 3, p);
          for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) mm.set(r, s, b.eval(a[r], a[s]));
          int64_t det = 0;
          int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
          for (int t = 0; t < 6; ++t) {
            int64_t prod = static_cast<int64_t>(mm.at(0, perm[t][0])) * mm.at(1, perm[t][1]) % p *
                           mm.at(2, perm[t][2]);
            det += t < 3 ? prod : -prod;
          }
          if (lhs != fp_norm(det, p)) det_ok = false;
        }
        if (!det_ok) continue;

        std::vector<Matrix> dtab;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            Matrix d(n, n, p);
            for (int k = 0; k < n; ++k)
              for (int r = 0; r < n; ++r) d.set(r, k, at(i, j, k)[r]);
            dtab.push_back(std::move(d));
          }
        TripleSystem t(p, n, TsKind::NullOTS, std::move(dtab), std::nullopt, {}, "ots:ftype");
        t.meta()["cross_signs"] = {s1, s2, s3};
        t = finish(std::move(t));
        if (inder(t, false).dim() != 21) throw std::logic_error("ots_ftype: inder != so_7");
        return t;
      }
  throw std::logic_error(
      "ots_ftype: no sign choice yields an alternating product with the determinant identity");
}

TripleSystem ots_jordan(const JordanAlgebra& J) {
  int64_t p = J.p;
  if (p != 3) throw std::invalid_argument("ots_jordan: characteristic 3 construction");
  if (J.variant != JordanAlgebra::Variant::Cubic || J.dim < 3)
    throw std::invalid_argument("ots_jordan: degree-3 algebra of dimension >= 3 required");
  int dj = J.dim;
  Matrix trow(1, dj, p);
  for (int i = 0; i < dj; ++i) trow.set(0, i, J.trace_vec[i]);
  Subspace j0 = rank_kernel(trow).kernel;
  if (!j0.contains(J.unit)) throw std::logic_error("ots_jordan: 1 not in J_0 (t(1) != 0?)");

  // quotient basis: greedy span seeded with the unit, remaining selected
  // vectors are the representatives
  std::vector<Vec> gens;
  gens.push_back(J.unit);
  for (int r = 0; r < j0.dim(); ++r) gens.push_back(j0.basis.row_vec(r));
  SpanBasis sb = span_and_coords(gens, p, dj);
  if (sb.dim() != j0.dim()) throw std::logic_error("ots_jordan: quotient basis failure");
  int n = sb.dim() - 1;
  std::vector<Vec> reps;
  for (int l = 1; l < sb.dim(); ++l) reps.push_back(sb.selected_rows.row_vec(l));
  auto project = [&](const Vec& v) {
    auto c = sb.coords(v);
    if (!c) throw std::logic_error("ots_jordan: vector escaped J_0");
    return Vec(c->begin() + 1, c->end());
  };

  auto build_table = [&](const std::vector<Vec>& rp) {
    std::vector<Matrix> dtab;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Matrix D = jordan_inner_derivation(J, rp[i], rp[j]);
        Matrix d(n, n, p);
        for (int k = 0; k < n; ++k) {
          Vec v = project(D.apply(rp[k]));
          for (int r = 0; r < n; ++r) d.set(r, k, v[r]);
        }
        dtab.push_back(std::move(d));
      }
    return dtab;
  };
  std::vector<Matrix> dtab = build_table(reps);
  // representative independence: shift every representative by the unit
  std::vector<Vec> shifted;
  for (const Vec& r : reps) shifted.push_back(vec_add(r, J.unit, p));
  if (build_table(shifted) != dtab)
    throw std::logic_error("ots_jordan: induced product depends on representatives");

  Matrix g(n, n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.set(i, j, J.trace_form(reps[i], reps[j]));
  if (rref(g).rank != n) throw std::invalid_argument("ots_jordan: induced trace form degenerate");
  BilinForm form(g, BilinForm::Symmetry::Symmetric);
  return finish(TripleSystem(p, n, TsKind::OTS, std::move(dtab), form, {},
                             "ots:jordan[" + J.name + "]"));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

int64_t param_of(const std::vector<std::string>& toks, const std::string& name,
                 std::optional<int64_t> fallback = std::nullopt) {
  for (const auto& t : toks) {
    auto kv = split(t, '=');
    if (kv.size() == 2 && kv[0] == name) return std::stoll(kv[1]);
  }
  if (fallback) return *fallback;
  throw std::invalid_argument("catalog key: missing parameter '" + name + "'");
}

bool has_flag(const std::vector<std::string>& toks, const std::string& name) {
  for (const auto& t : toks)
    if (t == name) return true;
  return false;
}

JordanAlgebra jordan_of(const std::string& which, int64_t p,
                        const std::vector<std::string>& toks) {
  using K = CompositionAlgebra::Kind;
  if (which == "h3_k") return make_h3(make_composition(K::Unit, p));
  if (which == "h3_kk") return make_h3(make_composition(K::Binarion, p));
  if (which == "h3_quat") return make_h3(make_composition(K::Quaternion, p));
  if (which == "h3_oct") return make_h3(make_composition(K::Octonion, p));
  if (which == "jordq" || which == "kjordq") {
    int m = static_cast<int>(param_of(toks, "dimw"));
    Matrix gw = Matrix::identity(m, p);
    return which == "jordq" ? make_jordq(m, gw, p) : make_k_plus_jordq(m, gw, p);
  }
  throw std::invalid_argument("catalog key: unknown Jordan algebra '" + which + "'");
}

}  // namespace

TripleSystem build_from_key(const std::string& key, int64_t p) {
  auto toks = split(key, ':');
  if (toks.size() < 2) throw std::invalid_argument("catalog key: '" + key + "'");
  const std::string& family = toks[0];
  const std::string& variant = toks[1];
  if (family == "sts") {
    if (variant == "dim2") {
      if (toks.size() < 3) throw std::invalid_argument("catalog key: dim2 needs a case");
      TripleSystem t = toks[2] == "i"
                           ? sts_dim2_case_i(static_cast<int32_t>(param_of(toks, "alpha")), p)
                           : sts_dim2_case_ii(static_cast<int32_t>(param_of(toks, "eps")), p);
      if (has_flag(toks, "null")) return as_null(t);
      return t;
    }
    if (variant == "sts8") {
      if (p != 3) throw std::invalid_argument("sts8 lives over GF(3)");
      return sts8();
    }
    if (variant == "jordan") {
      if (toks.size() < 3) throw std::invalid_argument("catalog key: jordan needs an algebra");
      return sts_from_jordan(jordan_of(toks[2], p, toks));
    }
    if (variant == "classical") {
      if (toks.size() < 3) throw std::invalid_argument("catalog key: classical needs a family");
      const std::string& which = toks[2];
      if (which == "symplectic") return sts_symplectic(static_cast<int>(param_of(toks, "n")), p);
      if (which == "special") return sts_special(static_cast<int>(param_of(toks, "m")), p);
      if (which == "orthogonal") {
        int m = static_cast<int>(param_of(toks, "m"));
        return sts_orthogonal(m, Matrix::identity(m, p), p);
      }
      if (which == "g2") return sts_g2(p);
    }
  } else if (family == "ots") {
    if (variant == "classical") {
      if (toks.size() < 3) throw std::invalid_argument("catalog key: classical needs a family");
      const std::string& which = toks[2];
      if (which == "orthogonal") {
        int n = static_cast<int>(param_of(toks, "n"));
        return ots_orthogonal(n, Matrix::identity(n, p), p);
      }
      if (which == "unitarian") return ots_unitarian_split(static_cast<int>(param_of(toks, "m")), p);
      if (which == "symplectic") return ots_symplectic_split(static_cast<int>(param_of(toks, "m")), p);
    }
    if (variant == "dmu") {
      Matrix gram = Matrix::identity(4, p);
      for (const auto& t : toks) {
        auto kv = split(t, '=');
        if (kv.size() == 2 && kv[0] == "gram") {
          auto entries = split(kv[1], ',');
          if (entries.size() != 4) throw std::invalid_argument("dmu gram: 4 diagonal entries");
          for (int i = 0; i < 4; ++i) gram.set(i, i, std::stoll(entries[i]));
        }
      }
      return ots_dmu(static_cast<int32_t>(param_of(toks, "lambda")), gram,
                     !has_flag(toks, "null"), p)
          .system;
    }
    if (variant == "dalpha")
      return ots_dalpha_tensor(static_cast<int32_t>(param_of(toks, "alpha")), p);
    if (variant == "gtype") return ots_gtype(static_cast<int32_t>(param_of(toks, "alpha")), p);
    if (variant == "ftype") {
      if (p != 3) throw std::invalid_argument("ots:ftype lives over GF(3)");
      return ots_ftype();
    }
    if (variant == "jordan") {
      if (toks.size() < 3) throw std::invalid_argument("catalog key: jordan needs an algebra");
      return ots_jordan(jordan_of(toks[2], p, toks));
    }
  }
  throw std::invalid_argument("catalog key: unknown key '" + key + "'");
}

std::vector<std::string> catalog_key_examples() {
  return {
      "sts:dim2:i:alpha=1",         "sts:dim2:ii:eps=1",
      "sts:dim2:ii:eps=1:null",     "sts:sts8",
      "sts:jordan:h3_k",            "sts:jordan:h3_kk",
      "sts:jordan:h3_quat",         "sts:jordan:h3_oct",
      "sts:jordan:kjordq:dimw=3",   "sts:jordan:jordq:dimw=3",
      "sts:classical:symplectic:n=4", "sts:classical:special:m=3",
      "sts:classical:orthogonal:m=3", "sts:classical:g2",
      "ots:classical:orthogonal:n=4", "ots:classical:unitarian:m=3",
      "ots:classical:symplectic:m=2", "ots:dmu:lambda=1",
      "ots:dmu:lambda=1:null",      "ots:dmu:lambda=1:gram=1,1,1,2",
      "ots:dalpha:alpha=1",         "ots:dalpha:alpha=2",
      "ots:gtype:alpha=1",          "ots:ftype",
      "ots:jordan:h3_k",            "ots:jordan:h3_kk",
      "ots:jordan:h3_quat",         "ots:jordan:h3_oct",
  };
}

CartanReport verify_Leps_cartan(int32_t eps) {
  const int64_t p = 3;
  eps = static_cast<int32_t>(fp_norm(eps, p));
  if (eps == 0) throw std::invalid_argument("verify_Leps_cartan: eps must be nonzero");
  TripleSystem t = sts_dim2_case_ii(eps, p);
  GradedAlgebra g = build_g_sts(t);
  InderResult ind = inder(t, false);
  const int N = 10, inder_off = 3, odd = 6;
  // odd block: v@a = 6, v@b = 7, w@a = 8, w@b = 9
  const BilinForm& f2 = *t.form();
  Vec ea{1, 0}, eb{0, 1};
  auto inder_vec = [&](const Matrix& op, int32_t scale) {
    auto c = ind.coords(op);
    if (!c) throw std::logic_error("verify_Leps_cartan: operator outside inder");
    Vec v(N, 0);
    for (int l = 0; l < 3; ++l) v[inder_off + l] = fp_mul(scale, (*c)[l], p);
    return v;
  };
  // e1, f1, h1 must form an sl2 triple: f1 carries the same 1/2 as e1,
  // otherwise [e1, f1] = 2 h1.
  Vec e1 = inder_vec(psi_op(f2, ea, ea), fp_half(p));
  Vec f1 = inder_vec(psi_op(f2, eb, eb), fp_neg(fp_half(p), p));
  Vec h1 = inder_vec(psi_op(f2, ea, eb), fp_neg(1, p));
  Vec e2(N, 0);
  e2[odd + 1] = 1;  // v @ b
  Vec f2v(N, 0);
  f2v[odd + 2] = fp_neg(1, p);  // -w @ a
  Vec h2 = inder_vec(psi_op(f2, ea, eb), eps);
  h2[1] = 1;  // gamma_{v,w}

  CartanReport report;
  auto expect = [&](const char* name, const Vec& got, const Vec& want) {
    if (got != want) {
      report.pass = false;
      report.failures.push_back(name);
    }
  };
  expect("h1 = [e1,f1]", g.bracket(e1, f1), h1);
  expect("h2 = [e2,f2]", g.bracket(e2, f2v), h2);
  expect("[h1,e1] = 2e1", g.bracket(h1, e1), vec_scale(e1, 2 % p, p));
  expect("[h1,e2] = -e2", g.bracket(h1, e2), vec_scale(e2, fp_neg(1, p), p));
  expect("[h2,e1] = -2 eps e1", g.bracket(h2, e1), vec_scale(e1, fp_neg(fp_mul(2 % p, eps, p), p), p));
  expect("[h2,e2] = (eps-1) e2", g.bracket(h2, e2), vec_scale(e2, fp_sub(eps, 1, p), p));
  return report;
}

}  // namespace trisys
