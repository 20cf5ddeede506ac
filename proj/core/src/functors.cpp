#include "trisys/functors.hpp"

#include <stdexcept>

namespace trisys {

namespace {

// The auxiliary 2-dim symplectic space V with basis {v, w}, <v|w> = 1, and
// sp(V) in its gamma basis {gamma_vv, gamma_vw, gamma_ww}.
struct SpV {
  int64_t p;
  BilinForm form;           // [[0,1],[-1,0]]
  std::vector<Matrix> ops;  // the three gamma operators as 2x2 matrices
  SpanBasis span;           // coords in the gamma basis

  explicit SpV(int64_t p_) : p(p_) {
    Matrix g(2, 2, p_);
    g.set(0, 1, 1);
    g.set(1, 0, -1);
    form = BilinForm(g, BilinForm::Symmetry::Alternating);
    Vec v{1, 0}, w{0, 1};
    ops = {gamma_op(form, v, v), gamma_op(form, v, w), gamma_op(form, w, w)};
    std::vector<Vec> flats;
    for (const Matrix& m : ops) flats.push_back(m.flatten());
    span = span_and_coords(flats, p_, 4);
    if (span.dim() != 3) throw std::logic_error("sp(V): gamma basis degenerate");
  }

  Vec coords(const Matrix& m) const {
    auto c = span.coords(m.flatten());
    if (!c) throw std::logic_error("sp(V): operator outside the span");
    return *c;
  }
};

void require_axioms(const TripleSystem& t, const char* who) {
  if (t.axioms_verified()) return;
  AxiomReport rep = check_axioms(t);
  if (!rep.pass())
    throw std::invalid_argument(std::string(who) + ": input fails its identity set (" +
                                std::to_string(rep.violations.size()) + " violations)");
}

struct TableBuilder {
  int n;
  std::vector<SparseVec> tab;

  explicit TableBuilder(int n_) : n(n_), tab(static_cast<size_t>(n_) * (n_ + 1) / 2) {}

  void set(int i, int j, SparseVec sv) {
    tab[GradedAlgebra::pair_index(i, j, n)] = std::move(sv);
  }
  void set_dense(int i, int j, const Vec& v) { set(i, j, SparseVec::from_dense(v)); }
};

// Shared even-block wiring for layouts that carry an inder block: fills
// [inder, inder] brackets and returns the block offset bookkeeping.
void fill_inder_brackets(TableBuilder& tb, const InderResult& ind, int inder_off, int n_total) {
  int m = ind.dim();
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const Vec& c = ind.comm(a, b);
      Vec dense(n_total, 0);
      for (int l = 0; l < m; ++l) dense[inder_off + l] = c[l];
      tb.set_dense(inder_off + a, inder_off + b, dense);
    }
}

nlohmann::json make_provenance(const char* functor, const TripleSystem& t,
                               const InderResult& ind, int sp_off, int inder_off,
                               int odd_off, int odd_blocks, int sign_d) {
  nlohmann::json prov;
  prov["functor"] = functor;
  prov["source"] = {{"kind", ts_kind_name(t.kind())},
                    {"dim", t.dim()},
                    {"p", t.p()},
                    {"key", t.key()}};
  if (!t.meta().empty()) prov["source_meta"] = t.meta();
  prov["layout"] = {{"sp", sp_off},
                    {"inder", inder_off},
                    {"inder_dim", ind.dim()},
                    {"odd", odd_off},
                    {"odd_blocks", odd_blocks},
                    {"sign_d", sign_d}};
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [a, b] : ind.selected_pairs) pairs.push_back({a, b});
  prov["inder_pairs"] = pairs;
  return prov;
}

std::vector<std::string> block_labels(const TripleSystem& t, const InderResult& ind,
                                      bool with_sp, int odd_blocks) {
  std::vector<std::string> labels;
  if (with_sp) {
    labels.push_back("gamma(v,v)");
    labels.push_back("gamma(v,w)");
    labels.push_back("gamma(w,w)");
  }
  for (auto [a, b] : ind.selected_pairs)
    labels.push_back("d(" + t.labels()[a] + "," + t.labels()[b] + ")");
  const char* tensor_name[2] = {"v@", "w@"};
  if (odd_blocks == 1) {
    for (int i = 0; i < t.dim(); ++i) labels.push_back(t.labels()[i]);
  } else {
    for (int b = 0; b < odd_blocks; ++b)
      for (int i = 0; i < t.dim(); ++i) labels.push_back(tensor_name[b] + t.labels()[i]);
  }
  return labels;
}

// Builds the full g(T) = (sp(V) + inder(T)) + V@T algebra; sign_d = +1 for
// the STS version (a Lie algebra), -1 for the OTS version (a superalgebra).
GradedAlgebra build_g_full(const TripleSystem& t, int sign_d) {
  const char* who = sign_d > 0 ? "build_g_sts" : "build_g_ots";
  require_axioms(t, who);
  int64_t p = t.p();
  int n = t.dim();
  SpV sp(p);
  InderResult ind = inder(t, true);
  int m = ind.dim();
  int n0 = 3 + m;
  int n1 = 2 * n;
  int N = n0 + n1;
  int inder_off = 3;
  int off_v = n0, off_w = n0 + n;
  TableBuilder tb(N);

  // sp(V) internal brackets, coordinatized in the gamma basis
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      Matrix comm = sp.ops[a] * sp.ops[b] - sp.ops[b] * sp.ops[a];
      Vec c = sp.coords(comm);
      Vec dense(N, 0);
      for (int l = 0; l < 3; ++l) dense[l] = c[l];
      tb.set_dense(a, b, dense);
    }
  // [sp(V), inder] = 0 (direct sum of ideals); nothing to store.
  fill_inder_brackets(tb, ind, inder_off, N);

  // sp(V) action on V@T: [s, u@x] = s(u)@x
  for (int a = 0; a < 3; ++a) {
    const Matrix& s = sp.ops[a];
    for (int i = 0; i < n; ++i) {
      Vec dense(N, 0);
      // s(v) = s[0][0] v + s[1][0] w ; s(w) = s[0][1] v + s[1][1] w
      dense[off_v + i] = s.at(0, 0);
      dense[off_w + i] = s.at(1, 0);
      tb.set_dense(a, off_v + i, dense);
      Vec dense2(N, 0);
      dense2[off_v + i] = s.at(0, 1);
      dense2[off_w + i] = s.at(1, 1);
      tb.set_dense(a, off_w + i, dense2);
    }
  }
  // inder action: [d, u@x] = u@d(x)
  for (int l = 0; l < m; ++l) {
    const Matrix& dop = ind.basis_ops[l];
    for (int i = 0; i < n; ++i) {
      Vec dense(N, 0);
      for (int r = 0; r < n; ++r) dense[off_v + r] = dop.at(r, i);
      tb.set_dense(inder_off + l, off_v + i, dense);
      Vec dense2(N, 0);
      for (int r = 0; r < n; ++r) dense2[off_w + r] = dop.at(r, i);
      tb.set_dense(inder_off + l, off_w + i, dense2);
    }
  }
  // odd-odd: [u@x, u'@y] = (x|y) gamma_{u,u'} + sign_d <u|u'> d_{x,y}
  const Matrix& G = t.form()->gram;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      int32_t f = G.at(i, j);
      if (f != 0) {
        Vec dense(N, 0);
        dense[0] = f;  // gamma_vv
        tb.set_dense(off_v + i, off_v + j, dense);
        Vec dense2(N, 0);
        dense2[2] = f;  // gamma_ww
        tb.set_dense(off_w + i, off_w + j, dense2);
      }
    }
    for (int j = 0; j < n; ++j) {
      // pair (v@e_i, w@e_j): <v|w> = 1
      Vec dense(N, 0);
      dense[1] = G.at(i, j);  // gamma_vw coefficient
      auto c = ind.coords(t.d_matrix(i, j));
      if (!c) throw std::logic_error(std::string(who) + ": d operator escaped inder span");
      for (int l = 0; l < m; ++l)
        dense[inder_off + l] = sign_d > 0 ? (*c)[l] : fp_neg((*c)[l], p);
      tb.set_dense(off_v + i, off_w + j, dense);
    }
  }

  AlgKind kind = sign_d > 0 ? AlgKind::Lie : AlgKind::SuperLie;
  nlohmann::json prov =
      make_provenance(sign_d > 0 ? "g_sts" : "g_ots", t, ind, 0, inder_off, off_v, 2, sign_d);
  return GradedAlgebra(p, n0, n1, kind, std::move(tb.tab),
                       block_labels(t, ind, true, 2), std::move(prov));
}

// inder(T) + T with [x, y] = d_{x,y}.
GradedAlgebra build_gtilde(const TripleSystem& t, bool super, bool force_any_char,
                           const char* who) {
  require_axioms(t, who);
  if (t.p() != 3 && !force_any_char)
    throw std::invalid_argument(std::string(who) + ": requires characteristic 3");
  int64_t p = t.p();
  int n = t.dim();
  InderResult ind = inder(t, true);
  int m = ind.dim();
  int N = m + n;
  TableBuilder tb(N);
  fill_inder_brackets(tb, ind, 0, N);
  for (int l = 0; l < m; ++l) {
    const Matrix& dop = ind.basis_ops[l];
    for (int i = 0; i < n; ++i) {
      Vec dense(N, 0);
      for (int r = 0; r < n; ++r) dense[m + r] = dop.at(r, i);
      tb.set_dense(l, m + i, dense);
    }
  }
  bool strict = t.pairs_strict();
  for (int i = 0; i < n; ++i)
    for (int j = strict ? i + 1 : i; j < n; ++j) {
      auto c = ind.coords(t.d_matrix(i, j));
      if (!c) throw std::logic_error(std::string(who) + ": d operator escaped inder span");
      Vec dense(N, 0);
      for (int l = 0; l < m; ++l) dense[l] = (*c)[l];
      tb.set_dense(m + i, m + j, dense);
    }
  nlohmann::json prov = make_provenance(super ? "gtilde_sts" : "gtilde_ots", t, ind,
                                        -1, 0, m, 1, 1);
  return GradedAlgebra(p, m, n, super ? AlgKind::SuperLie : AlgKind::Lie,
                       std::move(tb.tab), block_labels(t, ind, false, 1), std::move(prov));
}

}  // namespace

GradedAlgebra build_g_sts(const TripleSystem& t) {
  if (t.kind() != TsKind::STS) throw std::invalid_argument("build_g_sts: STS input required");
  return build_g_full(t, 1);
}

GradedAlgebra build_g_ots(const TripleSystem& t) {
  if (t.kind() != TsKind::OTS) throw std::invalid_argument("build_g_ots: OTS input required");
  return build_g_full(t, -1);
}

GradedAlgebra build_gtilde_sts(const TripleSystem& t, bool force_any_char) {
  if (t.kind() != TsKind::STS)
    throw std::invalid_argument("build_gtilde_sts: STS input required");
  return build_gtilde(t, true, force_any_char, "build_gtilde_sts");
}

GradedAlgebra build_gtilde_ots(const TripleSystem& t, bool force_any_char) {
  if (t.kind() != TsKind::OTS && t.kind() != TsKind::NullOTS)
    throw std::invalid_argument("build_gtilde_ots: OTS or null OTS input required");
  return build_gtilde(t, false, force_any_char, "build_gtilde_ots");
}

GradedAlgebra build_g_null(const TripleSystem& t) {
  bool sts = t.kind() == TsKind::NullSTS;
  if (!sts && t.kind() != TsKind::NullOTS)
    throw std::invalid_argument("build_g_null: null system required");
  require_axioms(t, "build_g_null");
  int64_t p = t.p();
  int n = t.dim();
  InderResult ind = inder(t, true);
  int m = ind.dim();
  int N = m + 2 * n;
  int off_v = m, off_w = m + n;
  TableBuilder tb(N);
  fill_inder_brackets(tb, ind, 0, N);
  for (int l = 0; l < m; ++l) {
    const Matrix& dop = ind.basis_ops[l];
    for (int i = 0; i < n; ++i) {
      Vec dense(N, 0);
      for (int r = 0; r < n; ++r) dense[off_v + r] = dop.at(r, i);
      tb.set_dense(l, off_v + i, dense);
      Vec dense2(N, 0);
      for (int r = 0; r < n; ++r) dense2[off_w + r] = dop.at(r, i);
      tb.set_dense(l, off_w + i, dense2);
    }
  }
  // [u@x, u'@y] = <u|u'> d_{x,y}: only (v,w) pairs contribute
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [sign, dm] = t.d_basis(i, j);
      if (!dm) continue;
      auto c = ind.coords(sign == 1 ? *dm : dm->scaled(sign));
      if (!c) throw std::logic_error("build_g_null: d operator escaped inder span");
      if (vec_is_zero(*c)) continue;
      Vec dense(N, 0);
      for (int l = 0; l < m; ++l) dense[l] = (*c)[l];
      tb.set_dense(off_v + i, off_w + j, dense);
    }
  nlohmann::json prov = make_provenance("g_null", t, ind, -1, 0, off_v, 2, 1);
  // Null STS gives a Z2-graded Lie algebra; null OTS a Lie superalgebra.
  return GradedAlgebra(p, m, 2 * n, sts ? AlgKind::Lie : AlgKind::SuperLie,
                       std::move(tb.tab), block_labels(t, ind, false, 2), std::move(prov));
}

RoundtripReport verify_roundtrip(const GradedAlgebra& g, const TripleSystem& t) {
  RoundtripReport report;
  auto fail = [&](const std::string& msg) {
    report.pass = false;
    report.mismatches.push_back(msg);
  };
  const nlohmann::json& prov = g.provenance();
  if (!prov.contains("functor") || !prov.contains("layout")) {
    fail("missing provenance");
    return report;
  }
  std::string functor = prov["functor"];
  const auto& layout = prov["layout"];
  int inder_off = layout["inder"];
  int m = layout["inder_dim"];
  int odd_off = layout["odd"];
  int odd_blocks = layout["odd_blocks"];
  int sign_d = layout["sign_d"];
  int n = t.dim();
  int64_t p = t.p();

  InderResult ind = inder(t, false);
  if (ind.dim() != m) {
    fail("inder dimension mismatch");
    return report;
  }

  bool has_sp = functor == "g_sts" || functor == "g_ots";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // odd-odd bracket carrying the pair (i, j): [v@e_i, w@e_j] for two-block
      // layouts, [e_i, e_j] for the tilde layouts.
      int gi, gj;
      if (odd_blocks == 2) {
        gi = odd_off + i;
        gj = odd_off + n + j;
      } else {
        if (j < i) continue;
        gi = odd_off + i;
        gj = odd_off + j;
      }
      Vec br = g.bracket_basis_dense(gi, gj);
      if (has_sp) {
        int32_t coeff = br[1];  // gamma_vw
        if (coeff != t.form()->gram.at(i, j))
          fail("form entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (br[0] != 0 || br[2] != 0)
          fail("stray gamma component at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      // reconstruct the d operator from the inder coordinates
      Matrix rec(n, n, p);
      for (int l = 0; l < m; ++l) {
        int32_t c = br[inder_off + l];
        if (c == 0) continue;
        if (sign_d < 0) c = fp_neg(c, p);
        const Matrix& B = ind.basis_ops[l];
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s)
            rec.set(r, s, rec.at(r, s) + static_cast<int64_t>(c) * B.at(r, s));
      }
      Matrix expect = t.d_matrix(i, j);
      if (!(rec == expect))
        fail("d operator (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (!report.pass && report.mismatches.size() > 16) return report;
    }
  return report;
}

}  // namespace trisys
