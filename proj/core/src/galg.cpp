#include "trisys/galg.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "trisys/par.hpp"

namespace trisys {

SparseVec SparseVec::from_dense(const Vec& v) {
  SparseVec s;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.terms.emplace_back(static_cast<int32_t>(i), v[i]);
  return s;
}

Vec SparseVec::to_dense(int n) const {
  Vec v(n, 0);
  for (auto& [i, c] : terms) v[i] = c;
  return v;
}

void SparseVec::add_into(Vec& acc, int32_t c, int64_t p) const {
  if (c == 0) return;
  for (auto& [i, v] : terms) acc[i] = fp_add(acc[i], fp_mul(c, v, p), p);
}

size_t GradedAlgebra::pair_index(int i, int j, int n) {
  // triangular layout over i <= j
  return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
}

GradedAlgebra::GradedAlgebra(int64_t p, int n0, int n1, AlgKind kind,
                             std::vector<SparseVec> table,
                             std::vector<std::string> labels, nlohmann::json provenance)
    : p_(p), n0_(n0), n1_(n1), kind_(kind), tab_(std::move(table)),
      labels_(std::move(labels)), prov_(std::move(provenance)) {
  require_odd_prime(p);
  int n = n0 + n1;
  size_t want = static_cast<size_t>(n) * (n + 1) / 2;
  if (tab_.size() != want) throw std::invalid_argument("GradedAlgebra: table size");
  if (labels_.empty()) {
    labels_.reserve(n);
    for (int i = 0; i < n; ++i) labels_.push_back("e" + std::to_string(i));
  }
  if (static_cast<int>(labels_.size()) != n)
    throw std::invalid_argument("GradedAlgebra: labels size");
  // structural invariants: coefficient range, parity conservation, diagonal rule
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const SparseVec& sv = tab_[pair_index(i, j, n)];
      bool parity = odd_index(i) ^ odd_index(j);
      int prev = -1;
      for (auto& [k, c] : sv.terms) {
        if (k <= prev || k >= n) throw std::invalid_argument("GradedAlgebra: bad index");
        prev = k;
        if (c <= 0 || c >= p) throw std::invalid_argument("GradedAlgebra: coefficient range");
        if (odd_index(k) != parity)
          throw std::invalid_argument("GradedAlgebra: parity violated at [" +
                                      std::to_string(i) + "," + std::to_string(j) + "]");
      }
      if (i == j && !sv.empty()) {
        bool diag_allowed = kind_ == AlgKind::SuperLie && odd_index(i);
        if (!diag_allowed)
          throw std::invalid_argument("GradedAlgebra: nonzero [e_i, e_i]");
      }
    }
  }
}

std::pair<int32_t, const SparseVec*> GradedAlgebra::basis_bracket(int i, int j) const {
  int n = dim();
  if (i <= j) return {1, &tab_[pair_index(i, j, n)]};
  // completion rule
  int32_t sign = static_cast<int32_t>(p_ - 1);
  if (kind_ == AlgKind::SuperLie && odd_index(i) && odd_index(j)) sign = 1;
  return {sign, &tab_[pair_index(j, i, n)]};
}

Vec GradedAlgebra::bracket_basis_dense(int i, int j) const {
  Vec v(dim(), 0);
  auto [sign, sv] = basis_bracket(i, j);
  sv->add_into(v, sign, p_);
  return v;
}

Vec GradedAlgebra::bracket(const Vec& x, const Vec& y) const {
  int n = dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw std::invalid_argument("bracket: dimension mismatch");
  Vec acc(n, 0);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == 0) continue;
      auto [sign, sv] = basis_bracket(i, j);
      int32_t c = fp_mul(fp_mul(x[i], y[j], p_), sign, p_);
      sv->add_into(acc, c, p_);
    }
  }
  return acc;
}

Matrix GradedAlgebra::ad_matrix(int i) const {
  int n = dim();
  Matrix m(n, n, p_);
  for (int j = 0; j < n; ++j) {
    auto [sign, sv] = basis_bracket(i, j);
    for (auto& [k, c] : sv->terms) m.set(k, j, fp_mul(sign, c, p_));
  }
  return m;
}

namespace {

// One worker's view of a Jacobi sweep over a contiguous range of i-values.
struct SweepChunk {
  std::vector<std::array<int, 3>> violations;
  int64_t checked = 0;
};

// Shared sweep body. super = use the sign-twisted identity.
JacobiReport jacobi_sweep(const GradedAlgebra& g, bool super, size_t max_violations) {
  int n = g.dim();
  int64_t p = g.p();
  int32_t minus1 = static_cast<int32_t>(p - 1);

  std::vector<SweepChunk> chunks(worker_count());
  parallel_chunks(n, [&](int64_t ibegin, int64_t iend, int chunk_id) {
    SweepChunk& out = chunks[chunk_id];
    Vec acc(n, 0);
    std::vector<int> touched;
    touched.reserve(64);
    auto accumulate = [&](int32_t outer, const SparseVec& first, int k) {
      // acc += outer * [first, e_k]
      for (auto& [l, c] : first.terms) {
        auto [s2, sv2] = g.basis_bracket(l, k);
        int32_t cc = fp_mul(fp_mul(outer, c, p), s2, p);
        if (cc == 0) continue;
        for (auto& [m, v] : sv2->terms) {
          if (acc[m] == 0) touched.push_back(m);
          acc[m] = fp_add(acc[m], fp_mul(cc, v, p), p);
        }
      }
    };
    for (int i = static_cast<int>(ibegin); i < iend; ++i) {
      for (int j = i; j < n; ++j) {
        auto [sij, bij] = g.basis_bracket(i, j);
        for (int k = j; k < n; ++k) {
          auto [sjk, bjk] = g.basis_bracket(j, k);
          auto [ski, bki] = g.basis_bracket(k, i);
          int32_t w1 = sij, w2 = sjk, w3 = ski;
          if (super) {
            // (-1)^{|i||k|}[[i,j],k] + (-1)^{|j||i|}[[j,k],i] + (-1)^{|k||j|}[[k,i],j]
            if (g.odd_index(i) && g.odd_index(k)) w1 = fp_mul(w1, minus1, p);
            if (g.odd_index(j) && g.odd_index(i)) w2 = fp_mul(w2, minus1, p);
            if (g.odd_index(k) && g.odd_index(j)) w3 = fp_mul(w3, minus1, p);
          }
          accumulate(w1, *bij, k);
          accumulate(w2, *bjk, i);
          accumulate(w3, *bki, j);
          ++out.checked;
          bool bad = false;
          for (int m : touched)
            if (acc[m] != 0) {
              bad = true;
              break;
            }
          if (bad && out.violations.size() < max_violations)
            out.violations.push_back({i, j, k});
          for (int m : touched) acc[m] = 0;
          touched.clear();
        }
      }
    }
  });

  JacobiReport report;
  for (auto& c : chunks) {
    report.triples_checked += c.checked;
    for (auto& v : c.violations) {
      if (report.violations.size() >= max_violations) {
        report.truncated = true;
        break;
      }
      report.violations.push_back(v);
    }
  }
  return report;
}

}  // namespace

JacobiReport check_jacobi(const GradedAlgebra& g, size_t max_violations) {
  if (g.kind() != AlgKind::Lie)
    throw std::invalid_argument("check_jacobi: kind must be lie");
  return jacobi_sweep(g, false, max_violations);
}

JacobiReport check_super_jacobi(const GradedAlgebra& g, size_t max_violations) {
  if (g.kind() != AlgKind::SuperLie)
    throw std::invalid_argument("check_super_jacobi: kind must be superlie");
  return jacobi_sweep(g, true, max_violations);
}

Subspace center(const GradedAlgebra& g) {
  int n = g.dim();
  int64_t p = g.p();
  // K holds a basis (rows) of the current candidate space; intersect with
  // ker(ad e_i) one generator at a time. Shrinks to its final value quickly.
  Matrix K = Matrix::identity(n, p);
  for (int i = 0; i < n && K.rows() > 0; ++i) {
    Matrix ad = g.ad_matrix(i);
    // rows of K span candidates x; keep combos with ad(x) = 0... note
    // ad_matrix(i) columns are [e_i, e_j], so ad * x = [e_i, x] = -[x, e_i].
    Matrix img(K.rows(), n, p);
    for (int r = 0; r < K.rows(); ++r) {
      Vec y = ad.apply(K.row_vec(r));
      for (int j = 0; j < n; ++j) img.set(r, j, y[j]);
    }
    RankKernel rk = rank_kernel(img.transposed());
    // kernel of img^T gives coefficient combos c with sum c_r row_r in ker ad
    const Subspace& combos = rk.kernel;
    Matrix next(combos.dim(), n, p);
    for (int r = 0; r < combos.dim(); ++r) {
      Vec c = combos.basis.row_vec(r);
      Vec x(n, 0);
      for (int l = 0; l < K.rows(); ++l) vec_axpy(x, c[l], K.row_vec(l), p);
      for (int j = 0; j < n; ++j) next.set(r, j, x[j]);
    }
    K = std::move(next);
  }
  std::vector<Vec> rows;
  for (int r = 0; r < K.rows(); ++r) rows.push_back(K.row_vec(r));
  return Subspace::from_vectors(rows, p, n);
}

Subspace derived_subalgebra(const GradedAlgebra& g) {
  int n = g.dim();
  IncrementalSpan span(n, g.p());
  for (int i = 0; i < n && span.dim() < n; ++i)
    for (int j = i; j < n && span.dim() < n; ++j) {
      const SparseVec& sv = g.stored(i, j);
      if (sv.empty()) continue;
      span.insert(sv.to_dense(n));
    }
  return span.to_subspace();
}

Subspace ideal_closure(const GradedAlgebra& g, const Subspace& seed) {
  int n = g.dim();
  if (seed.ambient != n) throw std::invalid_argument("ideal_closure: ambient mismatch");
  int64_t p = g.p();
  IncrementalSpan span(n, p);
  std::vector<Vec> queue;
  for (int r = 0; r < seed.dim(); ++r) {
    Vec v = seed.basis.row_vec(r);
    if (span.insert(v)) queue.push_back(std::move(v));
  }
  while (!queue.empty() && span.dim() < n) {
    Vec v = std::move(queue.back());
    queue.pop_back();
    for (int i = 0; i < n && span.dim() < n; ++i) {
      Vec w(n, 0);
      for (size_t t = 0; t < v.size(); ++t) {
        if (v[t] == 0) continue;
        auto [sign, sv] = g.basis_bracket(i, static_cast<int>(t));
        sv->add_into(w, fp_mul(sign, v[t], p), p);
      }
      if (!vec_is_zero(w) && span.insert(w)) queue.push_back(std::move(w));
    }
  }
  return span.to_subspace();
}

KillingForm killing_form(const GradedAlgebra& g) {
  int n = g.dim();
  int64_t p = g.p();
  // str(ad_i ad_j) = sum_a sign(a) sum_b ad_i[a][b] ad_j[b][a].
  // One dense ad_j at a time; ad_i is walked sparsely through the table.
  KillingForm out;
  out.gram = Matrix(n, n, p);
  bool super = g.kind() == AlgKind::SuperLie;
  for (int j = 0; j < n; ++j) {
    Matrix adj = g.ad_matrix(j);
    for (int i = 0; i <= j; ++i) {
      int64_t acc = 0;
      for (int b = 0; b < n; ++b) {
        auto [sign, sv] = g.basis_bracket(i, b);
        if (sv->empty()) continue;
        const int32_t* col_b_row = adj.row(b);  // adj[b][a] over a
        int64_t inner = 0;
        for (auto& [a, c] : sv->terms) {
          int64_t term = static_cast<int64_t>(c) * col_b_row[a];
          if (super && g.odd_index(a)) term = -term;
          inner += term;
        }
        acc += sign == 1 ? inner : -inner;
      }
      int32_t v = static_cast<int32_t>(fp_norm(acc, p));
      out.gram.set(i, j, v);
      // supersymmetric form: kappa(j,i) = (-1)^{|i||j|} kappa(i,j)
      int32_t vji = v;
      if (super && g.odd_index(i) && g.odd_index(j)) vji = fp_neg(v, p);
      out.gram.set(j, i, vji);
    }
  }
  out.rank = rref(out.gram).rank;
  return out;
}

}  // namespace trisys
