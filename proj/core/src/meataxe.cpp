#include "trisys/meataxe.hpp"

#include <algorithm>

#include "trisys/rng.hpp"

namespace trisys {

SparseMat SparseMat::from_dense(const Matrix& m) {
  SparseMat s;
  s.n = m.rows();
  s.p = m.p();
  s.rowptr.assign(s.n + 1, 0);
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < m.cols(); ++j)
      if (m.at(i, j) != 0) s.entries.emplace_back(j, m.at(i, j));
    s.rowptr[i + 1] = static_cast<int32_t>(s.entries.size());
  }
  return s;
}

Vec SparseMat::apply(const Vec& x) const {
  Vec y(n, 0);
  for (int i = 0; i < n; ++i) {
    int64_t acc = 0;
    for (int32_t t = rowptr[i]; t < rowptr[i + 1]; ++t)
      acc += static_cast<int64_t>(entries[t].second) * x[entries[t].first];
    y[i] = static_cast<int32_t>(acc % p);
  }
  return y;
}

Vec SparseMat::apply_transposed(const Vec& x) const {
  Vec y(n, 0);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int32_t t = rowptr[i]; t < rowptr[i + 1]; ++t) {
      auto [j, v] = entries[t];
      y[j] = fp_add(y[j], fp_mul(x[i], v, p), p);
    }
  }
  return y;
}

Subspace spin(const Vec& v, const std::vector<SparseMat>& gens, bool transposed) {
  int n = static_cast<int>(v.size());
  int64_t p = gens.empty() ? 3 : gens[0].p;
  IncrementalSpan span(n, p);
  std::vector<Vec> queue;
  if (span.insert(v)) queue.push_back(v);
  while (!queue.empty() && span.dim() < n) {
    Vec u = std::move(queue.back());
    queue.pop_back();
    for (const SparseMat& g : gens) {
      Vec w = transposed ? g.apply_transposed(u) : g.apply(u);
      if (span.dim() >= n) break;
      if (!vec_is_zero(w) && span.insert(w)) queue.push_back(std::move(w));
    }
  }
  return span.to_subspace();
}

namespace {

// Enumerates representatives of the projective lines of a d-dimensional space
// of kernel vectors (rows of `null_basis`): all nonzero coefficient tuples
// whose first nonzero entry is 1.
std::vector<Vec> line_representatives(const Matrix& null_basis) {
  int d = null_basis.rows();
  int n = null_basis.cols();
  int64_t p = null_basis.p();
  std::vector<Vec> lines;
  std::vector<int32_t> coeff(d, 0);
  // iterate over all tuples in base p, keep those with first nonzero == 1
  int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= p;
  for (int64_t code = 1; code < total; ++code) {
    int64_t c = code;
    for (int i = 0; i < d; ++i) {
      coeff[i] = static_cast<int32_t>(c % p);
      c /= p;
    }
    int first = -1;
    for (int i = 0; i < d; ++i)
      if (coeff[i] != 0) {
        first = i;
        break;
      }
    if (first < 0 || coeff[first] != 1) continue;
    Vec v(n, 0);
    for (int i = 0; i < d; ++i)
      if (coeff[i] != 0) vec_axpy(v, coeff[i], null_basis.row_vec(i), p);
    lines.push_back(std::move(v));
  }
  return lines;
}

bool verify_invariant(const Subspace& w, const std::vector<SparseMat>& gens) {
  if (w.dim() == 0) return false;
  int64_t p = w.basis.p();
  IncrementalSpan span(w.ambient, p);
  for (int r = 0; r < w.dim(); ++r) span.insert(w.basis.row_vec(r));
  for (const SparseMat& g : gens)
    for (int r = 0; r < w.dim(); ++r)
      if (!span.contains(g.apply(w.basis.row_vec(r)))) return false;
  return true;
}

// Perp of a subspace spanned by rows (w.r.t. the standard dot pairing):
// dual-module submodules pull back to submodules of the original module.
Subspace perp(const Subspace& u, int64_t p) {
  if (u.dim() == 0) return Subspace::full(u.ambient, p);
  return rank_kernel(u.basis).kernel;
}

}  // namespace

SimplicityCertificate module_irreducible(const std::vector<SparseMat>& gens, int n,
                                         int64_t p, uint64_t seed, int trial_budget) {
  SimplicityCertificate cert;
  cert.seed = seed;
  if (n <= 0) {
    cert.verdict = SimplicityCertificate::Verdict::NotSimple;
    cert.reason = "empty_module";
    return cert;
  }
  Rng rng(seed);
  // Max projective-line count for which the full nullspace sweep stays cheap.
  const int64_t max_lines = 600;

  auto random_factor = [&] {
    Matrix factor(n, n, p);
    for (const SparseMat& g : gens) {
      int32_t c = rng.fp(p);
      if (c == 0) continue;
      for (int i = 0; i < n; ++i)
        for (int32_t t = g.rowptr[i]; t < g.rowptr[i + 1]; ++t)
          factor.set(i, g.entries[t].first,
                     factor.at(i, g.entries[t].first) +
                         static_cast<int64_t>(c) * g.entries[t].second);
    }
    return factor;
  };

  for (int trial = 1; trial <= trial_budget; ++trial) {
    cert.trials_used = trial;
    // theta = sum of a few words, each a product of up to 3 uniform
    // generator combinations. Single words built from ad operators have
    // nullity at least the rank of the algebra (the kernel contains a
    // centralizer), while sums of words reach thin-kernel elements of the
    // enveloping algebra.
    int nwords = 1 + static_cast<int>(rng.uniform(3));
    int len = 0;
    Matrix theta(n, n, p);
    for (int w = 0; w < nwords; ++w) {
      int wl = 1 + static_cast<int>(rng.uniform(3));
      len = std::max(len, wl);
      Matrix word = random_factor();
      for (int f = 1; f < wl; ++f) word = word * random_factor();
      int32_t c = rng.fp_nonzero(p);
      theta = theta + word.scaled(c);
    }
    RankKernel rk = rank_kernel(theta);
    int d = n - rk.rank;
    if (d == 0) continue;

    int64_t nlines = 0;  // 1 + p + ... + p^{d-1}
    {
      int64_t pow = 1;
      for (int i = 0; i < d && nlines <= max_lines; ++i) {
        nlines += pow;
        pow *= p;
      }
    }
    bool can_certify = d <= 30 && nlines <= max_lines;

    // Hunt for a proper submodule from one kernel vector regardless.
    Vec v0 = rk.kernel.basis.row_vec(0);
    Subspace sp0 = spin(v0, gens, false);
    if (sp0.dim() < n) {
      cert.verdict = SimplicityCertificate::Verdict::NotSimple;
      cert.witness = sp0;
      cert.reason = "witness";
      cert.word_length = len;
      cert.nullity = d;
      if (!verify_invariant(sp0, gens))
        throw std::logic_error("meataxe: witness failed verification");
      return cert;
    }
    if (!can_certify) continue;

    // Norton certificate: every line of ker(theta) spins to the full module,
    // and every line of ker(theta^T) spins to the full dual module. If some
    // proper submodule W existed, either ker(theta) meets W (its line spins
    // inside W) or ker(theta^T) meets the annihilator of W.
    int lines = 0;
    bool all_full = true;
    for (const Vec& v : line_representatives(rk.kernel.basis)) {
      ++lines;
      Subspace s = spin(v, gens, false);
      if (s.dim() < n) {
        cert.verdict = SimplicityCertificate::Verdict::NotSimple;
        cert.witness = s;
        cert.reason = "witness";
        cert.word_length = len;
        cert.nullity = d;
        cert.lines_checked = lines;
        if (!verify_invariant(*cert.witness, gens))
          throw std::logic_error("meataxe: witness failed verification");
        return cert;
      }
    }
    RankKernel rkt = rank_kernel(theta.transposed());
    for (const Vec& v : line_representatives(rkt.kernel.basis)) {
      ++lines;
      Subspace s = spin(v, gens, true);
      if (s.dim() < n) {
        Subspace w = perp(s, p);
        cert.verdict = SimplicityCertificate::Verdict::NotSimple;
        cert.witness = w;
        cert.reason = "witness_dual";
        cert.word_length = len;
        cert.nullity = d;
        cert.lines_checked = lines;
        if (!verify_invariant(*cert.witness, gens))
          throw std::logic_error("meataxe: dual witness failed verification");
        return cert;
      }
    }
    if (all_full) {
      cert.verdict = SimplicityCertificate::Verdict::Simple;
      cert.reason = "norton";
      cert.word_length = len;
      cert.nullity = d;
      cert.lines_checked = lines;
      return cert;
    }
  }
  cert.verdict = SimplicityCertificate::Verdict::ProbablySimple;
  cert.reason = "budget_exhausted";
  return cert;
}

SimplicityCertificate is_simple(const GradedAlgebra& g, uint64_t seed, int trial_budget) {
  int n = g.dim();
  int64_t p = g.p();
  SimplicityCertificate cert;
  cert.seed = seed;
  if (n == 0) {
    cert.verdict = SimplicityCertificate::Verdict::NotSimple;
    cert.reason = "zero_algebra";
    return cert;
  }
  // [g, g] != 0 is required for simplicity.
  bool product_zero = true;
  for (const SparseVec& sv : g.table())
    if (!sv.empty()) {
      product_zero = false;
      break;
    }
  if (product_zero) {
    cert.verdict = SimplicityCertificate::Verdict::NotSimple;
    cert.reason = "zero_product";
    if (n >= 2) {
      Vec v(n, 0);
      v[0] = 1;
      cert.witness = Subspace::from_vectors({v}, p, n);
    }
    return cert;
  }
  // Cheap deterministic witnesses first: center and derived subalgebra.
  Subspace z = center(g);
  if (z.dim() > 0 && z.dim() < n) {
    cert.verdict = SimplicityCertificate::Verdict::NotSimple;
    cert.witness = z;
    cert.reason = "center";
    return cert;
  }
  if (z.dim() == n) {  // abelian, n >= 2 here
    cert.verdict = SimplicityCertificate::Verdict::NotSimple;
    Vec v(n, 0);
    v[0] = 1;
    cert.witness = Subspace::from_vectors({v}, p, n);
    cert.reason = "abelian";
    return cert;
  }
  Subspace der = derived_subalgebra(g);
  if (der.dim() < n) {
    cert.verdict = SimplicityCertificate::Verdict::NotSimple;
    cert.witness = der;
    cert.reason = "derived_proper";
    return cert;
  }
  std::vector<SparseMat> gens;
  gens.reserve(n);
  for (int i = 0; i < n; ++i) gens.push_back(SparseMat::from_dense(g.ad_matrix(i)));
  SimplicityCertificate mt = module_irreducible(gens, n, p, seed, trial_budget);
  if (mt.verdict == SimplicityCertificate::Verdict::NotSimple && mt.witness) {
    // invariant subspace of the adjoint module = ideal; re-check the witness
    // against the bracket directly
    if (!verify_invariant(*mt.witness, gens))
      throw std::logic_error("is_simple: witness failed verification");
  }
  return mt;
}

}  // namespace trisys
