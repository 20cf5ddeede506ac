#include "trisys/nullsearch.hpp"

#include <cmath>

#include "trisys/json_io.hpp"
#include "trisys/rng.hpp"

namespace trisys {

nlohmann::json NullSearchResult::to_json() const {
  return {{"dim", dim},
          {"p", p},
          {"seed", seed},
          {"trials", trials},
          {"derivation_pass", derivation_pass},
          {"simple_found", simple_found},
          {"simple_dim_gt2", simple_dim_gt2},
          {"coverage", coverage},
          {"dxx_square_zero_ok", dxx_square_zero_ok},
          {"simple_instances", simple_instances}};
}

NullSearchResult search_null_sts(int dim, int64_t p, int64_t trials, uint64_t seed,
                                 std::ostream* log) {
  require_odd_prime(p);
  if (dim < 1) throw std::invalid_argument("search_null_sts: dim >= 1");
  NullSearchResult res;
  res.dim = dim;
  res.p = p;
  res.seed = seed;
  res.trials = trials;
  Rng rng(seed);

  // a totally symmetric tensor is determined by [e_i e_j e_k] for i <= j <= k
  int n = dim;
  std::vector<std::array<int, 3>> free_slots;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) free_slots.push_back({i, j, k});
  double log_space = static_cast<double>(free_slots.size()) * n * std::log2(static_cast<double>(p));
  res.coverage = log_space > 62 ? 0.0
                                : std::min(1.0, static_cast<double>(trials) /
                                                    std::exp2(log_space));

  for (int64_t trial = 0; trial < trials; ++trial) {
    // draw the free coordinates, then fill the symmetric d-table
    std::vector<Matrix> dtab(static_cast<size_t>(n) * (n + 1) / 2, Matrix(n, n, p));
    auto pair_idx = [&](int i, int j) {
      return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
    };
    for (auto [i, j, k] : free_slots) {
      Vec v(n);
      for (int r = 0; r < n; ++r) v[r] = rng.fp(p);
      // place into every stored pair touching {i, j, k}
      auto put = [&](int a, int b, int c) {
        Matrix& m = dtab[pair_idx(std::min(a, b), std::max(a, b))];
        for (int r = 0; r < n; ++r) m.set(r, c, v[r]);
      };
      put(i, j, k);
      if (k != j) put(i, k, j);
      if (i != j && k != i) put(j, k, i);
    }
    TripleSystem t(p, n, TsKind::NullSTS, std::move(dtab), std::nullopt, {},
                   "search:null_sts:" + std::to_string(trial));
    AxiomReport rep = check_axioms(t);
    if (!rep.pass()) continue;
    ++res.derivation_pass;
    if (p >= 5) {
      // d_{x,x}^2 = 0 must hold for basis and random x on any null STS here
      auto dxx_sq_zero = [&](const Vec& x) {
        Matrix d = t.d_of(x, x);
        return (d * d).is_zero();
      };
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        Vec e(n, 0);
        e[i] = 1;
        ok = dxx_sq_zero(e);
      }
      for (int s = 0; s < 100 && ok; ++s) {
        Vec x(n);
        for (int r = 0; r < n; ++r) x[r] = rng.fp(p);
        ok = dxx_sq_zero(x);
      }
      if (!ok) {
        res.dxx_square_zero_ok = false;
        if (log) *log << "trial " << trial << ": d_{x,x}^2 != 0 on a survivor (unexpected)\n";
      }
    }
    SimplicityCertificate cert = is_simple_triple(t, seed ^ 0x51u);
    if (cert.verdict == SimplicityCertificate::Verdict::Simple) {
      ++res.simple_found;
      if (n > 2) ++res.simple_dim_gt2;
      std::string blob = export_json(t);
      if (res.simple_instances.size() < 8) res.simple_instances.push_back(blob);
      if (log) {
        *log << "trial " << trial << ": simple null STS of dim " << n << " found ("
             << cert.reason << ", " << cert.lines_checked << " lines)";
        if (n > 2) *log << "  ** dimension > 2 **";
        *log << "\n";
      }
    }
  }
  if (log) {
    *log << "search-null-sts: dim " << n << " over GF(" << p << "), " << trials
         << " trials, seed " << seed << "\n"
         << "  derivation identity passed: " << res.derivation_pass << "\n"
         << "  simple systems found:       " << res.simple_found << " (dim > 2: "
         << res.simple_dim_gt2 << ")\n"
         << "  sampled coverage:           " << res.coverage << "\n";
  }
  return res;
}

}  // namespace trisys
