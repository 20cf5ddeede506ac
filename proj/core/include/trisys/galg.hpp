#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trisys/mat.hpp"

namespace trisys {

enum class AlgKind { Lie, SuperLie };

// Sparse coefficient vector, terms sorted by index, coefficients in [1, p).
struct SparseVec {
  std::vector<std::pair<int32_t, int32_t>> terms;

  bool empty() const { return terms.empty(); }
  static SparseVec from_dense(const Vec& v);
  Vec to_dense(int n) const;
  void add_into(Vec& acc, int32_t c, int64_t p) const;  // acc += c * this
};

// Z2-graded algebra given by structure constants. Basis indices are laid out
// even block first (parity(i) = i >= n0). Brackets are stored once per
// unordered pair i <= j; the other order follows from the completion rule
//   [e_j, e_i] = -(-1)^(|i||j|) [e_i, e_j]   (SuperLie)
//   [e_j, e_i] = -[e_i, e_j]                 (Lie)
class GradedAlgebra {
 public:
  GradedAlgebra() = default;
  GradedAlgebra(int64_t p, int n0, int n1, AlgKind kind,
                std::vector<SparseVec> table, std::vector<std::string> labels,
                nlohmann::json provenance = nlohmann::json::object());

  int64_t p() const { return p_; }
  int dim() const { return n0_ + n1_; }
  int dim_even() const { return n0_; }
  int dim_odd() const { return n1_; }
  AlgKind kind() const { return kind_; }
  bool odd_index(int i) const { return i >= n0_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const nlohmann::json& provenance() const { return prov_; }

  static size_t pair_index(int i, int j, int n);  // requires i <= j
  // Stored half-table entry for i <= j.
  const SparseVec& stored(int i, int j) const { return tab_[pair_index(i, j, dim())]; }
  const std::vector<SparseVec>& table() const { return tab_; }

  // [e_i, e_j] for any order, as (sign, stored vector): the bracket equals
  // sign * stored. sign is +1 or p-1.
  std::pair<int32_t, const SparseVec*> basis_bracket(int i, int j) const;

  Vec bracket_basis_dense(int i, int j) const;
  Vec bracket(const Vec& x, const Vec& y) const;

  // Dense matrix of ad(e_i): column j holds [e_i, e_j].
  Matrix ad_matrix(int i) const;

 private:
  int64_t p_ = 3;
  int n0_ = 0, n1_ = 0;
  AlgKind kind_ = AlgKind::Lie;
  std::vector<SparseVec> tab_;
  std::vector<std::string> labels_;
  nlohmann::json prov_;
};

struct JacobiReport {
  // Violating triples (i, j, k), i <= j <= k, in sweep order.
  std::vector<std::array<int, 3>> violations;
  bool truncated = false;
  int64_t triples_checked = 0;
  bool pass() const { return violations.empty() && !truncated; }
};

// Sweeps basis triples i <= j <= k of the (graded) Jacobi identity. The
// Jacobiator is (super)symmetric up to sign, so the restricted sweep decides
// the identity. Ranges may be partitioned across TF_THREADS workers; the
// report is bit-identical to the sequential sweep.
JacobiReport check_jacobi(const GradedAlgebra& g, size_t max_violations = 1u << 20);
JacobiReport check_super_jacobi(const GradedAlgebra& g, size_t max_violations = 1u << 20);

// {x : [x, e_i] = 0 for all i}, via iterated kernel intersection of ads.
Subspace center(const GradedAlgebra& g);

// Span of all [e_i, e_j].
Subspace derived_subalgebra(const GradedAlgebra& g);

// Smallest subspace containing seed with [g, W] <= W.
Subspace ideal_closure(const GradedAlgebra& g, const Subspace& seed);

// Killing form: kappa(e_i, e_j) = (super)trace(ad e_i . ad e_j).
struct KillingForm {
  Matrix gram;
  int rank = 0;
};
KillingForm killing_form(const GradedAlgebra& g);

}  // namespace trisys
