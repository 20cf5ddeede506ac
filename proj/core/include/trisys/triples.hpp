#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trisys/mat.hpp"
#include "trisys/meataxe.hpp"

namespace trisys {

enum class TsKind { STS, OTS, NullSTS, NullOTS };

std::string ts_kind_name(TsKind k);

// Rank-one operator builders. psi is symmetric in (x, y), sigma antisymmetric;
// for nondegenerate forms they span sp resp. so.
//   psi_{x,y}(z)   = (x|z)y + (y|z)x
//   sigma_{x,y}(z) = (x|z)y - (y|z)x
Matrix psi_op(const BilinForm& f, const Vec& x, const Vec& y);
Matrix sigma_op(const BilinForm& f, const Vec& x, const Vec& y);
// gamma_{u,v} is psi for the 2-dim alternating form; tau_{x,y} is sigma for a
// symmetric form. Provided as named aliases for call-site clarity.
inline Matrix gamma_op(const BilinForm& f, const Vec& u, const Vec& v) { return psi_op(f, u, v); }
inline Matrix tau_op(const BilinForm& f, const Vec& x, const Vec& y) { return sigma_op(f, x, y); }

// Triple system (T, [...], (.|.)) stored through its d-operators
// d_{e_i,e_j} = [e_i e_j .] as n x n matrices:
//   STS / NullSTS: pairs i <= j, d symmetric in (i, j)
//   OTS / NullOTS: pairs i < j, d antisymmetric, d_{ii} = 0
// The bilinear form is alternating for STS, symmetric for OTS, absent for
// the null kinds (and required nonzero for STS/OTS).
class TripleSystem {
 public:
  TripleSystem() = default;
  TripleSystem(int64_t p, int n, TsKind kind, std::vector<Matrix> d_table,
               std::optional<BilinForm> form, std::vector<std::string> labels = {},
               std::string key = {});

  int64_t p() const { return p_; }
  int dim() const { return n_; }
  TsKind kind() const { return kind_; }
  bool pairs_strict() const { return kind_ == TsKind::OTS || kind_ == TsKind::NullOTS; }
  const std::optional<BilinForm>& form() const { return form_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& key() const { return key_; }
  const std::vector<Matrix>& stored() const { return d_; }
  nlohmann::json& meta() { return meta_; }
  const nlohmann::json& meta() const { return meta_; }

  size_t pair_count() const { return d_.size(); }
  size_t pair_index(int i, int j) const;  // i <= j (or i < j for strict kinds)
  std::pair<int, int> pair_at(size_t idx) const;

  // d_{e_i,e_j} for any order as (sign, matrix): the operator equals
  // sign * matrix; nullptr for the zero diagonal of strict kinds.
  std::pair<int32_t, const Matrix*> d_basis(int i, int j) const;
  Matrix d_matrix(int i, int j) const;
  // Bilinear d operator for arbitrary vectors.
  Matrix d_of(const Vec& x, const Vec& y) const;
  // Trilinear product [x y z].
  Vec eval(const Vec& x, const Vec& y, const Vec& z) const;

  int64_t form_eval(const Vec& x, const Vec& y) const;
  bool product_nonzero() const;

  bool axioms_verified() const { return axioms_verified_; }
  void mark_axioms_verified() const { axioms_verified_ = true; }

 private:
  int64_t p_ = 3;
  int n_ = 0;
  TsKind kind_ = TsKind::STS;
  std::vector<Matrix> d_;
  std::optional<BilinForm> form_;
  std::vector<std::string> labels_;
  std::string key_;
  nlohmann::json meta_ = nlohmann::json::object();
  mutable bool axioms_verified_ = false;
};

// Per-identity report. Tags a..d match the defining identity lists; the null
// kinds only carry a (symmetry) and b (derivation identity).
struct AxiomViolation {
  char tag;
  std::vector<int> tuple;
};
struct AxiomReport {
  TsKind kind = TsKind::STS;
  std::vector<AxiomViolation> violations;
  bool truncated = false;
  bool pass() const { return violations.empty() && !truncated; }
  size_t count(char tag) const;
};

// Verifies the identity set of t's kind on all basis tuples. Identities
// stated with repeated arguments are checked in fully polarized form (char
// != 2 makes this lossless); the derivation identity is checked in its
// equivalent operator form [d_q, d_{u,v}] = d_{d_q(u),v} + d_{u,d_q(v)} with
// d_q running over a spanning set of inder(T), which the identity's
// multilinearity makes sufficient. A passing report marks t verified.
AxiomReport check_axioms(const TripleSystem& t, size_t max_violations = 4096);

// inder(T) = span{d_{x,y}}, with coordinates relative to the greedy-selected
// basis pairs. Commutator coordinates of basis pairs are computed up front
// and double as the closure check: a coordinate failure throws.
struct InderResult {
  SpanBasis span;  // over flattened n x n operators
  std::vector<std::pair<int, int>> selected_pairs;
  std::vector<Matrix> basis_ops;
  // coords of [basis_ops[a], basis_ops[b]] for a < b, index a*(dim)+b
  std::vector<Vec> comm_coords;

  int dim() const { return span.dim(); }
  std::optional<Vec> coords(const Matrix& op) const;
  const Vec& comm(int a, int b) const;  // a < b
};
InderResult inder(const TripleSystem& t, bool with_commutators = true);

// Simplicity of the triple system. STS/OTS outside the (dim 2, p = 3) STS
// exception reduce to nondegeneracy of the form plus [TTT] != 0; the
// exceptional case and the null kinds run an invariant-subspace search
// (ideals = inder-submodules) with Meataxe certification.
SimplicityCertificate is_simple_triple(const TripleSystem& t, uint64_t seed = 0x7453u);

// Constructive classification of 2-dimensional STS over GF(3).
struct Dim2Class {
  enum class Case { I, II } which;
  int32_t scalar;       // alpha for case I, epsilon (nonzero) for case II
  Matrix new_basis;     // rows: the normalizing symplectic basis {a, b}
};
Dim2Class classify_dim2_sts(const TripleSystem& t);

// Base change: rows of `basis` (in old coordinates) become the new basis.
TripleSystem base_change(const TripleSystem& t, const Matrix& basis);

// Reinterpret an STS (resp. OTS) as a null system, dropping the form. The
// required extra symmetry (total symmetry resp. total alternation) is
// verified; throws if it fails.
TripleSystem as_null(const TripleSystem& t);

// Freudenthal reformulation: xyz = [xyz] - psi_{x,y}(z). Either the product
// vanishes identically or the Freudenthal identities hold; both are checked.
struct FreudenthalSystem {
  int64_t p = 3;
  int n = 0;
  BilinForm form;
  std::vector<Matrix> table;  // pairs i <= j, column k = product(e_i, e_j, e_k)
  bool zero_product = false;

  size_t pair_index(int i, int j) const;  // i <= j
  Vec product_basis(int i, int j, int k) const;
};
FreudenthalSystem to_freudenthal(const TripleSystem& t);

// Faulkner ternary algebra <xyz>, related to the STS product by
// [xyz] = -2<zxy> + (x|y)z. The converter validates the defining identities
// of whichever side it produces.
struct FaulknerSystem {
  int64_t p = 3;
  int n = 0;
  BilinForm form;
  std::vector<Matrix> table;  // full n^2 pairs, index i*n+j, column k = <e_i e_j e_k>

  const Matrix& op(int i, int j) const { return table[static_cast<size_t>(i) * n + j]; }
  Vec product(const Vec& x, const Vec& y, const Vec& z) const;
};
FaulknerSystem sts_to_faulkner(const TripleSystem& t);
TripleSystem faulkner_to_sts(const FaulknerSystem& f);

}  // namespace trisys
