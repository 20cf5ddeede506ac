#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trisys/fp.hpp"

namespace trisys {

using Vec = std::vector<int32_t>;

Vec vec_add(const Vec& a, const Vec& b, int64_t p);
Vec vec_sub(const Vec& a, const Vec& b, int64_t p);
Vec vec_scale(const Vec& a, int32_t c, int64_t p);
void vec_axpy(Vec& acc, int32_t c, const Vec& x, int64_t p);  // acc += c*x
bool vec_is_zero(const Vec& a);

// Dense matrix over GF(p), entries reduced to [0, p).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, int64_t p);

  static Matrix identity(int n, int64_t p);
  static Matrix from_rows(const std::vector<Vec>& rows, int64_t p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int64_t p() const { return p_; }

  int32_t at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
  void set(int i, int j, int64_t v) {
    a_[static_cast<size_t>(i) * cols_ + j] = static_cast<int32_t>(fp_norm(v, p_));
  }
  const int32_t* row(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }
  int32_t* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }

  Vec row_vec(int i) const;
  Vec col_vec(int j) const;
  const std::vector<int32_t>& data() const { return a_; }
  std::vector<int32_t>& data() { return a_; }

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(int32_t c) const;
  Matrix transposed() const;
  Vec apply(const Vec& x) const;  // this * x
  bool is_zero() const;
  bool operator==(const Matrix& rhs) const;

  Vec flatten() const { return a_; }
  static Matrix unflatten(const Vec& flat, int rows, int cols, int64_t p);

  int64_t trace(int64_t p) const;

 private:
  int rows_ = 0, cols_ = 0;
  int64_t p_ = 3;
  std::vector<int32_t> a_;
};

// Row-reduced echelon form. r = reduced matrix, pivots = pivot column per
// pivot row. Deterministic: first nonzero entry in row order.
struct Rref {
  Matrix r;
  std::vector<int> pivots;
  int rank = 0;
};
Rref rref(const Matrix& m);

// As rref(), but also returns e with r = e * m (padded with zero rows).
struct RrefWithTransform {
  Matrix r;
  Matrix e;
  std::vector<int> pivots;
  int rank = 0;
};
RrefWithTransform rref_with_transform(const Matrix& m);

// A subspace of k^ambient, stored as an RREF row basis.
struct Subspace {
  int ambient = 0;
  Matrix basis;  // rank rows, in RREF
  std::vector<int> pivots;

  int dim() const { return basis.rows(); }
  bool contains(const Vec& v) const;
  // Coordinates w.r.t. the RREF rows; nullopt if v is outside the span.
  std::optional<Vec> coords(const Vec& v) const;

  static Subspace zero(int ambient, int64_t p);
  static Subspace full(int ambient, int64_t p);
  static Subspace from_vectors(const std::vector<Vec>& vectors, int64_t p, int ambient);
  bool operator==(const Subspace& rhs) const;
};

struct RankKernel {
  int rank = 0;
  Subspace kernel;
};
// rank + dim kernel = cols; kernel vectors v satisfy m*v = 0.
RankKernel rank_kernel(const Matrix& m);

// Some x with m*x = b, or nullopt when inconsistent. Free variables are 0
// under RREF pivoting, so the representative is deterministic.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

// Greedy basis selection (input order) with coordinates relative to the
// selected input vectors themselves.
struct SpanBasis {
  Subspace space;                  // RREF of the span
  std::vector<int> selected;       // indices of chosen input vectors
  Matrix selected_rows;            // the chosen vectors, stacked
  Matrix rref_to_selected;         // E with space.basis = E * selected_rows

  int dim() const { return space.dim(); }
  // Coordinates of v w.r.t. the selected input vectors ("not in span" = nullopt).
  std::optional<Vec> coords(const Vec& v) const;
};
SpanBasis span_and_coords(const std::vector<Vec>& vectors, int64_t p, int ambient);

// Bilinear form with a declared symmetry.
struct BilinForm {
  enum class Symmetry { Symmetric, Alternating };
  Matrix gram;
  Symmetry sym = Symmetry::Symmetric;

  BilinForm() = default;
  // Validates the declared symmetry (G^T = G, or G^T = -G with zero diagonal).
  BilinForm(Matrix g, Symmetry s);

  int dim() const { return gram.rows(); }
  int64_t eval(const Vec& x, const Vec& y) const;
  bool nondegenerate() const;
  bool is_zero() const { return gram.is_zero(); }
};

// {x : f(x, y) = 0 for all y} = kernel of the Gram matrix.
Subspace form_radical(const BilinForm& f);

// Incremental RREF basis: insert vectors one at a time, tracking rank.
class IncrementalSpan {
 public:
  IncrementalSpan(int ambient, int64_t p);
  // Returns true if v enlarged the span.
  bool insert(const Vec& v);
  // Reduces v against the current basis; result is zero iff v is in the span.
  Vec reduce(const Vec& v) const;
  bool contains(const Vec& v) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  int ambient() const { return ambient_; }
  Subspace to_subspace() const;

 private:
  int ambient_;
  int64_t p_;
  std::vector<Vec> rows_;      // kept in RREF
  std::vector<int> pivots_;
};

}  // namespace trisys
