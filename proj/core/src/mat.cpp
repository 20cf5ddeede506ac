#include "trisys/mat.hpp"

#include <algorithm>
#include <stdexcept>

namespace trisys {

Vec vec_add(const Vec& a, const Vec& b, int64_t p) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_add(a[i], b[i], p);
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b, int64_t p) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_sub(a[i], b[i], p);
  return r;
}

Vec vec_scale(const Vec& a, int32_t c, int64_t p) {
  Vec r(a.size());
  c = static_cast<int32_t>(fp_norm(c, p));
  for (size_t i = 0; i < a.size(); ++i) r[i] = fp_mul(a[i], c, p);
  return r;
}

void vec_axpy(Vec& acc, int32_t c, const Vec& x, int64_t p) {
  c = static_cast<int32_t>(fp_norm(c, p));
  if (c == 0) return;
  for (size_t i = 0; i < x.size(); ++i)
    acc[i] = fp_add(acc[i], fp_mul(c, x[i], p), p);
}

bool vec_is_zero(const Vec& a) {
  for (int32_t v : a)
    if (v != 0) return false;
  return true;
}

Matrix::Matrix(int rows, int cols, int64_t p) : rows_(rows), cols_(cols), p_(p) {
  require_odd_prime(p);
  a_.assign(static_cast<size_t>(rows) * cols, 0);
}

Matrix Matrix::identity(int n, int64_t p) {
  Matrix m(n, n, p);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, int64_t p) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(r, c, p);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("from_rows: ragged rows");
    for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Vec Matrix::row_vec(int i) const { return Vec(row(i), row(i) + cols_); }

Vec Matrix::col_vec(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_ || p_ != rhs.p_) throw std::invalid_argument("matmul: shape/modulus");
  Matrix out(rows_, rhs.cols_, p_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      int32_t aik = at(i, k);
      if (aik == 0) continue;
      const int32_t* rrow = rhs.row(k);
      int32_t* orow = out.row(i);
      for (int j = 0; j < rhs.cols_; ++j)
        orow[j] = fp_add(orow[j], fp_mul(aik, rrow[j], p_), p_);
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("mat add: shape");
  Matrix out(rows_, cols_, p_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = fp_add(a_[i], rhs.a_[i], p_);
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("mat sub: shape");
  Matrix out(rows_, cols_, p_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = fp_sub(a_[i], rhs.a_[i], p_);
  return out;
}

Matrix Matrix::scaled(int32_t c) const {
  Matrix out(rows_, cols_, p_);
  c = static_cast<int32_t>(fp_norm(c, p_));
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = fp_mul(a_[i], c, p_);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
  return out;
}

Vec Matrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("apply: length");
  Vec y(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    const int32_t* r = row(i);
    int64_t acc = 0;
    for (int j = 0; j < cols_; ++j) acc += static_cast<int64_t>(r[j]) * x[j];
    y[i] = static_cast<int32_t>(acc % p_);
  }
  return y;
}

bool Matrix::is_zero() const {
  for (int32_t v : a_)
    if (v != 0) return false;
  return true;
}

bool Matrix::operator==(const Matrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && p_ == rhs.p_ && a_ == rhs.a_;
}

Matrix Matrix::unflatten(const Vec& flat, int rows, int cols, int64_t p) {
  if (static_cast<int>(flat.size()) != rows * cols)
    throw std::invalid_argument("unflatten: size");
  Matrix m(rows, cols, p);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, flat[static_cast<size_t>(i) * cols + j]);
  return m;
}

int64_t Matrix::trace(int64_t p) const {
  int64_t t = 0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t = fp_norm(t + at(i, i), p);
  return t;
}

namespace {

// In-place elimination shared by rref and rref_with_transform. rows of `m`
// get reduced; `e` (if nonnull, initially identity) tracks row operations.
void eliminate(Matrix& m, Matrix* e, std::vector<int>& pivots) {
  int64_t p = m.p();
  int rows = m.rows(), cols = m.cols();
  int pr = 0;
  for (int col = 0; col < cols && pr < rows; ++col) {
    int sel = -1;
    for (int i = pr; i < rows; ++i)
      if (m.at(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != pr) {
      for (int j = 0; j < cols; ++j) std::swap(m.row(sel)[j], m.row(pr)[j]);
      if (e)
        for (int j = 0; j < e->cols(); ++j) std::swap(e->row(sel)[j], e->row(pr)[j]);
    }
    int32_t inv = fp_inv(m.at(pr, col), p);
    if (inv != 1) {
      for (int j = 0; j < cols; ++j) m.row(pr)[j] = fp_mul(m.row(pr)[j], inv, p);
      if (e)
        for (int j = 0; j < e->cols(); ++j) e->row(pr)[j] = fp_mul(e->row(pr)[j], inv, p);
    }
    for (int i = 0; i < rows; ++i) {
      if (i == pr) continue;
      int32_t f = m.at(i, col);
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j)
        m.row(i)[j] = fp_sub(m.row(i)[j], fp_mul(f, m.row(pr)[j], p), p);
      if (e)
        for (int j = 0; j < e->cols(); ++j)
          e->row(i)[j] = fp_sub(e->row(i)[j], fp_mul(f, e->row(pr)[j], p), p);
    }
    pivots.push_back(col);
    ++pr;
  }
}

}  // namespace

Rref rref(const Matrix& m) {
  Rref out;
  out.r = m;
  eliminate(out.r, nullptr, out.pivots);
  out.rank = static_cast<int>(out.pivots.size());
  return out;
}

RrefWithTransform rref_with_transform(const Matrix& m) {
  RrefWithTransform out;
  out.r = m;
  out.e = Matrix::identity(m.rows(), m.p());
  eliminate(out.r, &out.e, out.pivots);
  out.rank = static_cast<int>(out.pivots.size());
  return out;
}

bool Subspace::contains(const Vec& v) const { return coords(v).has_value(); }

std::optional<Vec> Subspace::coords(const Vec& v) const {
  if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("coords: length");
  int64_t p = basis.p();
  Vec c(dim(), 0);
  Vec residual = v;
  for (int l = 0; l < dim(); ++l) {
    int32_t coeff = residual[pivots[l]];
    c[l] = coeff;
    if (coeff != 0)
      for (int j = 0; j < ambient; ++j)
        residual[j] = fp_sub(residual[j], fp_mul(coeff, basis.at(l, j), p), p);
  }
  if (!vec_is_zero(residual)) return std::nullopt;
  return c;
}

Subspace Subspace::zero(int ambient, int64_t p) {
  Subspace s;
  s.ambient = ambient;
  s.basis = Matrix(0, ambient, p);
  return s;
}

Subspace Subspace::full(int ambient, int64_t p) {
  Subspace s;
  s.ambient = ambient;
  s.basis = Matrix::identity(ambient, p);
  s.pivots.resize(ambient);
  for (int i = 0; i < ambient; ++i) s.pivots[i] = i;
  return s;
}

Subspace Subspace::from_vectors(const std::vector<Vec>& vectors, int64_t p, int ambient) {
  Matrix stack = vectors.empty() ? Matrix(0, ambient, p) : Matrix::from_rows(vectors, p);
  Rref r = rref(stack);
  Subspace s;
  s.ambient = ambient;
  s.pivots = r.pivots;
  s.basis = Matrix(r.rank, ambient, p);
  for (int i = 0; i < r.rank; ++i)
    for (int j = 0; j < ambient; ++j) s.basis.set(i, j, r.r.at(i, j));
  return s;
}

bool Subspace::operator==(const Subspace& rhs) const {
  return ambient == rhs.ambient && basis == rhs.basis;
}

RankKernel rank_kernel(const Matrix& m) {
  Rref r = rref(m);
  RankKernel out;
  out.rank = r.rank;
  int64_t p = m.p();
  int n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (int c : r.pivots) is_pivot[c] = true;
  std::vector<Vec> kern;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    Vec v(n, 0);
    v[j] = 1;
    for (int l = 0; l < r.rank; ++l) v[r.pivots[l]] = fp_neg(r.r.at(l, j), p);
    kern.push_back(std::move(v));
  }
  out.kernel = Subspace::from_vectors(kern, p, n);
  return out;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw std::invalid_argument("solve: rhs length");
  int64_t p = m.p();
  Matrix aug(m.rows(), m.cols() + 1, p);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, m.cols(), b[i]);
  }
  Rref r = rref(aug);
  Vec x(m.cols(), 0);
  for (int l = 0; l < r.rank; ++l) {
    if (r.pivots[l] == m.cols()) return std::nullopt;  // pivot in the rhs column
    x[r.pivots[l]] = r.r.at(l, m.cols());
  }
  return x;
}

SpanBasis span_and_coords(const std::vector<Vec>& vectors, int64_t p, int ambient) {
  SpanBasis out;
  IncrementalSpan grow(ambient, p);
  std::vector<Vec> chosen;
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (static_cast<int>(vectors[i].size()) != ambient)
      throw std::invalid_argument("span_and_coords: length");
    if (grow.insert(vectors[i])) {
      out.selected.push_back(static_cast<int>(i));
      chosen.push_back(vectors[i]);
    }
  }
  out.selected_rows = chosen.empty() ? Matrix(0, ambient, p) : Matrix::from_rows(chosen, p);
  RrefWithTransform rt = rref_with_transform(out.selected_rows);
  out.space.ambient = ambient;
  out.space.pivots = rt.pivots;
  out.space.basis = Matrix(rt.rank, ambient, p);
  for (int i = 0; i < rt.rank; ++i)
    for (int j = 0; j < ambient; ++j) out.space.basis.set(i, j, rt.r.at(i, j));
  out.rref_to_selected = rt.e;  // square: selected rows are independent
  return out;
}

std::optional<Vec> SpanBasis::coords(const Vec& v) const {
  auto c_rref = space.coords(v);
  if (!c_rref) return std::nullopt;
  // v = c_rref . R and R = E . S, so coords w.r.t. S are E^T . c_rref.
  int m = dim();
  int64_t p = space.basis.p();
  Vec c(m, 0);
  for (int l = 0; l < m; ++l) {
    int64_t acc = 0;
    for (int r = 0; r < m; ++r)
      acc += static_cast<int64_t>(rref_to_selected.at(r, l)) * (*c_rref)[r];
    c[l] = static_cast<int32_t>(fp_norm(acc, p));
  }
  return c;
}

BilinForm::BilinForm(Matrix g, Symmetry s) : gram(std::move(g)), sym(s) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("BilinForm: square gram required");
  int64_t p = gram.p();
  for (int i = 0; i < gram.rows(); ++i) {
    for (int j = 0; j < gram.cols(); ++j) {
      int32_t gij = gram.at(i, j), gji = gram.at(j, i);
      if (sym == Symmetry::Symmetric) {
        if (gij != gji) throw std::invalid_argument("BilinForm: not symmetric");
      } else {
        if (gij != fp_neg(gji, p)) throw std::invalid_argument("BilinForm: not alternating");
        if (i == j && gij != 0) throw std::invalid_argument("BilinForm: nonzero diagonal");
      }
    }
  }
}

int64_t BilinForm::eval(const Vec& x, const Vec& y) const {
  int64_t p = gram.p();
  int64_t acc = 0;
  for (int i = 0; i < gram.rows(); ++i) {
    if (x[i] == 0) continue;
    const int32_t* g = gram.row(i);
    int64_t inner = 0;
    for (int j = 0; j < gram.cols(); ++j) inner += static_cast<int64_t>(g[j]) * y[j];
    acc += x[i] * (inner % p);
  }
  return fp_norm(acc, p);
}

bool BilinForm::nondegenerate() const { return rref(gram).rank == gram.rows(); }

Subspace form_radical(const BilinForm& f) { return rank_kernel(f.gram).kernel; }

IncrementalSpan::IncrementalSpan(int ambient, int64_t p) : ambient_(ambient), p_(p) {}

Vec IncrementalSpan::reduce(const Vec& v) const {
  Vec r = v;
  for (size_t l = 0; l < rows_.size(); ++l) {
    int32_t c = r[pivots_[l]];
    if (c == 0) continue;
    const Vec& row = rows_[l];
    for (int j = 0; j < ambient_; ++j) r[j] = fp_sub(r[j], fp_mul(c, row[j], p_), p_);
  }
  return r;
}

bool IncrementalSpan::contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

bool IncrementalSpan::insert(const Vec& v) {
  Vec r = reduce(v);
  int piv = -1;
  for (int j = 0; j < ambient_; ++j)
    if (r[j] != 0) {
      piv = j;
      break;
    }
  if (piv < 0) return false;
  int32_t inv = fp_inv(r[piv], p_);
  for (int j = 0; j < ambient_; ++j) r[j] = fp_mul(r[j], inv, p_);
  // keep RREF: clear this pivot column in existing rows, keep rows sorted
  for (size_t l = 0; l < rows_.size(); ++l) {
    int32_t c = rows_[l][piv];
    if (c == 0) continue;
    for (int j = 0; j < ambient_; ++j)
      rows_[l][j] = fp_sub(rows_[l][j], fp_mul(c, r[j], p_), p_);
  }
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(r));
  pivots_.insert(pivots_.begin() + pos, piv);
  return true;
}

Subspace IncrementalSpan::to_subspace() const {
  Subspace s;
  s.ambient = ambient_;
  s.pivots = pivots_;
  s.basis = rows_.empty() ? Matrix(0, ambient_, p_) : Matrix::from_rows(rows_, p_);
  return s;
}

}  // namespace trisys
