#ifndef GL2RES_LINALG_HPP
#define GL2RES_LINALG_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"

/**
 * @file linalg.hpp
 * @brief Dense matrices, characteristic polynomials and null spaces over a
 * table field.
 */

namespace gl2res {

/// Polynomial over a table field, coefficients low to high.
using FPoly = std::vector<Elem>;

struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Elem> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  Elem& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

inline Matrix identity_matrix(const Field& F, std::size_t n)
{
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = F.one();
  return m;
}

inline Matrix mul(const Field& F, const Matrix& A, const Matrix& B)
{
  if (A.cols != B.rows)
    throw InvalidParameters("matrix shapes do not match");
  Matrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      const Elem a = A(i, k);
      if (a == 0)
        continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        if (B(k, j) != 0)
          C(i, j) = F.add(C(i, j), F.mul(a, B(k, j)));
    }
  return C;
}

inline std::vector<Elem> mul(const Field& F, const Matrix& A, const std::vector<Elem>& v)
{
  std::vector<Elem> out(A.rows, 0);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      if (A(i, j) != 0 && v[j] != 0)
        out[i] = F.add(out[i], F.mul(A(i, j), v[j]));
  return out;
}

inline Matrix kron(const Field& F, const Matrix& A, const Matrix& B)
{
  Matrix C(A.rows * B.rows, A.cols * B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) {
      const Elem a = A(i, j);
      if (a == 0)
        continue;
      for (std::size_t k = 0; k < B.rows; ++k)
        for (std::size_t l = 0; l < B.cols; ++l)
          C(i * B.rows + k, j * B.cols + l) = F.mul(a, B(k, l));
    }
  return C;
}

inline Matrix block_diagonal(const std::vector<Matrix>& blocks)
{
  std::size_t n = 0;
  for (const auto& b : blocks)
    n += b.rows;
  Matrix out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows; ++i)
      for (std::size_t j = 0; j < b.cols; ++j)
        out(off + i, off + j) = b(i, j);
    off += b.rows;
  }
  return out;
}

/// Row reduction in place; returns the rank.
inline std::size_t row_reduce(const Field& F, Matrix& A)
{
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols && r < A.rows; ++c) {
    std::size_t piv = r;
    while (piv < A.rows && A(piv, c) == 0)
      ++piv;
    if (piv == A.rows)
      continue;
    if (piv != r)
      for (std::size_t j = 0; j < A.cols; ++j)
        std::swap(A(piv, j), A(r, j));
    const Elem inv = F.inv(A(r, c));
    for (std::size_t j = c; j < A.cols; ++j)
      A(r, j) = F.mul(A(r, j), inv);
    for (std::size_t i = 0; i < A.rows; ++i) {
      if (i == r || A(i, c) == 0)
        continue;
      const Elem factor = A(i, c);
      for (std::size_t j = c; j < A.cols; ++j)
        if (A(r, j) != 0)
          A(i, j) = F.sub(A(i, j), F.mul(factor, A(r, j)));
    }
    ++r;
  }
  return r;
}

inline std::size_t rank(const Field& F, Matrix A) { return row_reduce(F, A); }

inline Elem determinant(const Field& F, Matrix A)
{
  if (A.rows != A.cols)
    throw InvalidParameters("determinant of a non-square matrix");
  Elem d = F.one();
  const std::size_t n = A.rows;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A(piv, c) == 0)
      ++piv;
    if (piv == n)
      return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(A(piv, j), A(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, A(c, c));
    const Elem inv = F.inv(A(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A(i, c) == 0)
        continue;
      const Elem factor = F.mul(A(i, c), inv);
      for (std::size_t j = c; j < n; ++j)
        A(i, j) = F.sub(A(i, j), F.mul(factor, A(c, j)));
    }
  }
  return d;
}

inline FPoly poly_mul(const Field& F, const FPoly& a, const FPoly& b)
{
  if (a.empty() || b.empty())
    return {};
  FPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return r;
}

inline FPoly poly_pow(const Field& F, FPoly a, std::uint64_t k)
{
  FPoly r{F.one()};
  while (k > 0) {
    if (k & 1)
      r = poly_mul(F, r, a);
    k >>= 1;
    if (k)
      a = poly_mul(F, a, a);
  }
  return r;
}

inline Elem poly_eval(const Field& F, const FPoly& a, Elem x)
{
  Elem acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    acc = F.add(F.mul(acc, x), *it);
  return acc;
}

/// x^l - c
inline FPoly binomial(const Field& F, std::size_t l, Elem c)
{
  FPoly r(l + 1, 0);
  r[0] = F.neg(c);
  r[l] = F.add(r[l], F.one());
  return r;
}

/// det(xI - A) via reduction to upper Hessenberg form.
inline FPoly charpoly(const Field& F, Matrix H)
{
  if (H.rows != H.cols)
    throw InvalidParameters("characteristic polynomial of a non-square matrix");
  const std::size_t n = H.rows;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t i = j + 1;
    while (i < n && H(i, j) == 0)
      ++i;
    if (i == n)
      continue;
    if (i != j + 1) {
      for (std::size_t k = 0; k < n; ++k)
        std::swap(H(i, k), H(j + 1, k));
      for (std::size_t k = 0; k < n; ++k)
        std::swap(H(k, i), H(k, j + 1));
    }
    const Elem inv = F.inv(H(j + 1, j));
    for (std::size_t k = j + 2; k < n; ++k) {
      if (H(k, j) == 0)
        continue;
      const Elem u = F.mul(H(k, j), inv);
      for (std::size_t c = 0; c < n; ++c)
        H(k, c) = F.sub(H(k, c), F.mul(u, H(j + 1, c)));
      for (std::size_t r = 0; r < n; ++r)
        H(r, j + 1) = F.add(H(r, j + 1), F.mul(u, H(r, k)));
    }
  }

  std::vector<FPoly> p(n + 1);
  p[0] = {F.one()};
  for (std::size_t m = 1; m <= n; ++m) {
    p[m] = poly_mul(F, FPoly{F.neg(H(m - 1, m - 1)), F.one()}, p[m - 1]);
    Elem t = F.one();
    for (std::size_t i = 1; i < m; ++i) {
      t = F.mul(t, H(m - i, m - i - 1));
      const Elem coef = F.mul(t, H(m - i - 1, m - 1));
      if (coef == 0)
        continue;
      const FPoly& prev = p[m - i - 1];
      for (std::size_t k = 0; k < prev.size(); ++k)
        p[m][k] = F.sub(p[m][k], F.mul(coef, prev[k]));
    }
  }
  return p[n];
}

/// Null space of a growing system of homogeneous equations, kept in reduced
/// row echelon form.
class NullspaceSolver {
 public:
  NullspaceSolver(const Field& F, std::size_t unknowns) : F_(&F), n_(unknowns), pivot_row_(unknowns, -1) {}

  std::size_t unknowns() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t nullity() const { return n_ - rows_.size(); }

  /// Sparse equation sum_k coef_k x_{col_k} = 0.
  void add(const std::vector<std::pair<std::size_t, Elem>>& terms)
  {
    std::vector<Elem> row(n_, 0);
    for (const auto& [c, v] : terms)
      row[c] = F_->add(row[c], v);
    add_dense(std::move(row));
  }

  void add_dense(std::vector<Elem> row)
  {
    const Field& F = *F_;
    for (std::size_t c = 0; c < n_; ++c) {
      if (row[c] == 0 || pivot_row_[c] < 0)
        continue;
      const auto& pr = rows_[static_cast<std::size_t>(pivot_row_[c])];
      const Elem factor = row[c];
      for (std::size_t j = c; j < n_; ++j)
        if (pr[j] != 0)
          row[j] = F.sub(row[j], F.mul(factor, pr[j]));
    }
    std::size_t lead = 0;
    while (lead < n_ && row[lead] == 0)
      ++lead;
    if (lead == n_)
      return;
    const Elem inv = F.inv(row[lead]);
    for (std::size_t j = lead; j < n_; ++j)
      row[j] = F.mul(row[j], inv);
    for (auto& other : rows_) {
      if (other[lead] == 0)
        continue;
      const Elem factor = other[lead];
      for (std::size_t j = lead; j < n_; ++j)
        if (row[j] != 0)
          other[j] = F.sub(other[j], F.mul(factor, row[j]));
    }
    pivot_row_[lead] = static_cast<std::int64_t>(rows_.size());
    rows_.push_back(std::move(row));
  }

  /// One basis vector per free unknown, with that unknown set to 1.
  std::vector<std::vector<Elem>> basis() const
  {
    const Field& F = *F_;
    std::vector<std::vector<Elem>> out;
    for (std::size_t free = 0; free < n_; ++free) {
      if (pivot_row_[free] >= 0)
        continue;
      std::vector<Elem> v(n_, 0);
      v[free] = F.one();
      for (std::size_t c = 0; c < n_; ++c)
        if (pivot_row_[c] >= 0)
          v[c] = F.neg(rows_[static_cast<std::size_t>(pivot_row_[c])][free]);
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  const Field* F_;
  std::size_t n_;
  std::vector<std::int64_t> pivot_row_;
  std::vector<std::vector<Elem>> rows_;
};

} // namespace gl2res

#endif // GL2RES_LINALG_HPP
