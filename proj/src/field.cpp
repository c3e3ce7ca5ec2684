#include "nec/field.hpp"

#include <string>

#include "nec/error.hpp"

namespace nec {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

uint32_t smallest_prime_above(uint32_t n) {
  uint32_t p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

Field::Field(uint32_t q) : q_(q) {
  if (!is_prime(q)) fail(ErrorKind::InvalidInput, "non-prime-modulus", std::to_string(q));
}

Sym Field::pow(Sym a, uint64_t e) const {
  uint64_t r = 1 % q_, b = a % q_;
  while (e) {
    if (e & 1) r = r * b % q_;
    b = b * b % q_;
    e >>= 1;
  }
  return static_cast<Sym>(r);
}

Sym Field::inv(Sym a) const {
  if (a % q_ == 0) fail(ErrorKind::InvalidInput, "inverse-of-zero", "GF(" + std::to_string(q_) + ")");
  return pow(a, q_ - 2);
}

Sym Field::reduce(int64_t v) const {
  int64_t r = v % static_cast<int64_t>(q_);
  return static_cast<Sym>(r < 0 ? r + q_ : r);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::columns(const std::vector<int>& idx) const {
  Matrix m(rows, static_cast<int>(idx.size()));
  for (int r = 0; r < rows; ++r)
    for (size_t j = 0; j < idx.size(); ++j) m.at(r, static_cast<int>(j)) = at(r, idx[j]);
  return m;
}

Matrix Matrix::rows_of(const std::vector<int>& idx) const {
  Matrix m(static_cast<int>(idx.size()), cols);
  for (size_t i = 0; i < idx.size(); ++i)
    for (int c = 0; c < cols; ++c) m.at(static_cast<int>(i), c) = at(idx[i], c);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(c, r) = at(r, c);
  return m;
}

Matrix mul(const Field& f, const Matrix& x, const Matrix& y) {
  ensure(x.cols == y.rows, "matrix shape mismatch");
  Matrix m(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      Sym a = x.at(i, k);
      if (!a) continue;
      for (int j = 0; j < y.cols; ++j) m.at(i, j) = f.add(m.at(i, j), f.mul(a, y.at(k, j)));
    }
  return m;
}

std::vector<Sym> mul(const Field& f, const Matrix& x, const std::vector<Sym>& v) {
  ensure(static_cast<int>(v.size()) == x.cols, "matrix-vector shape mismatch");
  std::vector<Sym> out(x.rows, 0);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) out[i] = f.add(out[i], f.mul(x.at(i, k), v[k]));
  return out;
}

std::vector<Sym> vec_mul(const Field& f, const std::vector<Sym>& v, const Matrix& x) {
  ensure(static_cast<int>(v.size()) == x.rows, "vector-matrix shape mismatch");
  std::vector<Sym> out(x.cols, 0);
  for (int k = 0; k < x.rows; ++k) {
    if (!v[k]) continue;
    for (int j = 0; j < x.cols; ++j) out[j] = f.add(out[j], f.mul(v[k], x.at(k, j)));
  }
  return out;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(const Field& f, Matrix& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = r;
    while (p < m.rows && m.at(p, c) == 0) ++p;
    if (p == m.rows) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    Sym iv = f.inv(m.at(r, c));
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = f.mul(m.at(r, j), iv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Sym factor = m.at(i, c);
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(const Field& f, Matrix m) { return static_cast<int>(rref(f, m).size()); }

Sym determinant(const Field& f, Matrix m) {
  ensure(m.rows == m.cols, "determinant of non-square matrix");
  int n = m.rows;
  Sym det = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && m.at(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
      det = f.neg(det);
    }
    det = f.mul(det, m.at(c, c));
    Sym iv = f.inv(m.at(c, c));
    for (int i = c + 1; i < n; ++i) {
      Sym factor = f.mul(m.at(i, c), iv);
      if (!factor) continue;
      for (int j = c; j < n; ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(c, j)));
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Field& f, const Matrix& m) {
  ensure(m.rows == m.cols, "inverse of non-square matrix");
  int n = m.rows;
  Matrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto piv = rref(f, aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
  return out;
}

std::optional<std::vector<Sym>> solve(const Field& f, const Matrix& m, const std::vector<Sym>& b) {
  ensure(static_cast<int>(b.size()) == m.rows, "solve shape mismatch");
  Matrix aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  auto piv = rref(f, aug);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<Sym> x(m.cols, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(static_cast<int>(r), m.cols);
  return x;
}

std::vector<std::vector<Sym>> nullspace(const Field& f, const Matrix& m) {
  Matrix r = m;
  auto piv = rref(f, r);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<std::vector<Sym>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Sym> v(m.cols, 0);
    v[free] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f.neg(r.at(static_cast<int>(i), free));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace nec
