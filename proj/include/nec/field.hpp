#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nec {

using Sym = uint32_t;

// Prime field GF(q).
class Field {
 public:
  explicit Field(uint32_t q);  // throws non-prime-modulus
  uint32_t q() const { return q_; }

  Sym add(Sym a, Sym b) const { return static_cast<Sym>((uint64_t{a} + b) % q_); }
  Sym sub(Sym a, Sym b) const { return static_cast<Sym>((uint64_t{a} + q_ - b) % q_); }
  Sym neg(Sym a) const { return a ? q_ - a : 0; }
  Sym mul(Sym a, Sym b) const { return static_cast<Sym>(uint64_t{a} * b % q_); }
  Sym pow(Sym a, uint64_t e) const;
  Sym inv(Sym a) const;  // throws inverse-of-zero
  Sym div(Sym a, Sym b) const { return mul(a, inv(b)); }
  Sym reduce(int64_t v) const;

 private:
  uint32_t q_;
};

bool is_prime(uint64_t n);
uint32_t smallest_prime_above(uint32_t n);  // smallest prime > n

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<Sym> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  Sym& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  Sym at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  static Matrix identity(int n);
  Matrix columns(const std::vector<int>& idx) const;
  Matrix rows_of(const std::vector<int>& idx) const;
  Matrix transpose() const;
  bool operator==(const Matrix&) const = default;
};

Matrix mul(const Field& f, const Matrix& x, const Matrix& y);
std::vector<Sym> mul(const Field& f, const Matrix& x, const std::vector<Sym>& v);
std::vector<Sym> vec_mul(const Field& f, const std::vector<Sym>& v, const Matrix& x);  // row vector times matrix

int rank(const Field& f, Matrix m);
Sym determinant(const Field& f, Matrix m);
std::optional<Matrix> inverse(const Field& f, const Matrix& m);
// Some x with m x = b, if one exists.
std::optional<std::vector<Sym>> solve(const Field& f, const Matrix& m, const std::vector<Sym>& b);
// Basis of {x : m x = 0}.
std::vector<std::vector<Sym>> nullspace(const Field& f, const Matrix& m);

}  // namespace nec
