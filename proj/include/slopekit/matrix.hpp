#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slopekit/exactval.hpp"

namespace slopekit {

// Scalar customization points; other scalar types overload these next to their definition.
inline Rational conjugate(const Rational& x) { return x; }
inline bool is_positive_real(const Rational& x) { return sgn(x) > 0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(size_t rows, size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(size_t n, const T& one = T(1)) {
    Matrix m(n, n, T(0));
    for (size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<long>(i * cols_),
                          data_.begin() + static_cast<long>((i + 1) * cols_));
  }
  void set_row(size_t i, const std::vector<T>& v) {
    for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }
  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // conjugate transpose
  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = conjugate((*this)(i, j));
    return t;
  }

  Matrix conj() const {
    Matrix t(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) t.data_[k] = conjugate(data_[k]);
    return t;
  }

  Matrix submatrix(const std::vector<size_t>& rs, const std::vector<size_t>& cs) const {
    Matrix m(rs.size(), cs.size());
    for (size_t i = 0; i < rs.size(); ++i)
      for (size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
    return m;
  }

  Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const {
    Matrix m(nr, nc);
    for (size_t i = 0; i < nr; ++i)
      for (size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& c) {
    for (auto& x : data_) x *= c;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& c) { return a *= c; }
  friend Matrix operator*(const T& c, Matrix a) { return a *= c; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_, T(0));
    T t;
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (is_zero(x)) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          t = x * b(k, j);
          c(i, j) += t;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using ZMatrix = Matrix<Integer>;
using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      for (size_t p = 0; p < b.rows(); ++p)
        for (size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

template <class T>
Matrix<T> block_diagonal(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols(), T(0));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

template <class T>
T trace(const Matrix<T>& m) {
  T t(0);
  for (size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// Determinant by Gaussian elimination over a field.
template <class T>
T field_determinant(Matrix<T> m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  const size_t n = m.rows();
  T det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) return T(0);
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    T inv = T(1) / m(c, c);
    for (size_t r = c + 1; r < n; ++r) {
      if (is_zero(m(r, c))) continue;
      T f = m(r, c) * inv;
      for (size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan; throws std::domain_error when singular.
template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (!a.square()) throw std::invalid_argument("inverse of non-square matrix");
  const size_t n = a.rows();
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    m.swap_rows(p, c);
    inv.swap_rows(p, c);
    T s = T(1) / m(c, c);
    for (size_t j = 0; j < n; ++j) {
      m(c, j) *= s;
      inv(c, j) *= s;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(m(r, c))) continue;
      T f = m(r, c);
      for (size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Pivots of the LDL* factorization without pivoting, or nullopt when a pivot vanishes.
template <class T>
std::optional<std::vector<T>> ldl_pivots(Matrix<T> m) {
  const size_t n = m.rows();
  std::vector<T> pivots;
  for (size_t c = 0; c < n; ++c) {
    if (is_zero(m(c, c))) return std::nullopt;
    pivots.push_back(m(c, c));
    T inv = T(1) / m(c, c);
    for (size_t r = c + 1; r < n; ++r) {
      if (is_zero(m(r, c))) continue;
      T f = m(r, c) * inv;
      for (size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return pivots;
}

/// Hermitian positive definiteness via leading principal pivots.
template <class T>
bool is_positive_definite(const Matrix<T>& m) {
  if (!m.square()) return false;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = i; j < m.cols(); ++j)
      if (!(m(j, i) == conjugate(m(i, j)))) return false;
  auto pivots = ldl_pivots(m);
  if (!pivots) return false;
  for (const auto& p : *pivots)
    if (!is_positive_real(p)) return false;
  return true;
}

/// Hermitian positive semidefiniteness via diagonally pivoted exact LDL*.
template <class T>
bool is_positive_semidefinite(Matrix<T> m) {
  if (!m.square()) return false;
  const size_t n = m.rows();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j)
      if (!(m(j, i) == conjugate(m(i, j)))) return false;
  std::vector<bool> done(n, false);
  for (size_t step = 0; step < n; ++step) {
    // choose any remaining strictly positive diagonal entry
    size_t p = n;
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      if (is_zero(m(i, i))) continue;
      if (!is_positive_real(m(i, i))) return false;
      p = i;
      break;
    }
    if (p == n) {
      // remaining diagonal is zero: the remaining block must vanish
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && !is_zero(m(i, j))) return false;
      return true;
    }
    done[p] = true;
    T inv = T(1) / m(p, p);
    for (size_t r = 0; r < n; ++r) {
      if (done[r] || is_zero(m(r, p))) continue;
      T f = m(r, p) * inv;
      for (size_t j = 0; j < n; ++j) {
        if (done[j]) continue;
        m(r, j) -= f * m(p, j);
      }
    }
  }
  return true;
}

/// Fraction-free Bareiss determinant of an integer matrix.
Integer bareiss_determinant(ZMatrix m);
/// Exact determinant of a rational matrix (rows cleared of denominators, then Bareiss).
Rational determinant(const QMatrix& m);

QMatrix to_rational(const ZMatrix& m);
ZVector clear_denominators(const QVector& v);  // primitive integer multiple with same direction

size_t rank(QMatrix m);
/// Reduced row echelon form, zero rows dropped.
QMatrix rref(QMatrix m);
/// Basis (rows) of {x : m x = 0}.
QMatrix nullspace(const QMatrix& m);

/// Integer column reduction of a k x r matrix B: B * C = [T | 0] with C unimodular and T lower triangular.
struct ColumnEchelon {
  ZMatrix reduced;     // B * transform
  ZMatrix transform;   // C, unimodular r x r
  ZMatrix inverse;     // C^{-1}
  size_t rank = 0;     // number of nonzero pivot columns
};
ColumnEchelon column_echelon(const ZMatrix& b);

/// Row Hermite normal form: upper echelon, positive pivots, entries above pivots reduced; zero rows dropped.
ZMatrix hermite_normal_form(ZMatrix m);
/// Saturated integer basis (rows) of {x in Z^r : m x = 0}.
ZMatrix integer_kernel(const ZMatrix& m);

template <class T>
std::string matrix_to_string(const Matrix<T>& m) {
  std::string s = "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += to_string(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace slopekit
