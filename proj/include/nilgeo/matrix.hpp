#pragma once

#include "nilgeo/error.hpp"
#include "nilgeo/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <vector>

namespace nilgeo {

template <Scalar T>
using Vector = std::vector<T>;

template <Scalar T>
Vector<T> zeros(std::size_t n) {
  return Vector<T>(n, T(0));
}

template <Scalar T>
Vector<T> unit(std::size_t n, std::size_t i) {
  Vector<T> v(n, T(0));
  v[i] = T(1);
  return v;
}

template <Scalar T>
Vector<T> operator+(const Vector<T>& a, const Vector<T>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sizes differ");
  Vector<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

template <Scalar T>
Vector<T> operator-(const Vector<T>& a, const Vector<T>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sizes differ");
  Vector<T> r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

template <Scalar T>
Vector<T> operator-(const Vector<T>& a) {
  Vector<T> r(a);
  for (auto& x : r) x = -x;
  return r;
}

template <Scalar T>
Vector<T> operator*(const T& s, const Vector<T>& a) {
  Vector<T> r(a);
  for (auto& x : r) x *= s;
  return r;
}

template <Scalar T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sizes differ");
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Scalar T>
bool is_zero_vector(const Vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return is_zero(x); });
}

/// Euclidean norm evaluated in binary64.
template <Scalar T>
double norm2(const Vector<T>& v) {
  double s = 0;
  for (const auto& x : v) s += to_double(x) * to_double(x);
  return std::sqrt(s);
}

template <Scalar T>
double max_abs(const Vector<T>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(to_double(x)));
  return m;
}

template <Scalar U, Scalar T>
Vector<U> convert_vector(const Vector<T>& v) {
  Vector<U> r;
  r.reserve(v.size());
  for (const auto& x : v) {
    if constexpr (std::is_same_v<U, T>) {
      r.push_back(x);
    } else if constexpr (std::is_same_v<U, double>) {
      r.push_back(to_double(x));
    } else {
      static_assert(std::is_same_v<T, double> && std::is_same_v<U, Rational>);
      r.push_back(Rational(x));
    }
  }
  return r;
}

/// Dense row-major matrix over an exact or floating scalar.
template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const Vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix from_rows(const std::vector<Vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("row length differs from column count");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vector<T>>& cols, std::size_t rows) {
    return from_rows(cols, rows).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector<T> row(std::size_t i) const {
    return Vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Vector<T> column(std::size_t j) const {
    Vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Vector<T> diagonal_entries() const {
    Vector<T> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
    return d;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vector<T> apply(const Vector<T>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
    Vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      T s(0);
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& a = (*this)(i, j);
        if (!is_zero_exact(a)) s += a * v[j];
      }
      r[i] = s;
    }
    return r;
  }

  bool is_zero_matrix() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return is_zero(x); });
  }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && !is_zero((*this)(i, j))) return false;
    return true;
  }

  double max_abs_entry() const {
    double m = 0;
    for (const auto& x : data_) m = std::max(m, std::abs(to_double(x)));
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product size mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (is_zero_exact(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix r(a);
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix r(a);
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix r(a);
    for (auto& x : r.data_) x *= s;
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Largest absolute entry of a - b, in binary64.
  friend double max_abs_difference(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    double m = 0;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      m = std::max(m, std::abs(to_double(T(a.data_[i] - b.data_[i]))));
    return m;
  }

  template <Scalar U>
  Matrix<U> convert() const {
    Matrix<U> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<U, T>) {
          r(i, j) = (*this)(i, j);
        } else if constexpr (std::is_same_v<U, double>) {
          r(i, j) = to_double((*this)(i, j));
        } else {
          r(i, j) = Rational((*this)(i, j));
        }
      }
    return r;
  }

 private:
  static bool is_zero_exact(const T& x) {
    if constexpr (std::is_same_v<T, Rational>) {
      return x.is_zero();
    } else {
      return x == 0.0;
    }
  }

  void require_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionMismatch("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[[" : " [");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << (i + 1 == m.rows() ? "]]" : "]\n");
  }
  return os;
}

/// Commutator ab - ba.
template <Scalar T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

template <Scalar T>
T trace(const Matrix<T>& m) {
  T s(0);
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

template <Scalar T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form. Floating input uses partial pivoting and a
/// magnitude-relative zero threshold; rational input is exact.
template <Scalar T>
Echelon<T> rref(Matrix<T> m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  double threshold = 0;
  if constexpr (!ScalarTraits<T>::exact) {
    threshold = ScalarTraits<T>::tolerance * std::max(1.0, m.max_abs_entry());
  }
  auto negligible = [&](const T& x) {
    if constexpr (ScalarTraits<T>::exact) {
      return x == 0;
    } else {
      return std::abs(x) <= threshold;
    }
  };

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    if constexpr (ScalarTraits<T>::exact) {
      for (std::size_t i = r; i < rows; ++i)
        if (!negligible(m(i, c))) {
          best = i;
          break;
        }
    } else {
      double best_abs = threshold;
      for (std::size_t i = r; i < rows; ++i)
        if (std::abs(m(i, c)) > best_abs) {
          best_abs = std::abs(m(i, c));
          best = i;
        }
    }
    if (best == rows) {
      for (std::size_t i = r; i < rows; ++i) m(i, c) = T(0);
      continue;
    }
    if (best != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(best, j));
    const T inv = T(1) / m(r, c);
    for (std::size_t j = c; j < cols; ++j) m(r, j) *= inv;
    m(r, c) = T(1);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const T factor = m(i, c);
      if (negligible(factor)) {
        m(i, c) = T(0);
        continue;
      }
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= factor * m(r, j);
      m(i, c) = T(0);
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = T(0);
  return {std::move(m), std::move(pivots)};
}

template <Scalar T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).pivots.size();
}

/// Basis of {x : m x = 0}.
template <Scalar T>
std::vector<Vector<T>> kernel(const Matrix<T>& m) {
  auto [red, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<T> v(m.cols(), T(0));
    v[f] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -red(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of a x = b (free variables set to zero), or nullopt if inconsistent.
template <Scalar T>
std::optional<Vector<T>> solve(const Matrix<T>& a, const Vector<T>& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length differs from row count");
  Matrix<T> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto [red, pivots] = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vector<T> x(a.cols(), T(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = red(r, a.cols());
  if constexpr (!ScalarTraits<T>::exact) {
    // rref's relative threshold can hide a small inconsistency; confirm.
    Vector<T> check = a.apply(x);
    double scale = std::max(1.0, max_abs(b));
    for (std::size_t i = 0; i < b.size(); ++i)
      if (std::abs(check[i] - b[i]) > 1e-9 * scale) return std::nullopt;
  }
  return x;
}

template <Scalar T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  if (!a.square()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  auto [red, pivots] = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red(i, n + j);
  return inv;
}

template <Scalar T>
Matrix<T> inverse_or_throw(const Matrix<T>& a) {
  auto inv = inverse(a);
  if (!inv) throw SingularMatrix("matrix is not invertible");
  return *inv;
}

template <Scalar T>
T determinant(Matrix<T> m) {
  if (!m.square()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    if constexpr (ScalarTraits<T>::exact) {
      for (std::size_t i = c; i < n; ++i)
        if (m(i, c) != 0) {
          best = i;
          break;
        }
    } else {
      double best_abs = 0;
      for (std::size_t i = c; i < n; ++i)
        if (std::abs(m(i, c)) > best_abs) {
          best_abs = std::abs(m(i, c));
          best = i;
        }
    }
    if (best == n || m(best, c) == T(0)) return T(0);
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(best, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      const T factor = m(i, c) / m(c, c);
      if (factor == T(0)) continue;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return det;
}

}  // namespace nilgeo
