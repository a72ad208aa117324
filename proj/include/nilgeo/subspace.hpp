#pragma once

#include "nilgeo/matrix.hpp"

#include <vector>

namespace nilgeo {

/// Linear subspace of T^n stored as the nonzero rows of a reduced echelon
/// matrix. Two spans are equal iff their stored rows are equal.
template <Scalar T>
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = Matrix<T>(0, ambient);
    return s;
  }

  static Subspace full(std::size_t ambient) { return span(ambient, identity_rows(ambient)); }

  static Subspace span(std::size_t ambient, const std::vector<Vector<T>>& generators) {
    if (generators.empty()) return zero(ambient);
    auto [red, pivots] = rref(Matrix<T>::from_rows(generators, ambient));
    Subspace s;
    s.ambient_ = ambient;
    s.pivots_ = pivots;
    s.basis_ = Matrix<T>(pivots.size(), ambient);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      for (std::size_t j = 0; j < ambient; ++j) s.basis_(r, j) = red(r, j);
    return s;
  }

  /// Span of the standard basis vectors with the given indices.
  static Subspace coordinate(std::size_t ambient, const std::vector<std::size_t>& indices) {
    std::vector<Vector<T>> gens;
    for (auto i : indices) gens.push_back(unit<T>(ambient, i));
    return span(ambient, gens);
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return pivots_.size(); }
  bool is_zero() const { return pivots_.empty(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  std::vector<Vector<T>> basis() const {
    std::vector<Vector<T>> b;
    for (std::size_t r = 0; r < dim(); ++r) b.push_back(basis_.row(r));
    return b;
  }

  /// Coordinates of v in the stored basis; meaningful only when contains(v).
  Vector<T> coordinates(const Vector<T>& v) const {
    check_size(v);
    Vector<T> c(dim());
    for (std::size_t r = 0; r < dim(); ++r) c[r] = v[pivots_[r]];
    return c;
  }

  Vector<T> combine(const Vector<T>& coords) const {
    Vector<T> v(ambient_, T(0));
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t j = 0; j < ambient_; ++j) v[j] += coords[r] * basis_(r, j);
    return v;
  }

  /// v minus its reconstruction from pivot coordinates; zero iff v lies in the span.
  Vector<T> residual(const Vector<T>& v) const { return v - combine(coordinates(v)); }

  bool contains(const Vector<T>& v) const {
    Vector<T> res = residual(v);
    if constexpr (ScalarTraits<T>::exact) {
      return is_zero_vector(res);
    } else {
      return max_abs(res) <= 1e-10 * std::max(1.0, max_abs(v));
    }
  }

  bool contains(const Subspace& other) const {
    for (const auto& b : other.basis())
      if (!contains(b)) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_ || a.pivots_ != b.pivots_) return false;
    if constexpr (ScalarTraits<T>::exact) {
      return a.basis_ == b.basis_;
    } else {
      return a.dim() == 0 || max_abs_difference(a.basis_, b.basis_) <= 1e-10;
    }
  }

  friend Subspace operator+(const Subspace& a, const Subspace& b) {
    a.check_ambient(b);
    auto gens = a.basis();
    for (auto& v : b.basis()) gens.push_back(v);
    return span(a.ambient_, gens);
  }

  friend Subspace intersect(const Subspace& a, const Subspace& b) {
    a.check_ambient(b);
    if (a.is_zero() || b.is_zero()) return zero(a.ambient_);
    // Solve sum s_i a_i - sum t_j b_j = 0.
    Matrix<T> m(a.ambient_, a.dim() + b.dim());
    for (std::size_t r = 0; r < a.dim(); ++r)
      for (std::size_t j = 0; j < a.ambient_; ++j) m(j, r) = a.basis_(r, j);
    for (std::size_t r = 0; r < b.dim(); ++r)
      for (std::size_t j = 0; j < a.ambient_; ++j) m(j, a.dim() + r) = -b.basis_(r, j);
    std::vector<Vector<T>> gens;
    for (const auto& k : kernel(m)) {
      Vector<T> s(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(a.dim()));
      gens.push_back(a.combine(s));
    }
    return span(a.ambient_, gens);
  }

  /// Image under a linear map.
  Subspace image(const Matrix<T>& f) const {
    std::vector<Vector<T>> gens;
    for (const auto& b : basis()) gens.push_back(f.apply(b));
    return span(f.rows(), gens);
  }

  bool invariant_under(const Matrix<T>& f) const {
    for (const auto& b : basis())
      if (!contains(f.apply(b))) return false;
    return true;
  }

  /// {w in *this : <u, w>_G = 0 for all u in other}.
  Subspace orthogonal_complement_of(const Subspace& other, const Matrix<T>& gram) const {
    check_ambient(other);
    if (is_zero()) return *this;
    if (other.is_zero()) return *this;
    Matrix<T> constraints(other.dim(), dim());
    for (std::size_t i = 0; i < other.dim(); ++i) {
      Vector<T> gu = gram.transpose().apply(other.basis_.row(i));
      for (std::size_t r = 0; r < dim(); ++r) constraints(i, r) = dot(gu, basis_.row(r));
    }
    std::vector<Vector<T>> gens;
    for (const auto& k : kernel(constraints)) gens.push_back(combine(k));
    return span(ambient_, gens);
  }

  template <Scalar U>
  Subspace<U> convert() const {
    std::vector<Vector<U>> gens;
    for (const auto& b : basis()) gens.push_back(convert_vector<U>(b));
    return Subspace<U>::span(ambient_, gens);
  }

 private:
  static std::vector<Vector<T>> identity_rows(std::size_t n) {
    std::vector<Vector<T>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(unit<T>(n, i));
    return rows;
  }

  void check_size(const Vector<T>& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("vector length differs from ambient dimension");
  }
  void check_ambient(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspaces live in different ambient spaces");
  }

  std::size_t ambient_ = 0;
  Matrix<T> basis_;
  std::vector<std::size_t> pivots_;
};

/// Writes v as a sum of components, one per subspace. Returns nullopt if v is
/// not in the sum or the subspaces are not independent.
template <Scalar T>
std::optional<std::vector<Vector<T>>> split_vector(const Vector<T>& v,
                                                   const std::vector<const Subspace<T>*>& parts) {
  std::vector<Vector<T>> cols;
  std::vector<std::size_t> owner;
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (auto& b : parts[p]->basis()) {
      cols.push_back(b);
      owner.push_back(p);
    }
  std::vector<Vector<T>> out(parts.size(), zeros<T>(v.size()));
  if (cols.empty()) {
    if (!is_zero_vector(v)) return std::nullopt;
    return out;
  }
  Matrix<T> m = Matrix<T>::from_columns(cols, v.size());
  if (rank(m) != cols.size()) return std::nullopt;
  auto coeffs = solve(m, v);
  if (!coeffs) return std::nullopt;
  for (std::size_t c = 0; c < cols.size(); ++c) out[owner[c]] = out[owner[c]] + (*coeffs)[c] * cols[c];
  return out;
}

/// Coordinates with respect to a fixed list of independent vectors (not
/// reduced): solves on a maximal set of independent ambient rows.
template <Scalar T>
class LinearCoordinates {
 public:
  LinearCoordinates() = default;

  LinearCoordinates(std::size_t ambient, std::vector<Vector<T>> basis) : ambient_(ambient), basis_(std::move(basis)) {
    const std::size_t d = basis_.size();
    if (d == 0) return;
    Matrix<T> columns = Matrix<T>::from_columns(basis_, ambient_);
    auto [red, pivots] = rref(columns.transpose());
    if (pivots.size() != d) throw SingularMatrix("coordinate basis is linearly dependent");
    rows_ = pivots;
    Matrix<T> square(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) square(i, j) = columns(rows_[i], j);
    solver_ = inverse_or_throw(square);
  }

  std::size_t dim() const { return basis_.size(); }
  std::size_t ambient() const { return ambient_; }
  const std::vector<Vector<T>>& basis() const { return basis_; }

  /// nullopt if v is outside the span.
  std::optional<Vector<T>> coordinates(const Vector<T>& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("vector length differs from ambient dimension");
    Vector<T> picked(dim());
    for (std::size_t i = 0; i < dim(); ++i) picked[i] = v[rows_[i]];
    Vector<T> c = dim() ? solver_.apply(picked) : Vector<T>{};
    Vector<T> diff = v - combine(c);
    if constexpr (ScalarTraits<T>::exact) {
      if (!is_zero_vector(diff)) return std::nullopt;
    } else {
      if (max_abs(diff) > 1e-9 * std::max(1.0, max_abs(v))) return std::nullopt;
    }
    return c;
  }

  Vector<T> combine(const Vector<T>& coords) const {
    Vector<T> v(ambient_, T(0));
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(coords[i] == T(0)))
        for (std::size_t j = 0; j < ambient_; ++j) v[j] += coords[i] * basis_[i][j];
    return v;
  }

 private:
  std::size_t ambient_ = 0;
  std::vector<Vector<T>> basis_;
  std::vector<std::size_t> rows_;
  Matrix<T> solver_;
};

}  // namespace nilgeo
