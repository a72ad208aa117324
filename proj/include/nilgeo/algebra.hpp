#pragma once

#include "nilgeo/matrix.hpp"
#include "nilgeo/report.hpp"
#include "nilgeo/subspace.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace nilgeo {

/// [e_i, e_j] has coefficient `value` on e_k (0-based indices).
struct StructureConstant {
  std::size_t i, j, k;
  Rational value;
};

/// Graded nilpotent Lie algebra n = n_1 + ... + n_k on a basis whose vectors
/// each sit in one layer. Structure constants are exact; `T` is the scalar
/// domain of vectors handled by this instance.
template <Scalar T>
class GradedNilpotentAlgebra {
 public:
  GradedNilpotentAlgebra() = default;

  /// Unlisted antisymmetric partners are filled in as -value. Listing both
  /// orders keeps them as given, so invalid input survives for validate_grading.
  GradedNilpotentAlgebra(std::vector<std::string> names, std::vector<int> degrees,
                         const std::vector<StructureConstant>& brackets)
      : names_(std::move(names)), degrees_(std::move(degrees)) {
    if (names_.size() != degrees_.size()) throw DimensionMismatch("names and degrees differ in length");
    const std::size_t n = dim();
    table_.assign(n * n * n, Rational(0));
    std::vector<bool> given(n * n * n, false);
    for (const auto& b : brackets) {
      if (b.i >= n || b.j >= n || b.k >= n) throw DimensionMismatch("bracket index out of range");
      table_[index(b.i, b.j, b.k)] = b.value;
      given[index(b.i, b.j, b.k)] = true;
    }
    for (const auto& b : brackets)
      if (!given[index(b.j, b.i, b.k)] && b.i != b.j) table_[index(b.j, b.i, b.k)] = -b.value;
    rebuild_terms();
  }

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(std::size_t i) const { return degrees_.at(i); }

  /// Largest layer index (the nilpotency order of the grading).
  int order() const {
    int k = 0;
    for (int d : degrees_) k = std::max(k, d);
    return k;
  }

  const Rational& constant(std::size_t i, std::size_t j, std::size_t k) const { return table_[index(i, j, k)]; }

  /// All nonzero constants, both orders of each pair.
  std::vector<StructureConstant> nonzero_constants() const {
    std::vector<StructureConstant> out;
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (table_[index(i, j, k)] != 0) out.push_back({i, j, k, table_[index(i, j, k)]});
    return out;
  }

  /// Constants with i < j, the form written to JSON.
  std::vector<StructureConstant> upper_constants() const {
    std::vector<StructureConstant> out;
    for (auto& c : nonzero_constants())
      if (c.i < c.j) out.push_back(c);
    return out;
  }

  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const {
    check(x);
    check(y);
    Vector<T> r(dim(), T(0));
    for (const auto& t : terms_) {
      if (x[t.i] == T(0) || y[t.j] == T(0)) continue;
      r[t.k] += t.value * x[t.i] * y[t.j];
    }
    return r;
  }

  /// Matrix of y -> [x, y].
  Matrix<T> ad(const Vector<T>& x) const {
    check(x);
    Matrix<T> m(dim(), dim());
    for (const auto& t : terms_) {
      if (x[t.i] == T(0)) continue;
      m(t.k, t.j) += t.value * x[t.i];
    }
    return m;
  }

  std::vector<std::size_t> layer_indices(int layer) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < dim(); ++i)
      if (degrees_[i] == layer) idx.push_back(i);
    return idx;
  }

  Subspace<T> layer(int j) const { return Subspace<T>::coordinate(dim(), layer_indices(j)); }

  Vector<T> layer_component(const Vector<T>& x, int j) const {
    check(x);
    Vector<T> r(dim(), T(0));
    for (std::size_t i = 0; i < dim(); ++i)
      if (degrees_[i] == j) r[i] = x[i];
    return r;
  }

  template <Scalar U>
  GradedNilpotentAlgebra<U> with_scalar() const {
    GradedNilpotentAlgebra<U> other;
    other.names_ = names_;
    other.degrees_ = degrees_;
    other.table_ = table_;
    other.rebuild_terms();
    return other;
  }

  friend bool operator==(const GradedNilpotentAlgebra& a, const GradedNilpotentAlgebra& b) {
    return a.names_ == b.names_ && a.degrees_ == b.degrees_ && a.table_ == b.table_;
  }

  void check(const Vector<T>& x) const {
    if (x.size() != dim())
      throw DimensionMismatch("vector of length " + std::to_string(x.size()) + " in an algebra of dimension " +
                              std::to_string(dim()));
  }

  std::string label(std::size_t i) const { return names_.at(i); }

 private:
  template <Scalar U>
  friend class GradedNilpotentAlgebra;

  struct Term {
    std::size_t i, j, k;
    T value;
  };

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * dim() + j) * dim() + k; }

  void rebuild_terms() {
    terms_.clear();
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const Rational& c = table_[index(i, j, k)];
          if (c != 0) terms_.push_back({i, j, k, scalar_cast<T>(c)});
        }
  }

  std::vector<std::string> names_;
  std::vector<int> degrees_;
  std::vector<Rational> table_;
  std::vector<Term> terms_;
};

/// Checks antisymmetry, Jacobi, grading compatibility, positive degrees and
/// nilpotency order <= 3. Failing checks name the offending basis triple.
template <Scalar T>
Report validate_grading(const GradedNilpotentAlgebra<T>& alg) {
  const std::size_t n = alg.dim();
  auto name = [&](std::size_t i) { return alg.label(i); };
  Report report;

  {
    std::ostringstream bad;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (alg.degree(i) < 1) {
        ok = false;
        bad << name(i) << " has degree " << alg.degree(i) << "; ";
      }
    report.add("degrees-positive", ok, 0.0, bad.str());
  }

  {
    std::ostringstream bad;
    bool ok = true;
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Rational s = alg.constant(i, j, k) + alg.constant(j, i, k);
          if (s != 0) {
            if (ok) bad << "c(" << name(i) << "," << name(j) << ")^" << name(k) << " + c(" << name(j) << ","
                        << name(i) << ")^" << name(k) << " = " << s;
            ok = false;
            worst = std::max(worst, std::abs(to_double(s)));
          }
        }
    report.add("antisymmetry", ok, worst, bad.str());
  }

  {
    std::ostringstream bad;
    bool ok = true;
    double worst = 0;
    auto br = [&](const Vector<Rational>& x, const Vector<Rational>& y) {
      Vector<Rational> r(n, Rational(0));
      for (std::size_t a = 0; a < n; ++a) {
        if (x[a] == 0) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (y[b] == 0) continue;
          for (std::size_t c = 0; c < n; ++c)
            if (alg.constant(a, b, c) != 0) r[c] += alg.constant(a, b, c) * x[a] * y[b];
        }
      }
      return r;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          auto ei = unit<Rational>(n, i), ej = unit<Rational>(n, j), ek = unit<Rational>(n, k);
          auto jac = br(ei, br(ej, ek)) + br(ej, br(ek, ei)) + br(ek, br(ei, ej));
          if (!is_zero_vector(jac)) {
            if (ok) bad << "Jacobi fails on (" << name(i) << ", " << name(j) << ", " << name(k) << ")";
            ok = false;
            worst = std::max(worst, max_abs(jac));
          }
        }
    report.add("jacobi", ok, worst, bad.str());
  }

  {
    std::ostringstream bad;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (alg.constant(i, j, k) != 0 && alg.degree(k) != alg.degree(i) + alg.degree(j)) {
            if (ok)
              bad << "[" << name(i) << "," << name(j) << "] has a component on " << name(k) << " which is not in n_"
                  << alg.degree(i) + alg.degree(j);
            ok = false;
          }
    report.add("grading", ok, 0.0, bad.str());
  }

  report.add("nilpotency-order", alg.order() <= 3, 0.0,
             alg.order() <= 3 ? std::string{} : "order " + std::to_string(alg.order()) + " exceeds 3");
  return report;
}

}  // namespace nilgeo
