#pragma once

#include "nilgeo/group.hpp"

#include <cmath>
#include <sstream>

namespace nilgeo {

/// True iff f([e_i, e_j]) = [f e_i, f e_j] for every basis pair; exact for
/// rationals, within 1e-12 (scaled by |f|^2) for floats.
template <Scalar T>
bool is_automorphism(const Matrix<T>& f, const GradedNilpotentAlgebra<T>& alg, double* residual = nullptr) {
  const std::size_t n = alg.dim();
  if (f.rows() != n || f.cols() != n) throw DimensionMismatch("automorphism candidate has the wrong size");
  double worst = 0;
  bool exact_ok = true;
  std::vector<Vector<T>> images;
  for (std::size_t i = 0; i < n; ++i) images.push_back(f.column(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vector<T> lhs = f.apply(alg.bracket(unit<T>(n, i), unit<T>(n, j)));
      Vector<T> rhs = alg.bracket(images[i], images[j]);
      Vector<T> diff = lhs - rhs;
      if constexpr (ScalarTraits<T>::exact) {
        if (!is_zero_vector(diff)) exact_ok = false;
      }
      worst = std::max(worst, max_abs(diff));
    }
  if (residual) *residual = worst;
  if constexpr (ScalarTraits<T>::exact) {
    return exact_ok;
  } else {
    const double scale = std::max(1.0, f.max_abs_entry());
    return worst <= 1e-12 * scale * scale;
  }
}

/// Nil-affine transformation x -> c + f(x), i.e. L_c(exp(f(ln x))), with f an
/// invertible automorphism of the algebra (checked on construction).
template <Scalar T>
class NilAffineMap {
 public:
  NilAffineMap(const GradedNilpotentAlgebra<T>& alg, GroupElement<T> c, Matrix<T> f)
      : c_(std::move(c)), f_(std::move(f)) {
    alg.check(c_.log);
    if (f_.rows() != alg.dim() || f_.cols() != alg.dim()) throw DimensionMismatch("linear part has the wrong size");
    if (!inverse(f_)) throw SingularMatrix("linear part of a nil-affine map must be invertible");
    if (!is_automorphism(f_, alg)) throw NotAutomorphism("linear part does not preserve the bracket");
  }

  static NilAffineMap identity(const GradedNilpotentAlgebra<T>& alg) {
    return unchecked(GroupElement<T>::identity(alg.dim()), Matrix<T>::identity(alg.dim()));
  }
  static NilAffineMap translation(const GradedNilpotentAlgebra<T>& alg, GroupElement<T> c) {
    alg.check(c.log);
    return unchecked(std::move(c), Matrix<T>::identity(alg.dim()));
  }
  static NilAffineMap linear(const GradedNilpotentAlgebra<T>& alg, Matrix<T> f) {
    return NilAffineMap(alg, GroupElement<T>::identity(alg.dim()), std::move(f));
  }

  /// For values already known to be valid (products and inverses of valid maps).
  static NilAffineMap unchecked(GroupElement<T> c, Matrix<T> f) { return NilAffineMap(std::move(c), std::move(f)); }

  const GroupElement<T>& translation() const { return c_; }
  const Matrix<T>& linear() const { return f_; }

  friend bool operator==(const NilAffineMap& a, const NilAffineMap& b) { return a.c_ == b.c_ && a.f_ == b.f_; }

 private:
  NilAffineMap(GroupElement<T> c, Matrix<T> f) : c_(std::move(c)), f_(std::move(f)) {}

  GroupElement<T> c_;
  Matrix<T> f_;
};

/// f(x) := exp(f(ln x)).
template <Scalar T>
GroupElement<T> apply_linear(const Matrix<T>& f, const GroupElement<T>& x) {
  return {f.apply(x.log)};
}

template <Scalar T>
GroupElement<T> apply_map(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& t, const GroupElement<T>& x) {
  return bch_multiply(alg, t.translation(), apply_linear(t.linear(), x));
}

/// (T1 T2)(x) = T1(T2(x)): translation c1 + f1(c2), linear part f1 f2.
template <Scalar T>
NilAffineMap<T> compose(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& t1, const NilAffineMap<T>& t2) {
  return NilAffineMap<T>::unchecked(bch_multiply(alg, t1.translation(), apply_linear(t1.linear(), t2.translation())),
                                    t1.linear() * t2.linear());
}

template <Scalar T>
NilAffineMap<T> invert_map(const NilAffineMap<T>& t) {
  Matrix<T> finv = inverse_or_throw(t.linear());
  GroupElement<T> c{-finv.apply(t.translation().log)};
  return NilAffineMap<T>::unchecked(std::move(c), std::move(finv));
}

/// The same transformation written against base point y: for local coordinate
/// x' (absolute point y + x'), T(y + x') = (c + f(y)) + f(x').
template <Scalar T>
NilAffineMap<T> rebase(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& t, const GroupElement<T>& y) {
  return NilAffineMap<T>::unchecked(bch_multiply(alg, t.translation(), apply_linear(t.linear(), y)), t.linear());
}

/// n-fold composite T^n (n >= 0), T^{-n} for negative n.
template <Scalar T>
NilAffineMap<T> power(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& t, long n) {
  NilAffineMap<T> base = n < 0 ? invert_map(t) : t;
  NilAffineMap<T> result = NilAffineMap<T>::identity(alg);
  for (long k = 0; k < std::abs(n); ++k) result = compose(alg, base, result);
  return result;
}

/// Ray geometry N x| KA: A acts diagonally with degree matrix d (rank x dim),
/// K is given by generators that preserve `inner_product`.
template <Scalar T>
struct RayGeometry {
  GradedNilpotentAlgebra<T> algebra;
  Matrix<Rational> degrees;
  std::vector<Matrix<T>> k_generators;
  Matrix<T> inner_product;

  std::size_t rank() const { return degrees.rows(); }
  std::size_t dim() const { return algebra.dim(); }

  /// Degree column of basis vector q.
  Vector<Rational> degree_column(std::size_t q) const { return degrees.column(q); }

  template <Scalar U>
  RayGeometry<U> convert() const {
    RayGeometry<U> out{algebra.template with_scalar<U>(), degrees, {}, inner_product.template convert<U>()};
    for (const auto& k : k_generators) out.k_generators.push_back(k.template convert<U>());
    return out;
  }

  friend bool operator==(const RayGeometry& a, const RayGeometry& b) {
    return a.algebra == b.algebra && a.degrees == b.degrees && a.k_generators == b.k_generators &&
           a.inner_product == b.inner_product;
  }
};

template <Scalar T>
RayGeometry<T> make_ray_geometry(GradedNilpotentAlgebra<T> alg, Matrix<Rational> degrees,
                                 std::vector<Matrix<T>> k_generators = {}, std::optional<Matrix<T>> inner = {}) {
  Matrix<T> g = inner ? *inner : Matrix<T>::identity(alg.dim());
  return {std::move(alg), std::move(degrees), std::move(k_generators), std::move(g)};
}

namespace detail {
/// Leading pivots of an LDL^T elimination are all positive.
template <Scalar T>
bool positive_definite(Matrix<T> m) {
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    if constexpr (ScalarTraits<T>::exact) {
      if (m(c, c) <= 0) return false;
    } else {
      if (m(c, c) <= 1e-12) return false;
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      T factor = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return true;
}
}  // namespace detail

/// Per-condition report: A-automorphy, K-orthogonality, K-automorphy, K-A
/// commutation, basis-layer purity (plus shape and the grading itself).
template <Scalar T>
Report validate_ray_geometry(const RayGeometry<T>& rg) {
  Report report;
  const std::size_t n = rg.dim();
  const bool shape_ok = rg.rank() >= 1 && rg.degrees.cols() == n && rg.inner_product.rows() == n &&
                        rg.inner_product.cols() == n &&
                        std::all_of(rg.k_generators.begin(), rg.k_generators.end(),
                                    [&](const Matrix<T>& k) { return k.rows() == n && k.cols() == n; });
  report.add("shape", shape_ok, 0.0, shape_ok ? "" : "degree matrix, inner product or K generator has the wrong size");
  if (!shape_ok) return report;

  report.append(validate_grading(rg.algebra));

  {
    std::ostringstream bad;
    bool ok = true;
    for (const auto& c : rg.algebra.nonzero_constants())
      for (std::size_t r = 0; r < rg.rank(); ++r)
        if (rg.degrees(r, c.k) != rg.degrees(r, c.i) + rg.degrees(r, c.j)) {
          if (ok)
            bad << "row " << r + 1 << ": d(" << rg.algebra.label(c.k) << ") = " << rg.degrees(r, c.k) << " but d("
                << rg.algebra.label(c.i) << ") + d(" << rg.algebra.label(c.j)
                << ") = " << Rational(rg.degrees(r, c.i) + rg.degrees(r, c.j));
          ok = false;
        }
    report.add("A-automorphy", ok, 0.0, bad.str());
  }

  {
    bool sym = rg.inner_product == rg.inner_product.transpose() ||
               max_abs_difference(rg.inner_product, rg.inner_product.transpose()) <= 1e-12;
    report.add("inner-product", sym && detail::positive_definite(rg.inner_product), 0.0,
               "inner product must be symmetric positive definite");
  }

  {
    double worst = 0;
    bool ok = true;
    for (const auto& k : rg.k_generators) {
      Matrix<T> pulled = k.transpose() * rg.inner_product * k;
      double res = max_abs_difference(pulled, rg.inner_product);
      worst = std::max(worst, res);
      if constexpr (ScalarTraits<T>::exact) {
        if (!(pulled == rg.inner_product)) ok = false;
      } else {
        if (res > 1e-12) ok = false;
      }
    }
    report.add("K-orthogonality", ok, worst);
  }

  {
    double worst = 0;
    bool ok = true;
    for (const auto& k : rg.k_generators) {
      double res = 0;
      if (!is_automorphism(k, rg.algebra, &res)) ok = false;
      worst = std::max(worst, res);
    }
    report.add("K-automorphy", ok, worst);
  }

  {
    // A is diagonal, so K commutes with all of A iff K only couples basis
    // vectors with identical degree columns.
    bool ok = true;
    double worst = 0;
    for (const auto& k : rg.k_generators)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
          if (!is_zero(k(p, q)) && rg.degree_column(p) != rg.degree_column(q)) {
            ok = false;
            worst = std::max(worst, std::abs(to_double(k(p, q))));
          }
    report.add("K-A-commutation", ok, worst);
  }

  {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (rg.algebra.degree(i) < 1 || rg.algebra.degree(i) > rg.algebra.order()) ok = false;
    report.add("basis-layer-purity", ok);
  }
  return report;
}

/// exp(a) in A: diagonal entry q is prod_i exp(a_i)^{d_{i,q}}.
template <Scalar T>
Matrix<double> a_element(const RayGeometry<T>& rg, const std::vector<double>& a) {
  if (a.size() != rg.rank()) throw DimensionMismatch("a_element expects one coordinate per rank");
  Vector<double> diag(rg.dim(), 0.0);
  for (std::size_t q = 0; q < rg.dim(); ++q) {
    double s = 0;
    for (std::size_t i = 0; i < rg.rank(); ++i) s += a[i] * to_double(rg.degrees(i, q));
    diag[q] = std::exp(s);
  }
  return Matrix<double>::diagonal(diag);
}

/// Exact A element from multipliers m_i = exp(alpha_i(a)); needs integer degrees.
template <Scalar T>
Matrix<T> a_element_from_multipliers(const RayGeometry<T>& rg, const Vector<T>& multipliers) {
  if (multipliers.size() != rg.rank()) throw DimensionMismatch("a_element expects one multiplier per rank");
  Vector<T> diag(rg.dim(), T(1));
  for (std::size_t q = 0; q < rg.dim(); ++q)
    for (std::size_t i = 0; i < rg.rank(); ++i) {
      long d = to_long(rg.degrees(i, q));
      T base = d < 0 ? T(T(1) / multipliers[i]) : multipliers[i];
      for (long e = 0; e < std::abs(d); ++e) diag[q] *= base;
    }
  return Matrix<T>::diagonal(diag);
}

/// Left translate base * exp(direction).
template <Scalar T>
struct NilAffineSubspace {
  GroupElement<T> base;
  Subspace<T> direction;
};

template <Scalar T>
bool subspace_membership(const GradedNilpotentAlgebra<T>& alg, const NilAffineSubspace<T>& s,
                         const GroupElement<T>& y) {
  return s.direction.contains(bch_multiply(alg, group_inverse(s.base), y).log);
}

}  // namespace nilgeo
