#pragma once

#include "nilgeo/algebra.hpp"

#include <ostream>
#include <utility>

namespace nilgeo {

/// Point of the simply connected group N, held by exponential coordinates of
/// the first kind: the element is exp(log).
template <Scalar T>
struct GroupElement {
  Vector<T> log;

  static GroupElement identity(std::size_t n) { return {zeros<T>(n)}; }
  bool is_identity() const { return is_zero_vector(log); }
  std::size_t dim() const { return log.size(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const GroupElement<T>& x) {
  os << "exp(";
  for (std::size_t i = 0; i < x.log.size(); ++i) os << (i ? ", " : "") << x.log[i];
  return os << ")";
}

template <Scalar T>
GroupElement<T> exp_of(Vector<T> v) {
  return {std::move(v)};
}

namespace detail {
template <Scalar T>
void require_bch_order(const GradedNilpotentAlgebra<T>& alg) {
  if (alg.order() > 3)
    throw UnsupportedOrder("closed-form BCH covers nilpotency order <= 3, got " + std::to_string(alg.order()));
}
}  // namespace detail

/// Lie bracket on the algebra; bilinear in the structure constants.
template <Scalar T>
Vector<T> bracket(const GradedNilpotentAlgebra<T>& alg, const Vector<T>& x, const Vector<T>& y) {
  return alg.bracket(x, y);
}

template <Scalar T>
Matrix<T> ad_matrix(const GradedNilpotentAlgebra<T>& alg, const Vector<T>& x) {
  return alg.ad(x);
}

/// exp(x) exp(y) = exp(x + y + [x,y]/2 + ([x,[x,y]] - [y,[x,y]])/12). Brackets
/// of length four or more vanish once the order is at most 3.
template <Scalar T>
GroupElement<T> bch_multiply(const GradedNilpotentAlgebra<T>& alg, const GroupElement<T>& x,
                             const GroupElement<T>& y) {
  detail::require_bch_order(alg);
  alg.check(x.log);
  alg.check(y.log);
  Vector<T> z = x.log + y.log;
  if (alg.order() < 2) return {std::move(z)};
  const Vector<T> xy = alg.bracket(x.log, y.log);
  const T half = T(1) / T(2);
  z = z + half * xy;
  if (alg.order() >= 3) {
    const T twelfth = T(1) / T(12);
    z = z + twelfth * (alg.bracket(x.log, xy) - alg.bracket(y.log, xy));
  }
  return {std::move(z)};
}

/// exp(x)^{-1} = exp(-x) in any simply connected nilpotent group.
template <Scalar T>
GroupElement<T> group_inverse(const GroupElement<T>& x) {
  return {-x.log};
}

/// x y x^{-1}, evaluated as exp(exp(ad_x) y).
template <Scalar T>
GroupElement<T> conjugate(const GradedNilpotentAlgebra<T>& alg, const GroupElement<T>& x, const GroupElement<T>& y) {
  detail::require_bch_order(alg);
  const Vector<T> xy = alg.bracket(x.log, y.log);
  Vector<T> r = y.log + xy;
  if (alg.order() >= 3) r = r + (T(1) / T(2)) * alg.bracket(x.log, xy);
  return {std::move(r)};
}

/// t x = exp(t ln x).
template <Scalar T>
GroupElement<T> scalar_power(const GroupElement<T>& x, const T& t) {
  return {t * x.log};
}

/// p exp(t v): the geodesic through p with direction v.
template <Scalar T>
GroupElement<T> geodesic_point(const GradedNilpotentAlgebra<T>& alg, const GroupElement<T>& p, const Vector<T>& v,
                               const T& t) {
  return bch_multiply(alg, p, GroupElement<T>{t * v});
}

/// Solves x = exp(x1) exp(x2) with x1 in L1, x2 in L2. Requires L1 + L2 = n as
/// a direct sum which also splits every graded layer. Works upward through the
/// layers: the layer-j part of the product is linear in the layer-j unknowns,
/// and is split by the projection onto L1 along L2, which preserves layers.
template <Scalar T>
class SplitDecomposer {
 public:
  SplitDecomposer(const GradedNilpotentAlgebra<T>& alg, const Subspace<T>& l1, const Subspace<T>& l2) : alg_(alg) {
    detail::require_bch_order(alg);
    const std::size_t n = alg.dim();
    if (l1.ambient() != n || l2.ambient() != n) throw DimensionMismatch("split subspaces live outside the algebra");
    if (l1.dim() + l2.dim() != n || (l1 + l2).dim() != n)
      throw IncompatibleSplit("L1 + L2 is not a direct sum equal to the algebra");
    for (int j = 1; j <= alg.order(); ++j) {
      const Subspace<T> layer = alg.layer(j);
      if (intersect(l1, layer).dim() + intersect(l2, layer).dim() != layer.dim())
        throw IncompatibleSplit("layer " + std::to_string(j) + " is not the sum of its intersections with L1 and L2");
    }
    auto columns = l1.basis();
    for (const auto& b : l2.basis()) columns.push_back(b);
    const auto basis = Matrix<T>::from_columns(columns, n);
    const auto coords = inverse_or_throw(basis);
    proj1_ = Matrix<T>(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t k = 0; k < l1.dim(); ++k) proj1_(r, c) += basis(r, k) * coords(k, c);
  }

  std::pair<GroupElement<T>, GroupElement<T>> operator()(const GroupElement<T>& x) const {
    alg_.check(x.log);
    const std::size_t n = alg_.dim();
    GroupElement<T> u = GroupElement<T>::identity(n), v = GroupElement<T>::identity(n);
    for (int j = 1; j <= alg_.order(); ++j) {
      const Vector<T> gap = alg_.layer_component(x.log - bch_multiply(alg_, u, v).log, j);
      const Vector<T> a = proj1_.apply(gap);
      u.log = u.log + a;
      v.log = v.log + (gap - a);
    }
    return {std::move(u), std::move(v)};
  }

 private:
  GradedNilpotentAlgebra<T> alg_;
  Matrix<T> proj1_;
};

template <Scalar T>
std::pair<GroupElement<T>, GroupElement<T>> split_decompose(const GradedNilpotentAlgebra<T>& alg,
                                                            const GroupElement<T>& x, const Subspace<T>& l1,
                                                            const Subspace<T>& l2) {
  return SplitDecomposer<T>(alg, l1, l2)(x);
}

}  // namespace nilgeo
