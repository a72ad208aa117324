#pragma once

#include "nilgeo/dynamics/cocycle.hpp"

#include <Eigen/Eigenvalues>

namespace nilgeo {

namespace detail {

/// Matrix of f restricted to an invariant subspace, in the subspace's basis.
template <Scalar T>
Matrix<T> restrict_to(const Matrix<T>& f, const Subspace<T>& s) {
  const auto basis = s.basis();
  Matrix<T> m(basis.size(), basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const auto c = s.coordinates(f.apply(basis[b]));
    for (std::size_t a = 0; a < basis.size(); ++a) m(a, b) = c[a];
  }
  return m;
}

template <Scalar T>
double min_abs_eigenvalue(const Matrix<T>& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  if (n == 0) return std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      d(i, j) = to_double(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(d, false);
  return solver.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace detail

/// The unique q in exp(F) with Q(q) = q, for Q = c + f with ln c in F, f
/// preserving F and expanding on it. F must be a graded subalgebra and f must
/// not lower layers on F; then the layer-j part of Q(q) - q is affine in q_j
/// with invertible coefficient f_jj - 1, and the layers are solved in order.
template <Scalar T>
GroupElement<T> q_fixed_point(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& q_map,
                              const Subspace<T>& f_space) {
  detail::require_bch_order(alg);
  const std::size_t n = alg.dim();
  const auto& c = q_map.translation();
  const auto& f = q_map.linear();
  if (f_space.ambient() != n) throw DimensionMismatch("F lives outside the algebra");
  if (!f_space.contains(c.log)) throw TranslationNotInF("ln c does not lie in F");
  if (!f_space.invariant_under(f)) throw NotInvariant("linear part does not preserve F");
  for (const auto& x : f_space.basis())
    for (const auto& y : f_space.basis())
      if (!f_space.contains(alg.bracket(x, y))) throw NotSubalgebra("F is not closed under the bracket");

  std::vector<Subspace<T>> layers;
  std::size_t total = 0;
  for (int j = 1; j <= alg.order(); ++j) {
    layers.push_back(intersect(f_space, alg.layer(j)));
    total += layers.back().dim();
  }
  if (total != f_space.dim()) throw NotGraded("F is not the sum of its graded pieces");
  for (int j = 1; j <= alg.order(); ++j)
    for (const auto& b : layers[static_cast<std::size_t>(j - 1)].basis()) {
      const auto image = f.apply(b);
      for (int i = 1; i < j; ++i)
        if (!is_zero_vector(alg.layer_component(image, i)))
          throw NotFiltered("f sends layer " + std::to_string(j) + " of F into layer " + std::to_string(i));
    }
  if (!(detail::min_abs_eigenvalue(detail::restrict_to(f, f_space)) > 1.0))
    throw NotExpanding("f is not expanding on F");

  GroupElement<T> q = GroupElement<T>::identity(n);
  for (int j = 1; j <= alg.order(); ++j) {
    const auto& layer = layers[static_cast<std::size_t>(j - 1)];
    if (layer.is_zero()) continue;
    const Vector<T> gap = alg.layer_component(apply_map(alg, q_map, q).log - q.log, j);
    const auto basis = layer.basis();
    Matrix<T> m(basis.size(), basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto col = layer.coordinates(alg.layer_component(f.apply(basis[b]), j) - basis[b]);
      for (std::size_t a = 0; a < basis.size(); ++a) m(a, b) = col[a];
    }
    auto u = solve(m, -layer.coordinates(gap));
    if (!u) throw NotExpanding("f - 1 is singular on layer " + std::to_string(j) + " of F");
    q.log = q.log + layer.combine(*u);
  }
  return q;
}

struct IterationResult {
  GroupElement<double> point;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Fixed point of Q by iterating the contraction Q^{-1} from the identity.
template <Scalar T>
IterationResult q_fixed_point_iterate(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& q_map,
                                      std::size_t max_iterations = 10000, double tolerance = 1e-15) {
  const auto dalg = alg.template with_scalar<double>();
  const auto inv = invert_map(convert_map<double>(q_map));
  IterationResult r{GroupElement<double>::identity(alg.dim())};
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    auto next = apply_map(dalg, inv, r.point);
    const double step = max_abs(next.log - r.point.log);
    r.point = std::move(next);
    if (step <= tolerance * std::max(1.0, max_abs(r.point.log))) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace nilgeo
