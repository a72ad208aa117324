#pragma once

#include "nilgeo/dynamics/parallel.hpp"
#include "nilgeo/dynamics/splitting.hpp"
#include "nilgeo/sampling.hpp"

namespace nilgeo {

/// n = I + V with I a graded subalgebra containing P + F and V the orthogonal
/// complement of I inside each homogeneous block of E.
template <Scalar T>
struct InvisibleData {
  Subspace<T> I, V;
  std::vector<EBlock<T>> grading_of_E;

  template <Scalar U>
  InvisibleData<U> convert() const {
    InvisibleData<U> out{I.template convert<U>(), V.template convert<U>(), {}};
    for (const auto& b : grading_of_E) out.grading_of_E.push_back({b.degree, b.indices, b.space.template convert<U>()});
    return out;
  }
};

namespace detail {

template <Scalar T>
Vector<T> mask(const Vector<T>& v, const std::vector<std::size_t>& indices) {
  Vector<T> out(v.size(), T(0));
  for (auto i : indices) out[i] = v[i];
  return out;
}

template <Scalar T>
std::vector<std::size_t> pf_indices(const FriedSplitting<T>& s) {
  auto out = s.indices(Omega::one);
  for (auto q : s.indices(Omega::infinity)) out.push_back(q);
  std::sort(out.begin(), out.end());
  return out;
}

/// I = (P + F) + sum of (E_m cap I).
template <Scalar T>
bool graded_compatible(const Subspace<T>& sub, const FriedSplitting<T>& s, const std::vector<EBlock<T>>& blocks) {
  Subspace<T> pieces = s.P + s.F;
  for (const auto& b : blocks) pieces = pieces + intersect(b.space, sub);
  return pieces == sub;
}

}  // namespace detail

/// Smallest subspace containing P + F that is invariant under every supplied
/// linear part, closed under the bracket and compatible with the grading of
/// E. This is a lower bound for the invisible subalgebra of a manifold.
template <Scalar T>
Subspace<T> invisible_subspace(const FriedSplitting<T>& s, const RayGeometry<T>& rg,
                               const std::vector<Matrix<T>>& holonomy) {
  const auto blocks = grade_E(s, rg);
  const auto& alg = rg.algebra;
  const auto pf = detail::pf_indices(s);
  Subspace<T> current = s.P + s.F;
  for (std::size_t round = 0; round <= rg.dim(); ++round) {
    auto gens = current.basis();
    const auto basis = gens;
    for (const auto& f : holonomy)
      for (const auto& b : basis) gens.push_back(f.apply(b));
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = a + 1; b < basis.size(); ++b) gens.push_back(alg.bracket(basis[a], basis[b]));
    for (const auto& b : basis) {
      gens.push_back(detail::mask(b, pf));
      for (const auto& block : blocks) gens.push_back(detail::mask(b, block.indices));
    }
    auto next = Subspace<T>::span(rg.dim(), gens);
    if (next.dim() == current.dim()) return next;
    current = std::move(next);
  }
  return current;
}

/// V = sum over m of the orthogonal complement of I cap E_m in E_m. Checks that I
/// is graded and that I and V are invariant, then that exp(I) exp(V) splits N.
template <Scalar T>
InvisibleData<T> invariant_complement(const Subspace<T>& i_space, const FriedSplitting<T>& s,
                                      const RayGeometry<T>& rg, const std::vector<Matrix<T>>& holonomy) {
  const std::size_t n = rg.dim();
  if (i_space.ambient() != n) throw DimensionMismatch("I lives outside the algebra");
  InvisibleData<T> data{i_space, Subspace<T>::zero(n), grade_E(s, rg)};
  if (!detail::graded_compatible(i_space, s, data.grading_of_E))
    throw NotGraded("I is not (P + F) plus its intersections with the blocks of E");
  for (const auto& b : data.grading_of_E)
    data.V = data.V + b.space.orthogonal_complement_of(intersect(b.space, i_space), rg.inner_product);
  for (std::size_t h = 0; h < holonomy.size(); ++h) {
    if (!i_space.invariant_under(holonomy[h]))
      throw NotInvariant("I is not invariant under holonomy part " + std::to_string(h + 1));
    if (!data.V.invariant_under(holonomy[h]))
      throw NotInvariant("V is not invariant under holonomy part " + std::to_string(h + 1));
  }
  if (i_space.dim() + data.V.dim() != n || (i_space + data.V).dim() != n)
    throw NotGraded("I + V is not a direct sum equal to the algebra");
  Vector<T> probe(n, T(1));
  auto [xi, xv] = split_decompose(rg.algebra, GroupElement<T>{probe}, i_space, data.V);
  const double res = max_abs(bch_multiply(rg.algebra, xi, xv).log - probe);
  if (res > (ScalarTraits<T>::exact ? 0.0 : 1e-10))
    throw IncompatibleSplit("exp(I) exp(V) does not recompose");
  return data;
}

/// Left-trivialized radial field: ln(x_V) where x = x_I x_V.
template <Scalar T>
Vector<T> radial_field(const GradedNilpotentAlgebra<T>& alg, const GroupElement<T>& x, const InvisibleData<T>& data) {
  return split_decompose(alg, x, data.I, data.V).second.log;
}

/// R(x) = x_I (lambda x_V); lambda = e^t.
template <Scalar T>
GroupElement<T> radial_flow_lambda(const GradedNilpotentAlgebra<T>& alg, const GroupElement<T>& x, const T& lambda,
                                   const InvisibleData<T>& data) {
  auto [xi, xv] = split_decompose(alg, x, data.I, data.V);
  return bch_multiply(alg, xi, scalar_power(xv, lambda));
}

inline GroupElement<double> radial_flow(const GradedNilpotentAlgebra<double>& alg, const GroupElement<double>& x,
                                        double t, const InvisibleData<double>& data) {
  return radial_flow_lambda(alg, x, std::exp(t), data);
}

/// Central-difference Jacobian determinant of R_t in log coordinates (step
/// 1e-6) against e^{t dim V}, at `samples` seeded points of [-1, 1]^n.
template <Scalar T>
Report volume_scaling_check(const GradedNilpotentAlgebra<T>& alg, const InvisibleData<T>& data, double t,
                            std::size_t samples, std::uint64_t seed = 0, std::size_t threads = 1) {
  const auto dalg = alg.template with_scalar<double>();
  const auto d = data.template convert<double>();
  const std::size_t n = alg.dim();
  const double expected = std::exp(t * static_cast<double>(d.V.dim()));
  const double h = 1e-6;
  const SplitDecomposer<double> split(dalg, d.I, d.V);
  const double lambda = std::exp(t);
  auto flow = [&](const Vector<double>& p) {
    auto [xi, xv] = split({p});
    return bch_multiply(dalg, xi, scalar_power(xv, lambda)).log;
  };
  std::vector<double> errors(samples, 0.0);
  parallel_for(samples, threads, [&](std::size_t k) {
    Rng rng = sample_rng(seed, k);
    const auto x = random_double_vector(rng, n);
    Matrix<double> jac(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      auto plus = x, minus = x;
      plus[c] += h;
      minus[c] -= h;
      const auto fp = flow(plus);
      const auto fm = flow(minus);
      for (std::size_t r = 0; r < n; ++r) jac(r, c) = (fp[r] - fm[r]) / (2 * h);
    }
    errors[k] = std::abs(determinant(jac) - expected) / expected;
  });
  const double worst = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  Report report;
  report.add("volume-scaling", worst <= 1e-6, worst,
             "expected det " + std::to_string(expected) + " over " + std::to_string(samples) + " samples");
  return report;
}

/// f(X(x)) = X(T(x)) at seeded samples, for T preserving I and V with ln c in I.
template <Scalar T>
Report field_equivariance_check(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& map,
                                const InvisibleData<T>& data, std::size_t samples, std::uint64_t seed = 0,
                                std::size_t threads = 1) {
  if (!data.I.contains(map.translation().log)) throw TranslationNotInI("ln c does not lie in I");
  if (!data.I.invariant_under(map.linear()) || !data.V.invariant_under(map.linear()))
    throw NotInvariant("linear part does not preserve I and V");
  const auto dalg = alg.template with_scalar<double>();
  const auto d = data.template convert<double>();
  const auto dmap = convert_map<double>(map);
  const auto f = dmap.linear();
  const SplitDecomposer<double> split(dalg, d.I, d.V);
  std::vector<double> residuals(samples, 0.0);
  parallel_for(samples, threads, [&](std::size_t k) {
    Rng rng = sample_rng(seed, k);
    const GroupElement<double> x{random_double_vector(rng, alg.dim())};
    const auto lhs = f.apply(split(x).second.log);
    const auto rhs = split(apply_map(dalg, dmap, x)).second.log;
    residuals[k] = max_abs(lhs - rhs);
  });
  const double worst = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  Report report;
  report.add("field-equivariance", worst <= 1e-10, worst);
  return report;
}

}  // namespace nilgeo
