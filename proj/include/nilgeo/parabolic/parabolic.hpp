#pragma once

#include "nilgeo/algebra.hpp"
#include "nilgeo/nilaffine.hpp"
#include "nilgeo/parabolic/roots.hpp"

#include <map>
#include <numeric>

namespace nilgeo {

/// Grading of g attached to Sigma, a subset of the simple roots (0-based
/// positions in the simple-root list). The grade of a root is the sum of its
/// coefficients over the simple roots outside Sigma.
struct ParabolicData {
  RestrictedRootSystem rs;
  std::vector<std::size_t> sigma;
  std::map<int, Subspace<Rational>> grading;
  Subspace<Rational> p, q, levi, n_plus, n_minus;
  int nil_order = 0;

  /// Graded basis of n_Sigma (algebra coordinates), ordered by grade, then
  /// root, then the echelon basis of each root space.
  std::vector<RVector> n_basis;
  std::vector<std::size_t> n_basis_root;
  GradedNilpotentAlgebra<Rational> n_plus_algebra;
  LinearCoordinates<Rational> n_coordinates;

  int grade(const RestrictedRoot& root) const {
    int g = 0;
    for (std::size_t i = 0; i < root.coefficients.size(); ++i)
      if (std::find(sigma.begin(), sigma.end(), i) == sigma.end()) g += static_cast<int>(root.coefficients[i]);
    return g;
  }

  /// Coordinates of an element of n_Sigma in the graded basis.
  RVector n_coords(const RVector& x) const {
    auto c = n_coordinates.coordinates(x);
    if (!c) throw DimensionMismatch("vector does not lie in n_Sigma");
    return *c;
  }

  std::string sigma_label() const {
    if (sigma.empty()) return "{}";
    std::string s = "{";
    for (std::size_t i = 0; i < sigma.size(); ++i) s += (i ? "," : "") + std::string("phi") + std::to_string(sigma[i] + 1);
    return s + "}";
  }
};

inline ParabolicData parabolic(const RestrictedRootSystem& rs, std::vector<std::size_t> sigma) {
  for (auto s : sigma)
    if (s >= rs.simple.size()) throw SigmaNotSimple("phi" + std::to_string(s + 1) + " is not a simple root");
  std::sort(sigma.begin(), sigma.end());
  if (std::adjacent_find(sigma.begin(), sigma.end()) != sigma.end()) throw SigmaNotSimple("repeated simple root");

  const std::size_t n = rs.algebra.dim();
  ParabolicData pd;
  pd.rs = rs;
  pd.sigma = sigma;
  pd.grading[0] = rs.zero_space;
  for (const auto& root : rs.roots) {
    int g = pd.grade(root);
    auto [it, inserted] = pd.grading.try_emplace(g, Subspace<Rational>::zero(n));
    it->second = it->second + root.space;
  }
  pd.p = pd.q = pd.n_plus = pd.n_minus = Subspace<Rational>::zero(n);
  for (const auto& [g, space] : pd.grading) {
    if (g >= 0) pd.p = pd.p + space;
    if (g <= 0) pd.q = pd.q + space;
    if (g > 0) pd.n_plus = pd.n_plus + space;
    if (g < 0) pd.n_minus = pd.n_minus + space;
    if (g > 0 && !space.is_zero()) pd.nil_order = std::max(pd.nil_order, g);
  }
  pd.levi = pd.grading[0];

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rs.positive_count(); ++i)
    if (pd.grade(rs.roots[i]) > 0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int ga = pd.grade(rs.roots[a]), gb = pd.grade(rs.roots[b]);
    if (ga != gb) return ga < gb;
    return rs.roots[a].coefficients > rs.roots[b].coefficients;
  });

  std::vector<std::string> names;
  std::vector<int> degrees;
  for (auto idx : order) {
    const auto& root = rs.roots[idx];
    auto basis = root.space.basis();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      pd.n_basis.push_back(basis[k]);
      pd.n_basis_root.push_back(idx);
      std::string name = root_label(root.coefficients);
      if (basis.size() > 1) name += "." + std::to_string(k + 1);
      names.push_back(name);
      degrees.push_back(pd.grade(root));
    }
  }
  pd.n_coordinates = LinearCoordinates<Rational>(n, pd.n_basis);

  std::vector<StructureConstant> constants;
  for (std::size_t a = 0; a < pd.n_basis.size(); ++a)
    for (std::size_t b = a + 1; b < pd.n_basis.size(); ++b) {
      RVector c = pd.n_coords(rs.algebra.bracket(pd.n_basis[a], pd.n_basis[b]));
      for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0) constants.push_back({a, b, k, c[k]});
    }
  pd.n_plus_algebra = GradedNilpotentAlgebra<Rational>(names, degrees, constants);
  return pd;
}

/// Matrix of ad(h) on n_Sigma in the graded basis; h must lie in the Levi factor.
inline RMatrix adjoint_action(const ParabolicData& pd, const RVector& h) {
  if (!pd.levi.contains(h)) throw NotInLevi("element is not in the Levi factor g_0");
  const std::size_t d = pd.n_basis.size();
  RMatrix m(d, d);
  RMatrix adh = pd.rs.algebra.ad(h);
  for (std::size_t b = 0; b < d; ++b) {
    RVector c = pd.n_coords(adh.apply(pd.n_basis[b]));
    for (std::size_t a = 0; a < d; ++a) m(a, b) = c[a];
  }
  return m;
}

/// True iff the Killing form is negative definite on `sub` (vacuous for 0).
inline bool check_compact_type(const MatrixLieAlgebra& alg, const Subspace<Rational>& sub) {
  auto basis = sub.basis();
  for (const auto& x : basis)
    for (const auto& y : basis)
      if (!sub.contains(alg.bracket(x, y))) throw NotSubalgebra("subspace is not closed under the bracket");
  RMatrix minus_b(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) minus_b(i, j) = -alg.killing(basis[i], basis[j]);
  return detail::positive_definite(minus_b);
}

namespace detail {

/// (I - X/2)^{-1} (I + X/2): orthogonal and rational for skew X.
inline RMatrix cayley(const RMatrix& x) {
  const RMatrix id = RMatrix::identity(x.rows());
  const Rational half(1, 2);
  return inverse_or_throw(RMatrix(id - half * x)) * RMatrix(id + half * x);
}

/// Ad(k) on n_Sigma in the graded basis.
inline RMatrix conjugation_on_n(const ParabolicData& pd, const RMatrix& k) {
  const auto& alg = pd.rs.algebra;
  const RMatrix kinv = inverse_or_throw(k);
  const std::size_t d = pd.n_basis.size();
  RMatrix m(d, d);
  for (std::size_t b = 0; b < d; ++b) {
    auto g = alg.coordinates(k * alg.element(pd.n_basis[b]) * kinv);
    if (!g) throw NotInLevi("compact generator does not normalize the algebra");
    RVector c = pd.n_coords(*g);
    for (std::size_t a = 0; a < d; ++a) m(a, b) = c[a];
  }
  return m;
}

/// Primitive integer multiple of a nonzero rational vector.
inline RVector primitive(RVector v) {
  Integer l(1), g(0);
  for (const auto& x : v) l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(x)));
  for (auto& x : v) {
    x *= l;
    g = boost::multiprecision::gcd(g, Integer(boost::multiprecision::numerator(x)));
  }
  if (g != 0)
    for (auto& x : v) x /= g;
  for (const auto& x : v)
    if (x != 0) {
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
  return v;
}

inline RayGeometry<Rational> levi_geometry(const ParabolicData& pd, const std::vector<RVector>& torus,
                                           const Subspace<Rational>& compact) {
  const auto& alg = pd.rs.algebra;
  const std::size_t d = pd.n_basis.size();
  Matrix<Rational> degrees(torus.size(), d);
  for (std::size_t row = 0; row < torus.size(); ++row)
    for (std::size_t q = 0; q < d; ++q) {
      const auto& values = pd.rs.roots[pd.n_basis_root[q]].values;
      Rational s(0);
      for (std::size_t i = 0; i < values.size(); ++i) s += torus[row][i] * values[i];
      degrees(row, q) = s;
    }
  std::vector<RMatrix> ks;
  for (const auto& x : compact.basis()) ks.push_back(conjugation_on_n(pd, cayley(alg.element(x))));
  RMatrix gram(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      gram(a, b) = trace(RMatrix(alg.element(pd.n_basis[a]).transpose() * alg.element(pd.n_basis[b])));
  return make_ray_geometry(pd.n_plus_algebra, degrees, ks, std::optional<RMatrix>(gram));
}

}  // namespace detail

/// The split torus of the first geometry in split-cartan coordinates (unit
/// vectors) and the subtorus a_Sigma = {H : phi(H) = 0 for phi in Sigma} of
/// the second, as primitive integer vectors.
inline std::vector<RVector> sigma_torus(const ParabolicData& pd) {
  const std::size_t r = pd.rs.algebra.rank();
  if (pd.sigma.empty()) {
    std::vector<RVector> out;
    for (std::size_t i = 0; i < r; ++i) out.push_back(unit<Rational>(r, i));
    return out;
  }
  RMatrix constraints(pd.sigma.size(), r);
  for (std::size_t s = 0; s < pd.sigma.size(); ++s)
    for (std::size_t i = 0; i < r; ++i) constraints(s, i) = pd.rs.roots[pd.rs.simple[pd.sigma[s]]].values[i];
  std::vector<RVector> out;
  for (auto& k : kernel(constraints)) out.push_back(detail::primitive(k));
  return out;
}

/// First: N x| M_B A_B, with A the full split torus and K generated by Cayley
/// transforms of a basis of k cap g_0. Second: N x| (K cap M_Sigma) A_Sigma.
inline std::pair<RayGeometry<Rational>, RayGeometry<Rational>> levi_ray_geometries(const ParabolicData& pd) {
  const auto& alg = pd.rs.algebra;
  const auto k = alg.compact_part();
  std::vector<RVector> full;
  for (std::size_t i = 0; i < alg.rank(); ++i) full.push_back(unit<Rational>(alg.rank(), i));
  auto first = detail::levi_geometry(pd, full, intersect(k, pd.rs.zero_space));
  auto second = detail::levi_geometry(pd, sigma_torus(pd), intersect(k, pd.levi));
  return {std::move(first), std::move(second)};
}

}  // namespace nilgeo
