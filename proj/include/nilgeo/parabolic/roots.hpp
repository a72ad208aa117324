#pragma once

#include "nilgeo/parabolic/matrix_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace nilgeo {

/// Restricted root: values alpha(H_i) on the split cartan basis, its root
/// space in algebra coordinates, and integer coefficients over the simple roots.
struct RestrictedRoot {
  RVector values;
  Subspace<Rational> space;
  std::vector<long> coefficients;

  std::size_t multiplicity() const { return space.dim(); }
  bool positive() const {
    for (const auto& v : values)
      if (v != 0) return v > 0;
    return false;
  }
};

inline std::string root_label(const std::vector<long>& coeffs) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    long c = coeffs[i];
    if (c == 0) continue;
    if (!first) os << (c > 0 ? "+" : "-");
    else if (c < 0) os << "-";
    long a = c < 0 ? -c : c;
    if (a != 1) os << a;
    os << "phi" << i + 1;
    first = false;
  }
  return first ? "0" : os.str();
}

struct RestrictedRootSystem {
  MatrixLieAlgebra algebra;
  std::vector<RestrictedRoot> roots;      // positive roots first, then their negatives in the same order
  Subspace<Rational> zero_space;
  std::vector<std::size_t> simple;        // indices into roots, in the order phi_1, phi_2, ...

  std::size_t rank() const { return simple.size(); }
  std::size_t positive_count() const { return roots.size() / 2; }

  /// Root with the given values, if any.
  std::optional<std::size_t> find(const RVector& values) const {
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (roots[i].values == values) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> find_coefficients(const std::vector<long>& c) const {
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (roots[i].coefficients == c) return i;
    return std::nullopt;
  }
};

namespace detail {

inline bool lex_greater(const RVector& a, const RVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

}  // namespace detail

/// Simultaneous eigenspace decomposition of ad(H) over the split cartan.
/// Positive roots are the lexicographically positive ones; the simple roots
/// are the indecomposable positive roots, listed in `declared_simple` order
/// when given and in decreasing lexicographic order otherwise.
inline RestrictedRootSystem restricted_roots(const MatrixLieAlgebra& alg,
                                             const std::vector<RVector>& declared_simple = {}) {
  const std::size_t n = alg.dim(), r = alg.rank();
  struct Piece {
    RVector values;
    Subspace<Rational> space;
  };
  std::vector<Piece> pieces{{{}, Subspace<Rational>::full(n)}};
  for (std::size_t k = 0; k < r; ++k) {
    RMatrix adh = alg.ad(alg.cartan_vector(k));
    std::vector<Piece> next;
    for (const auto& lambda : rational_spectrum(adh)) {
      auto eig = Subspace<Rational>::span(n, kernel(RMatrix(adh - lambda * RMatrix::identity(n))));
      for (const auto& p : pieces) {
        auto both = intersect(p.space, eig);
        if (both.dim() == 0) continue;
        RVector vals = p.values;
        vals.push_back(lambda);
        next.push_back({vals, both});
      }
    }
    pieces = std::move(next);
  }

  RestrictedRootSystem rs;
  rs.algebra = alg;
  rs.zero_space = Subspace<Rational>::zero(n);
  std::vector<Piece> positive, negative;
  std::size_t total = 0;
  for (auto& p : pieces) {
    total += p.space.dim();
    if (is_zero_vector(p.values))
      rs.zero_space = p.space;
    else if (RestrictedRoot{p.values, p.space, {}}.positive())
      positive.push_back(p);
    else
      negative.push_back(p);
  }
  if (total != n) throw NonSemisimpleResidue("root spaces do not fill the algebra");
  std::sort(positive.begin(), positive.end(),
            [](const Piece& a, const Piece& b) { return detail::lex_greater(a.values, b.values); });

  auto is_root_value = [&](const RVector& v) {
    return std::any_of(positive.begin(), positive.end(), [&](const Piece& p) { return p.values == v; });
  };
  std::vector<std::size_t> simple;
  for (std::size_t i = 0; i < positive.size(); ++i) {
    bool decomposable = false;
    for (std::size_t j = 0; j < positive.size() && !decomposable; ++j) {
      if (j == i) continue;
      RVector rest = positive[i].values - positive[j].values;
      if (is_root_value(rest)) decomposable = true;
    }
    if (!decomposable) simple.push_back(i);
  }
  if (positive.empty() && negative.empty()) return rs;
  if (simple.size() != r) throw NonSemisimpleResidue("simple roots do not match the split rank");

  if (!declared_simple.empty()) {
    std::vector<std::size_t> ordered;
    for (const auto& v : declared_simple) {
      auto it = std::find_if(simple.begin(), simple.end(), [&](std::size_t s) { return positive[s].values == v; });
      if (it == simple.end()) throw BadCartan("declared simple root is not simple for the lexicographic order");
      ordered.push_back(*it);
    }
    simple = ordered;
  }

  // Coefficients over the simple roots: solve once, check integrality.
  RMatrix basis(r, r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t i = 0; i < r; ++i) basis(i, a) = positive[simple[a]].values[i];
  RMatrix inv = inverse_or_throw(basis);
  auto coefficients = [&](const RVector& values) {
    RVector c = inv.apply(values);
    std::vector<long> out;
    for (const auto& x : c) {
      if (!is_integer(x)) throw NonSemisimpleResidue("root is not an integer combination of simple roots");
      out.push_back(to_long(x));
    }
    return out;
  };

  for (const auto& p : positive) {
    auto c = coefficients(p.values);
    if (std::any_of(c.begin(), c.end(), [](long x) { return x < 0; }))
      throw NonSemisimpleResidue("positive root with a negative simple-root coefficient");
    rs.roots.push_back({p.values, p.space, c});
  }
  const std::size_t np = rs.roots.size();
  for (std::size_t i = 0; i < np; ++i) {
    RVector neg = -rs.roots[i].values;
    auto it = std::find_if(negative.begin(), negative.end(), [&](const Piece& p) { return p.values == neg; });
    if (it == negative.end()) throw NonSemisimpleResidue("root without an opposite root");
    auto c = rs.roots[i].coefficients;
    for (auto& x : c) x = -x;
    rs.roots.push_back({neg, it->space, c});
  }
  if (rs.roots.size() != positive.size() + negative.size())
    throw NonSemisimpleResidue("negative roots do not pair with positive roots");
  rs.simple.assign(simple.begin(), simple.end());
  return rs;
}

}  // namespace nilgeo
