#pragma once

#include "nilgeo/dynamics/cocycle.hpp"

namespace nilgeo {

/// Limit of the A-factor diagonal entry in one basis direction.
enum class Omega { zero, one, infinity };
enum class Direction { contracting, expanding };
enum class OmegaMode { closed_form, numeric };

inline const char* omega_name(Omega w) {
  switch (w) {
    case Omega::zero: return "0";
    case Omega::one: return "1";
    case Omega::infinity: return "inf";
  }
  return "?";
}

/// E, P, F are spanned by the basis vectors tagged 0, 1 and infinity.
template <Scalar T>
struct FriedSplitting {
  std::vector<Omega> omega;
  Subspace<T> E, P, F;

  std::vector<std::size_t> indices(Omega w) const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < omega.size(); ++q)
      if (omega[q] == w) out.push_back(q);
    return out;
  }

  static FriedSplitting from_tags(std::vector<Omega> tags) {
    FriedSplitting s;
    const std::size_t n = tags.size();
    s.omega = std::move(tags);
    s.E = Subspace<T>::coordinate(n, s.indices(Omega::zero));
    s.P = Subspace<T>::coordinate(n, s.indices(Omega::one));
    s.F = Subspace<T>::coordinate(n, s.indices(Omega::infinity));
    return s;
  }

  friend bool operator==(const FriedSplitting& a, const FriedSplitting& b) { return a.omega == b.omega; }
};

namespace detail {

/// Sign of the per-step A coordinate (rank one) read from the family: the
/// generator when there is one, else T_{L-1,0}.
template <Scalar T>
int rank_one_trend(const Cocycle<T>& c, Direction direction) {
  const auto& rg = c.geometry();
  NilAffineMap<T> probe = c.generator() ? *c.generator() : *c.at(c.length() - 1, 0);
  const double a = factor_isotropy(rg, probe.linear()).a.at(0);
  int s = std::abs(a) <= 1e-12 ? 0 : (a < 0 ? -1 : 1);
  return direction == Direction::contracting ? s : -s;
}

inline Omega tag_from_sign(int s, const Rational& degree) {
  if (s == 0 || degree == 0) return Omega::one;
  return (degree > 0) == (s < 0) ? Omega::zero : Omega::infinity;
}

}  // namespace detail

/// Tags each basis direction by the limit of beta_{j0,q} (contracting: j to
/// infinity along T_{j0}; expanding: along T_{0j}). Closed form needs rank
/// one and reads the degree signs; numeric mode regresses log beta over j.
template <Scalar T>
FriedSplitting<T> omega_degrees(const Cocycle<T>& c, Direction direction, OmegaMode mode = OmegaMode::closed_form) {
  const auto& rg = c.geometry();
  const std::size_t n = rg.dim();
  std::vector<Omega> tags(n, Omega::one);
  if (mode == OmegaMode::closed_form) {
    if (rg.rank() != 1) throw RankNotOne("closed-form omega degrees need a rank one ray geometry");
    const int s = detail::rank_one_trend(c, direction);
    for (std::size_t q = 0; q < n; ++q) tags[q] = detail::tag_from_sign(s, rg.degrees(0, q));
    return FriedSplitting<T>::from_tags(std::move(tags));
  }

  if (c.length() < 3) throw AmbiguousTrend("numeric omega degrees need at least three indices");
  std::vector<std::vector<double>> logs(n);
  std::vector<std::vector<double>> betas(n);
  std::vector<double> js;
  for (std::size_t j = 1; j < c.length(); ++j) {
    auto t = direction == Direction::contracting ? c.at(j, 0) : c.at(0, j);
    if (!t) continue;
    const auto factor = factor_isotropy(rg, t->linear());
    js.push_back(static_cast<double>(j));
    for (std::size_t q = 0; q < n; ++q) {
      betas[q].push_back(factor.beta[q]);
      logs[q].push_back(std::log(factor.beta[q]));
    }
  }
  if (js.size() < 2) throw AmbiguousTrend("fewer than two members along the trend");
  const double mean_j = std::accumulate(js.begin(), js.end(), 0.0) / static_cast<double>(js.size());
  for (std::size_t q = 0; q < n; ++q) {
    const auto [lo, hi] = std::minmax_element(betas[q].begin(), betas[q].end());
    if (*hi - *lo < 1e-9) {
      tags[q] = Omega::one;
      continue;
    }
    const double mean_l = std::accumulate(logs[q].begin(), logs[q].end(), 0.0) / static_cast<double>(js.size());
    double num = 0, den = 0;
    for (std::size_t m = 0; m < js.size(); ++m) {
      num += (js[m] - mean_j) * (logs[q][m] - mean_l);
      den += (js[m] - mean_j) * (js[m] - mean_j);
    }
    const double slope = num / den;
    if (std::abs(slope) <= 1e-6)
      throw AmbiguousTrend("direction " + rg.algebra.label(q) + " has slope " + std::to_string(slope) +
                           " without a constant sequence");
    tags[q] = slope < 0 ? Omega::zero : Omega::infinity;
  }
  return FriedSplitting<T>::from_tags(std::move(tags));
}

/// Direct sum, [F,F] in F and [F+P, F+P] in F+P, and dim E > 0 when asked.
template <Scalar T>
Report splitting_report(const GradedNilpotentAlgebra<T>& alg, const FriedSplitting<T>& s, bool require_e = false) {
  Report report;
  const std::size_t n = alg.dim();
  report.add("direct-sum", s.E.dim() + s.P.dim() + s.F.dim() == n && (s.E + s.P + s.F).dim() == n);
  auto closed = [&](const Subspace<T>& sub) {
    const auto basis = sub.basis();
    for (const auto& x : basis)
      for (const auto& y : basis)
        if (!sub.contains(alg.bracket(x, y))) return false;
    return true;
  };
  report.add("F-subalgebra", closed(s.F));
  report.add("FP-subalgebra", closed(s.F + s.P));
  if (require_e) report.add("E-nonempty", s.E.dim() > 0);
  return report;
}

template <Scalar T>
struct RankOneStructure {
  Subspace<T> L1, L2, L3;
};

/// L1, L2, L3: spans of the positive, negative and zero degree directions.
template <Scalar T>
RankOneStructure<T> rank_one_structure(const RayGeometry<T>& rg) {
  if (rg.rank() != 1) throw RankNotOne("rank one structure needs a rank one ray geometry");
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t q = 0; q < rg.dim(); ++q) {
    const auto& d = rg.degrees(0, q);
    (d > 0 ? pos : d < 0 ? neg : zero).push_back(q);
  }
  const std::size_t n = rg.dim();
  return {Subspace<T>::coordinate(n, pos), Subspace<T>::coordinate(n, neg), Subspace<T>::coordinate(n, zero)};
}

/// Homogeneous block of E for one degree.
template <Scalar T>
struct EBlock {
  Rational degree;
  std::vector<std::size_t> indices;
  Subspace<T> space;
};

/// E split by degree, in increasing |degree|; checks [E_a, E_b] in E_{a+b}.
template <Scalar T>
std::vector<EBlock<T>> grade_E(const FriedSplitting<T>& s, const RayGeometry<T>& rg) {
  if (rg.rank() != 1) throw RankNotOne("grading E needs a rank one ray geometry");
  std::vector<EBlock<T>> blocks;
  for (auto q : s.indices(Omega::zero)) {
    const Rational& d = rg.degrees(0, q);
    auto it = std::find_if(blocks.begin(), blocks.end(), [&](const EBlock<T>& b) { return b.degree == d; });
    if (it == blocks.end())
      blocks.push_back({d, {q}, {}});
    else
      it->indices.push_back(q);
  }
  std::sort(blocks.begin(), blocks.end(), [](const EBlock<T>& a, const EBlock<T>& b) { return abs(a.degree) < abs(b.degree); });
  for (auto& b : blocks) b.space = Subspace<T>::coordinate(rg.dim(), b.indices);

  const auto& alg = rg.algebra;
  for (const auto& a : blocks)
    for (const auto& b : blocks) {
      const Rational target = a.degree + b.degree;
      auto it = std::find_if(blocks.begin(), blocks.end(), [&](const EBlock<T>& c) { return c.degree == target; });
      for (auto p : a.indices)
        for (auto q : b.indices) {
          const auto v = alg.bracket(unit<T>(rg.dim(), p), unit<T>(rg.dim(), q));
          if (is_zero_vector(v)) continue;
          if (it == blocks.end() || !it->space.contains(v))
            throw NotGraded("[" + alg.label(p) + ", " + alg.label(q) + "] leaves the degree " + target.str() +
                            " block of E");
        }
    }
  return blocks;
}

}  // namespace nilgeo
