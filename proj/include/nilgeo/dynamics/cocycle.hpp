#pragma once

#include "nilgeo/nilaffine.hpp"

#include <Eigen/Dense>

#include <map>
#include <numeric>
#include <optional>
#include <tuple>

namespace nilgeo {

template <Scalar U, Scalar T>
NilAffineMap<U> convert_map(const NilAffineMap<T>& t) {
  return NilAffineMap<U>::unchecked({convert_vector<U>(t.translation().log)}, t.linear().template convert<U>());
}

/// Largest entry of |c|, |f| and |f^-1|: leaves every bounded set of maps iff unbounded.
template <Scalar T>
double map_norm(const NilAffineMap<T>& t) {
  const auto f = t.linear().template convert<double>();
  const auto finv = inverse_or_throw(t.linear()).template convert<double>();
  return std::max({max_abs(convert_vector<double>(t.translation().log)), f.max_abs_entry(), finv.max_abs_entry()});
}

template <Scalar T>
double map_distance(const NilAffineMap<T>& a, const NilAffineMap<T>& b) {
  return std::max(max_abs(convert_vector<double>(a.translation().log - b.translation().log)),
                  max_abs_difference(a.linear().template convert<double>(), b.linear().template convert<double>()));
}

/// Family T_ji of holonomy transformations on a ray geometry. Intensional
/// families are powers T_ji = g^(j-i) and are defined for every pair of
/// indices; extensional families are an explicit table keyed by (j, i).
/// `length` is the number of indices 0..length-1 used by checks and trends.
template <Scalar T>
class Cocycle {
 public:
  using Map = NilAffineMap<T>;

  static Cocycle powers(RayGeometry<T> rg, Map g, std::size_t length = 12) {
    Cocycle c;
    c.rg_ = std::move(rg);
    c.length_ = length;
    c.generator_ = g;
    c.forward_.push_back(Map::identity(c.rg_.algebra));
    c.backward_.push_back(Map::identity(c.rg_.algebra));
    const Map ginv = invert_map(g);
    for (std::size_t k = 1; k < length; ++k) {
      c.forward_.push_back(compose(c.rg_.algebra, g, c.forward_.back()));
      c.backward_.push_back(compose(c.rg_.algebra, ginv, c.backward_.back()));
    }
    return c;
  }

  static Cocycle table(RayGeometry<T> rg, std::map<std::pair<std::size_t, std::size_t>, Map> entries) {
    Cocycle c;
    c.rg_ = std::move(rg);
    for (const auto& [key, map] : entries) c.length_ = std::max({c.length_, key.first + 1, key.second + 1});
    c.table_ = std::move(entries);
    return c;
  }

  const RayGeometry<T>& geometry() const { return rg_; }
  const GradedNilpotentAlgebra<T>& algebra() const { return rg_.algebra; }
  std::size_t length() const { return length_; }
  bool intensional() const { return generator_.has_value(); }
  const std::optional<Map>& generator() const { return generator_; }
  const std::map<std::pair<std::size_t, std::size_t>, Map>& entries() const { return table_; }

  /// T_ji; nullopt if an extensional table lacks the pair. Identity when j == i.
  std::optional<Map> at(std::size_t j, std::size_t i) const {
    if (generator_) {
      const std::size_t k = j >= i ? j - i : i - j;
      const auto& cache = j >= i ? forward_ : backward_;
      if (k < cache.size()) return cache[k];
      return power(rg_.algebra, *generator_, j >= i ? static_cast<long>(k) : -static_cast<long>(k));
    }
    if (j == i) return Map::identity(rg_.algebra);
    auto it = table_.find({j, i});
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  /// Triples (k, j, i) with i < j < k < length whose three entries all exist.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> triples() const {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < length_; ++i)
      for (std::size_t j = i + 1; j < length_; ++j)
        for (std::size_t k = j + 1; k < length_; ++k)
          if (at(k, i) && at(k, j) && at(j, i)) out.emplace_back(k, j, i);
    return out;
  }

 private:
  RayGeometry<T> rg_;
  std::size_t length_ = 0;
  std::optional<Map> generator_;
  std::vector<Map> forward_, backward_;
  std::map<std::pair<std::size_t, std::size_t>, Map> table_;
};

/// f = f_K f_A with f_A = exp(a) in A (beta is its diagonal) and f_K preserving
/// the inner product.
struct IsotropyFactor {
  Matrix<double> k;
  Vector<double> a;
  Vector<double> beta;
  double residual = 0;
};

namespace detail {
/// Basis indices grouped by equal degree column, in order of first appearance.
template <Scalar T>
std::vector<std::vector<std::size_t>> degree_blocks(const RayGeometry<T>& rg) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t q = 0; q < rg.dim(); ++q) {
    auto it = std::find_if(blocks.begin(), blocks.end(),
                           [&](const auto& b) { return rg.degree_column(b.front()) == rg.degree_column(q); });
    if (it == blocks.end())
      blocks.push_back({q});
    else
      it->push_back(q);
  }
  return blocks;
}
}  // namespace detail

/// Block polar decomposition: on each degree block f must be a homothety times
/// a G-orthogonal map, and the homothety ratios must come from one A element.
/// Throws FactorizationFailed when the residual exceeds 1e-10.
template <Scalar T>
IsotropyFactor factor_isotropy(const RayGeometry<T>& rg, const Matrix<T>& linear) {
  const std::size_t n = rg.dim();
  const Matrix<double> f = linear.template convert<double>();
  const Matrix<double> g = rg.inner_product.template convert<double>();
  if (f.rows() != n || f.cols() != n) throw DimensionMismatch("linear part has the wrong size");
  const double scale = std::max(1.0, f.max_abs_entry());
  const auto blocks = detail::degree_blocks(rg);

  std::vector<std::size_t> block_of(n);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (auto q : blocks[b]) block_of[q] = b;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (block_of[p] != block_of[q] && std::abs(f(p, q)) > 1e-10 * scale)
        throw FactorizationFailed("linear part mixes directions of different degrees");

  Eigen::MatrixXd d(static_cast<Eigen::Index>(blocks.size()), static_cast<Eigen::Index>(rg.rank()));
  Eigen::VectorXd logs(static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    Matrix<double> sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = f(idx[r], idx[c]);
    const double det = std::abs(determinant(sub));
    if (det == 0) throw FactorizationFailed("linear part is singular on a degree block");
    logs(static_cast<Eigen::Index>(b)) = std::log(det) / static_cast<double>(idx.size());
    for (std::size_t i = 0; i < rg.rank(); ++i)
      d(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)) = to_double(rg.degrees(i, idx.front()));
  }
  Eigen::VectorXd a = d.completeOrthogonalDecomposition().solve(logs);
  double residual = rg.rank() ? (d * a - logs).cwiseAbs().maxCoeff() : logs.cwiseAbs().maxCoeff();

  IsotropyFactor out;
  out.a.assign(a.data(), a.data() + a.size());
  out.beta.assign(n, 1.0);
  for (std::size_t q = 0; q < n; ++q) {
    double s = 0;
    for (std::size_t i = 0; i < rg.rank(); ++i) s += out.a[i] * to_double(rg.degrees(i, q));
    out.beta[q] = std::exp(s);
  }
  out.k = Matrix<double>(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) out.k(p, q) = f(p, q) / out.beta[q];
  const Matrix<double> pulled = out.k.transpose() * g * out.k;
  residual = std::max(residual, max_abs_difference(pulled, g) / std::max(1.0, g.max_abs_entry()));
  out.residual = residual;
  if (residual > 1e-10)
    throw FactorizationFailed("no K A factorization within 1e-10 (residual " + std::to_string(residual) + ")");
  return out;
}

/// Residual of T_ki = T_kj T_ji over all available triples, plus the same
/// relation for the K and A factors. Exact comparison in rational mode.
template <Scalar T>
Report cocycle_check(const Cocycle<T>& c) {
  Report report;
  const auto triples = c.triples();
  if (c.length() < 3 || triples.empty()) {
    report.add("cocycle", false, 0.0, "needs at least three indices with all pairs available");
    return report;
  }
  auto describe = [](const std::tuple<std::size_t, std::size_t, std::size_t>& t) {
    auto [k, j, i] = t;
    return "(k,j,i)=(" + std::to_string(k) + "," + std::to_string(j) + "," + std::to_string(i) + ")";
  };

  double worst = 0, worst_k = 0, worst_a = 0;
  bool exact_ok = true, factored = true;
  std::string where, where_k, where_a, factor_error;
  for (const auto& t : triples) {
    auto [k, j, i] = t;
    const auto tki = *c.at(k, i), tkj = *c.at(k, j), tji = *c.at(j, i);
    const auto product = compose(c.algebra(), tkj, tji);
    if constexpr (ScalarTraits<T>::exact) {
      if (!(product == tki)) exact_ok = false;
    }
    const double scale = std::max(1.0, map_norm(tki));
    const double res = map_distance(product, tki) / scale;
    if (where.empty() || res > worst) {
      worst = res;
      where = describe(t);
    }
    try {
      auto fki = factor_isotropy(c.geometry(), tki.linear());
      auto fkj = factor_isotropy(c.geometry(), tkj.linear());
      auto fji = factor_isotropy(c.geometry(), tji.linear());
      const double rk = max_abs_difference(fkj.k * fji.k, fki.k);
      double ra = 0;
      for (std::size_t q = 0; q < fki.beta.size(); ++q)
        ra = std::max(ra, std::abs(fkj.beta[q] * fji.beta[q] - fki.beta[q]) / std::max(1.0, std::abs(fki.beta[q])));
      if (rk > worst_k) {
        worst_k = rk;
        where_k = describe(t);
      }
      if (ra > worst_a) {
        worst_a = ra;
        where_a = describe(t);
      }
    } catch (const FactorizationFailed& e) {
      if (factored) factor_error = describe(t) + ": " + e.what();
      factored = false;
    }
  }
  const bool ok = ScalarTraits<T>::exact ? exact_ok : worst <= 1e-10;
  report.add("cocycle", ok, worst, ok ? "" : "worst triple " + where);
  report.add("KA-factorization", factored, 0.0, factor_error);
  if (factored) {
    report.add("K-cocycle", worst_k <= 1e-10, worst_k, worst_k <= 1e-10 ? "" : "worst triple " + where_k);
    report.add("A-cocycle", worst_a <= 1e-10, worst_a, worst_a <= 1e-10 ? "" : "worst triple " + where_a);
  }
  return report;
}

}  // namespace nilgeo
