#pragma once

#include "nilgeo/dynamics/parallel.hpp"
#include "nilgeo/dynamics/splitting.hpp"
#include "nilgeo/sampling.hpp"

#include <cmath>
#include <limits>

namespace nilgeo {

/// Compact convex set in log coordinates: a ball or the hull of vertices.
struct ConvexBody {
  enum class Kind { ball, polytope };
  Kind kind = Kind::ball;
  Vector<double> center;
  double radius = 0;
  std::vector<Vector<double>> vertices;

  static ConvexBody ball(Vector<double> center, double radius) {
    if (center.empty() || !(radius >= 0) || !std::isfinite(radius))
      throw DimensionMismatch("ball needs a center and a finite radius >= 0");
    return {Kind::ball, std::move(center), radius, {}};
  }

  static ConvexBody polytope(std::vector<Vector<double>> vertices) {
    if (vertices.empty()) throw DimensionMismatch("polytope needs at least one vertex");
    for (const auto& v : vertices) {
      if (v.size() != vertices.front().size()) throw DimensionMismatch("polytope vertices differ in length");
      for (double x : v)
        if (!std::isfinite(x)) throw DimensionMismatch("polytope vertex is not finite");
    }
    return {Kind::polytope, {}, 0, std::move(vertices)};
  }

  std::size_t dim() const { return kind == Kind::ball ? center.size() : vertices.front().size(); }

  friend bool operator==(const ConvexBody&, const ConvexBody&) = default;

  /// Deterministic sample: the center and axis extremes (or the vertices)
  /// followed by `extra` seeded points of the body.
  std::vector<Vector<double>> sample(std::size_t extra, std::uint64_t seed) const {
    std::vector<Vector<double>> pts;
    const std::size_t n = dim();
    if (kind == Kind::ball) {
      pts.push_back(center);
      for (std::size_t i = 0; i < n; ++i)
        for (double s : {-1.0, 1.0}) {
          auto p = center;
          p[i] += s * radius;
          pts.push_back(p);
        }
      for (std::size_t k = 0; k < extra; ++k) {
        Rng rng = sample_rng(seed, k);
        std::normal_distribution<double> normal;
        Vector<double> dir(n);
        for (auto& x : dir) x = normal(rng);
        const double len = norm2(dir);
        const double r = radius * std::pow(std::uniform_real_distribution<double>(0, 1)(rng), 1.0 / static_cast<double>(n));
        Vector<double> p = center;
        if (len > 0)
          for (std::size_t i = 0; i < n; ++i) p[i] += r * dir[i] / len;
        pts.push_back(p);
      }
    } else {
      pts = vertices;
      for (std::size_t k = 0; k < extra; ++k) {
        Rng rng = sample_rng(seed, k);
        std::exponential_distribution<double> weight;
        Vector<double> p(n, 0.0);
        double total = 0;
        for (const auto& v : vertices) {
          const double w = weight(rng);
          total += w;
          for (std::size_t i = 0; i < n; ++i) p[i] += w * v[i];
        }
        for (auto& x : p) x /= total;
        pts.push_back(p);
      }
    }
    return pts;
  }
};

enum class LimitStatus { converged, diverged, inconclusive };

inline const char* limit_status_name(LimitStatus s) {
  switch (s) {
    case LimitStatus::converged: return "converged";
    case LimitStatus::diverged: return "diverged";
    case LimitStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Per-coordinate interval hull of the sampled images T_{j0}(body) at the last
/// step, with the coordinates whose extent fell below 1e-8 (collapsed) or whose
/// bounds passed `escape` (diverging).
struct LimitSetEstimate {
  LimitStatus status = LimitStatus::inconclusive;
  std::size_t steps = 0;
  Vector<double> lo, hi;
  std::vector<std::size_t> collapsed, diverging;

  double extent(std::size_t i) const { return hi[i] - lo[i]; }
};

/// Pushes sampled points forward along the cocycle, T_{j0} = T_{j,j-1} T_{j-1,0},
/// until successive hulls are within 1e-8 (Hausdorff distance of boxes) or some
/// bound passes `escape`.
template <Scalar T>
LimitSetEstimate limit_set_estimate(const Cocycle<T>& c, const ConvexBody& body, std::size_t j_max,
                                    std::uint64_t seed = 0, std::size_t extra_samples = 64, std::size_t threads = 1,
                                    double escape = 1e8) {
  const auto alg = c.algebra().template with_scalar<double>();
  const std::size_t n = alg.dim();
  if (body.dim() != n) throw DimensionMismatch("convex body and algebra differ in dimension");
  const auto base = body.sample(extra_samples, seed);
  std::vector<GroupElement<double>> points;
  for (const auto& p : base) points.push_back({p});

  auto hull = [&](LimitSetEstimate& e) {
    e.lo.assign(n, std::numeric_limits<double>::infinity());
    e.hi.assign(n, -std::numeric_limits<double>::infinity());
    for (const auto& p : points)
      for (std::size_t i = 0; i < n; ++i) {
        e.lo[i] = std::min(e.lo[i], p.log[i]);
        e.hi[i] = std::max(e.hi[i], p.log[i]);
      }
  };
  auto finish = [&](LimitSetEstimate& e) {
    e.collapsed.clear();
    e.diverging.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (e.extent(i) < 1e-8) e.collapsed.push_back(i);
      if (std::max(std::abs(e.lo[i]), std::abs(e.hi[i])) > escape) e.diverging.push_back(i);
    }
  };

  LimitSetEstimate est;
  hull(est);
  for (std::size_t j = 1; j <= j_max; ++j) {
    // Consecutive entries push the current images; otherwise restart from the body with T_{j0}.
    auto step = c.at(j, j - 1);
    auto direct = step ? std::nullopt : c.at(j, 0);
    if (!step && !direct) break;
    const auto map = convert_map<double>(step ? *step : *direct);
    std::vector<GroupElement<double>> sources = points;
    if (!step)
      for (std::size_t k = 0; k < base.size(); ++k) sources[k] = {base[k]};
    std::vector<GroupElement<double>> next(sources.size());
    parallel_for(sources.size(), threads, [&](std::size_t k) { next[k] = apply_map(alg, map, sources[k]); });
    points = std::move(next);
    LimitSetEstimate now;
    hull(now);
    now.steps = j;
    double dist = 0;
    for (std::size_t i = 0; i < n; ++i)
      dist = std::max({dist, std::abs(now.lo[i] - est.lo[i]), std::abs(now.hi[i] - est.hi[i])});
    est = std::move(now);
    finish(est);
    if (!est.diverging.empty()) {
      est.status = LimitStatus::diverged;
      return est;
    }
    if (dist < 1e-8) {
      est.status = LimitStatus::converged;
      return est;
    }
  }
  finish(est);
  est.status = LimitStatus::inconclusive;
  return est;
}

struct PullbackResult {
  Vector<double> direction;
  std::optional<Vector<double>> closed_form;
  std::size_t steps = 0;
  double disagreement = 0;

  bool agree(double tol = 1e-8) const { return !closed_form || disagreement <= tol; }
};

/// Normalized limit of f_{j0}^{-1}(normal). For a positive diagonal linear
/// part the closed form keeps the components of `normal` that grow fastest
/// under f^{-1}.
template <Scalar T>
PullbackResult pullback_hyperplane(const Cocycle<T>& c, const Vector<T>& normal, std::size_t j_max) {
  const std::size_t n = c.geometry().dim();
  if (normal.size() != n) throw DimensionMismatch("normal has the wrong length");
  const Vector<double> nu = convert_vector<double>(normal);
  if (max_abs(nu) == 0) throw ZeroNormal("hyperplane normal is zero");
  auto normalized = [](Vector<double> v) {
    const double len = norm2(v);
    for (auto& x : v) x /= len;
    return v;
  };

  PullbackResult r;
  Vector<double> v = normalized(nu);
  if (c.intensional()) {
    const auto finv = inverse_or_throw(c.generator()->linear().template convert<double>());
    for (r.steps = 1; r.steps <= j_max; ++r.steps) v = normalized(finv.apply(v));
    r.steps = j_max;
  } else {
    for (std::size_t j = 1; j <= j_max; ++j) {
      auto t = c.at(j, 0);
      if (!t) break;
      v = normalized(inverse_or_throw(t->linear().template convert<double>()).apply(nu));
      r.steps = j;
    }
  }
  r.direction = v;

  const std::size_t j_ref = c.intensional() ? 1 : r.steps;
  if (j_ref == 0) return r;
  const auto t = *c.at(j_ref, 0);
  const auto lin = t.linear().template convert<double>();
  if (!lin.is_diagonal()) return r;
  for (std::size_t q = 0; q < n; ++q)
    if (lin(q, q) <= 0) return r;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < n; ++q)
    if (nu[q] != 0) best = std::max(best, -std::log(lin(q, q)));
  Vector<double> cf(n, 0.0);
  for (std::size_t q = 0; q < n; ++q)
    if (nu[q] != 0 && -std::log(lin(q, q)) >= best - 1e-9) cf[q] = nu[q];
  r.closed_form = normalized(cf);
  r.disagreement = max_abs(r.direction - *r.closed_form);
  return r;
}

}  // namespace nilgeo
