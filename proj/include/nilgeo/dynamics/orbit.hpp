#pragma once

#include "nilgeo/dynamics/cocycle.hpp"
#include "nilgeo/dynamics/parallel.hpp"

namespace nilgeo {

enum class OrbitStatus { converged, diverged, undecided };

inline const char* orbit_status_name(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::converged: return "converged";
    case OrbitStatus::diverged: return "diverged";
    case OrbitStatus::undecided: return "undecided";
  }
  return "?";
}

struct OrbitResult {
  OrbitStatus status = OrbitStatus::undecided;
  std::vector<GroupElement<double>> trajectory;  // p, T(p), T^2(p), ...

  const GroupElement<double>& last() const { return trajectory.back(); }
  std::size_t iterations() const { return trajectory.size() - 1; }

  /// First n with |T^n(p) - target| < tol in log coordinates.
  std::optional<std::size_t> first_within(const Vector<double>& target, double tol) const {
    for (std::size_t k = 0; k < trajectory.size(); ++k)
      if (max_abs(trajectory[k].log - target) < tol) return k;
    return std::nullopt;
  }
};

/// Iterates T from p. Converged when successive points are closer than `tol`
/// in log coordinates, diverged once a coordinate exceeds `escape`.
template <Scalar T>
OrbitResult orbit_limit(const GradedNilpotentAlgebra<T>& alg, const NilAffineMap<T>& map, const GroupElement<T>& p,
                        std::size_t n_max, double tol = 1e-12, double escape = 1e12) {
  const auto dalg = alg.template with_scalar<double>();
  const auto dmap = convert_map<double>(map);
  OrbitResult r;
  r.trajectory.push_back({convert_vector<double>(p.log)});
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto next = apply_map(dalg, dmap, r.last());
    const double step = max_abs(next.log - r.last().log);
    r.trajectory.push_back(std::move(next));
    if (max_abs(r.last().log) > escape) {
      r.status = OrbitStatus::diverged;
      return r;
    }
    if (step < tol) {
      r.status = OrbitStatus::converged;
      return r;
    }
  }
  return r;
}

enum class ProbeVerdict { witness_found, no_witness_found };

inline const char* probe_verdict_name(ProbeVerdict v) {
  return v == ProbeVerdict::witness_found ? "NON-PROPER-WITNESS-FOUND" : "NO-WITNESS-FOUND";
}

/// Witness of non-properness: g_n leaves every compact set of maps while
/// g_n(x) converges to y.
struct ProperWitness {
  GroupElement<double> x, y;
  double escape_norm = 0;
};

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::no_witness_found;
  std::optional<ProperWitness> witness;
  bool escaping = false;
  Report report;
};

/// Falsifier for properness of the sequence `maps`, with constant sequences
/// x_n = x drawn from `samples` (at most `budget` of them). A witness needs
/// the map norm to pass `escape_radius` and the images to settle within
/// `tol`. Finding none is inconclusive, not a proof of properness.
template <Scalar T>
ProbeResult properness_probe(const GradedNilpotentAlgebra<T>& alg, const std::vector<NilAffineMap<T>>& maps,
                             const std::vector<GroupElement<T>>& samples, std::size_t budget, double tol = 1e-9,
                             double escape_radius = 1e6, std::size_t threads = 1) {
  ProbeResult r;
  if (maps.size() < 2) {
    r.report.add("probe", true, 0.0, "fewer than two maps");
    return r;
  }
  const auto dalg = alg.template with_scalar<double>();
  const auto last = convert_map<double>(maps.back());
  const auto prev = convert_map<double>(maps[maps.size() - 2]);
  const double norm = map_norm(maps.back());
  r.escaping = norm >= escape_radius;
  r.report.add("escaping", r.escaping, norm, "norm of (c, f, f^-1) for the last map");

  const std::size_t count = std::min(budget, samples.size());
  std::vector<std::optional<ProperWitness>> found(count);
  parallel_for(count, threads, [&](std::size_t k) {
    const GroupElement<double> x{convert_vector<double>(samples[k].log)};
    const auto y = apply_map(dalg, last, x);
    const auto y_prev = apply_map(dalg, prev, x);
    if (max_abs(y.log - y_prev.log) < tol && std::isfinite(max_abs(y.log))) found[k] = ProperWitness{x, y, norm};
  });
  std::size_t converging = 0;
  for (const auto& w : found)
    if (w) {
      ++converging;
      if (!r.witness) r.witness = w;
    }
  if (!r.escaping) r.witness.reset();
  r.verdict = r.witness ? ProbeVerdict::witness_found : ProbeVerdict::no_witness_found;
  r.report.add("converging-samples", converging > 0, static_cast<double>(converging),
               std::to_string(converging) + " of " + std::to_string(count) + " samples have settled images");
  return r;
}

}  // namespace nilgeo
