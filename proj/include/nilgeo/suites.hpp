#pragma once

#include "nilgeo/catalog.hpp"
#include "nilgeo/dynamics/parallel.hpp"
#include "nilgeo/group.hpp"
#include "nilgeo/nilaffine.hpp"
#include "nilgeo/parabolic.hpp"
#include "nilgeo/report.hpp"
#include "nilgeo/sampling.hpp"

#include <algorithm>
#include <atomic>

namespace nilgeo {

using NamedAlgebra = std::pair<std::string, GradedNilpotentAlgebra<Rational>>;

struct SuiteOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

namespace detail {

/// Runs `fails(k, rng)` on every sample and records how many failed.
template <class Fn>
void count_failures(Report& report, const std::string& name, const SuiteOptions& opt, std::uint64_t salt, Fn fails) {
  std::vector<char> bad(opt.samples, 0);
  parallel_for(opt.samples, opt.threads, [&](std::size_t k) {
    Rng rng = sample_rng(opt.seed ^ salt, k);
    bad[k] = fails(k, rng) ? 1 : 0;
  });
  const auto failed = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
  report.add(name, failed == 0, static_cast<double>(failed),
             std::to_string(failed) + " of " + std::to_string(opt.samples) + " samples failed");
}

inline std::uint64_t salt_of(const std::string& s) { return std::hash<std::string>{}(s) & 0xffffffffu; }

}  // namespace detail

/// Group axioms, the conjugation identity and, for order 2, affineness of
/// p exp(a + t v) in t. All comparisons are exact.
inline Report bch_suite(const std::vector<NamedAlgebra>& algebras, const SuiteOptions& opt) {
  using G = GroupElement<Rational>;
  Report report;
  for (const auto& [key, alg] : algebras) {
    const std::size_t n = alg.dim();
    const std::uint64_t salt = detail::salt_of(key);
    detail::count_failures(report, "bch:" + key + ":associativity", opt, salt, [&](std::size_t, Rng& rng) {
      G x{random_rational_vector(rng, n)}, y{random_rational_vector(rng, n)}, z{random_rational_vector(rng, n)};
      return bch_multiply(alg, bch_multiply(alg, x, y), z) != bch_multiply(alg, x, bch_multiply(alg, y, z));
    });
    detail::count_failures(report, "bch:" + key + ":identity-inverse", opt, salt + 1, [&](std::size_t, Rng& rng) {
      G x{random_rational_vector(rng, n)};
      const auto e = G::identity(n);
      return bch_multiply(alg, x, e) != x || bch_multiply(alg, e, x) != x ||
             bch_multiply(alg, x, group_inverse(x)) != e || bch_multiply(alg, group_inverse(x), x) != e;
    });
    detail::count_failures(report, "bch:" + key + ":conjugate", opt, salt + 2, [&](std::size_t, Rng& rng) {
      G x{random_rational_vector(rng, n)}, y{random_rational_vector(rng, n)};
      return conjugate(alg, x, y) != bch_multiply(alg, bch_multiply(alg, x, y), group_inverse(x));
    });
    if (alg.order() == 2)
      detail::count_failures(report, "bch:" + key + ":two-step-convexity", opt, salt + 3, [&](std::size_t, Rng& rng) {
        G p{random_rational_vector(rng, n)};
        const auto a = random_rational_vector(rng, n), v = random_rational_vector(rng, n);
        const Rational t = random_rational(rng), h = random_rational(rng);
        auto at = [&](const Rational& s) { return bch_multiply(alg, p, G{a + s * v}).log; };
        return !is_zero_vector(at(Rational(t + h)) - Rational(2) * at(t) + at(Rational(t - h)));
      });
  }
  return report;
}

/// Splits of the graded basis into two coordinate subalgebras, both nonzero.
inline std::vector<std::pair<Subspace<Rational>, Subspace<Rational>>> admissible_splits(
    const GradedNilpotentAlgebra<Rational>& alg) {
  const std::size_t n = alg.dim();
  auto closed = [&](const std::vector<std::size_t>& idx) {
    const auto sub = Subspace<Rational>::coordinate(n, idx);
    for (auto i : idx)
      for (auto j : idx)
        if (!sub.contains(alg.bracket(unit<Rational>(n, i), unit<Rational>(n, j)))) return false;
    return true;
  };
  std::vector<std::pair<Subspace<Rational>, Subspace<Rational>>> out;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? a : b).push_back(i);
    if (closed(a) && closed(b)) out.emplace_back(Subspace<Rational>::coordinate(n, a), Subspace<Rational>::coordinate(n, b));
  }
  return out;
}

/// Recomposition x = x1 x2 and a uniqueness falsifier that moves x1 inside
/// L1 and checks the decomposition follows, for every admissible split.
inline Report split_suite(const std::vector<NamedAlgebra>& algebras, const SuiteOptions& opt) {
  using G = GroupElement<Rational>;
  Report report;
  for (const auto& [key, alg] : algebras) {
    const std::size_t n = alg.dim();
    const auto splits = admissible_splits(alg);
    std::size_t total = 0, recompose = 0, unique = 0;
    for (std::size_t s = 0; s < splits.size(); ++s) {
      const auto& [l1, l2] = splits[s];
      const SplitDecomposer<Rational> split(alg, l1, l2);
      std::vector<char> bad_recompose(opt.samples, 0), bad_unique(opt.samples, 0);
      parallel_for(opt.samples, opt.threads, [&](std::size_t k) {
        Rng rng = sample_rng(opt.seed ^ (detail::salt_of(key) + s), k);
        G x{random_rational_vector(rng, n)};
        auto [x1, x2] = split(x);
        bad_recompose[k] = !l1.contains(x1.log) || !l2.contains(x2.log) || bch_multiply(alg, x1, x2) != x;
        G moved{x1.log + l1.combine(random_rational_vector(rng, l1.dim()))};
        if (moved == x1) return;
        const auto other = bch_multiply(alg, moved, x2);
        auto [y1, y2] = split(other);
        bad_unique[k] = other == x || y1 != moved || y2 != x2;
      });
      total += opt.samples;
      recompose += static_cast<std::size_t>(std::count(bad_recompose.begin(), bad_recompose.end(), 1));
      unique += static_cast<std::size_t>(std::count(bad_unique.begin(), bad_unique.end(), 1));
    }
    const std::string over = " of " + std::to_string(total) + " samples over " + std::to_string(splits.size()) + " splits";
    report.add("split:" + key + ":recompose", recompose == 0, static_cast<double>(recompose),
               std::to_string(recompose) + over);
    report.add("split:" + key + ":uniqueness", unique == 0, static_cast<double>(unique), std::to_string(unique) + over);
  }
  return report;
}

/// Validates the layer geometry of every algebra and the Levi ray geometries
/// of every parabolic of the built-in real forms, and samples the A-element
/// homomorphism a(s) a(t) = a(st).
inline Report ray_suite(const std::vector<NamedAlgebra>& algebras, const SuiteOptions& opt) {
  Report report;
  for (const auto& [key, alg] : algebras) {
    Matrix<Rational> degrees(1, alg.dim());
    for (std::size_t q = 0; q < alg.dim(); ++q) degrees(0, q) = alg.degree(q);
    const auto rg = make_ray_geometry(alg, degrees);
    const auto valid = validate_ray_geometry(rg);
    report.add("ray:" + key + ":layer-geometry", valid.pass(), valid.pass() ? 0.0 : 1.0);
    detail::count_failures(report, "ray:" + key + ":a-homomorphism", opt, detail::salt_of(key), [&](std::size_t, Rng& rng) {
      Vector<Rational> s{Rational(std::uniform_int_distribution<long>(1, 9)(rng), std::uniform_int_distribution<long>(1, 9)(rng))};
      Vector<Rational> t{Rational(std::uniform_int_distribution<long>(1, 9)(rng), std::uniform_int_distribution<long>(1, 9)(rng))};
      const auto as = a_element_from_multipliers(rg, s), at = a_element_from_multipliers(rg, t);
      return as * at != a_element_from_multipliers(rg, Vector<Rational>{s[0] * t[0]}) || !is_automorphism(as, alg);
    });
  }
  for (const auto& spec : real_form_catalog()) {
    const auto rs = catalog_root_system(spec.key);
    std::size_t checked = 0, failed = 0;
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << rs.rank()); ++mask) {
      std::vector<std::size_t> sigma;
      for (std::size_t i = 0; i < rs.rank(); ++i)
        if ((mask >> i) & 1) sigma.push_back(i);
      auto [first, second] = levi_ray_geometries(parabolic(rs, sigma));
      checked += 2;
      failed += !validate_ray_geometry(first).pass();
      failed += !validate_ray_geometry(second).pass();
    }
    report.add("ray:" + spec.key + ":levi-geometries", failed == 0, static_cast<double>(failed),
               std::to_string(checked) + " geometries");
  }
  return report;
}

struct WeightRow {
  std::string label;
  RVector values;  // on the split cartan elements
  std::size_t multiplicity;
};

/// Weights of the split torus of SU(2,2) on the nilradical of the Borel
/// subalgebra, in the graded basis order.
inline std::vector<WeightRow> su22_borel_weights() {
  auto rv = [](long a, long b) { return RVector{Rational(a), Rational(b)}; };
  return {{"a1-a2", rv(1, -1), 2}, {"2a2", rv(0, 2), 1}, {"a1+a2", rv(1, 1), 2}, {"2a1", rv(2, 0), 1}};
}

/// Degree data of the first Levi ray geometry of the SU(2,2) Borel against
/// the expected weights, and ad(H) on n_B for sampled H in the split torus.
inline Report adjoint_suite(const SuiteOptions& opt) {
  Report report;
  const auto rs = catalog_root_system("su22");
  const auto pd = parabolic(rs, {});
  const auto first = levi_ray_geometries(pd).first;
  std::vector<RVector> expected;
  for (const auto& w : su22_borel_weights())
    for (std::size_t m = 0; m < w.multiplicity; ++m) expected.push_back(w.values);
  std::size_t mismatched = expected.size() == first.dim() ? 0 : expected.size();
  for (std::size_t q = 0; mismatched == 0 && q < first.dim(); ++q) mismatched += first.degree_column(q) != expected[q];
  report.add("adjoint:su22:weights", mismatched == 0, static_cast<double>(mismatched),
             "degree columns of the first geometry on n_B");
  detail::count_failures(report, "adjoint:su22:action", opt, 0x5a22, [&](std::size_t, Rng& rng) {
    const Rational a1 = random_rational(rng), a2 = random_rational(rng);
    const RVector h = a1 * rs.algebra.cartan_vector(0) + a2 * rs.algebra.cartan_vector(1);
    RVector diag;
    for (const auto& w : expected) diag.push_back(w[0] * a1 + w[1] * a2);
    return adjoint_action(pd, h) != RMatrix::diagonal(diag);
  });
  return report;
}

}  // namespace nilgeo
