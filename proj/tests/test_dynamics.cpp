#include "nilgeo/catalog.hpp"
#include "nilgeo/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nilgeo;

namespace {

using Q = Rational;
using RMap = NilAffineMap<Rational>;
using DMap = NilAffineMap<double>;

const auto heis3 = nilpotent_algebra("heis3");
const auto heis3d = heis3.with_scalar<double>();

// (x,y,z)(x',y',z') = (x+x', y+y', z+z' + (xy' - yx')/2), written out by hand.
template <class S>
Vector<S> heis_product(const Vector<S>& a, const Vector<S>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2] + (a[0] * b[1] - a[1] * b[0]) / S(2)};
}

Matrix<Rational> row(std::initializer_list<long> d) {
  Matrix<Rational> m(1, d.size());
  std::size_t i = 0;
  for (long x : d) m(0, i++) = x;
  return m;
}

template <class S>
Matrix<S> diag(std::initializer_list<S> d) {
  return Matrix<S>::diagonal(Vector<S>(d));
}

RayGeometry<Rational> heis_rg(std::initializer_list<long> d) { return make_ray_geometry(heis3, row(d)); }
RayGeometry<double> heis_rgd(std::initializer_list<long> d) { return make_ray_geometry(heis3d, row(d)); }

std::vector<Omega> tags(std::initializer_list<Omega> t) { return t; }
constexpr Omega O0 = Omega::zero, O1 = Omega::one, OI = Omega::infinity;

// Graded dilation diag(l^deg) of an algebra with integer layer degrees.
Matrix<Rational> dilation(const GradedNilpotentAlgebra<Rational>& alg, const Rational& l) {
  Vector<Rational> d;
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    Rational p(1);
    for (int k = 0; k < alg.degree(i); ++k) p *= l;
    d.push_back(p);
  }
  return Matrix<Rational>::diagonal(d);
}

// exp(ad x) for nilpotency order <= 3.
Matrix<Rational> exp_ad(const GradedNilpotentAlgebra<Rational>& alg, const Vector<Rational>& x) {
  const auto a = alg.ad(x);
  return Matrix<Rational>::identity(alg.dim()) + a + Rational(1, 2) * (a * a);
}

// Degree rows compatible with the brackets of each catalog algebra.
Matrix<Rational> random_degree_row(const std::string& key, Rng& rng) {
  std::uniform_int_distribution<long> pick(-3, 3);
  long a = pick(rng), b = pick(rng), c = pick(rng);
  if (key == "heis3") return row({a, b, a + b});
  if (key == "heis5") return row({a, b, c, a + b - c, a + b});
  if (key == "engel4") return row({a, b, a + b, 2 * a + b});
  if (key == "cartan23") return row({a, b, c, a + b, a + c, b + c});
  return row({a, b, c, a + b, b + c, a + b + c});  // n4
}

}  // namespace

// ---------------------------------------------------------------- cocycles

TEST(Cocycle, PowerFamilyIsExact) {
  auto g = RMap(heis3, {{Q(1), Q(-2), Q(1, 3)}}, diag<Q>({Q(1, 2), Q(1, 2), Q(1, 4)}));
  auto c = Cocycle<Q>::powers(heis_rg({1, 1, 2}), g, 6);
  auto report = cocycle_check(c);
  EXPECT_TRUE(report.pass()) << report.failures().front()->detail;
  EXPECT_EQ(report.find("cocycle")->residual, 0.0);
}

TEST(Cocycle, IdentityFamilyPasses) {
  auto c = Cocycle<Q>::powers(heis_rg({1, 1, 2}), RMap::identity(heis3), 5);
  EXPECT_TRUE(cocycle_check(c).pass());
}

TEST(Cocycle, PerturbedEntryIsLocated) {
  auto rg = heis_rgd({1, 1, 2});
  auto g = DMap(heis3d, {{0.5, -1.0, 0.25}}, diag<double>({0.5, 0.5, 0.25}));
  auto family = Cocycle<double>::powers(rg, g, 5);
  std::map<std::pair<std::size_t, std::size_t>, DMap> table;
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < j; ++i) table.emplace(std::pair{j, i}, *family.at(j, i));
  ASSERT_TRUE(cocycle_check(Cocycle<double>::table(rg, table)).pass());
  auto bad = table.at({3, 1});
  auto c = bad.translation();
  c.log[2] += 1e-3;
  table.insert_or_assign(std::pair{std::size_t{3}, std::size_t{1}}, DMap::unchecked(c, bad.linear()));
  auto report = cocycle_check(Cocycle<double>::table(rg, table));
  const auto* check = report.find("cocycle");
  EXPECT_FALSE(check->pass);
  EXPECT_GT(check->residual, 1e-5);
  // The worst triple uses the perturbed pair (3, 1), as T_31 or inside T_k3 T_31.
  EXPECT_TRUE(check->detail.find("(3,2,1)") != std::string::npos || check->detail.find("(4,3,1)") != std::string::npos)
      << check->detail;
}

TEST(Cocycle, FactorsRotationTimesHomothety) {
  // s R on span(X, Y) and s^2 on Z, with R the rotation with cos 3/5.
  const double s = 3.0;
  Matrix<double> f{{s * 0.6, -s * 0.8, 0}, {s * 0.8, s * 0.6, 0}, {0, 0, s * s}};
  auto factor = factor_isotropy(heis_rgd({1, 1, 2}), f);
  EXPECT_NEAR(factor.a[0], std::log(s), 1e-14);
  EXPECT_NEAR(factor.beta[0], s, 1e-12);
  EXPECT_NEAR(factor.beta[2], s * s, 1e-12);
  EXPECT_NEAR(factor.k(0, 1), -0.8, 1e-14);
  EXPECT_NEAR(factor.k(2, 2), 1.0, 1e-14);
}

TEST(Cocycle, FactorizationRejectsMixedDegrees) {
  // Swapping X and Y is an automorphism but mixes degrees 1 and -1.
  Matrix<double> swap{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}};
  EXPECT_THROW(factor_isotropy(heis_rgd({1, -1, 0}), swap), FactorizationFailed);
  // Not a homothety on the degree-one block.
  EXPECT_THROW(factor_isotropy(heis_rgd({1, 1, 2}), diag<double>({2.0, 1.0, 2.0})), FactorizationFailed);
}

TEST(Cocycle, RandomPowerFamiliesAreCocycles) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = sample_rng(11, seed);
    const double s = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
    const double th = std::uniform_real_distribution<double>(0, 6.28)(rng);
    Matrix<double> f{{s * std::cos(th), -s * std::sin(th), 0}, {s * std::sin(th), s * std::cos(th), 0}, {0, 0, s * s}};
    DMap g(heis3d, {random_double_vector(rng, 3)}, f);
    auto report = cocycle_check(Cocycle<double>::powers(heis_rgd({1, 1, 2}), g, 6));
    EXPECT_TRUE(report.pass()) << seed;
  }
}

// ---------------------------------------------------------------- omega and splittings

TEST(Omega, SimilarityContracts) {
  auto g = RMap::linear(heis3, diag<Q>({Q(1, 2), Q(1, 2), Q(1, 4)}));
  auto c = Cocycle<Q>::powers(heis_rg({1, 1, 2}), g, 8);
  auto s = omega_degrees(c, Direction::contracting);
  EXPECT_EQ(s.omega, tags({O0, O0, O0}));
  EXPECT_EQ(s.E, Subspace<Q>::full(3));
  EXPECT_TRUE(s.P.is_zero());
  EXPECT_TRUE(s.F.is_zero());
}

TEST(Omega, VolumePreservingSplitsThreeWays) {
  auto g = RMap::linear(heis3, diag<Q>({Q(1, 2), Q(2), Q(1)}));
  auto c = Cocycle<Q>::powers(heis_rg({1, -1, 0}), g, 8);
  for (auto mode : {OmegaMode::closed_form, OmegaMode::numeric}) {
    auto s = omega_degrees(c, Direction::contracting, mode);
    EXPECT_EQ(s.E, Subspace<Q>::coordinate(3, {0}));
    EXPECT_EQ(s.F, Subspace<Q>::coordinate(3, {1}));
    EXPECT_EQ(s.P, Subspace<Q>::coordinate(3, {2}));
  }
  EXPECT_EQ(omega_degrees(c, Direction::expanding).omega, tags({OI, O0, O1}));
}

TEST(Omega, IdentityFamilyIsNeutral) {
  auto c = Cocycle<Q>::powers(heis_rg({1, 1, 2}), RMap::identity(heis3), 8);
  for (auto mode : {OmegaMode::closed_form, OmegaMode::numeric}) {
    auto s = omega_degrees(c, Direction::contracting, mode);
    EXPECT_EQ(s.omega, tags({O1, O1, O1}));
    EXPECT_EQ(s.P, Subspace<Q>::full(3));
  }
}

TEST(Omega, ExpandingGeneratorMirrorsTheTags) {
  auto g = RMap::linear(heis3, diag<Q>({Q(2), Q(2), Q(4)}));
  auto c = Cocycle<Q>::powers(heis_rg({1, 1, 2}), g, 8);
  EXPECT_EQ(omega_degrees(c, Direction::contracting).omega, tags({OI, OI, OI}));
  EXPECT_EQ(omega_degrees(c, Direction::expanding).omega, tags({O0, O0, O0}));
}

TEST(Omega, SlowDriftIsAmbiguous) {
  auto rg = heis_rgd({1, 1, 2});
  std::map<std::pair<std::size_t, std::size_t>, DMap> table;
  for (std::size_t j = 1; j < 6; ++j) {
    const double l = std::exp(1e-8 * static_cast<double>(j));
    table.emplace(std::pair{j, std::size_t{0}}, DMap::linear(heis3d, diag<double>({l, l, l * l})));
  }
  EXPECT_THROW(omega_degrees(Cocycle<double>::table(rg, table), Direction::contracting, OmegaMode::numeric),
               AmbiguousTrend);
}

TEST(Omega, ClosedFormNeedsRankOne) {
  Matrix<Rational> degrees{{Q(1), Q(0), Q(1)}, {Q(0), Q(1), Q(1)}};
  auto rg = make_ray_geometry(heis3, degrees);
  auto c = Cocycle<Q>::powers(rg, RMap::identity(heis3), 4);
  EXPECT_THROW(omega_degrees(c, Direction::contracting), RankNotOne);
  // Numeric mode works in any rank.
  auto g = RMap::linear(heis3, diag<Q>({Q(1, 2), Q(3), Q(3, 2)}));
  auto s = omega_degrees(Cocycle<Q>::powers(rg, g, 6), Direction::contracting, OmegaMode::numeric);
  EXPECT_EQ(s.omega, tags({O0, OI, OI}));
}

TEST(Omega, ModesAgreeAndSplittingsAreSubalgebras) {
  std::size_t checked = 0;
  for (const std::string key : {"heis3", "heis5", "engel4", "cartan23", "n4"}) {
    const auto alg = nilpotent_algebra(key);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng = sample_rng(5, seed);
      auto rg = make_ray_geometry(alg, random_degree_row(key, rng));
      Vector<Rational> mult{Rational(std::uniform_int_distribution<long>(1, 4)(rng), 3)};
      auto g = RMap(alg, {random_rational_vector(rng, alg.dim(), 3, 2)}, a_element_from_multipliers(rg, mult));
      auto c = Cocycle<Q>::powers(rg, g, 6);
      for (auto dir : {Direction::contracting, Direction::expanding}) {
        auto closed = omega_degrees(c, dir);
        auto numeric = omega_degrees(c, dir, OmegaMode::numeric);
        EXPECT_EQ(closed.omega, numeric.omega) << key << " seed " << seed;
        auto report = splitting_report(alg, closed);
        EXPECT_TRUE(report.pass()) << key << " seed " << seed;
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 400u);
}

TEST(RankOneStructure, Examples) {
  auto vp = rank_one_structure(heis_rg({1, -1, 0}));
  EXPECT_EQ(vp.L1, Subspace<Q>::coordinate(3, {0}));
  EXPECT_EQ(vp.L2, Subspace<Q>::coordinate(3, {1}));
  EXPECT_EQ(vp.L3, Subspace<Q>::coordinate(3, {2}));
  auto sim = rank_one_structure(heis_rg({1, 1, 2}));
  EXPECT_EQ(sim.L1, Subspace<Q>::full(3));
  EXPECT_TRUE(sim.L2.is_zero() && sim.L3.is_zero());
  EXPECT_EQ(rank_one_structure(heis_rg({0, 0, 0})).L3, Subspace<Q>::full(3));
  EXPECT_THROW(rank_one_structure(make_ray_geometry(heis3, Matrix<Rational>(2, 3))), RankNotOne);
}

TEST(RankOneStructure, PIsIndependentOfTheDynamics) {
  auto rg = heis_rg({1, -1, 0});
  auto st = rank_one_structure(rg);
  for (auto l : {Q(1, 3), Q(5, 2)})
    for (auto dir : {Direction::contracting, Direction::expanding}) {
      auto c = Cocycle<Q>::powers(rg, RMap::linear(heis3, diag<Q>({l, Q(1) / l, Q(1)})), 5);
      auto s = omega_degrees(c, dir);
      EXPECT_EQ(s.P, st.L3);
      EXPECT_TRUE((s.E == st.L1 && s.F == st.L2) || (s.E == st.L2 && s.F == st.L1));
    }
}

TEST(GradeE, Examples) {
  auto sim = FriedSplitting<Q>::from_tags({O0, O0, O0});
  auto blocks = grade_E(sim, heis_rg({1, 1, 2}));
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].degree, 1);
  EXPECT_EQ(blocks[0].space, Subspace<Q>::coordinate(3, {0, 1}));
  EXPECT_EQ(blocks[1].degree, 2);
  EXPECT_EQ(blocks[1].space, Subspace<Q>::coordinate(3, {2}));

  auto vp = grade_E(FriedSplitting<Q>::from_tags({O0, OI, O1}), heis_rg({1, -1, 0}));
  ASSERT_EQ(vp.size(), 1u);
  EXPECT_EQ(vp[0].degree, 1);
  EXPECT_EQ(vp[0].space, Subspace<Q>::coordinate(3, {0}));

  EXPECT_EQ(grade_E(FriedSplitting<Q>::from_tags({O1, O1, O0}), heis_rg({1, 1, 2})).size(), 1u);
}

// ---------------------------------------------------------------- fixed points

TEST(FixedPoint, HeisenbergExample) {
  RMap qmap(heis3, {{Q(1), Q(1), Q(1)}}, diag<Q>({Q(2), Q(2), Q(4)}));
  auto q = q_fixed_point(heis3, qmap, Subspace<Q>::full(3));
  EXPECT_EQ(q.log, (Vector<Q>{Q(-1), Q(-1), Q(-1, 3)}));
  // Q(q) = c * f(q) through the hand-written product.
  EXPECT_EQ(heis_product<Q>({Q(1), Q(1), Q(1)}, qmap.linear().apply(q.log)), q.log);
  auto it = q_fixed_point_iterate(heis3, qmap);
  ASSERT_TRUE(it.converged);
  EXPECT_LE(max_abs(it.point.log - convert_vector<double>(q.log)), 1e-10);
}

TEST(FixedPoint, TrivialAndScalarCases) {
  RMap lin = RMap::linear(heis3, diag<Q>({Q(2), Q(2), Q(4)}));
  EXPECT_TRUE(q_fixed_point(heis3, lin, Subspace<Q>::full(3)).is_identity());
  // F = span X with f = 2 there: q = 1 + 2q.
  RMap scalar(heis3, {{Q(1), Q(0), Q(0)}}, diag<Q>({Q(2), Q(1, 2), Q(1)}));
  EXPECT_EQ(q_fixed_point(heis3, scalar, Subspace<Q>::coordinate(3, {0})).log, (Vector<Q>{Q(-1), Q(0), Q(0)}));
}

TEST(FixedPoint, Errors) {
  RMap contracting = RMap::linear(heis3, diag<Q>({Q(1, 2), Q(1, 2), Q(1, 4)}));
  EXPECT_THROW(q_fixed_point(heis3, contracting, Subspace<Q>::full(3)), NotExpanding);
  RMap shifted(heis3, {{Q(0), Q(1), Q(0)}}, diag<Q>({Q(2), Q(1, 2), Q(1)}));
  EXPECT_THROW(q_fixed_point(heis3, shifted, Subspace<Q>::coordinate(3, {0})), TranslationNotInF);
  // Abelian plane graded (1, 2): f(e2) = e1 + 2 e2 drops from layer 2 to layer 1.
  GradedNilpotentAlgebra<Q> plane({"e1", "e2"}, {1, 2}, {});
  RMap lowering = RMap::linear(plane, Matrix<Q>{{Q(2), Q(1)}, {Q(0), Q(2)}});
  EXPECT_THROW(q_fixed_point(plane, lowering, Subspace<Q>::full(2)), NotFiltered);
}

TEST(FixedPoint, RandomExpandingMapsMatchIteration) {
  for (const std::string key : {"heis3", "heis5", "engel4", "cartan23", "n4"}) {
    const auto alg = nilpotent_algebra(key);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng = sample_rng(17, seed);
      const Rational l(std::uniform_int_distribution<long>(2, 4)(rng));
      Matrix<Q> f = exp_ad(alg, random_rational_vector(rng, alg.dim(), 2, 3)) * dilation(alg, l);
      RMap qmap(alg, {random_rational_vector(rng, alg.dim(), 3, 2)}, f);
      auto q = q_fixed_point(alg, qmap, Subspace<Q>::full(alg.dim()));
      EXPECT_EQ(apply_map(alg, qmap, q), q) << key << " seed " << seed;
      auto it = q_fixed_point_iterate(alg, qmap);
      ASSERT_TRUE(it.converged) << key << " seed " << seed;
      EXPECT_LE(max_abs(it.point.log - convert_vector<double>(q.log)), 1e-10) << key << " seed " << seed;
    }
  }
}

// ---------------------------------------------------------------- limit sets and hyperplanes

TEST(LimitSet, PureContractionCollapsesToOrigin) {
  auto g = DMap::linear(heis3d, diag<double>({0.5, 0.5, 0.25}));
  auto est = limit_set_estimate(Cocycle<double>::powers(heis_rgd({1, 1, 2}), g), ConvexBody::ball({0, 0, 0}, 1.0), 200, 3);
  EXPECT_EQ(est.status, LimitStatus::converged);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(est.extent(i), 1e-7);
    EXPECT_LT(std::abs(est.lo[i]), 1e-7);
  }
}

TEST(LimitSet, IdentityLeavesTheBody) {
  auto body = ConvexBody::ball({0.5, -1, 2}, 0.25);
  auto est = limit_set_estimate(Cocycle<double>::powers(heis_rgd({1, 1, 2}), DMap::identity(heis3d)), body, 10, 3);
  EXPECT_EQ(est.status, LimitStatus::converged);
  EXPECT_EQ(est.steps, 1u);
  EXPECT_DOUBLE_EQ(est.lo[0], 0.25);
  EXPECT_DOUBLE_EQ(est.hi[2], 2.25);

  auto square = ConvexBody::polytope({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  auto est2 = limit_set_estimate(Cocycle<double>::powers(heis_rgd({1, 1, 2}), DMap::identity(heis3d)), square, 10);
  EXPECT_DOUBLE_EQ(est2.hi[1], 1.0);
  EXPECT_DOUBLE_EQ(est2.hi[2], 0.0);
}

TEST(LimitSet, VolumePreservingDegeneratesOntoTheFLeaf) {
  auto g = DMap::linear(heis3d, diag<double>({0.5, 2.0, 1.0}));
  auto est = limit_set_estimate(Cocycle<double>::powers(heis_rgd({1, -1, 0}), g), ConvexBody::ball({0, 0, 0}, 0.1), 200, 3);
  EXPECT_EQ(est.status, LimitStatus::diverged);
  EXPECT_EQ(est.diverging, (std::vector<std::size_t>{1}));
  EXPECT_EQ(est.collapsed, (std::vector<std::size_t>{0}));
  // Coordinate-wise oracle: the x extent is 0.2 / 2^j and the y extent 0.2 * 2^j.
  EXPECT_NEAR(est.extent(0), 0.2 / std::ldexp(1.0, static_cast<int>(est.steps)), 1e-15);
  EXPECT_NEAR(est.extent(1) / (0.2 * std::ldexp(1.0, static_cast<int>(est.steps))), 1.0, 1e-12);
}

TEST(LimitSet, BodyValidation) {
  EXPECT_THROW(ConvexBody::ball({}, 1.0), DimensionMismatch);
  EXPECT_THROW(ConvexBody::ball({0, 0, 0}, std::numeric_limits<double>::infinity()), DimensionMismatch);
  EXPECT_THROW(ConvexBody::polytope({}), DimensionMismatch);
}

TEST(Pullback, Examples) {
  auto sim = Cocycle<double>::powers(heis_rgd({1, 1, 2}), DMap::linear(heis3d, diag<double>({0.5, 0.5, 0.25})));
  auto r = pullback_hyperplane(sim, Vector<double>{1, 1, 1}, 60);
  EXPECT_LE(max_abs(r.direction - Vector<double>{0, 0, 1}), 1e-8);
  ASSERT_TRUE(r.closed_form);
  EXPECT_TRUE(r.agree());

  auto e = pullback_hyperplane(sim, Vector<double>{0, 3, 0}, 60);
  EXPECT_LE(max_abs(e.direction - Vector<double>{0, 1, 0}), 1e-15);

  auto iso = pullback_hyperplane(sim, Vector<double>{1, 1, 0}, 60);
  const double h = 1 / std::sqrt(2.0);
  EXPECT_LE(max_abs(iso.direction - Vector<double>{h, h, 0}), 1e-15);
  EXPECT_TRUE(iso.agree());

  EXPECT_THROW(pullback_hyperplane(sim, Vector<double>{0, 0, 0}, 10), ZeroNormal);
}

// ---------------------------------------------------------------- invisible subspace and complement

TEST(Invisible, RadiantHeisenbergIsAPoint) {
  auto sim = FriedSplitting<Q>::from_tags({O0, O0, O0});
  EXPECT_TRUE(invisible_subspace(sim, heis_rg({1, 1, 2}), {diag<Q>({Q(2), Q(2), Q(4)})}).is_zero());
  EXPECT_TRUE(invisible_subspace(sim, heis_rg({1, 1, 2}), {Matrix<Q>::identity(3)}).is_zero());
}

TEST(Invisible, VolumePreservingKeepsPAndF) {
  auto vp = FriedSplitting<Q>::from_tags({O0, OI, O1});
  auto i = invisible_subspace(vp, heis_rg({1, -1, 0}), {diag<Q>({Q(1, 2), Q(2), Q(1)})});
  EXPECT_EQ(i, Subspace<Q>::coordinate(3, {1, 2}));
}

TEST(Invisible, ClosureAddsImagesAndBrackets) {
  // Degrees (1, -1, 1, -1, 0): E = span(X1, X2), F = span(Y1, Y2), P = span Z.
  const auto h5 = nilpotent_algebra("heis5");
  auto rg = make_ray_geometry(h5, row({1, -1, 1, -1, 0}));
  auto s = FriedSplitting<Q>::from_tags({O0, OI, O0, OI, O1});
  EXPECT_EQ(invisible_subspace(s, rg, {}), Subspace<Q>::coordinate(5, {1, 3, 4}));
  // The symplectic shear Y1 -> Y1 + X2, Y2 -> Y2 + X1 drags all of E into I.
  Matrix<Q> mix = Matrix<Q>::identity(5);
  mix(2, 1) = 1;
  mix(0, 3) = 1;
  ASSERT_TRUE(is_automorphism(mix, h5));
  EXPECT_EQ(invisible_subspace(s, rg, {mix}), Subspace<Q>::full(5));
  // A diagonal holonomy part leaves I alone.
  EXPECT_EQ(invisible_subspace(s, rg, {Matrix<Q>::diagonal({Q(2), Q(1, 2), Q(3), Q(1, 3), Q(1)})}),
            Subspace<Q>::coordinate(5, {1, 3, 4}));
}

TEST(Invisible, RandomClosuresSatisfyTheInvariants) {
  const auto h5 = nilpotent_algebra("heis5");
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng = sample_rng(23, seed);
    auto rg = make_ray_geometry(h5, row({1, 1, 1, 1, 2}));
    std::vector<Omega> t(5);
    for (std::size_t q = 0; q < 4; ++q) t[q] = std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? OI : O0;
    t[4] = O0;
    auto s = FriedSplitting<Q>::from_tags(t);
    std::vector<Matrix<Q>> holonomy{exp_ad(h5, random_rational_vector(rng, 5, 2, 2)) * dilation(h5, Q(1, 2))};
    if (!splitting_report(h5, s).pass()) continue;
    auto i = invisible_subspace(s, rg, holonomy);
    EXPECT_TRUE(i.contains(s.P + s.F));
    for (const auto& x : i.basis())
      for (const auto& y : i.basis()) EXPECT_TRUE(i.contains(h5.bracket(x, y)));
    for (const auto& f : holonomy) EXPECT_TRUE(i.invariant_under(f));
    Subspace<Q> pieces = s.P + s.F;
    for (const auto& b : grade_E(s, rg)) pieces = pieces + intersect(b.space, i);
    EXPECT_EQ(pieces, i);
  }
}

TEST(Complement, Examples) {
  auto vp = FriedSplitting<Q>::from_tags({O0, OI, O1});
  auto rg = heis_rg({1, -1, 0});
  const std::vector<Matrix<Q>> hol{diag<Q>({Q(1, 2), Q(2), Q(1)})};
  auto data = invariant_complement(Subspace<Q>::coordinate(3, {1, 2}), vp, rg, hol);
  EXPECT_EQ(data.V, Subspace<Q>::coordinate(3, {0}));

  auto sim = FriedSplitting<Q>::from_tags({O0, O0, O0});
  auto full = invariant_complement(Subspace<Q>::full(3), sim, heis_rg({1, 1, 2}), {});
  EXPECT_TRUE(full.V.is_zero());
  auto point = invariant_complement(Subspace<Q>::zero(3), sim, heis_rg({1, 1, 2}), {diag<Q>({Q(2), Q(2), Q(4)})});
  EXPECT_EQ(point.V, Subspace<Q>::full(3));
}

TEST(Complement, UsesTheInnerProduct) {
  // With <X, Y> = 1/2 the complement of Y inside span(X, Y) is X - Y/2.
  Matrix<Q> g{{Q(1), Q(1, 2), Q(0)}, {Q(1, 2), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}};
  auto rg = make_ray_geometry(heis3, row({1, 1, 2}), {}, std::optional<Matrix<Q>>(g));
  auto s = FriedSplitting<Q>::from_tags({O0, O0, O0});
  auto data = invariant_complement(Subspace<Q>::span(3, {{Q(0), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}}), s, rg, {});
  EXPECT_EQ(data.V, Subspace<Q>::span(3, {{Q(2), Q(-1), Q(0)}}));
}

TEST(Complement, Errors) {
  auto sim = FriedSplitting<Q>::from_tags({O0, O0, O0});
  auto rg = heis_rg({1, 1, 2});
  Matrix<Q> shear{{Q(1), Q(0), Q(0)}, {Q(1), Q(1), Q(0)}, {Q(0), Q(0), Q(1)}};
  EXPECT_THROW(invariant_complement(Subspace<Q>::coordinate(3, {1, 2}), sim, rg, {shear}), NotInvariant);
  EXPECT_THROW(invariant_complement(Subspace<Q>::span(3, {{Q(1), Q(0), Q(1)}}), sim, rg, {}), NotGraded);
  auto vp = FriedSplitting<Q>::from_tags({O0, OI, O1});
  EXPECT_THROW(invariant_complement(Subspace<Q>::zero(3), vp, heis_rg({1, -1, 0}), {}), NotGraded);
}

// ---------------------------------------------------------------- radial field and flow

namespace {
InvisibleData<Q> yz_data() {
  return invariant_complement(Subspace<Q>::coordinate(3, {1, 2}), FriedSplitting<Q>::from_tags({O0, OI, O1}),
                              heis_rg({1, -1, 0}), {});
}

// x = x_I x_V with x_I = (0, y, z + xy/2) and x_V = (x, 0, 0), so
// R_l(x, y, z) = (l x, y, z + (1 - l) x y / 2).
Vector<double> yz_flow_oracle(const Vector<double>& p, double l) {
  return {l * p[0], p[1], p[2] + (1 - l) * p[0] * p[1] / 2};
}
}  // namespace

TEST(Radial, FieldExamples) {
  auto data = yz_data();
  EXPECT_EQ(radial_field(heis3, GroupElement<Q>{{Q(1), Q(1), Q(1)}}, data), (Vector<Q>{Q(1), Q(0), Q(0)}));
  auto [xi, xv] = split_decompose(heis3, GroupElement<Q>{{Q(1), Q(1), Q(1)}}, data.I, data.V);
  EXPECT_EQ(xi.log, (Vector<Q>{Q(0), Q(1), Q(3, 2)}));
  EXPECT_TRUE(is_zero_vector(radial_field(heis3, GroupElement<Q>{{Q(0), Q(3), Q(-2)}}, data)));
  EXPECT_EQ(radial_field(heis3, GroupElement<Q>{{Q(5), Q(0), Q(0)}}, data), (Vector<Q>{Q(5), Q(0), Q(0)}));
}

TEST(Radial, FlowExamples) {
  auto data = yz_data();
  const GroupElement<Q> x{{Q(1), Q(1), Q(1)}};
  EXPECT_EQ(radial_flow_lambda(heis3, x, Q(2), data).log, (Vector<Q>{Q(2), Q(1), Q(1, 2)}));
  EXPECT_EQ(radial_flow_lambda(heis3, x, Q(1), data), x);
  const GroupElement<Q> inside{{Q(0), Q(2), Q(7)}};
  EXPECT_EQ(radial_flow_lambda(heis3, inside, Q(9, 4), data), inside);
  auto dd = data.convert<double>();
  auto r = radial_flow(heis3d, GroupElement<double>{{1, 1, 1}}, std::log(2.0), dd);
  EXPECT_LE(max_abs(r.log - Vector<double>{2, 1, 0.5}), 1e-15);
}

TEST(Radial, FlowMatchesTheClosedForm) {
  auto dd = yz_data().convert<double>();
  for (std::uint64_t k = 0; k < 200; ++k) {
    Rng rng = sample_rng(29, k);
    auto p = random_double_vector(rng, 3, -3, 3);
    const double t = std::uniform_real_distribution<double>(-2, 2)(rng);
    EXPECT_LE(max_abs(radial_flow(heis3d, {p}, t, dd).log - yz_flow_oracle(p, std::exp(t))), 1e-12);
  }
}

TEST(Radial, FlowGroupLawIsExact) {
  std::vector<std::pair<std::string, InvisibleData<Q>>> cases;
  cases.emplace_back("heis3", yz_data());
  const auto h5 = nilpotent_algebra("heis5");
  auto rg5 = make_ray_geometry(h5, row({1, -1, 1, -1, 0}));
  auto s5 = FriedSplitting<Q>::from_tags({O0, OI, O0, OI, O1});
  cases.emplace_back("heis5", invariant_complement(invisible_subspace(s5, rg5, {}), s5, rg5, {}));
  for (const auto& [key, data] : cases) {
    const auto alg = nilpotent_algebra(key);
    for (std::uint64_t k = 0; k < 300; ++k) {
      Rng rng = sample_rng(31, k);
      GroupElement<Q> x{random_rational_vector(rng, alg.dim())};
      const Q s = Q(std::uniform_int_distribution<long>(1, 9)(rng), std::uniform_int_distribution<long>(1, 5)(rng));
      const Q t = Q(std::uniform_int_distribution<long>(1, 9)(rng), std::uniform_int_distribution<long>(1, 5)(rng));
      EXPECT_EQ(radial_flow_lambda(alg, radial_flow_lambda(alg, x, t, data), s, data),
                radial_flow_lambda(alg, x, Q(s * t), data))
          << key << " sample " << k;
    }
  }
}

TEST(Volume, Examples) {
  auto data = yz_data();
  auto two = volume_scaling_check(heis3, data, std::log(2.0), 100, 1);
  EXPECT_TRUE(two.pass()) << two.checks[0].residual;
  EXPECT_TRUE(volume_scaling_check(heis3, data, 0.0, 50, 2).pass());
  auto sim = FriedSplitting<Q>::from_tags({O0, O0, O0});
  auto point = invariant_complement(Subspace<Q>::zero(3), sim, heis_rg({1, 1, 2}), {});
  auto cube = volume_scaling_check(heis3, point, 1.0, 100, 3);
  EXPECT_TRUE(cube.pass()) << cube.checks[0].residual;
}

TEST(Volume, ResultDoesNotDependOnThreads) {
  auto data = yz_data();
  auto one = volume_scaling_check(heis3, data, 0.7, 64, 9, 1);
  auto four = volume_scaling_check(heis3, data, 0.7, 64, 9, 4);
  EXPECT_EQ(one.checks[0].residual, four.checks[0].residual);
}

TEST(Equivariance, Examples) {
  auto data = yz_data();
  EXPECT_EQ(field_equivariance_check(heis3, RMap::identity(heis3), data, 100).checks[0].residual, 0.0);
  auto tr = field_equivariance_check(heis3, RMap::translation(heis3, {{Q(0), Q(1), Q(0)}}), data, 100, 4);
  EXPECT_TRUE(tr.pass()) << tr.checks[0].residual;
  auto lin = field_equivariance_check(heis3, RMap::linear(heis3, diag<Q>({Q(2), Q(2), Q(4)})), data, 100, 5);
  EXPECT_TRUE(lin.pass()) << lin.checks[0].residual;
  EXPECT_THROW(field_equivariance_check(heis3, RMap::translation(heis3, {{Q(1), Q(0), Q(0)}}), data, 10),
               TranslationNotInI);
}

// ---------------------------------------------------------------- orbits and properness

namespace {
RMap half_xz() { return RMap::linear(heis3, diag<Q>({Q(1, 2), Q(1), Q(1, 2)})); }
}  // namespace

TEST(Orbit, CounterexampleConvergesToTheYAxisPoint) {
  for (double x0 : {1.0, -3.5, 0.25}) {
    auto r = orbit_limit(heis3, half_xz(), GroupElement<Q>{{Q(x0), Q(1), Q(0)}}, 200);
    EXPECT_EQ(r.status, OrbitStatus::converged);
    EXPECT_LE(max_abs(r.last().log - Vector<double>{0, 1, 0}), 1e-11);
    auto n = r.first_within({0, 1, 0}, 1e-9);
    ASSERT_TRUE(n);
    EXPECT_LE(*n, 60u);
    // Hand iteration: f^n(x0, 1, 0) = (x0 / 2^n, 1, 0).
    EXPECT_EQ(r.trajectory[5].log[0], x0 / 32);
  }
}

TEST(Orbit, IdentityAndDilation) {
  auto still = orbit_limit(heis3, RMap::identity(heis3), GroupElement<Q>{{Q(1), Q(2), Q(3)}}, 10);
  EXPECT_EQ(still.status, OrbitStatus::converged);
  EXPECT_EQ(still.last().log, (Vector<double>{1, 2, 3}));
  auto grow = orbit_limit(heis3, RMap::linear(heis3, diag<Q>({Q(2), Q(2), Q(4)})), GroupElement<Q>{{Q(1), Q(0), Q(0)}}, 100);
  EXPECT_EQ(grow.status, OrbitStatus::diverged);
  for (std::size_t k = 1; k < grow.trajectory.size(); ++k)
    EXPECT_GT(norm2(grow.trajectory[k].log), norm2(grow.trajectory[k - 1].log));
}

TEST(Properness, CounterexampleHasAWitness) {
  std::vector<RMap> maps;
  for (long n = 0; n <= 60; ++n) maps.push_back(power(heis3, half_xz(), n));
  std::vector<GroupElement<Q>> samples;
  for (long k = 1; k <= 5; ++k) samples.push_back({{Q(k, 4), Q(1), Q(0)}});
  auto r = properness_probe(heis3, maps, samples, 5);
  EXPECT_EQ(r.verdict, ProbeVerdict::witness_found);
  ASSERT_TRUE(r.witness);
  EXPECT_LE(max_abs(r.witness->y.log - Vector<double>{0, 1, 0}), 1e-9);
  EXPECT_GE(r.witness->escape_norm, 1e6);
}

TEST(Properness, IdentityAndDilationHaveNoWitness) {
  std::vector<GroupElement<Q>> samples;
  for (long k = 1; k <= 8; ++k) samples.push_back({{Q(k), Q(2 - k), Q(1)}});
  std::vector<RMap> ids(30, RMap::identity(heis3));
  auto r1 = properness_probe(heis3, ids, samples, 8);
  EXPECT_EQ(r1.verdict, ProbeVerdict::no_witness_found);
  EXPECT_FALSE(r1.escaping);

  std::vector<RMap> dil;
  for (long n = 0; n <= 40; ++n) dil.push_back(power(heis3, RMap::linear(heis3, diag<Q>({Q(2), Q(2), Q(4)})), n));
  auto r2 = properness_probe(heis3, dil, samples, 8);
  EXPECT_TRUE(r2.escaping);
  EXPECT_EQ(r2.verdict, ProbeVerdict::no_witness_found);
}
