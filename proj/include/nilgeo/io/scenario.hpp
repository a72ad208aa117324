#pragma once

#include "nilgeo/dynamics.hpp"
#include "nilgeo/io/json.hpp"

namespace nilgeo::io {

inline constexpr const char* scenario_schema = "nilgeo-scenario/1";
inline constexpr const char* report_schema = "nilgeo-report/1";

struct MapSpec {
  Vector<Rational> c;
  Matrix<Rational> f;
  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

/// Reference to a Levi ray geometry of a real form: `geometry` 1 is the
/// Borel-type geometry, 2 the one of A_Sigma. Sigma is stored 0-based.
struct ParabolicRef {
  std::string family;
  std::vector<std::size_t> sigma;
  int geometry = 1;
  friend bool operator==(const ParabolicRef&, const ParabolicRef&) = default;
};

struct RayGeometrySpec {
  std::string algebra_key;  // empty for an inline algebra
  std::optional<ParabolicRef> parabolic;
  RayGeometry<Rational> geometry;
  friend bool operator==(const RayGeometrySpec&, const RayGeometrySpec&) = default;
};

struct Budgets {
  std::size_t cocycle_length = 12;
  std::size_t samples = 100;
  std::size_t j_max = 200;
  std::size_t orbit_iterations = 60;
  std::size_t probe_maps = 60;
  friend bool operator==(const Budgets&, const Budgets&) = default;
};

struct OrbitRequest {
  Vector<Rational> start;
  Vector<double> target;
  double tol = 1e-9;
  friend bool operator==(const OrbitRequest&, const OrbitRequest&) = default;
};

struct ProbeRequest {
  std::vector<Vector<Rational>> points;
  std::optional<bool> expect_witness;
  friend bool operator==(const ProbeRequest&, const ProbeRequest&) = default;
};

struct ScenarioChecks {
  bool cocycle = true;
  std::vector<double> volume_times;
  bool equivariance = false;
  std::optional<OrbitRequest> orbit;
  std::optional<ProbeRequest> probe;
  std::optional<Vector<Rational>> pullback_normal;
  friend bool operator==(const ScenarioChecks&, const ScenarioChecks&) = default;
};

struct Scenario {
  std::string name;
  RayGeometrySpec ray_geometry;
  std::optional<MapSpec> generator;
  std::vector<MapSpec> family;  // T_{j0} for j = 1, 2, ...
  Direction direction = Direction::contracting;
  OmegaMode omega_mode = OmegaMode::closed_form;
  std::vector<Matrix<Rational>> holonomy;
  std::optional<MapSpec> q_map;
  std::optional<ConvexBody> body;
  Budgets budgets;
  ScenarioChecks checks;
  std::uint64_t seed = 0;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------- parsing

/// `{c, f}`, or `{c, a}` with `a` the multipliers of an A-element of `rg`.
/// Missing parts default to the identity.
inline MapSpec parse_map(const Node& node, const RayGeometry<Rational>& rg) {
  node.keys({"c", "f", "a"});
  const std::size_t n = rg.dim();
  if (node.has("f") && node.has("a")) node.fail("give at most one of 'f' and 'a'");
  MapSpec m;
  m.c = node.get("c") ? node.at("c").rational_vector(n) : zeros<Rational>(n);
  m.f = Matrix<Rational>::identity(n);
  if (auto fn = node.get("f")) m.f = fn->rational_matrix(n, n);
  if (auto an = node.get("a")) {
    const auto mult = an->rational_vector(rg.rank());
    for (std::size_t i = 0; i < mult.size(); ++i)
      if (mult[i] <= 0) (*an)[i].fail("multipliers are positive");
    m.f = a_element_from_multipliers(rg, mult);
  }
  return m;
}

inline Json map_to_json(const MapSpec& m) {
  Json out;
  out["c"] = to_json(m.c);
  out["f"] = to_json(m.f);
  return out;
}

inline RayGeometrySpec parse_ray_geometry(const Node& node) {
  RayGeometrySpec spec;
  if (node.has("parabolic")) {
    node.keys({"parabolic"});
    const auto pn = node.at("parabolic");
    pn.keys({"family", "sigma", "geometry"});
    ParabolicRef ref;
    ref.family = pn.at("family").string();
    RealFormEntry entry;
    try {
      entry = resolve_real_form(ref.family);
    } catch (const UnknownKey& e) {
      pn.at("family").fail(e.what());
    }
    const auto rs = restricted_roots(entry.algebra, entry.simple_roots);
    if (auto sn = pn.get("sigma"))
      for (std::size_t i = 0; i < sn->size(); ++i) {
        const long v = (*sn)[i].integer();
        if (v < 1 || static_cast<std::size_t>(v) > rs.rank())
          (*sn)[i].fail("simple root index out of range 1.." + std::to_string(rs.rank()));
        ref.sigma.push_back(static_cast<std::size_t>(v - 1));
      }
    if (auto gn = pn.get("geometry")) {
      ref.geometry = static_cast<int>(gn->integer());
      if (ref.geometry != 1 && ref.geometry != 2) gn->fail("geometry is 1 or 2");
    }
    auto both = levi_ray_geometries(parabolic(rs, ref.sigma));
    spec.geometry = ref.geometry == 1 ? both.first : both.second;
    spec.parabolic = ref;
    return spec;
  }
  node.keys({"algebra", "rank", "degrees", "k_generators", "inner_product"});
  const auto an = node.at("algebra");
  GradedNilpotentAlgebra<Rational> alg;
  if (an.is_string()) {
    spec.algebra_key = an.string();
    try {
      alg = resolve_algebra(spec.algebra_key);
    } catch (const UnknownKey& e) {
      an.fail(e.what());
    }
  } else {
    alg = parse_algebra(an);
  }
  const std::size_t n = alg.dim();
  const auto dn = node.at("degrees");
  std::optional<std::size_t> rank;
  if (auto rn = node.get("rank")) rank = rn->count();
  Matrix<Rational> degrees = dn.rational_matrix(rank, n);
  for (std::size_t i = 0; i < degrees.rows(); ++i)
    for (std::size_t q = 0; q < n; ++q)
      if (!is_integer(degrees(i, q))) dn[i][q].fail("degrees are integers");
  std::vector<Matrix<Rational>> kgens;
  if (auto kn = node.get("k_generators"))
    for (std::size_t i = 0; i < kn->size(); ++i) kgens.push_back((*kn)[i].rational_matrix(n, n));
  std::optional<Matrix<Rational>> inner;
  if (auto in = node.get("inner_product")) inner = in->rational_matrix(n, n);
  spec.geometry = make_ray_geometry(std::move(alg), std::move(degrees), std::move(kgens), std::move(inner));
  return spec;
}

inline Json ray_geometry_to_json(const RayGeometrySpec& spec) {
  Json out;
  if (spec.parabolic) {
    Json p;
    p["family"] = spec.parabolic->family;
    Json sigma = Json::array();
    for (auto s : spec.parabolic->sigma) sigma.push_back(s + 1);
    p["sigma"] = sigma;
    p["geometry"] = spec.parabolic->geometry;
    out["parabolic"] = p;
    return out;
  }
  const auto& rg = spec.geometry;
  if (spec.algebra_key.empty()) {
    out["algebra"] = algebra_to_json(rg.algebra);
  } else {
    out["algebra"] = spec.algebra_key;
  }
  out["rank"] = rg.rank();
  out["degrees"] = to_json(rg.degrees);
  Json k = Json::array();
  for (const auto& g : rg.k_generators) k.push_back(to_json(g));
  out["k_generators"] = k;
  out["inner_product"] = to_json(rg.inner_product);
  return out;
}

inline ConvexBody parse_body(const Node& node, std::size_t n) {
  if (node.has("vertices")) {
    node.keys({"vertices"});
    const auto vn = node.at("vertices");
    std::vector<Vector<double>> vs;
    for (std::size_t i = 0; i < vn.size(); ++i) vs.push_back(vn[i].double_vector(n));
    if (vs.empty()) vn.fail("polytope needs at least one vertex");
    return ConvexBody::polytope(std::move(vs));
  }
  node.keys({"center", "radius"});
  const double r = node.at("radius").number();
  if (r < 0) node.at("radius").fail("radius must be >= 0");
  return ConvexBody::ball(node.at("center").double_vector(n), r);
}

inline Json body_to_json(const ConvexBody& b) {
  Json out;
  if (b.kind == ConvexBody::Kind::polytope) {
    Json vs = Json::array();
    for (const auto& v : b.vertices) vs.push_back(to_json(v));
    out["vertices"] = vs;
  } else {
    out["center"] = to_json(b.center);
    out["radius"] = b.radius;
  }
  return out;
}

inline Scenario parse_scenario(const Json& json) {
  const Node root(json, "");
  root.keys({"schema", "name", "ray_geometry", "generator", "family", "direction", "omega_mode", "holonomy", "q_map",
             "body", "budgets", "checks", "seed"});
  if (auto sn = root.get("schema"); sn && sn->string() != scenario_schema)
    sn->fail("unrecognized schema version; expected \"" + std::string(scenario_schema) + "\"");
  Scenario sc;
  if (auto nn = root.get("name")) sc.name = nn->string();
  sc.ray_geometry = parse_ray_geometry(root.at("ray_geometry"));
  const auto& rg = sc.ray_geometry.geometry;
  const std::size_t n = rg.dim();

  if (root.has("generator") == root.has("family")) root.fail("give exactly one of 'generator' and 'family'");
  if (auto gn = root.get("generator")) sc.generator = parse_map(*gn, rg);
  if (auto fn = root.get("family")) {
    for (std::size_t j = 0; j < fn->size(); ++j) sc.family.push_back(parse_map((*fn)[j], rg));
    if (sc.family.empty()) fn->fail("family needs at least one map");
  }
  if (auto dn = root.get("direction")) {
    const auto d = dn->string();
    if (d == "contracting") {
      sc.direction = Direction::contracting;
    } else if (d == "expanding") {
      sc.direction = Direction::expanding;
    } else {
      dn->fail("direction is \"contracting\" or \"expanding\"");
    }
  }
  if (auto mn = root.get("omega_mode")) {
    const auto m = mn->string();
    if (m == "closed_form") {
      sc.omega_mode = OmegaMode::closed_form;
    } else if (m == "numeric") {
      sc.omega_mode = OmegaMode::numeric;
    } else {
      mn->fail("omega_mode is \"closed_form\" or \"numeric\"");
    }
  }
  if (auto hn = root.get("holonomy"))
    for (std::size_t i = 0; i < hn->size(); ++i) sc.holonomy.push_back((*hn)[i].rational_matrix(n, n));
  if (auto qn = root.get("q_map")) sc.q_map = parse_map(*qn, rg);
  if (auto bn = root.get("body")) sc.body = parse_body(*bn, n);
  if (auto bn = root.get("budgets")) {
    bn->keys({"cocycle_length", "samples", "j_max", "orbit_iterations", "probe_maps"});
    if (auto v = bn->get("cocycle_length")) sc.budgets.cocycle_length = v->count(3);
    if (auto v = bn->get("samples")) sc.budgets.samples = v->count(1);
    if (auto v = bn->get("j_max")) sc.budgets.j_max = v->count(1);
    if (auto v = bn->get("orbit_iterations")) sc.budgets.orbit_iterations = v->count(1);
    if (auto v = bn->get("probe_maps")) sc.budgets.probe_maps = v->count(2);
  }
  if (auto cn = root.get("checks")) {
    cn->keys({"cocycle", "volume_times", "equivariance", "orbit", "probe", "pullback_normal"});
    if (auto v = cn->get("cocycle")) sc.checks.cocycle = v->boolean();
    if (auto v = cn->get("volume_times")) sc.checks.volume_times = v->double_vector();
    if (auto v = cn->get("equivariance")) sc.checks.equivariance = v->boolean();
    if (auto on = cn->get("orbit")) {
      on->keys({"start", "target", "tol"});
      OrbitRequest req;
      req.start = on->at("start").rational_vector(n);
      req.target = on->at("target").double_vector(n);
      if (auto t = on->get("tol")) req.tol = t->number();
      sc.checks.orbit = req;
    }
    if (auto pn = cn->get("probe")) {
      pn->keys({"points", "expect"});
      ProbeRequest req;
      const auto pts = pn->at("points");
      for (std::size_t i = 0; i < pts.size(); ++i) req.points.push_back(pts[i].rational_vector(n));
      if (auto e = pn->get("expect")) {
        const auto s = e->string();
        if (s == "witness") {
          req.expect_witness = true;
        } else if (s == "none") {
          req.expect_witness = false;
        } else {
          e->fail("expect is \"witness\" or \"none\"");
        }
      }
      sc.checks.probe = req;
    }
    if (auto v = cn->get("pullback_normal")) sc.checks.pullback_normal = v->rational_vector(n);
  }
  if (auto sn = root.get("seed")) sc.seed = sn->unsigned_integer();
  return sc;
}

inline Json scenario_to_json(const Scenario& sc) {
  Json out;
  out["schema"] = scenario_schema;
  out["name"] = sc.name;
  out["ray_geometry"] = ray_geometry_to_json(sc.ray_geometry);
  if (sc.generator) {
    out["generator"] = map_to_json(*sc.generator);
  } else {
    Json fam = Json::array();
    for (const auto& m : sc.family) fam.push_back(map_to_json(m));
    out["family"] = fam;
  }
  out["direction"] = sc.direction == Direction::contracting ? "contracting" : "expanding";
  out["omega_mode"] = sc.omega_mode == OmegaMode::closed_form ? "closed_form" : "numeric";
  if (!sc.holonomy.empty()) {
    Json h = Json::array();
    for (const auto& m : sc.holonomy) h.push_back(to_json(m));
    out["holonomy"] = h;
  }
  if (sc.q_map) out["q_map"] = map_to_json(*sc.q_map);
  if (sc.body) out["body"] = body_to_json(*sc.body);
  out["budgets"] = {{"cocycle_length", sc.budgets.cocycle_length},
                    {"samples", sc.budgets.samples},
                    {"j_max", sc.budgets.j_max},
                    {"orbit_iterations", sc.budgets.orbit_iterations},
                    {"probe_maps", sc.budgets.probe_maps}};
  Json checks;
  checks["cocycle"] = sc.checks.cocycle;
  checks["volume_times"] = to_json(sc.checks.volume_times);
  checks["equivariance"] = sc.checks.equivariance;
  if (sc.checks.orbit) {
    checks["orbit"] = {{"start", to_json(sc.checks.orbit->start)},
                       {"target", to_json(sc.checks.orbit->target)},
                       {"tol", sc.checks.orbit->tol}};
  }
  if (sc.checks.probe) {
    Json pts = Json::array();
    for (const auto& p : sc.checks.probe->points) pts.push_back(to_json(p));
    Json probe;
    probe["points"] = pts;
    if (sc.checks.probe->expect_witness) probe["expect"] = *sc.checks.probe->expect_witness ? "witness" : "none";
    checks["probe"] = probe;
  }
  if (sc.checks.pullback_normal) checks["pullback_normal"] = to_json(*sc.checks.pullback_normal);
  out["checks"] = checks;
  out["seed"] = sc.seed;
  return out;
}

// ---------------------------------------------------------------- simulation

namespace detail {

inline Json names_of(const Subspace<Rational>& s, const GradedNilpotentAlgebra<Rational>& alg) {
  Json out = Json::array();
  for (std::size_t q = 0; q < alg.dim(); ++q)
    if (s.contains(unit<Rational>(alg.dim(), q))) out.push_back(alg.names()[q]);
  return out;
}

inline Json basis_json(const Subspace<Rational>& s) {
  Json out = Json::array();
  for (const auto& b : s.basis()) out.push_back(to_json(b));
  return out;
}

inline Json checks_json(const Report& r) {
  Json out = Json::array();
  for (const auto& c : r.checks) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["residual"] = c.residual;
    if (!c.detail.empty()) j["detail"] = c.detail;
    out.push_back(j);
  }
  return out;
}

inline std::string error_detail(const Error& e) { return e.what(); }

}  // namespace detail

struct SimulationResult {
  Json report;
  Report checks;
  int exit_status = 0;
};

/// Runs the pipeline omega -> grading of E -> fixed point -> invisible
/// subspace -> complement -> requested checks. A failing structural check
/// stops the pipeline; later fields stay null.
inline SimulationResult simulate(const Scenario& sc, std::size_t threads = 1) {
  using RMap = NilAffineMap<Rational>;
  SimulationResult result;
  Report& checks = result.checks;
  const auto& rg = sc.ray_geometry.geometry;
  const auto& alg = rg.algebra;
  const std::size_t n = alg.dim();

  Json& out = result.report;
  out["schema"] = report_schema;
  out["command"] = "simulate";
  out["scenario"] = sc.name;
  out["seed"] = sc.seed;
  out["algebra"] = alg.names();
  for (const char* key : {"splitting", "grading_of_E", "fixed_point", "I", "V"}) out[key] = nullptr;

  auto finish = [&]() -> SimulationResult {
    out["checks"] = detail::checks_json(checks);
    result.exit_status = checks.pass() ? 0 : 1;
    out["exit_status"] = result.exit_status;
    return result;
  };
  auto stage = [&](const char* name, auto&& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      checks.add(name, false, 0.0, detail::error_detail(e));
      return false;
    }
  };

  const auto grading = validate_grading(alg);
  checks.add("algebra-grading", grading.pass(), grading.pass() ? 0.0 : 1.0,
             grading.pass() ? "" : grading.failures().front()->detail);
  if (!grading.pass()) return finish();
  const auto geometry = validate_ray_geometry(rg);
  checks.add("ray-geometry", geometry.pass(), geometry.pass() ? 0.0 : 1.0,
             geometry.pass() ? "" : geometry.failures().front()->name + ": " + geometry.failures().front()->detail);
  if (!geometry.pass()) return finish();

  std::optional<RMap> generator;
  std::vector<RMap> family;
  std::optional<Cocycle<Rational>> cocycle;
  if (!stage("maps", [&] {
        if (sc.generator) {
          generator = RMap(alg, {sc.generator->c}, sc.generator->f);
          cocycle = Cocycle<Rational>::powers(rg, *generator, sc.budgets.cocycle_length);
        } else {
          std::map<std::pair<std::size_t, std::size_t>, RMap> table;
          for (const auto& m : sc.family) family.emplace_back(alg, GroupElement<Rational>{m.c}, m.f);
          for (std::size_t j = 1; j <= family.size(); ++j) {
            table.emplace(std::pair{j, std::size_t{0}}, family[j - 1]);
            for (std::size_t i = 1; i < j; ++i)
              table.emplace(std::pair{j, i}, compose(alg, family[j - 1], invert_map(family[i - 1])));
          }
          cocycle = Cocycle<Rational>::table(rg, table);
        }
      }))
    return finish();

  if (sc.checks.cocycle && !stage("cocycle", [&] { checks.append(cocycle_check(*cocycle)); })) return finish();

  std::optional<FriedSplitting<Rational>> split;
  if (!stage("splitting", [&] {
        split = omega_degrees(*cocycle, sc.direction, sc.omega_mode);
        checks.append(splitting_report(alg, *split));
      }))
    return finish();
  Json sj;
  Json omega = Json::array();
  for (auto w : split->omega) omega.push_back(omega_name(w));
  sj["omega"] = omega;
  sj["E"] = detail::names_of(split->E, alg);
  sj["P"] = detail::names_of(split->P, alg);
  sj["F"] = detail::names_of(split->F, alg);
  out["splitting"] = sj;

  std::vector<EBlock<Rational>> blocks;
  if (!stage("grading-of-E", [&] { blocks = grade_E(*split, rg); })) return finish();
  Json gj = Json::array();
  for (const auto& b : blocks) gj.push_back(Json{{"degree", to_json(b.degree)}, {"basis", detail::names_of(b.space, alg)}});
  out["grading_of_E"] = gj;

  // The fixed point of the holonomy element acting on exp(F): an explicit
  // q_map, or whichever of the generator and its inverse expands F.
  std::optional<RMap> qmap;
  if (sc.q_map) {
    if (!stage("fixed-point", [&] { qmap = RMap(alg, {sc.q_map->c}, sc.q_map->f); })) return finish();
  } else {
    const RMap g = generator ? *generator : family.front();
    if (split->F.is_zero()) {
      if (g.translation().is_identity()) qmap = g;
    } else if (split->F.contains(g.translation().log)) {
      for (const auto& cand : std::vector<RMap>{g, invert_map(g)})
        if (split->F.invariant_under(cand.linear()) &&
            ::nilgeo::detail::min_abs_eigenvalue(::nilgeo::detail::restrict_to(cand.linear(), split->F)) > 1.0) {
          qmap = cand;
          break;
        }
    }
  }
  if (qmap) {
    GroupElement<Rational> q;
    if (!stage("fixed-point", [&] {
          q = split->F.is_zero() ? GroupElement<Rational>::identity(n) : q_fixed_point(alg, *qmap, split->F);
        }))
      return finish();
    out["fixed_point"] = to_json(q.log);
    const bool exact = apply_map(alg, *qmap, q) == q;
    checks.add("fixed-point", exact, exact ? 0.0 : 1.0, "Q(q) = q exactly");
    if (!split->F.is_zero()) {
      const auto it = q_fixed_point_iterate(alg, *qmap);
      const double gap = max_abs(it.point.log - convert_vector<double>(q.log));
      checks.add("fixed-point-iteration", it.converged && gap <= 1e-10, gap,
                 "iterating Q^-1, " + std::to_string(it.iterations) + " steps");
    }
  }

  std::vector<Matrix<Rational>> holonomy = sc.holonomy;
  if (holonomy.empty()) {
    if (generator) holonomy.push_back(generator->linear());
    for (const auto& m : family) holonomy.push_back(m.linear());
  }
  std::optional<InvisibleData<Rational>> data;
  if (!stage("invisible-subspace", [&] {
        const auto i_space = invisible_subspace(*split, rg, holonomy);
        data = invariant_complement(i_space, *split, rg, holonomy);
      }))
    return finish();
  out["I"] = detail::basis_json(data->I);
  out["V"] = detail::basis_json(data->V);

  if (!sc.checks.volume_times.empty()) {
    double worst = 0;
    for (std::size_t k = 0; k < sc.checks.volume_times.size(); ++k) {
      const auto r = volume_scaling_check(alg, *data, sc.checks.volume_times[k], sc.budgets.samples, sc.seed + k, threads);
      worst = std::max(worst, r.checks.front().residual);
    }
    const std::size_t pairs = sc.checks.volume_times.size() * sc.budgets.samples;
    checks.add("volume-scaling", worst <= 1e-6, worst,
               "relative error of det dR_t against e^(t dim V) over " + std::to_string(pairs) + " (x, t) pairs");
  }
  if (sc.checks.equivariance) {
    const RMap g = generator ? *generator : family.front();
    stage("field-equivariance", [&] {
      checks.append(field_equivariance_check(alg, g, *data, sc.budgets.samples, sc.seed, threads));
    });
  }
  if (sc.body) {
    stage("limit-set", [&] {
      const auto est = limit_set_estimate(*cocycle, *sc.body, sc.budgets.j_max, sc.seed, 64, threads);
      Json lj;
      lj["status"] = limit_status_name(est.status);
      lj["steps"] = est.steps;
      lj["lo"] = to_json(est.lo);
      lj["hi"] = to_json(est.hi);
      Json collapsed = Json::array(), diverging = Json::array();
      for (auto q : est.collapsed) collapsed.push_back(alg.names()[q]);
      for (auto q : est.diverging) diverging.push_back(alg.names()[q]);
      lj["collapsed"] = collapsed;
      lj["diverging"] = diverging;
      out["limit_set"] = lj;
    });
  }
  if (sc.checks.pullback_normal) {
    stage("pullback", [&] {
      const auto r = pullback_hyperplane(*cocycle, *sc.checks.pullback_normal, sc.budgets.j_max);
      Json pj;
      pj["direction"] = to_json(r.direction);
      pj["closed_form"] = r.closed_form ? to_json(*r.closed_form) : Json(nullptr);
      out["pullback"] = pj;
      checks.add("pullback", r.agree(), r.disagreement,
                 r.closed_form ? "iterated against closed form" : "no closed form for this family");
    });
  }
  if (sc.checks.orbit) {
    const RMap g = generator ? *generator : family.front();
    const auto& req = *sc.checks.orbit;
    const auto r = orbit_limit(alg, g, GroupElement<Rational>{req.start}, sc.budgets.orbit_iterations);
    const auto hit = r.first_within(req.target, req.tol);
    Json oj;
    oj["status"] = orbit_status_name(r.status);
    oj["iterations"] = r.iterations();
    oj["last"] = to_json(r.last().log);
    oj["reached_target_at"] = hit ? Json(*hit) : Json(nullptr);
    out["orbit"] = oj;
    checks.add("orbit-limit", hit.has_value(), max_abs(r.last().log - req.target),
               hit ? "within tolerance after " + std::to_string(*hit) + " iterations" : "target not reached");
  }
  if (sc.checks.probe) {
    const RMap g = generator ? *generator : family.front();
    std::vector<RMap> maps;
    for (std::size_t k = 0; k <= sc.budgets.probe_maps; ++k) maps.push_back(power(alg, g, static_cast<long>(k)));
    std::vector<GroupElement<Rational>> points;
    for (const auto& p : sc.checks.probe->points) points.push_back({p});
    const auto r = properness_probe(alg, maps, points, points.size(), 1e-9, 1e6, threads);
    Json pj;
    pj["verdict"] = probe_verdict_name(r.verdict);
    pj["escaping"] = r.escaping;
    if (r.witness) {
      pj["witness"] = {{"x", to_json(r.witness->x.log)}, {"y", to_json(r.witness->y.log)},
                       {"escape_norm", r.witness->escape_norm}};
    } else {
      pj["witness"] = nullptr;
    }
    out["probe"] = pj;
    const bool found = r.verdict == ProbeVerdict::witness_found;
    const bool ok = !sc.checks.probe->expect_witness || *sc.checks.probe->expect_witness == found;
    checks.add("properness-probe", ok, 0.0, probe_verdict_name(r.verdict));
  }
  return finish();
}

}  // namespace nilgeo::io
