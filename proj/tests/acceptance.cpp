#include "nilgeo/io.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sys/wait.h>

using namespace nilgeo;
using namespace nilgeo::io;

namespace {

using Q = Rational;
using RMap = NilAffineMap<Rational>;
using Clock = std::chrono::steady_clock;

const std::string cli = NILGEO_CLI_PATH;
const std::string scenario_dir = NILGEO_SCENARIO_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
  // Set when the failure has been pinned to a known error in the published
  // table and everything else in the criterion holds.
  bool erratum = false;
};

struct Criterion {
  int id;
  std::string title;
  Outcome (*run)();
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) { return Json(x).dump(); }

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string out;
  FILE* pipe = popen((cli + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return {-1, out};
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

Scenario load_scenario(const std::string& name) {
  return parse_scenario(load_json_file(scenario_dir + "/" + name + ".json"));
}

std::vector<NamedAlgebra> catalog_algebras() {
  std::vector<NamedAlgebra> out;
  for (const auto& key : nilpotent_catalog_keys()) out.emplace_back(key, nilpotent_algebra(key));
  return out;
}

std::string first_failure(const Report& r) {
  const auto bad = r.failures();
  return bad.empty() ? std::string() : bad.front()->name + ": " + bad.front()->detail;
}

Matrix<Q> diag(std::initializer_list<Q> d) { return Matrix<Q>::diagonal(Vector<Q>(d)); }

// ---------------------------------------------------------------- 1

Outcome table_reproduction() {
  const auto t0 = Clock::now();
  const auto rows = catalog_rows();
  const double elapsed = seconds_since(t0);
  std::vector<TableRow> wrong;
  for (const auto& r : rows)
    if (!r.pass()) wrong.push_back(r);
  Outcome o;
  o.pass = rows.size() == 11 && wrong.empty() && elapsed < 10.0;
  o.detail = std::to_string(rows.size() - wrong.size()) + " of " + std::to_string(rows.size()) + " rows match, " +
             fmt(elapsed) + " s";
  if (o.pass || rows.size() != 11 || elapsed >= 10.0 || wrong.size() != 1) return o;

  // The one admissible mismatch: SL(4,R) with two adjacent simple roots in
  // Sigma is listed as (4,2). The roots e_i - e_j (i < j) of sl(4) have grade
  // equal to the number of simple roots outside Sigma among phi_i..phi_{j-1};
  // count by hand for every two-element Sigma and check none gives (4,2).
  const auto& w = wrong.front();
  if (w.family != "sl4R" || w.expected_dim != 4 || w.expected_order != 2) return o;
  const auto rs = catalog_root_system("sl4R");
  bool any = false, agree = true;
  std::string seen;
  for (const auto& sigma : {std::vector<std::size_t>{0, 1}, {1, 2}, {0, 2}}) {
    std::size_t dim = 0;
    int order = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        int grade = 0;
        for (std::size_t k = i; k < j; ++k) grade += std::find(sigma.begin(), sigma.end(), k) == sigma.end();
        if (grade > 0) ++dim;
        order = std::max(order, grade);
      }
    const auto pd = parabolic(rs, sigma);
    agree = agree && pd.n_basis.size() == dim && pd.nil_order == order;
    any = any || (dim == 4 && order == 2);
    seen += (seen.empty() ? "" : ", ") + std::string("{") + std::to_string(sigma[0] + 1) + "," +
            std::to_string(sigma[1] + 1) + "} -> (" + std::to_string(dim) + "," + std::to_string(order) + ")";
  }
  o.detail += "; " + w.sigma_text + " computed (" + std::to_string(w.dim) + "," + std::to_string(w.order) +
              "), published (4,2); two-element Sigma give " + seen;
  o.erratum = agree && !any && w.dim == 3 && w.order == 1;
  return o;
}

// ---------------------------------------------------------------- 2

Outcome adjoint_weights() {
  const auto r = adjoint_suite({200, 11, 1});
  return {r.pass(), r.pass() ? "weights a1-a2 x2, 2a2, a1+a2 x2, 2a1 exact; ad(H) diagonal on 200 samples"
                              : first_failure(r)};
}

// ---------------------------------------------------------------- 3, 5

Report& bch_report() {
  static Report r = bch_suite(catalog_algebras(), {10000, 20240, 1});
  return r;
}

Outcome group_axioms() {
  Report axioms;
  for (const auto& c : bch_report().checks)
    if (c.name.find("two-step-convexity") == std::string::npos) axioms.checks.push_back(c);
  std::set<int> orders;
  for (const auto& [k, alg] : catalog_algebras()) orders.insert(alg.order());
  const bool all_orders = orders == std::set<int>{1, 2, 3};
  return {axioms.pass() && all_orders && axioms.checks.size() == 3 * nilpotent_catalog_keys().size(),
          axioms.pass() ? std::to_string(axioms.checks.size()) + " checks x 10000 samples exact, orders 1-3"
                        : first_failure(axioms)};
}

Outcome two_step_convexity() {
  Report conv;
  for (const auto& c : bch_report().checks)
    if (c.name.find("two-step-convexity") != std::string::npos) conv.checks.push_back(c);
  std::size_t order2 = 0;
  for (const auto& [k, alg] : catalog_algebras()) order2 += alg.order() == 2;
  return {conv.pass() && order2 > 0 && conv.checks.size() == order2,
          conv.pass() ? std::to_string(order2) + " order-2 algebras, second difference exactly zero"
                      : first_failure(conv)};
}

// ---------------------------------------------------------------- 4

Outcome decomposition() {
  const auto r = split_suite(catalog_algebras(), {500, 4242, 1});
  std::size_t splits = 0;
  for (const auto& [k, alg] : catalog_algebras()) splits += admissible_splits(alg).size();
  return {r.pass() && splits > 0,
          r.pass() ? std::to_string(splits) + " admissible splits x 500 samples, recompose exact, no second solution"
                   : first_failure(r)};
}

// ---------------------------------------------------------------- 6

Outcome splitting_and_fixed_points() {
  std::string bad;
  const auto sim = simulate(load_scenario("volume-preserving-heis3"));
  const auto& s = sim.report["splitting"];
  if (s["E"] != Json::array({"X"}) || s["P"] != Json::array({"Z"}) || s["F"] != Json::array({"Y"}))
    bad += "scenario splitting " + s.dump() + "; ";
  const auto* it = sim.checks.find("fixed-point-iteration");
  if (!it || !it->pass || it->residual > 1e-10) bad += "scenario fixed point iteration; ";

  const auto heis3 = nilpotent_algebra("heis3");
  const auto rg = make_ray_geometry(heis3, Matrix<Q>{{Q(1), Q(-1), Q(0)}});
  const auto c = Cocycle<Q>::powers(rg, RMap::linear(heis3, diag({Q(1, 2), Q(2), Q(1)})), 12);
  for (auto mode : {OmegaMode::closed_form, OmegaMode::numeric}) {
    const auto sp = omega_degrees(c, Direction::contracting, mode);
    if (sp.E != Subspace<Q>::coordinate(3, {0}) || sp.P != Subspace<Q>::coordinate(3, {2}) ||
        sp.F != Subspace<Q>::coordinate(3, {1}))
      bad += "library splitting; ";
  }

  const RMap qmap(heis3, {{Q(1), Q(1), Q(1)}}, diag({Q(2), Q(2), Q(4)}));
  const auto q = q_fixed_point(heis3, qmap, Subspace<Q>::full(3));
  if (q.log != Vector<Q>{Q(-1), Q(-1), Q(-1, 3)}) bad += "q != (-1,-1,-1/3); ";
  // Q(q) = c f(q), multiplied out by hand: (1,1,1)(-2,-2,-4/3) = (-1,-1,-1/3).
  const auto fq = qmap.linear().apply(q.log);
  const Vector<Q> by_hand{Q(1) + fq[0], Q(1) + fq[1], Q(1) + fq[2] + (fq[1] - fq[0]) / Q(2)};
  if (by_hand != q.log) bad += "Q(q) != q; ";
  const auto iter = q_fixed_point_iterate(heis3, qmap);
  const double gap = max_abs(iter.point.log - convert_vector<double>(q.log));
  if (!iter.converged || gap > 1e-10) bad += "iteration gap " + fmt(gap) + "; ";
  return {bad.empty(), bad.empty() ? "E=span X, P=span Z, F=span Y; q=(-1,-1,-1/3) exact, iteration within " + fmt(gap)
                                   : bad};
}

// ---------------------------------------------------------------- 7

Outcome flow_and_volume() {
  std::string bad;
  const auto heis3 = nilpotent_algebra("heis3");
  const auto rg = make_ray_geometry(heis3, Matrix<Q>{{Q(1), Q(-1), Q(0)}});
  const auto split = FriedSplitting<Q>::from_tags({Omega::zero, Omega::infinity, Omega::one});
  const RMap g(heis3, {{Q(0), Q(1), Q(0)}}, diag({Q(1, 2), Q(2), Q(1)}));
  const auto data = invariant_complement(invisible_subspace(split, rg, {g.linear()}), split, rg, {g.linear()});

  double worst = 0.0;
  std::size_t pairs = 0;
  for (int k = 0; k < 10; ++k) {
    const double t = -2.0 + 0.4 * k + 0.1;
    const auto r = volume_scaling_check(heis3, data, t, 20, 100 + static_cast<std::uint64_t>(k));
    worst = std::max(worst, r.checks[0].residual);
    pairs += 20;
  }
  if (worst > 1e-6) bad += "volume relative error " + fmt(worst) + "; ";

  std::size_t group_law_failures = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    Rng rng = sample_rng(77, k);
    const GroupElement<Q> x{random_rational_vector(rng, 3)};
    auto pick = [&] {
      return Q(std::uniform_int_distribution<long>(1, 9)(rng), std::uniform_int_distribution<long>(1, 7)(rng));
    };
    const Q s = pick(), t = pick();
    group_law_failures += radial_flow_lambda(heis3, radial_flow_lambda(heis3, x, t, data), s, data) !=
                          radial_flow_lambda(heis3, x, Q(s * t), data);
  }
  if (group_law_failures) bad += std::to_string(group_law_failures) + " group-law failures; ";

  const auto eq = field_equivariance_check(heis3, g, data, 500, 5);
  if (!eq.pass()) bad += "equivariance residual " + fmt(eq.checks[0].residual) + "; ";
  return {bad.empty(), bad.empty() ? std::to_string(pairs) + " (x,t) pairs, worst relative error " + fmt(worst) +
                                         "; R_s R_t = R_{s+t} exact on 300 samples; equivariance residual " +
                                         fmt(eq.checks[0].residual)
                                   : bad};
}

// ---------------------------------------------------------------- 8

Outcome counterexample() {
  std::string bad;
  const auto sim = simulate(load_scenario("counterexample-heis3"));
  const auto& orbit = sim.report["orbit"];
  if (!orbit.contains("reached_target_at") || orbit["reached_target_at"].get<int>() > 60)
    bad += "scenario orbit " + orbit.dump() + "; ";
  if (sim.report["probe"]["verdict"] != "NON-PROPER-WITNESS-FOUND") bad += "no witness; ";

  const auto heis3 = nilpotent_algebra("heis3");
  const RMap f = RMap::linear(heis3, diag({Q(1, 2), Q(1), Q(1, 2)}));
  std::size_t worst = 0;
  for (long x0 : {-7, -1, 1, 3, 10}) {
    const auto r = orbit_limit(heis3, f, GroupElement<Q>{{Q(x0), Q(1), Q(0)}}, 60);
    const auto n = r.first_within({0, 1, 0}, 1e-9);
    if (!n) {
      bad += "x0=" + std::to_string(x0) + " misses; ";
    } else {
      worst = std::max(worst, *n);
    }
  }
  return {bad.empty(), bad.empty() ? "within 1e-9 of (0,1,0) after at most " + std::to_string(worst) +
                                         " iterations; probe: NON-PROPER-WITNESS-FOUND"
                                   : bad};
}

// ---------------------------------------------------------------- 9

Outcome determinism() {
  std::vector<std::string> commands{"--json --seed 5 check --suite all --samples 50", "--json catalog"};
  for (const char* s : {"radiant-heis3", "volume-preserving-heis3", "counterexample-heis3", "su22-phi2"})
    commands.push_back("--json simulate " + scenario_dir + "/" + s + ".json");
  std::string bad;
  for (const auto& cmd : commands) {
    const auto a = run_cli(cmd), b = run_cli(cmd), c = run_cli("--threads 3 " + cmd);
    if (a.second.empty() || a != b || a.second != c.second) bad += "'" + cmd + "' differs; ";
  }
  return {bad.empty(), bad.empty() ? std::to_string(commands.size()) + " commands byte-identical across runs and thread counts"
                                   : bad};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "parabolic table from matrix realizations", table_reproduction},
      {2, "su(2,2) adjoint weights on n_B", adjoint_weights},
      {3, "group axioms and conjugation, 10^4 samples", group_axioms},
      {4, "decomposition lemma, 500 samples per split", decomposition},
      {5, "two-step convexity", two_step_convexity},
      {6, "E/P/F splitting and fixed points", splitting_and_fixed_points},
      {7, "radial flow and volume", flow_and_volume},
      {8, "counterexample orbit and properness", counterexample},
      {9, "determinism", determinism},
  };
  int hard_failures = 0, errata = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.title << "  (" << o.detail << ")";
    if (!o.pass && o.erratum) std::cout << "  [known erratum in the published table]";
    std::cout << std::endl;
    if (!o.pass) (o.erratum ? errata : hard_failures)++;
  }
  std::cout << "summary: " << criteria.size() - hard_failures - errata << " pass, " << errata
            << " fail on a published-table erratum, " << hard_failures << " fail" << std::endl;
  return hard_failures == 0 ? 0 : 1;
}
