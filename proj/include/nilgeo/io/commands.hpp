#pragma once

#include "nilgeo/io/json.hpp"
#include "nilgeo/io/scenario.hpp"
#include "nilgeo/suites.hpp"

#include <iomanip>

namespace nilgeo::io {

/// Result of one subcommand: the JSON report, its text rendering and the exit
/// status (0 all checks pass, 1 a check failed).
struct CommandOutput {
  Json json;
  std::string text;
  int exit_status = 0;
};

namespace detail {

inline std::string format_double(double x) { return Json(x).dump(); }

inline std::string render_checks(const Report& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  residual " << format_double(c.residual);
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
  return os.str();
}

inline std::string render_vector(const Json& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
  return s + ")";
}

inline std::string render_span(const Json& basis) {
  if (basis.is_null()) return "-";
  if (basis.empty()) return "{0}";
  std::string s = "span{";
  for (std::size_t i = 0; i < basis.size(); ++i) s += (i ? ", " : "") + render_vector(basis[i]);
  return s + "}";
}

inline std::string render_names(const Json& names) {
  if (names.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? " " : "") + names[i].get<std::string>();
  return s;
}

inline CommandOutput finish(Json json, std::string text, const Report& checks) {
  const int status = checks.pass() ? 0 : 1;
  json["checks"] = checks_json(checks);
  json["exit_status"] = status;
  return {std::move(json), std::move(text) + render_checks(checks), status};
}

}  // namespace detail

/// Parabolic table rows computed from the matrix realizations, each compared
/// with its expected (dim n_Sigma, nilpotency order).
inline CommandOutput cmd_catalog(const std::string& family = {}) {
  const auto rows = catalog_rows(family);
  Json json;
  json["schema"] = report_schema;
  json["command"] = "catalog";
  json["family"] = family.empty() ? Json(nullptr) : Json(family);
  Json jrows = Json::array();
  Report checks;
  std::ostringstream os;
  os << std::left << std::setw(10) << "group" << std::setw(18) << "Sigma" << std::setw(6) << "dim" << std::setw(7)
     << "order" << std::setw(10) << "expected" << "result\n";
  for (const auto& r : rows) {
    Json sigma = Json::array();
    for (auto s : r.sigma) sigma.push_back(s + 1);
    jrows.push_back({{"family", r.family},
                     {"group", r.group},
                     {"sigma", sigma},
                     {"sigma_text", r.sigma_text},
                     {"dim", r.dim},
                     {"order", r.order},
                     {"expected_dim", r.expected_dim},
                     {"expected_order", r.expected_order},
                     {"pass", r.pass()}});
    const double gap = std::abs(static_cast<double>(r.dim) - static_cast<double>(r.expected_dim)) +
                       std::abs(static_cast<double>(r.order - r.expected_order));
    checks.add("table:" + r.family + ":" + r.sigma_text, r.pass(), gap,
               "computed (" + std::to_string(r.dim) + "," + std::to_string(r.order) + "), expected (" +
                   std::to_string(r.expected_dim) + "," + std::to_string(r.expected_order) + ")");
    os << std::setw(10) << r.group << std::setw(18) << r.sigma_text << std::setw(6) << r.dim << std::setw(7) << r.order
       << std::setw(10) << (std::to_string(r.expected_dim) + " " + std::to_string(r.expected_order))
       << (r.pass() ? "PASS" : "FAIL") << '\n';
  }
  json["rows"] = jrows;
  auto out = detail::finish(std::move(json), {}, checks);
  out.text = os.str();
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bch", "split", "ray", "adjoint", "all"};
  return names;
}

/// Runs one invariant suite over the nilpotent catalog (and the catalog
/// directory). Deterministic for fixed samples and seed, whatever `threads`.
inline CommandOutput cmd_check(const std::string& suite, std::size_t samples, std::uint64_t seed, std::size_t threads) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw UnknownKey("no suite named '" + suite + "'");
  const SuiteOptions opt{samples, seed, threads};
  Report checks;
  std::vector<NamedAlgebra> algebras;
  for (const auto& key : algebra_keys()) {
    auto alg = resolve_algebra(key);
    const auto grading = validate_grading(alg);
    const auto bad = grading.failures();
    checks.add("grading:" + key, grading.pass(), static_cast<double>(bad.size()), bad.empty() ? "" : bad.front()->detail);
    if (grading.pass()) algebras.emplace_back(key, std::move(alg));
  }
  if (suite == "bch" || suite == "all") checks.append(bch_suite(algebras, opt));
  if (suite == "split" || suite == "all") checks.append(split_suite(algebras, opt));
  if (suite == "ray" || suite == "all") checks.append(ray_suite(algebras, opt));
  if (suite == "adjoint" || suite == "all") checks.append(adjoint_suite(opt));
  Json json;
  json["schema"] = report_schema;
  json["command"] = "check";
  json["suite"] = suite;
  json["samples"] = samples;
  json["seed"] = seed;
  return detail::finish(std::move(json), {}, checks);
}

/// Parses and runs a scenario file. `seed` overrides the scenario's seed.
inline CommandOutput cmd_simulate(const std::string& path, std::optional<std::uint64_t> seed, std::size_t threads) {
  auto sc = parse_scenario(load_json_file(path));
  if (seed) sc.seed = *seed;
  auto sim = simulate(sc, threads);
  const Json& r = sim.report;
  std::ostringstream os;
  os << "scenario " << (sc.name.empty() ? path : sc.name) << '\n';
  if (!r["splitting"].is_null()) {
    const auto& s = r["splitting"];
    std::string omega;
    for (const auto& w : s["omega"]) omega += (omega.empty() ? "" : " ") + w.get<std::string>();
    os << "omega  " << omega << '\n';
    os << "E      " << detail::render_names(s["E"]) << '\n';
    os << "P      " << detail::render_names(s["P"]) << '\n';
    os << "F      " << detail::render_names(s["F"]) << '\n';
  }
  os << "fixed point  " << (r["fixed_point"].is_null() ? "-" : detail::render_vector(r["fixed_point"])) << '\n';
  os << "I      " << detail::render_span(r["I"]) << '\n';
  os << "V      " << detail::render_span(r["V"]) << '\n';
  if (r.contains("orbit")) os << "orbit  " << r["orbit"]["status"].get<std::string>() << " at " << detail::render_vector(r["orbit"]["last"]) << '\n';
  if (r.contains("probe")) os << "probe  " << r["probe"]["verdict"].get<std::string>() << '\n';
  os << detail::render_checks(sim.checks);
  return {sim.report, os.str(), sim.exit_status};
}

}  // namespace nilgeo::io
