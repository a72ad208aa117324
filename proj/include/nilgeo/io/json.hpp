#pragma once

#include "nilgeo/algebra.hpp"
#include "nilgeo/catalog.hpp"
#include "nilgeo/error.hpp"
#include "nilgeo/nilaffine.hpp"
#include "nilgeo/parabolic.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nilgeo::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ParseError with line and column.
inline Json parse_json_text(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json load_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

/// Read-only view of a JSON value that knows its path, for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const Json& json() const { return *j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError((path_.empty() ? std::string("/") : path_) + ": " + message);
  }

  bool is_object() const { return j_->is_object(); }
  bool is_array() const { return j_->is_array(); }
  bool is_string() const { return j_->is_string(); }

  const Node& object() const {
    if (!j_->is_object()) fail("expected an object");
    return *this;
  }

  /// Rejects keys outside `allowed`, so typos do not pass silently.
  const Node& keys(std::initializer_list<const char*> allowed) const {
    object();
    for (const auto& [k, v] : j_->items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) Node(v, path_ + "/" + k).fail("unknown field");
    }
    return *this;
  }

  bool has(const char* key) const { return object().j_->contains(key); }

  Node at(const char* key) const {
    if (!has(key)) fail(std::string("missing field '") + key + "'");
    return {j_->at(key), path_ + "/" + key};
  }

  std::optional<Node> get(const char* key) const {
    if (!has(key)) return std::nullopt;
    return Node(j_->at(key), path_ + "/" + key);
  }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  Node operator[](std::size_t i) const {
    size();
    return {j_->at(i), path_ + "/" + std::to_string(i)};
  }

  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    const double x = j_->get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long>();
  }

  std::uint64_t unsigned_integer() const {
    if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
    if (j_->is_number_integer() && j_->get<long>() >= 0) return static_cast<std::uint64_t>(j_->get<long>());
    fail("expected a non-negative integer");
  }

  std::size_t count(std::size_t min = 0) const {
    const auto v = unsigned_integer();
    if (v < min) fail("expected an integer >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  /// An integer or a string "p", "p/q".
  Rational rational() const {
    if (j_->is_number_integer()) return Rational(j_->get<long>());
    if (j_->is_string()) {
      try {
        return parse_rational(j_->get<std::string>());
      } catch (const std::exception& e) {
        fail(e.what());
      }
    }
    if (j_->is_number_float()) fail("non-integer numbers must be written as strings such as \"1/2\"");
    fail("expected a rational");
  }

  Vector<Rational> rational_vector(std::optional<std::size_t> n = {}) const {
    const std::size_t len = size();
    if (n && len != *n) fail("expected " + std::to_string(*n) + " entries, found " + std::to_string(len));
    Vector<Rational> v;
    for (std::size_t i = 0; i < len; ++i) v.push_back((*this)[i].rational());
    return v;
  }

  Vector<double> double_vector(std::optional<std::size_t> n = {}) const {
    const std::size_t len = size();
    if (n && len != *n) fail("expected " + std::to_string(*n) + " entries, found " + std::to_string(len));
    Vector<double> v;
    for (std::size_t i = 0; i < len; ++i) v.push_back((*this)[i].number());
    return v;
  }

  Matrix<Rational> rational_matrix(std::optional<std::size_t> rows = {}, std::optional<std::size_t> cols = {}) const {
    const std::size_t r = size();
    if (rows && r != *rows) fail("expected " + std::to_string(*rows) + " rows, found " + std::to_string(r));
    if (r == 0) return Matrix<Rational>(0, cols.value_or(0));
    const std::size_t c = cols ? *cols : (*this)[0].size();
    Matrix<Rational> m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      const auto row = (*this)[i].rational_vector(c);
      for (std::size_t j = 0; j < c; ++j) m(i, j) = row[j];
    }
    return m;
  }

 private:
  const Json* j_;
  std::string path_;
};

// ---------------------------------------------------------------- emission

inline Json to_json(const Rational& q) { return q.str(); }

inline Json to_json(const Vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const Vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

template <Scalar T>
Json to_json(const Matrix<T>& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Vector<T> row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(to_json(row));
  }
  return out;
}

/// Algebra schema with 1-based bracket indices; only [e_i, e_j] with i < j
/// is listed, the antisymmetric partner is implied.
inline Json algebra_to_json(const GradedNilpotentAlgebra<Rational>& alg) {
  Json out;
  out["dim"] = alg.dim();
  out["names"] = alg.names();
  out["degrees"] = alg.degrees();
  Json brackets = Json::array();
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = i + 1; j < alg.dim(); ++j)
      for (std::size_t k = 0; k < alg.dim(); ++k)
        if (alg.constant(i, j, k) != 0) brackets.push_back(Json::array({i + 1, j + 1, k + 1, alg.constant(i, j, k).str()}));
  out["brackets"] = brackets;
  return out;
}

// ---------------------------------------------------------------- algebras

inline GradedNilpotentAlgebra<Rational> parse_algebra(const Node& node) {
  node.keys({"dim", "names", "degrees", "brackets"});
  const std::size_t n = node.at("dim").count(1);
  std::vector<std::string> names;
  if (auto nn = node.get("names")) {
    if (nn->size() != n) nn->fail("expected " + std::to_string(n) + " names");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back((*nn)[i].string());
      if (!seen.insert(names.back()).second) (*nn)[i].fail("duplicate basis name");
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  }
  const auto dn = node.at("degrees");
  if (dn.size() != n) dn.fail("expected " + std::to_string(n) + " degrees");
  std::vector<int> degrees;
  for (std::size_t i = 0; i < n; ++i) {
    const long d = dn[i].integer();
    if (d < 1) dn[i].fail("degrees are positive integers");
    degrees.push_back(static_cast<int>(d));
  }
  std::vector<StructureConstant> brackets;
  if (auto bn = node.get("brackets")) {
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < bn->size(); ++e) {
      const auto entry = (*bn)[e];
      if (entry.size() != 4) entry.fail("bracket entries are [i, j, k, \"p/q\"]");
      std::size_t idx[3];
      for (std::size_t t = 0; t < 3; ++t) {
        const long v = entry[t].integer();
        if (v < 1 || static_cast<std::size_t>(v) > n) entry[t].fail("index out of range 1.." + std::to_string(n));
        idx[t] = static_cast<std::size_t>(v - 1);
      }
      if (idx[0] == idx[1]) entry.fail("[e_i, e_i] is zero and cannot be listed");
      if (!seen.insert({std::min(idx[0], idx[1]), std::max(idx[0], idx[1]), idx[2]}).second)
        entry.fail("bracket listed twice");
      const Rational value = entry[3].rational();
      if (idx[0] < idx[1]) {
        brackets.push_back({idx[0], idx[1], idx[2], value});
      } else {
        brackets.push_back({idx[1], idx[0], idx[2], Rational(-value)});
      }
    }
  }
  return {std::move(names), std::move(degrees), brackets};
}

// ---------------------------------------------------------------- catalog directory

/// Directory named by NILGEO_CATALOG_DIR, if set.
inline std::optional<std::filesystem::path> catalog_dir() {
  const char* dir = std::getenv("NILGEO_CATALOG_DIR");
  if (!dir || !*dir) return std::nullopt;
  return std::filesystem::path(dir);
}

inline bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
  });
}

/// The file <dir>/<key>.json, parsed, if the catalog directory provides it.
inline std::optional<Json> catalog_file(const std::string& key) {
  auto dir = catalog_dir();
  if (!dir || !valid_key(key)) return std::nullopt;
  const auto path = *dir / (key + ".json");
  if (!std::filesystem::is_regular_file(path)) return std::nullopt;
  return load_json_file(path);
}

inline std::vector<std::string> catalog_dir_keys() {
  std::vector<std::string> keys;
  auto dir = catalog_dir();
  if (!dir || !std::filesystem::is_directory(*dir)) return keys;
  for (const auto& entry : std::filesystem::directory_iterator(*dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json" && valid_key(entry.path().stem().string()))
      keys.push_back(entry.path().stem().string());
  std::sort(keys.begin(), keys.end());
  return keys;
}

/// Nilpotent algebra by key; the catalog directory takes precedence.
inline GradedNilpotentAlgebra<Rational> resolve_algebra(const std::string& key) {
  if (auto j = catalog_file(key); j && j->contains("dim")) return parse_algebra(Node(*j, key + ".json"));
  return nilpotent_algebra(key);
}

inline std::vector<std::string> algebra_keys() {
  auto keys = nilpotent_catalog_keys();
  for (const auto& k : catalog_dir_keys())
    if (auto j = catalog_file(k); j && j->contains("dim") && std::find(keys.begin(), keys.end(), k) == keys.end())
      keys.push_back(k);
  return keys;
}

// ---------------------------------------------------------------- matrix algebras

/// A semisimple real form with its declared simple roots and expected table rows.
struct RealFormEntry {
  std::string key, group;
  MatrixLieAlgebra algebra;
  std::vector<RVector> simple_roots;
  std::vector<TableRow> rows;
};

/// Inline matrix algebra `{matrix_size, basis, cartan}` with 1-based cartan
/// indices, plus optional `group`, `simple_roots` and expected `table` rows
/// `{sigma, dim, order}` (sigma 1-based).
inline RealFormEntry parse_real_form(const Node& node, const std::string& key) {
  node.keys({"matrix_size", "basis", "cartan", "group", "simple_roots", "table"});
  const std::size_t m = node.at("matrix_size").count(1);
  const auto bn = node.at("basis");
  std::vector<RMatrix> basis;
  for (std::size_t b = 0; b < bn.size(); ++b) basis.push_back(bn[b].rational_matrix(m, m));
  if (basis.empty()) bn.fail("basis is empty");
  const auto cn = node.at("cartan");
  std::vector<std::size_t> cartan;
  for (std::size_t i = 0; i < cn.size(); ++i) {
    const long v = cn[i].integer();
    if (v < 1 || static_cast<std::size_t>(v) > basis.size()) cn[i].fail("cartan index out of range 1.." + std::to_string(basis.size()));
    cartan.push_back(static_cast<std::size_t>(v - 1));
  }
  RealFormEntry entry{key, key, {}, {}, {}};
  if (auto g = node.get("group")) entry.group = g->string();
  entry.algebra = MatrixLieAlgebra(key, std::move(basis), std::move(cartan));
  if (auto sr = node.get("simple_roots"))
    for (std::size_t i = 0; i < sr->size(); ++i) entry.simple_roots.push_back((*sr)[i].rational_vector(entry.algebra.rank()));
  if (auto tn = node.get("table"))
    for (std::size_t i = 0; i < tn->size(); ++i) {
      const auto row = (*tn)[i];
      row.keys({"sigma", "dim", "order"});
      TableRow tr;
      tr.family = key;
      tr.group = entry.group;
      const auto sn = row.at("sigma");
      std::string text = "{";
      for (std::size_t s = 0; s < sn.size(); ++s) {
        const long v = sn[s].integer();
        if (v < 1) sn[s].fail("simple root indices start at 1");
        tr.sigma.push_back(static_cast<std::size_t>(v - 1));
        text += (s ? ",phi_" : "phi_") + std::to_string(v);
      }
      tr.sigma_text = text + "}";
      tr.expected_dim = row.at("dim").count();
      tr.expected_order = static_cast<int>(row.at("order").count());
      entry.rows.push_back(tr);
    }
  return entry;
}

inline RealFormEntry resolve_real_form(const std::string& key) {
  if (auto j = catalog_file(key); j && j->contains("matrix_size")) return parse_real_form(Node(*j, key + ".json"), key);
  const auto& spec = real_form_spec(key);
  RealFormEntry entry{spec.key, spec.group, load_algebra(key), spec.simple_roots, {}};
  for (const auto& row : table1_expected())
    if (row.family == key) entry.rows.push_back(row);
  return entry;
}

inline std::vector<std::string> real_form_keys() {
  std::vector<std::string> keys;
  for (const auto& s : real_form_catalog()) keys.push_back(s.key);
  for (const auto& k : catalog_dir_keys())
    if (auto j = catalog_file(k); j && j->contains("matrix_size") && std::find(keys.begin(), keys.end(), k) == keys.end())
      keys.push_back(k);
  return keys;
}

/// Table rows of one family (or all), computed from the matrix realizations.
inline std::vector<TableRow> catalog_rows(const std::string& family = {}) {
  const auto keys = real_form_keys();
  if (!family.empty() && std::find(keys.begin(), keys.end(), family) == keys.end())
    throw UnknownKey("no real form family named '" + family + "'");
  std::vector<TableRow> out;
  for (const auto& key : keys) {
    if (!family.empty() && key != family) continue;
    const auto entry = resolve_real_form(key);
    const auto rs = restricted_roots(entry.algebra, entry.simple_roots);
    for (auto row : entry.rows) {
      for (auto s : row.sigma)
        if (s >= rs.rank()) throw ParseError(key + ": sigma index " + std::to_string(s + 1) + " exceeds the rank");
      const auto pd = parabolic(rs, row.sigma);
      row.dim = pd.n_basis.size();
      row.order = pd.nil_order;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace nilgeo::io
