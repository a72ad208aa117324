#pragma once

#include "nilgeo/parabolic/matrix_algebra.hpp"

#include <optional>

namespace nilgeo {

/// Built-in real form: the algebra is the kernel of linear constraints on
/// gl(m, R) or gl(m, C); complex entries a+ib are realified as [[a,-b],[b,a]].
struct RealFormSpec {
  enum class Kind { Traceless, Unitary, Quaternionic };
  std::string key;
  std::string group;
  bool complex = false;
  std::size_t m = 0;
  Kind kind = Kind::Traceless;
  std::vector<std::vector<long>> form;        // J for Unitary
  std::vector<std::vector<long>> cartan;      // diagonal entries of each split cartan element
  std::vector<RVector> simple_roots;          // optional declared order, values on the cartan elements
};

inline const std::vector<RealFormSpec>& real_form_catalog() {
  using K = RealFormSpec::Kind;
  auto rv = [](std::initializer_list<long> xs) {
    RVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
  };
  static const std::vector<RealFormSpec> specs = {
      {"sl3R", "SL(3,R)", false, 3, K::Traceless, {}, {{1, 0, -1}, {0, 1, -1}}, {rv({1, -1}), rv({1, 2})}},
      {"su21", "SU(2,1)", true, 3, K::Unitary, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}, {{1, 0, -1}}, {}},
      {"sl4R",
       "SL(4,R)",
       false,
       4,
       K::Traceless,
       {},
       {{1, 0, 0, -1}, {0, 1, 0, -1}, {0, 0, 1, -1}},
       // E12, E23, E34
       {rv({1, -1, 0}), rv({0, 1, -1}), rv({1, 1, 2})}},
      {"su31",
       "SU(3,1)",
       true,
       4,
       K::Unitary,
       {{0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}},
       {{1, 0, 0, -1}},
       {}},
      {"sustar4", "SU*(4)", true, 4, K::Quaternionic, {}, {{1, -1, 1, -1}}, {}},
      {"su22",
       "SU(2,2)",
       true,
       4,
       K::Unitary,
       {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}},
       {{1, 0, 0, -1}, {0, 1, -1, 0}},
       {}},
  };
  return specs;
}

inline const RealFormSpec& real_form_spec(const std::string& key) {
  for (const auto& s : real_form_catalog())
    if (s.key == key) return s;
  throw UnknownKey("no built-in real form named '" + key + "'");
}

namespace detail {

/// Real and imaginary parts of a complex-linear expression in the entries of X.
struct ComplexForm {
  RVector re, im;
  ComplexForm(std::size_t vars) : re(vars, Rational(0)), im(vars, Rational(0)) {}
};

class EntryVariables {
 public:
  EntryVariables(std::size_t m, bool complex) : m_(m), complex_(complex) {}
  std::size_t count() const { return (complex_ ? 2 : 1) * m_ * m_; }

  /// form += c * X_pq, or c * conj(X_pq).
  void add(ComplexForm& f, long c, std::size_t p, std::size_t q, bool conjugate = false) const {
    std::size_t base = (complex_ ? 2 : 1) * (p * m_ + q);
    f.re[base] += c;
    if (complex_) f.im[base + 1] += conjugate ? -c : c;
  }

  RMatrix realify(const RVector& v) const {
    if (!complex_) {
      RMatrix out(m_, m_);
      for (std::size_t p = 0; p < m_; ++p)
        for (std::size_t q = 0; q < m_; ++q) out(p, q) = v[p * m_ + q];
      return out;
    }
    RMatrix out(2 * m_, 2 * m_);
    for (std::size_t p = 0; p < m_; ++p)
      for (std::size_t q = 0; q < m_; ++q) {
        const Rational& a = v[2 * (p * m_ + q)];
        const Rational& b = v[2 * (p * m_ + q) + 1];
        out(2 * p, 2 * q) = a;
        out(2 * p, 2 * q + 1) = -b;
        out(2 * p + 1, 2 * q) = b;
        out(2 * p + 1, 2 * q + 1) = a;
      }
    return out;
  }

  RVector diagonal(const std::vector<long>& d) const {
    RVector v(count(), Rational(0));
    for (std::size_t p = 0; p < m_; ++p) v[(complex_ ? 2 : 1) * (p * m_ + p)] = d[p];
    return v;
  }

 private:
  std::size_t m_;
  bool complex_;
};

}  // namespace detail

inline MatrixLieAlgebra build_real_form(const RealFormSpec& spec) {
  using K = RealFormSpec::Kind;
  const std::size_t m = spec.m;
  detail::EntryVariables vars(m, spec.complex);
  std::vector<detail::ComplexForm> forms;

  detail::ComplexForm tr(vars.count());
  for (std::size_t k = 0; k < m; ++k) vars.add(tr, 1, k, k);
  forms.push_back(tr);

  if (spec.kind == K::Unitary) {
    // X^* J + J X = 0
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) {
        detail::ComplexForm f(vars.count());
        for (std::size_t p = 0; p < m; ++p) {
          if (spec.form[p][l]) vars.add(f, spec.form[p][l], p, k, true);
          if (spec.form[k][p]) vars.add(f, spec.form[k][p], p, l);
        }
        forms.push_back(f);
      }
  } else if (spec.kind == K::Quaternionic) {
    // X J = J conj(X) with J = [[0,-I],[I,0]]
    const std::size_t h = m / 2;
    auto jq = [&](std::size_t a, std::size_t b) -> long {
      if (a < h && b >= h && b - h == a) return -1;
      if (a >= h && b < h && a - h == b) return 1;
      return 0;
    };
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) {
        detail::ComplexForm f(vars.count());
        for (std::size_t p = 0; p < m; ++p) {
          if (jq(p, l)) vars.add(f, jq(p, l), k, p);
          if (jq(k, p)) vars.add(f, -jq(k, p), p, l, true);
        }
        forms.push_back(f);
      }
  }

  std::vector<RVector> rows;
  for (const auto& f : forms) {
    rows.push_back(f.re);
    if (spec.complex) rows.push_back(f.im);
  }
  RMatrix constraints = RMatrix::from_rows(rows, vars.count());

  std::vector<RVector> chosen;
  for (const auto& d : spec.cartan) {
    RVector v = vars.diagonal(d);
    if (!is_zero_vector(constraints.apply(v))) throw BadCartan(spec.key + ": cartan element violates the constraints");
    chosen.push_back(v);
  }
  for (const auto& k : kernel(constraints)) {
    auto trial = chosen;
    trial.push_back(k);
    if (rank(RMatrix::from_rows(trial, vars.count())) == trial.size()) chosen = std::move(trial);
  }
  std::vector<RMatrix> basis;
  for (const auto& v : chosen) basis.push_back(vars.realify(v));
  std::vector<std::size_t> cartan;
  for (std::size_t i = 0; i < spec.cartan.size(); ++i) cartan.push_back(i);
  return MatrixLieAlgebra(spec.key, std::move(basis), std::move(cartan));
}

/// Catalog algebra by key (sl3R, sl4R, su21, su31, su22, sustar4).
inline MatrixLieAlgebra load_algebra(const std::string& key) { return build_real_form(real_form_spec(key)); }

}  // namespace nilgeo
