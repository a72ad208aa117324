#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nilgeo {

/// Exact rational scalar. Expression templates are off so `auto` is safe.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static bool is_zero(const Rational& x) { return x == 0; }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static constexpr double tolerance = 1e-12;
  static bool is_zero(double x) { return std::abs(x) <= tolerance; }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::abs(x); }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
bool is_zero(const T& x) {
  return ScalarTraits<T>::is_zero(x);
}

template <Scalar T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

/// Converts an exact value into the target scalar domain.
template <Scalar T>
T scalar_cast(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) {
    return q;
  } else {
    return q.convert_to<double>();
  }
}

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

inline long to_long(const Rational& q) {
  if (!is_integer(q)) throw std::domain_error("rational " + q.str() + " is not an integer");
  return boost::multiprecision::numerator(q).convert_to<long>();
}

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on malformed text.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
      }
    }
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline std::string to_string(const Rational& q) { return q.str(); }

/// Closest rational with denominator <= max_den, by scanning denominators.
inline Rational rationalize(double x, long max_den = 1000) {
  const bool negative = x < 0;
  const double ax = std::abs(x);
  long best_num = std::lround(ax), best_den = 1;
  double best_err = std::abs(ax - static_cast<double>(best_num));
  for (long den = 2; den <= max_den && best_err > 0; ++den) {
    long num = std::lround(ax * static_cast<double>(den));
    double err = std::abs(ax - static_cast<double>(num) / static_cast<double>(den));
    if (err < best_err - 1e-15) {
      best_err = err;
      best_num = num;
      best_den = den;
    }
  }
  Rational r{Integer(best_num), Integer(best_den)};
  return negative ? Rational(-r) : r;
}

}  // namespace nilgeo
