#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace wpkind {

using Nat = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Nonnegative rational extended with infinity; addition and scaling absorb
/// infinity, except 0 * inf = 0.
struct ExtRat {
  bool infinite = false;
  Rational value = 0;

  static ExtRat inf() { return ExtRat{true, 0}; }
  static ExtRat of(Rational v) { return ExtRat{false, std::move(v)}; }

  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (a.infinite || b.infinite) return inf();
    return of(a.value + b.value);
  }
  friend ExtRat operator*(const Rational& c, const ExtRat& a) {
    if (c == 0) return of(0);
    if (a.infinite) return inf();
    return of(c * a.value);
  }
  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.infinite != b.infinite) return false;
    return a.infinite || a.value == b.value;
  }
  /// Pointwise order on [0, inf]; inf <= inf holds.
  friend bool operator<=(const ExtRat& a, const ExtRat& b) {
    if (b.infinite) return true;
    if (a.infinite) return false;
    return a.value <= b.value;
  }
};

inline ExtRat ext_min(const ExtRat& a, const ExtRat& b) { return a <= b ? a : b; }

inline Rational rational_pow2(unsigned n) {
  Nat d = 1;
  d <<= n;
  return Rational(1, d);
}

/// Parses "7", "0.99" or "2/5" into an exact rational. Decimal literals are
/// converted exactly (0.99 -> 99/100).
inline std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!digits(num) || !digits(den) || Nat(den) == 0) return std::nullopt;
    return Rational(Nat(num), Nat(den));
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if (!digits(ip) || !digits(fp)) return std::nullopt;
    Nat den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    return Rational(Nat(ip) * den + Nat(fp), den);
  }
  if (!digits(text)) return std::nullopt;
  return Rational(Nat(text));
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string to_string(const ExtRat& v) {
  return v.infinite ? "inf" : to_string(v.value);
}

inline bool is_natural(const Rational& r) { return r >= 0 && denominator(r) == 1; }

}  // namespace wpkind
