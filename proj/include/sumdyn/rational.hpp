#ifndef SUMDYN_RATIONAL_HPP
#define SUMDYN_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace sumdyn {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", integers and plain decimals ("0.45" -> 9/20).
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational");
  // cpp_int reads a leading 0 as an octal prefix, so integers go through this.
  auto integer = [&](std::string d) {
    bool neg = !d.empty() && (d[0] == '-' || d[0] == '+') ? (d[0] == '-') : false;
    if (!d.empty() && (d[0] == '-' || d[0] == '+')) d.erase(0, 1);
    if (d.empty() || d.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad rational '" + text + "'");
    auto nz = d.find_first_not_of('0');
    BigInt v(nz == std::string::npos ? std::string("0") : d.substr(nz));
    return neg ? BigInt(-v) : v;
  };
  try {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      BigInt p = integer(text.substr(0, slash));
      BigInt q = integer(text.substr(slash + 1));
      if (q == 0) throw ParseError("zero denominator in '" + text + "'");
      return Rational(p, q);
    }
    auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
      Rational m = parse_rational(text.substr(0, e));
      long x = std::stol(text.substr(e + 1));
      if (x > 4000 || x < -4000) throw ParseError("exponent out of range in '" + text + "'");
      BigInt p = pow(BigInt(10), static_cast<unsigned>(x < 0 ? -x : x));
      return x < 0 ? Rational(m / Rational(p)) : Rational(m * Rational(p));
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(integer(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    BigInt num = integer(digits);
    BigInt den = pow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
    return Rational(num, den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad rational '" + text + "'");
  }
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Fractional part in [0,1).
inline Rational frac(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  Rational f = r - Rational(q);
  if (f < 0) f += 1;
  return f;
}

}  // namespace sumdyn

#endif
