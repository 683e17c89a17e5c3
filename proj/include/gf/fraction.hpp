#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace gf {

// Exact arithmetic used throughout: denominators reach 2^(k*r) and 3^r,
// well past 64 bits, so both types are arbitrary precision.
using Int = boost::multiprecision::cpp_int;
using Fraction = boost::multiprecision::cpp_rational;

inline Fraction frac(Int num, Int den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Fraction(std::move(num), std::move(den));
}
inline Fraction frac(long long num, long long den) { return frac(Int(num), Int(den)); }

inline Int numerator(const Fraction& f) { return boost::multiprecision::numerator(f); }
inline Int denominator(const Fraction& f) { return boost::multiprecision::denominator(f); }

inline Int int_pow(Int base, unsigned exp) {
  Int out = 1;
  while (exp) {
    if (exp & 1u) out *= base;
    base *= base;
    exp >>= 1u;
  }
  return out;
}

inline Fraction frac_pow(const Fraction& base, unsigned exp) {
  return Fraction(int_pow(numerator(base), exp), int_pow(denominator(base), exp));
}

// Canonical "p/q" cell format used by the CSV emitters and golden tests.
inline std::string fraction_string(const Fraction& f) {
  return numerator(f).str() + "/" + denominator(f).str();
}

inline double to_double(const Fraction& f) { return f.convert_to<double>(); }

}  // namespace gf
