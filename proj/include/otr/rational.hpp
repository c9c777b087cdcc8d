#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace otr {

// Exact rational arithmetic everywhere: the bound checks in this library are
// exact inequalities and must not see rounding error.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat make_rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(BigInt(num), BigInt(den));
}

// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string rat_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

// Accepts "p" and "p/q" with optional leading '-'.
inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

inline double rat_to_double(const Rat& r) { return r.template convert_to<double>(); }

// Smallest power of two >= w, as (value, exponent). Requires w >= 1.
inline std::pair<Rat, int> ceil_power_of_two(const Rat& w) {
  if (w < 1) throw std::invalid_argument("ceil_power_of_two requires weight >= 1");
  Rat p = 1;
  int e = 0;
  while (p < w) {
    p *= 2;
    ++e;
  }
  return {p, e};
}

// Returns the exponent i >= 0 with w == 2^i, or -1 if w is not such a power.
inline int power_of_two_exponent(const Rat& w) {
  if (denominator(w) != 1 || w < 1) return -1;
  BigInt n = numerator(w);
  int e = 0;
  while (n % 2 == 0) {
    n >>= 1;
    ++e;
  }
  return n == 1 ? e : -1;
}

}  // namespace otr
