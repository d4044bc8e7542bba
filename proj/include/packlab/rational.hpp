#pragma once

#include <boost/integer/common_factor.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace packlab {

// Exact rational arithmetic for item/container sizes. All feasibility and
// ordering decisions in the library go through Rat; floats only appear in LP
// values and deficiency totals.
using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Rat -> M conversion for code templated on the multiplicity scalar.
template <class M>
M to_scalar(const Rat& r);
template <>
inline double to_scalar<double>(const Rat& r) {
  return to_double(r);
}
template <>
inline Rat to_scalar<Rat>(const Rat& r) {
  return r;
}

inline std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "p/q", "p", or a decimal like "0.315" into an exact rational.
Rat parse_rational(const std::string& text);

// True if r == 2^-k for some k >= 0 (or r == 1).
bool is_power_of_two(const Rat& r);

// Exponent l of the size class (2^-l-1, 2^-l] containing s; requires 0 < s <= 1.
int size_class_log2(const Rat& s);

// sigma = 2^-l as an exact rational; l must be small enough for int64.
inline Rat pow2_class(int log2_exponent) {
  if (log2_exponent < 0 || log2_exponent > 62) throw std::invalid_argument("size class exponent out of range");
  return Rat(1, 1LL << log2_exponent);
}

// lcm with overflow guard; throws if the lcm exceeds `limit`.
long long checked_lcm(long long a, long long b, long long limit);

}  // namespace packlab
