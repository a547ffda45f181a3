#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace adjsim {

using Count = std::int64_t;

// Exact arithmetic used by oracles and small-N verification runs.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class Real>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

inline double to_double(double x) { return x; }
double to_double(const Rational& x);

inline double abs_value(double x) { return x < 0 ? -x : x; }
Rational abs_value(const Rational& x);

// Square root; the exact overload succeeds only for perfect-square rationals
// and throws CapabilityError otherwise.
double square_root(double x);
Rational square_root(const Rational& x);

// Converts a double into the scalar type. Exact for Rational (binary value).
template <class Real>
Real from_double(double x) {
  return Real(x);
}

// "-1/5" for rationals, shortest round-trip decimal for doubles.
std::string format_scalar(double x);
std::string format_scalar(const Rational& x);

// True when a and b should be treated as the same value. Exact comparison for
// rationals; for doubles a relative tolerance of 1e-12 absorbs rounding in
// closed forms and enumeration sums.
bool nearly_equal(double a, double b);
bool nearly_equal(const Rational& a, const Rational& b);

}  // namespace adjsim
