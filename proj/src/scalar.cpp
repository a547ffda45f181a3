#include "adjsim/scalar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "adjsim/errors.hpp"

namespace adjsim {

double to_double(const Rational& x) { return x.convert_to<double>(); }

Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

double square_root(double x) { return std::sqrt(std::max(x, 0.0)); }

Rational square_root(const Rational& x) {
  if (x < 0) throw DomainError("square root of a negative rational");
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  BigInt rn = boost::multiprecision::sqrt(num);
  BigInt rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) {
    throw CapabilityError("exact mode: standard deviation sqrt(" + x.str() +
                          ") is irrational; rerun without --rational");
  }
  return Rational(rn, rd);
}

std::string format_scalar(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return std::to_string(x);
  return std::string(buf, end);
}

std::string format_scalar(const Rational& x) { return x.str(); }

bool nearly_equal(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-12 * scale;
}

bool nearly_equal(const Rational& a, const Rational& b) { return a == b; }

}  // namespace adjsim
