#include "adjsim/combinatorics.hpp"

#include <cmath>

#include "adjsim/errors.hpp"

namespace adjsim {

BigInt factorial(Count n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  BigInt out = 1;
  for (Count k = 2; k <= n; ++k) out *= k;
  return out;
}

BigInt binomial_exact(Count n, Count k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (Count i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

double log_factorial(Count n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binomial(Count n, Count k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double binomial_coefficient(Count n, Count k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 10000) return binomial_exact(n, k).convert_to<double>();
  return std::exp(log_binomial(n, k));
}

template <>
double binomial_pmf<double>(Count n, Count k, Count successes, Count trials) {
  if (k < 0 || k > n) return 0.0;
  if (successes == 0) return k == 0 ? 1.0 : 0.0;
  if (successes == trials) return k == n ? 1.0 : 0.0;
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  const double log_mass = log_binomial(n, k) + static_cast<double>(k) * std::log(p) +
                          static_cast<double>(n - k) * std::log1p(-p);
  return std::exp(log_mass);
}

template <>
Rational binomial_pmf<Rational>(Count n, Count k, Count successes, Count trials) {
  if (k < 0 || k > n) return Rational(0);
  const Rational p(successes, trials);
  return Rational(binomial_exact(n, k)) * power(p, k) * power(Rational(1 - p), n - k);
}

}  // namespace adjsim
