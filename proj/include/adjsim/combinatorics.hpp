#pragma once

#include "adjsim/scalar.hpp"

namespace adjsim {

// C(n, 2) = n(n-1)/2 for n >= 0.
constexpr Count pairs(Count n) { return n < 2 ? 0 : n * (n - 1) / 2; }

BigInt factorial(Count n);
BigInt binomial_exact(Count n, Count k);

double log_factorial(Count n);
double log_binomial(Count n, Count k);

// Binomial coefficient in the requested scalar. The exact path is used up to
// n = 10000; beyond that the double path goes through log-gamma.
double binomial_coefficient(Count n, Count k);

// C(n, k) p^k (1-p)^(n-k) with p = successes/trials given as a ratio of
// counts. Log-gamma accumulation for doubles, exact for rationals.
template <class Real>
Real binomial_pmf(Count n, Count k, Count successes, Count trials);

// Integer power of a scalar; 0^0 = 1.
template <class Real>
Real power(const Real& base, Count exponent) {
  Real result(1);
  Real b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

}  // namespace adjsim
