#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adjsim/scalar.hpp"

// Closed-form evaluators for the u_1^2 / u_1 counterexamples under the
// two-population independence model with domain maximum N^2, and the
// idempotency-gap grid built from them. Every evaluator is cross-checked
// against the generic adjust + enumeration pipeline in the test suite.
namespace adjsim::repro {

// f(u1, N) = -u1 / (N^2 + (N-1) u1): AS of u_1^2 for u1 < N.
template <class Real>
Real adjusted_below_max(Count u1, Count n);

// g(u1, N) = sum_{k<N} f(k, N) P(u~1 = k), u~1 ~ Binomial(N, u1/N).
template <class Real>
Real expected_adjusted_below_max(Count u1, Count n);

// AS(n): f(u1, N) for u1 < N, the convention c at u1 = N.
template <class Real>
Real toy_adjusted(Count u1, Count n, const Real& c);

// E[AS] = c (u1/N)^N + g(u1, N).
template <class Real>
Real toy_expected_adjusted(Count u1, Count n, const Real& c);

// A^2 S with AS_max = max(0, c); c when the denominator vanishes.
template <class Real>
Real toy_double_adjusted(Count u1, Count n, const Real& c);

// E[u~1^2] = u1 + (N-1)/N u1^2 and the nested
// E[E[u~~1^2]] = (2N-1)/N u1 + ((N-1)/N)^2 u1^2.
template <class Real>
Real toy_single_expectation(Count u1, Count n);
template <class Real>
Real toy_nested_expectation(Count u1, Count n);

template <class Real>
struct CounterexampleRecord {
  int part = 0;
  Count u1 = 0;
  Count n = 0;
  Real c{};
  std::optional<Real> expectation;
  std::optional<Real> nested_expectation;
  std::optional<Real> adjusted;
  std::optional<Real> expected_adjusted;
  std::optional<Real> adjusted_max;
  std::optional<Real> double_adjusted;
  std::optional<Real> affine_residual;  // part 2: max |AS - (a + b u1^2)| over the support
  std::optional<Real> standardized;
  std::optional<Real> standardized_mean;
  std::optional<Real> standardized_variance;
  bool violated = false;
};

// part 1: single vs nested expectation of u_1^2
// part 2: least-squares affine fit of AS against u_1^2 over u~1 = 0..N
// part 3: E[AS] with convention c
// part 4: AS and A^2 S with AS_max = max(0, c)
// part 5: standardized u_1 with its null mean and variance
// Throws InputError unless 1 <= part <= 5, N >= 1 and 0 <= u1 <= N.
template <class Real>
CounterexampleRecord<Real> prop1_record(int part, Count u1, Count n, const Real& c);

struct GridCell {
  double c = 0.0;
  Count n = 0;
  Count u1 = 0;
  double as_value = 0.0;
  double a2s_value = 0.0;
  double neg_log10_diff = 0.0;
  bool underflow = false;  // |AS - A^2 S| < 1e-300; neg_log10_diff holds the 300 sentinel
};

inline constexpr double kUnderflowThreshold = 1e-300;
inline constexpr double kUnderflowSentinel = 300.0;

// One cell per (c, N, u1), 2 <= N <= n_max, 1 <= u1 < N, ordered by c (as
// given), then N, then u1.
std::vector<GridCell> figure1_grid(Count n_max, std::span<const double> c_values);

// Long-format CSV: c,N,u1,AS,A2S,neg_log10_diff,underflow
void write_grid_csv(std::ostream& os, std::span<const GridCell> cells);

// Standalone matplotlib script that renders one heatmap per c from the CSV.
std::string plot_script(const std::string& csv_path);

struct AsymptoticResult {
  double ratio = 0.0;  // (1/N) A^2 S / AS at u1 = N - j
  double limit = 0.0;  // 2 / (e^j 1(c > 0) - 1)
  double adjusted = 0.0;
  double double_adjusted = 0.0;
};

// Throws InputError unless N > j >= 1, CapabilityError when c = 0.
AsymptoticResult asymptotic_check(Count j, double c, Count n);

}  // namespace adjsim::repro
