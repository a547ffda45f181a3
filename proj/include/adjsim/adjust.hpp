#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adjsim/expectation.hpp"

namespace adjsim {

enum class MaxKind {
  domain_max,   // max of S over every table with the same shape and total
  model_max,    // max of S over the support of M^n
  pair_mean,    // (q(u) + q(v)) / 2
  pair_min,     // min(q(u), q(v))
  standardize,  // E[S] + sd(S) under M^n
  fixed,        // caller-supplied constant
};

struct MaxSpec {
  MaxKind kind = MaxKind::domain_max;
  double fixed_value = 0.0;
  // When a domain/model maximum is over budget, fall back to the largest
  // value seen in Monte Carlo draws (a lower bound, flagged in the result).
  bool monte_carlo_fallback = false;

  static MaxSpec of(MaxKind kind) { return {kind, 0.0, false}; }
  static MaxSpec fixed(double value) { return {MaxKind::fixed, value, false}; }

  // "domain", "model", "pair_mean", "pair_min", "standardize", "fixed(4)"
  std::string id() const;
};

// Accepts domain, model, pair_mean (pair-mean), pair_min (pair-min),
// standardize, fixed (value required).
MaxSpec max_spec_from_id(std::string_view id, std::optional<double> fixed_value = std::nullopt);

template <class Real>
struct MaxResolution {
  Real value{};
  std::string method;  // closed_form, enumeration, monte_carlo
  std::optional<std::string> warning;
};

// S_max^n for the given rule. Domain maxima of the built-in indices are
// known in closed form (p, q_*, rand: 1; toy_u1: N; toy_u1_squared: N^2), as
// is the model maximum of p under perm (sum_i min(u_i, v_i) / N); anything
// else is found by enumeration. Standardization needs the null moments and
// is resolved by adjust().
template <class Real>
MaxResolution<Real> resolve_max(const MaxSpec& spec, const Index<Real>& s, const NullModel& model,
                                const ContingencyTable& t, const EngineConfig& config = {});

template <class Real>
struct Adjusted {
  Real value{};
  bool degenerate = false;
};

// (raw - expected) / (max - expected), or c when max == expected.
template <class Real>
Adjusted<Real> apply_adjustment(const Real& raw, const Real& expected, const Real& max, const Real& c) {
  if (nearly_equal(max, expected)) return {c, true};
  return {Real((raw - expected) / (max - expected)), false};
}

template <class Real>
struct AdjustmentResult {
  std::string index_id;
  std::string model_id;
  std::string max_spec;
  Real raw{};
  EstimateResult<Real> expected;
  Real max_value{};
  std::string max_method;
  Real adjusted{};
  bool degenerate = false;
  Real convention_c{};
  std::optional<EstimateResult<Real>> null_variance;  // standardize only
  std::vector<std::string> notes;
};

// AS(n) = (S(n) - E_{M^n}[S]) / (S_max^n - E_{M^n}[S]); c when the
// denominator vanishes (for standardize: when the null sd is 0).
template <class Real>
AdjustmentResult<Real> adjust(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                              const ContingencyTable& t, const Real& c = Real(0), const EngineConfig& config = {});

// The adjusted index n -> AS(n) as an index in its own right, for second
// adjustments and null expectations of AS.
template <class Real>
Index<Real> adjusted_index(const Index<Real>& s, const NullModel& model, const MaxSpec& spec, const Real& c,
                           const EngineConfig& config = {});

enum class Measure { cohen_kappa, kappa_over_kappa_m, scott_pi, ari, hari, standardized_q, standardized_p };

inline constexpr std::string_view kMeasureIds[] = {"cohen_kappa", "kappa_over_kappa_m", "scott_pi", "ari",
                                                   "hari",        "standardized_q",     "standardized_p"};

std::string_view measure_id(Measure m);
Measure measure_from_id(std::string_view id);
std::string_view describe_measure(std::string_view id);

struct MeasureBinding {
  std::string index_id;
  NullModel model;
  MaxSpec max;
};

// cohen_kappa        p under perm, domain max
// kappa_over_kappa_m p under perm, model max
// scott_pi           p under ind1, domain max
// ari                q_joint under perm, pair-mean max
// hari               q_joint under perm, pair-min max
// standardized_q/p   q_joint / p under perm, standardization
MeasureBinding measure_binding(Measure m);

template <class Real>
AdjustmentResult<Real> named_measure(Measure m, const ContingencyTable& t, const Real& c = Real(0),
                                     const EngineConfig& config = {});

}  // namespace adjsim
