#include "adjsim/properties.hpp"

#include <cmath>

#include "adjsim/errors.hpp"
#include "adjsim/sampling.hpp"

namespace adjsim {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

SecondMax second_max_from_id(std::string_view id) {
  if (id == "derived") return SecondMax::derived;
  if (id == "domain" || id == "domain_max") return SecondMax::domain_max;
  throw InputError("unknown second max '" + std::string(id) + "' (expected derived or domain)");
}

std::string_view second_max_name(SecondMax m) { return m == SecondMax::derived ? "derived" : "domain"; }

namespace {

template <class Real>
Quantity quantity(std::string name, const Real& v) {
  Quantity q{std::move(name), to_double(v), {}};
  if constexpr (is_exact_v<Real>) q.exact = format_scalar(v);
  return q;
}

double std_error(const EstimateResult<double>& e) { return e.mc_std_error.value_or(0.0); }
double std_error(const EstimateResult<Rational>&) { return 0.0; }

// Accumulates comparisons and assembles the verdict.
template <class Real>
class Verifier {
 public:
  Verifier(std::string property, const CheckConfig& config) : config_(config) {
    report_.property = std::move(property);
    report_.exact = is_exact_v<Real>;
    report_.tolerance = is_exact_v<Real> ? 0.0 : config.tolerance;
  }

  // True when a and b agree; `se` is the combined Monte Carlo standard error.
  bool agree(const Real& a, const Real& b, double se = 0.0) {
    ++report_.checked;
    if (se > 0.0) sampled_ = true;
    if constexpr (is_exact_v<Real>) {
      return a == b;
    } else {
      return std::fabs(a - b) <= config_.tolerance + 4.0 * se;
    }
  }

  void fail(Witness w) {
    failed_ = true;
    if (report_.witnesses.size() < config_.max_witnesses) report_.witnesses.push_back(std::move(w));
  }

  void method(const std::string& name, Method m) { method(name, std::string(method_name(m))); }
  void method(const std::string& name, const std::string& m) {
    report_.methods[name] = m;
    if (m == "monte_carlo") sampled_ = true;
  }
  void summary(std::string name, const Real& v) { report_.summary.push_back(quantity(std::move(name), v)); }
  void note(std::string n) { report_.notes.push_back(std::move(n)); }
  PropertyReport& report() { return report_; }

  PropertyReport finish() {
    if (failed_) {
      report_.verdict = Verdict::violated;
    } else if (sampled_) {
      report_.verdict = Verdict::inconclusive;
      report_.notes.push_back("sampled quantities cannot certify an identity; no violation found within 4 standard errors");
    } else {
      report_.verdict = Verdict::holds;
    }
    return std::move(report_);
  }

 private:
  const CheckConfig& config_;
  PropertyReport report_;
  bool failed_ = false;
  bool sampled_ = false;
};

// Null expectation and the "maximum" quantity that must be constant. Under
// standardization the constant quantity is the null variance.
template <class Real>
struct NullSummary {
  EstimateResult<Real> mean;
  Real max{};
  std::string max_name;
  double max_se = 0.0;
};

template <class Real>
NullSummary<Real> summarize(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                            const ContingencyTable& t, const EngineConfig& engine) {
  NullSummary<Real> out;
  out.mean = expectation(model, t, s, engine);
  if (spec.kind == MaxKind::standardize) {
    auto var = variance(model, t, s, engine);
    out.max = var.value;
    out.max_name = "null_variance";
    out.max_se = std_error(var);
  } else {
    out.max = resolve_max(spec, s, model, t, engine).value;
    out.max_name = "S_max";
  }
  return out;
}

// Support tables of M^t, falling back to draws from M^t when enumeration is
// over budget and a seed is available. Returns true when sampled.
template <class Real>
bool visit_support(const NullModel& model, const ContingencyTable& t, const EngineConfig& engine,
                   const std::function<void(const ContingencyTable&)>& visit) {
  try {
    support(model, t, engine.budget).for_each(visit);
    return false;
  } catch (const ResourceError&) {
    if (is_exact_v<Real> || !engine.mc.seed) throw;
  }
  const std::size_t draws = static_cast<std::size_t>(std::min<std::uint64_t>(engine.mc.samples, 1000));
  for (const auto& drawn : sample(model, t, *engine.mc.seed, draws)) visit(drawn);
  return true;
}

}  // namespace

template <class Real>
PropertyReport check_constancy(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                               const ContingencyTable& t, const CheckConfig& config) {
  Verifier<Real> v("constancy", config);
  const auto ref = summarize(s, model, spec, t, config.engine);
  v.method("expectation", ref.mean.method);
  v.summary("expectation", ref.mean.value);
  v.summary(ref.max_name, ref.max);
  bool reference_reported = false;
  const bool sampled = visit_support<Real>(model, t, config.engine, [&](const ContingencyTable& other) {
    const auto cur = summarize(s, model, spec, other, config.engine);
    const double se_mean = std_error(ref.mean) + std_error(cur.mean);
    const bool same_mean = v.agree(cur.mean.value, ref.mean.value, se_mean);
    const bool same_max = v.agree(cur.max, ref.max, ref.max_se + cur.max_se);
    if (same_mean && same_max) return;
    if (!reference_reported) {
      v.fail({t, {quantity("expectation", ref.mean.value), quantity(ref.max_name, ref.max)}});
      reference_reported = true;
    }
    v.fail({other, {quantity("expectation", cur.mean.value), quantity(cur.max_name, cur.max)}});
  });
  v.method("support", sampled ? "monte_carlo" : "enumeration");
  return v.finish();
}

template <class Real>
PropertyReport check_mean_zero(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                               const ContingencyTable& t, const Real& c, const CheckConfig& config) {
  Verifier<Real> v("mean-zero", config);
  const auto observed = adjust(s, model, spec, t, c, config.engine);
  const auto as_index = adjusted_index(s, model, spec, c, config.engine);
  const auto mean = expectation(model, t, as_index, config.engine);
  v.method("expectation_of_adjusted", mean.method);
  v.method("inner_expectation", observed.expected.method);
  v.summary("adjusted", observed.adjusted);
  v.summary("expected_adjusted", mean.value);
  if (observed.degenerate) v.note("observed table is degenerate (S_max = E); AS = c there");
  if (!v.agree(mean.value, Real(0), std_error(mean))) {
    v.fail({t, {quantity("expected_adjusted", mean.value), quantity("adjusted", observed.adjusted)}});
  }
  return v.finish();
}

template <class Real>
PropertyReport check_variance_one(const Index<Real>& s, const NullModel& model, const ContingencyTable& t,
                                  const Real& c, const CheckConfig& config) {
  Verifier<Real> v("variance-one", config);
  const auto null_var = variance(model, t, s, config.engine);
  const auto null_mean = expectation(model, t, s, config.engine);
  v.summary("null_variance_of_index", null_var.value);
  bool zero_sd;
  if constexpr (is_exact_v<Real>) {
    zero_sd = null_var.value <= Real(0);
  } else {
    zero_sd = nearly_equal(null_mean.value + square_root(null_var.value), null_mean.value);
  }
  if (zero_sd) {
    v.note("null standard deviation is 0 at the observed table; standardization is degenerate");
    PropertyReport r = std::move(v.report());
    r.verdict = Verdict::inconclusive;
    return r;
  }
  const auto z = adjusted_index(s, model, MaxSpec::of(MaxKind::standardize), c, config.engine);
  const auto mean = expectation(model, t, z, config.engine);
  const auto var = variance(model, t, z, config.engine);
  v.method("mean", mean.method);
  v.method("variance", var.method);
  v.summary("standardized_value", z(t));
  v.summary("null_mean", mean.value);
  v.summary("null_variance", var.value);
  const bool mean_ok = v.agree(mean.value, Real(0), std_error(mean));
  const bool var_ok = v.agree(var.value, Real(1), std_error(var));
  if (!mean_ok || !var_ok) {
    v.fail({t, {quantity("null_mean", mean.value), quantity("null_variance", var.value)}});
  }
  return v.finish();
}

template <class Real>
PropertyReport check_idempotency(const Index<Real>& s, const NullModel& model, const MaxSpec& first,
                                 SecondMax second, const ContingencyTable& t, const Real& c,
                                 const CheckConfig& config) {
  Verifier<Real> v("idempotent", config);
  const auto once = adjust(s, model, first, t, c, config.engine);
  const auto as_index = adjusted_index(s, model, first, c, config.engine);
  const auto mean = expectation(model, t, as_index, config.engine);
  v.method("expectation_of_adjusted", mean.method);

  Real second_max;
  if (second == SecondMax::derived) {
    second_max = once.degenerate ? c : Real(1);
    v.method("second_max", "closed_form");
  } else {
    const auto r = resolve_max(MaxSpec::of(MaxKind::domain_max), as_index, model, t, config.engine);
    second_max = r.value;
    v.method("second_max", r.method);
  }
  const auto twice = apply_adjustment(once.adjusted, mean.value, second_max, c);
  v.summary("adjusted", once.adjusted);
  v.summary("double_adjusted", twice.value);
  v.summary("expected_adjusted", mean.value);
  v.summary("adjusted_max", second_max);

  double se = 0.0;
  if constexpr (!is_exact_v<Real>) {
    if (!twice.degenerate && mean.mc_std_error) {
      const double d = second_max - mean.value;
      se = std::fabs(once.adjusted - second_max) / (d * d) * *mean.mc_std_error;
    }
  }
  if (!v.agree(twice.value, once.adjusted, se)) {
    v.fail({t, {quantity("adjusted", once.adjusted), quantity("double_adjusted", twice.value)}});
  }
  return v.finish();
}

template <class Real>
PropertyReport check_nested_collapse(const Index<Real>& s, const NullModel& model, const ContingencyTable& t,
                                     const CheckConfig& config) {
  Verifier<Real> v("nested-collapse", config);
  const auto single = expectation(model, t, s, config.engine);
  v.method("single", single.method);
  v.summary("single_expectation", single.value);

  Real nested(0);
  double nested_se = 0.0;
  bool enumerated = true;
  try {
    std::string inner_method;
    for_each_weighted<Real>(model, t, config.engine.budget, [&](const ContingencyTable& n1, const Real& p) {
      const auto inner = expectation(model, n1, s, config.engine);
      inner_method = method_name(inner.method);
      nested += p * inner.value;
      if (inner.mc_std_error) nested_se += to_double(p) * *inner.mc_std_error;
    });
    v.method("outer", "enumeration");
    if (!inner_method.empty()) v.method("inner", inner_method);
  } catch (const ResourceError&) {
    if (is_exact_v<Real> || !config.engine.mc.seed) throw;
    enumerated = false;
  }
  if constexpr (!is_exact_v<Real>) {
    if (!enumerated) {
      // Outer draws from M^t; each inner expectation gets its own seed.
      const TableSampler sampler(model, t);
      const std::uint64_t root = *config.engine.mc.seed;
      Rng rng(stream_seed(root, 0));
      const std::uint64_t outer = std::min<std::uint64_t>(config.engine.mc.samples, 2000);
      double sum = 0.0, sum_sq = 0.0;
      for (std::uint64_t k = 0; k < outer; ++k) {
        EngineConfig inner_cfg = config.engine;
        inner_cfg.mc.seed = stream_seed(root, k + 1);
        inner_cfg.mc.streams = 1;
        const double x = expectation(model, sampler.draw(rng), s, inner_cfg).value;
        sum += x;
        sum_sq += x * x;
      }
      const double n = static_cast<double>(outer);
      nested = sum / n;
      nested_se = std::sqrt(std::max(0.0, sum_sq / n - nested * nested) / (n - 1.0));
      v.method("outer", "monte_carlo");
      v.note("nested Monte Carlo: inner estimates carry their own error, so the band understates it");
    }
  }
  v.summary("nested_expectation", nested);
  if (!v.agree(single.value, nested, std_error(single) + nested_se)) {
    v.fail({t, {quantity("single_expectation", single.value), quantity("nested_expectation", nested)}});
  }
  return v.finish();
}

template <class Real>
PropertyReport check_linear_equivalence(const LinearMember<Real>& member, const NullModel& model,
                                        const MaxSpec& spec, const ContingencyTable& t, const Real& c,
                                        const CheckConfig& config) {
  Verifier<Real> v("linear-equiv", config);
  const Real alpha = member.alpha(t);
  const Real beta = member.beta(t);
  if (beta == Real(0)) throw ContractError("linear member has beta = 0 at the observed table");

  // Membership: alpha and beta constant on the support of M^t.
  bool member_ok = true;
  visit_support<Real>(model, t, config.engine, [&](const ContingencyTable& other) {
    const Real a = member.alpha(other);
    const Real b = member.beta(other);
    if (v.agree(a, alpha) && v.agree(b, beta)) return;
    if (member_ok) v.fail({t, {quantity("alpha", alpha), quantity("beta", beta)}});
    member_ok = false;
    v.fail({other, {quantity("alpha", a), quantity("beta", b)}});
  });
  if (!member_ok) {
    v.note("alpha/beta vary over the null support: T is not in the linear family of S");
    return v.finish();
  }

  const auto as = adjust(member.base, model, spec, t, c, config.engine);
  const Index<Real> t_index = member.as_index();
  Real at;
  Real target = as.adjusted;
  double se = std_error(as.expected);
  if (spec.kind == MaxKind::standardize) {
    const auto r = adjust(t_index, model, spec, t, c, config.engine);
    at = r.adjusted;
    se += std_error(r.expected);
    if (!as.degenerate && beta < Real(0)) target = -as.adjusted;
  } else {
    const auto expected_t = expectation(model, t, t_index, config.engine);
    const Real t_max = alpha + beta * as.max_value;
    at = apply_adjustment(member(t), expected_t.value, t_max, c).value;
    se += std_error(expected_t);
    v.summary("T_max", t_max);
  }
  v.summary("adjusted_S", as.adjusted);
  v.summary("adjusted_T", at);
  v.method("expectation", as.expected.method);
  if (!v.agree(at, target, se)) {
    v.fail({t, {quantity("adjusted_S", as.adjusted), quantity("adjusted_T", at)}});
  }
  return v.finish();
}

#define ADJSIM_INSTANTIATE(Real)                                                                           \
  template PropertyReport check_constancy(const Index<Real>&, const NullModel&, const MaxSpec&,           \
                                          const ContingencyTable&, const CheckConfig&);                   \
  template PropertyReport check_mean_zero(const Index<Real>&, const NullModel&, const MaxSpec&,           \
                                          const ContingencyTable&, const Real&, const CheckConfig&);      \
  template PropertyReport check_variance_one(const Index<Real>&, const NullModel&, const ContingencyTable&,\
                                             const Real&, const CheckConfig&);                            \
  template PropertyReport check_idempotency(const Index<Real>&, const NullModel&, const MaxSpec&,         \
                                            SecondMax, const ContingencyTable&, const Real&,              \
                                            const CheckConfig&);                                          \
  template PropertyReport check_nested_collapse(const Index<Real>&, const NullModel&,                     \
                                                const ContingencyTable&, const CheckConfig&);             \
  template PropertyReport check_linear_equivalence(const LinearMember<Real>&, const NullModel&,           \
                                                   const MaxSpec&, const ContingencyTable&, const Real&,  \
                                                   const CheckConfig&);

ADJSIM_INSTANTIATE(double)
ADJSIM_INSTANTIATE(Rational)

#undef ADJSIM_INSTANTIATE

}  // namespace adjsim
