#include "adjsim/adjust.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adjsim/errors.hpp"
#include "adjsim/sampling.hpp"

namespace adjsim {

std::string MaxSpec::id() const {
  switch (kind) {
    case MaxKind::domain_max: return "domain";
    case MaxKind::model_max: return "model";
    case MaxKind::pair_mean: return "pair_mean";
    case MaxKind::pair_min: return "pair_min";
    case MaxKind::standardize: return "standardize";
    case MaxKind::fixed: return "fixed(" + format_scalar(fixed_value) + ")";
  }
  return "unknown";
}

MaxSpec max_spec_from_id(std::string_view id, std::optional<double> fixed_value) {
  if (id == "domain" || id == "domain_max") return MaxSpec::of(MaxKind::domain_max);
  if (id == "model" || id == "model_max") return MaxSpec::of(MaxKind::model_max);
  if (id == "pair_mean" || id == "pair-mean") return MaxSpec::of(MaxKind::pair_mean);
  if (id == "pair_min" || id == "pair-min") return MaxSpec::of(MaxKind::pair_min);
  if (id == "standardize") return MaxSpec::of(MaxKind::standardize);
  if (id == "fixed") {
    if (!fixed_value) throw InputError("max spec 'fixed' needs a value (--max-value)");
    return MaxSpec::fixed(*fixed_value);
  }
  throw InputError("unknown max spec '" + std::string(id) +
                   "' (expected one of domain, model, pair_mean, pair_min, standardize, fixed)");
}

namespace {

template <class Real>
std::optional<Real> closed_domain_max(const Index<Real>& s, const ContingencyTable& t) {
  const Real n(t.total());
  if (s.id == "p") {
    if (t.rows() != t.cols()) throw ShapeError("raw agreement p needs a square table");
    return Real(1);
  }
  if (s.id == "q_joint" || s.id == "q_row" || s.id == "q_col" || s.id == "rand") {
    if (t.total() < 2) throw DomainError("pair agreement needs N >= 2");
    return Real(1);
  }
  if (s.id == "toy_u1") return n;
  if (s.id == "toy_u1_squared") return Real(n * n);
  return std::nullopt;
}

template <class Real>
std::optional<Real> closed_model_max(const Index<Real>& s, const NullModel& model, const ContingencyTable& t) {
  if (model.kind == ModelKind::perm && s.id == "p") {
    if (t.rows() != t.cols()) throw ShapeError("raw agreement p needs a square table");
    Count diag = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) diag += std::min(t.row_margins()[i], t.col_margins()[i]);
    return Real(diag) / Real(t.total());
  }
  if (model.kind == ModelKind::fixed_uniform) return closed_domain_max(s, t);
  return std::nullopt;
}

template <class Real>
Real max_over(const TableSet& set, const Index<Real>& s) {
  std::optional<Real> best;
  set.for_each([&](const ContingencyTable& candidate) {
    Real v = s(candidate);
    if (!best || v > *best) best = std::move(v);
  });
  if (!best) throw DomainError("maximum over an empty table set");
  return *best;
}

template <class Real>
MaxResolution<Real> sampled_max(const Index<Real>& s, const NullModel& sampling_model, const ContingencyTable& t,
                                const EngineConfig& config, const std::string& what) {
  if constexpr (is_exact_v<Real>) {
    throw CapabilityError("Monte Carlo maximum search is not available in exact-rational mode");
  } else {
    if (!config.mc.seed) throw CapabilityError("Monte Carlo maximum search needs an explicit seed (--seed)");
    const TableSampler sampler(sampling_model, t);
    Rng rng(stream_seed(*config.mc.seed, 0x6d6178));
    std::optional<Real> best;
    for (std::uint64_t k = 0; k < config.mc.samples; ++k) {
      Real v = s(sampler.draw(rng));
      if (!best || v > *best) best = v;
    }
    MaxResolution<Real> out;
    out.value = *best;
    out.method = "monte_carlo";
    out.warning = what + " over budget; value is the largest of " + std::to_string(config.mc.samples) +
                  " sampled tables (a lower bound)";
    return out;
  }
}

}  // namespace

template <class Real>
MaxResolution<Real> resolve_max(const MaxSpec& spec, const Index<Real>& s, const NullModel& model,
                                const ContingencyTable& t, const EngineConfig& config) {
  MaxResolution<Real> out;
  out.method = "closed_form";
  switch (spec.kind) {
    case MaxKind::fixed:
      out.value = from_double<Real>(spec.fixed_value);
      return out;
    case MaxKind::pair_mean:
      out.value = (q_row<Real>(t) + q_col<Real>(t)) / Real(2);
      return out;
    case MaxKind::pair_min:
      out.value = std::min(q_row<Real>(t), q_col<Real>(t));
      return out;
    case MaxKind::standardize:
      throw CapabilityError("standardization maximum depends on null moments; use adjust()");
    case MaxKind::domain_max:
      if (auto v = closed_domain_max(s, t)) {
        out.value = *v;
        return out;
      }
      try {
        out.value = max_over(enumerate_domain(t.total(), t.rows(), t.cols(), config.budget), s);
        out.method = "enumeration";
        return out;
      } catch (const ResourceError&) {
        if (!spec.monte_carlo_fallback) throw;
        return sampled_max(s, NullModel{ModelKind::fixed_uniform}, t, config, "domain maximum");
      }
    case MaxKind::model_max:
      if (auto v = closed_model_max(s, model, t)) {
        out.value = *v;
        return out;
      }
      try {
        out.value = max_over(support(model, t, config.budget), s);
        out.method = "enumeration";
        return out;
      } catch (const ResourceError&) {
        if (!spec.monte_carlo_fallback) throw;
        return sampled_max(s, model, t, config, "model maximum");
      }
  }
  throw InputError("unknown max spec");
}

template <class Real>
AdjustmentResult<Real> adjust(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                              const ContingencyTable& t, const Real& c, const EngineConfig& config) {
  AdjustmentResult<Real> out;
  out.index_id = s.id;
  out.model_id = std::string(model.id());
  out.max_spec = spec.id();
  out.convention_c = c;
  out.raw = s(t);
  out.expected = expectation(model, t, s, config);

  if (spec.kind != MaxKind::standardize) {
    auto max = resolve_max(spec, s, model, t, config);
    out.max_value = max.value;
    out.max_method = max.method;
    if (max.warning) out.notes.push_back(*max.warning);
    const auto a = apply_adjustment(out.raw, out.expected.value, out.max_value, c);
    out.adjusted = a.value;
    out.degenerate = a.degenerate;
    return out;
  }

  out.null_variance = variance(model, t, s, config);
  const Real& var = out.null_variance->value;
  out.max_method = std::string(method_name(out.null_variance->method));
  bool zero_sd = false;
  if constexpr (is_exact_v<Real>) {
    zero_sd = var <= Real(0);
  } else {
    zero_sd = nearly_equal(out.expected.value + square_root(var), out.expected.value);
  }
  if (zero_sd) {
    out.max_value = out.expected.value;
    out.adjusted = c;
    out.degenerate = true;
    return out;
  }
  if constexpr (is_exact_v<Real>) {
    // The numerator alone decides a zero result; the sd is only needed otherwise.
    if (out.raw == out.expected.value) {
      try {
        out.max_value = out.expected.value + square_root(var);
      } catch (const CapabilityError&) {
        out.max_value = out.expected.value + Real(std::sqrt(to_double(var)));
        out.notes.push_back("null sd is irrational; max is rounded, adjusted value is exact");
      }
      out.adjusted = Real(0);
      return out;
    }
  }
  out.max_value = out.expected.value + square_root(var);
  out.adjusted = (out.raw - out.expected.value) / (out.max_value - out.expected.value);
  return out;
}

template <class Real>
Index<Real> adjusted_index(const Index<Real>& s, const NullModel& model, const MaxSpec& spec, const Real& c,
                           const EngineConfig& config) {
  std::ostringstream id;
  id << "A[" << s.id << "|" << model.id() << "|" << spec.id() << "|c=" << format_scalar(c) << "]";
  return {id.str(),
          [s, model, spec, c, config](const ContingencyTable& t) { return adjust(s, model, spec, t, c, config).adjusted; },
          s.required_shape};
}

std::string_view measure_id(Measure m) { return kMeasureIds[static_cast<std::size_t>(m)]; }

Measure measure_from_id(std::string_view id) {
  for (std::size_t k = 0; k < std::size(kMeasureIds); ++k)
    if (kMeasureIds[k] == id) return static_cast<Measure>(k);
  throw InputError("unknown measure '" + std::string(id) +
                   "' (expected one of cohen_kappa, kappa_over_kappa_m, scott_pi, ari, hari, standardized_q, "
                   "standardized_p)");
}

std::string_view describe_measure(std::string_view id) {
  if (id == "cohen_kappa") return "Cohen's kappa: p adjusted under perm with the domain maximum";
  if (id == "kappa_over_kappa_m") return "kappa/kappa_m: p adjusted under perm with the model (margin) maximum";
  if (id == "scott_pi") return "Scott's pi: p adjusted under ind1 with the domain maximum";
  if (id == "ari") return "Hubert-Arabie adjusted Rand index: q adjusted under perm with (q(u)+q(v))/2";
  if (id == "hari") return "hierarchical adjusted Rand index: q adjusted under perm with min(q(u),q(v))";
  if (id == "standardized_q") return "q standardized under perm: (q - E) / sd";
  if (id == "standardized_p") return "p standardized under perm: (p - E) / sd";
  return "unknown measure";
}

MeasureBinding measure_binding(Measure m) {
  switch (m) {
    case Measure::cohen_kappa: return {"p", {ModelKind::perm}, MaxSpec::of(MaxKind::domain_max)};
    case Measure::kappa_over_kappa_m: return {"p", {ModelKind::perm}, MaxSpec::of(MaxKind::model_max)};
    case Measure::scott_pi: return {"p", {ModelKind::ind1}, MaxSpec::of(MaxKind::domain_max)};
    case Measure::ari: return {"q_joint", {ModelKind::perm}, MaxSpec::of(MaxKind::pair_mean)};
    case Measure::hari: return {"q_joint", {ModelKind::perm}, MaxSpec::of(MaxKind::pair_min)};
    case Measure::standardized_q: return {"q_joint", {ModelKind::perm}, MaxSpec::of(MaxKind::standardize)};
    case Measure::standardized_p: return {"p", {ModelKind::perm}, MaxSpec::of(MaxKind::standardize)};
  }
  throw InputError("unknown measure");
}

template <class Real>
AdjustmentResult<Real> named_measure(Measure m, const ContingencyTable& t, const Real& c,
                                     const EngineConfig& config) {
  const MeasureBinding b = measure_binding(m);
  auto out = adjust(index_by_id<Real>(b.index_id), b.model, b.max, t, c, config);
  return out;
}

#define ADJSIM_INSTANTIATE(Real)                                                                           \
  template MaxResolution<Real> resolve_max(const MaxSpec&, const Index<Real>&, const NullModel&,          \
                                           const ContingencyTable&, const EngineConfig&);                 \
  template AdjustmentResult<Real> adjust(const Index<Real>&, const NullModel&, const MaxSpec&,            \
                                         const ContingencyTable&, const Real&, const EngineConfig&);      \
  template Index<Real> adjusted_index(const Index<Real>&, const NullModel&, const MaxSpec&, const Real&,  \
                                      const EngineConfig&);                                               \
  template AdjustmentResult<Real> named_measure(Measure, const ContingencyTable&, const Real&,            \
                                                const EngineConfig&);

ADJSIM_INSTANTIATE(double)
ADJSIM_INSTANTIATE(Rational)

#undef ADJSIM_INSTANTIATE

}  // namespace adjsim
