#include "adjsim/expectation.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "adjsim/errors.hpp"
#include "adjsim/sampling.hpp"

namespace adjsim {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::closed_form: return "closed_form";
    case Method::enumeration: return "enumeration";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

Method method_from_id(std::string_view id) {
  if (id == "auto") return Method::automatic;
  if (id == "closed_form") return Method::closed_form;
  if (id == "enumeration") return Method::enumeration;
  if (id == "monte_carlo") return Method::monte_carlo;
  throw InputError("unknown method '" + std::string(id) +
                   "' (expected one of auto, closed_form, enumeration, monte_carlo)");
}

template <class Real>
void ClosedFormRegistry<Real>::add_mean(ModelKind model, std::string index_id, Formula f) {
  means_[{model, std::move(index_id)}] = std::move(f);
}

template <class Real>
void ClosedFormRegistry<Real>::add_variance(ModelKind model, std::string index_id, Formula f) {
  variances_[{model, std::move(index_id)}] = std::move(f);
}

template <class Real>
const typename ClosedFormRegistry<Real>::Formula* ClosedFormRegistry<Real>::find_mean(
    ModelKind model, std::string_view index_id) const {
  auto it = means_.find(Key{model, std::string(index_id)});
  return it == means_.end() ? nullptr : &it->second;
}

template <class Real>
const typename ClosedFormRegistry<Real>::Formula* ClosedFormRegistry<Real>::find_variance(
    ModelKind model, std::string_view index_id) const {
  auto it = variances_.find(Key{model, std::string(index_id)});
  return it == variances_.end() ? nullptr : &it->second;
}

namespace {

void require_square(const ContingencyTable& t, const char* what) {
  if (t.rows() != t.cols()) throw ShapeError(std::string(what) + " needs a square table");
}

template <class Real>
ClosedFormRegistry<Real> make_builtin() {
  ClosedFormRegistry<Real> r;
  // E_perm[p] = sum_i u_i v_i / N^2
  r.add_mean(ModelKind::perm, "p", [](const ContingencyTable& t) {
    require_square(t, "p");
    Count s = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) s += t.row_margins()[i] * t.col_margins()[i];
    return Real(s) / Real(t.total() * t.total());
  });
  // E_perm[q(n)] = q(u) q(v)
  r.add_mean(ModelKind::perm, "q_joint",
             [](const ContingencyTable& t) { return Real(q_row<Real>(t) * q_col<Real>(t)); });
  // E_ind1[p] = sum_i ((u_i + v_i) / 2N)^2
  r.add_mean(ModelKind::ind1, "p", [](const ContingencyTable& t) {
    require_square(t, "p");
    Count s = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const Count w = t.row_margins()[i] + t.col_margins()[i];
      s += w * w;
    }
    return Real(s) / Real(4 * t.total() * t.total());
  });
  // u~_1 ~ Binomial(N, u_1/N)
  r.add_mean(ModelKind::ind2, "toy_u1", [](const ContingencyTable& t) { return Real(t.row_margins()[0]); });
  r.add_variance(ModelKind::ind2, "toy_u1", [](const ContingencyTable& t) {
    const Real u1(t.row_margins()[0]);
    const Real n(t.total());
    return Real(u1 * (Real(1) - u1 / n));
  });
  r.add_mean(ModelKind::ind2, "toy_u1_squared", [](const ContingencyTable& t) {
    const Real u1(t.row_margins()[0]);
    const Real n(t.total());
    return Real(u1 + (n - Real(1)) * u1 * u1 / n);
  });
  return r;
}

template <class Real>
std::vector<std::pair<Real, Real>> enumerate_values(const NullModel& model, const ContingencyTable& t,
                                                    const Index<Real>& s, const EngineConfig& config) {
  std::vector<std::pair<Real, Real>> out;
  for_each_weighted<Real>(model, t, config.budget, [&](const ContingencyTable& candidate, const Real& p) {
    out.emplace_back(s(candidate), p);
  });
  return out;
}

template <class Real>
Real weighted_mean(const std::vector<std::pair<Real, Real>>& values) {
  Real acc(0);
  for (const auto& [x, p] : values) acc += x * p;
  return acc;
}

template <class Real>
EstimateResult<Real> from_monte_carlo(const NullModel& model, const ContingencyTable& t, const Index<Real>& s,
                                      const EngineConfig& config, bool want_variance) {
  if constexpr (is_exact_v<Real>) {
    throw CapabilityError("Monte Carlo estimates are not available in exact-rational mode");
  } else {
    if (!config.mc.seed) throw CapabilityError("Monte Carlo needs an explicit seed (--seed)");
    const MonteCarloMoments m = monte_carlo_moments(model, t, s.fn, config.mc);
    EstimateResult<Real> out;
    out.method = Method::monte_carlo;
    out.value = want_variance ? m.variance : m.mean;
    out.mc_std_error = want_variance ? m.variance_std_error : m.mean_std_error;
    out.samples = m.samples;
    out.seed = config.mc.seed;
    return out;
  }
}

template <class Real>
EstimateResult<Real> estimate(const NullModel& model, const ContingencyTable& t, const Index<Real>& s,
                              const EngineConfig& config, bool want_variance) {
  require_model_shape(model, t);
  const auto& registry = ClosedFormRegistry<Real>::builtin();
  const auto* formula = want_variance ? registry.find_variance(model.kind, s.id)
                                      : registry.find_mean(model.kind, s.id);
  auto closed = [&] {
    EstimateResult<Real> out;
    out.method = Method::closed_form;
    out.value = (*formula)(t);
    return out;
  };
  auto enumerated = [&] {
    const auto values = enumerate_values(model, t, s, config);
    EstimateResult<Real> out;
    out.method = Method::enumeration;
    const Real mean = weighted_mean(values);
    if (!want_variance) {
      out.value = mean;
    } else {
      Real acc(0);
      for (const auto& [x, p] : values) acc += (x - mean) * (x - mean) * p;
      out.value = acc;
    }
    return out;
  };

  switch (config.method) {
    case Method::closed_form:
      if (!formula) {
        throw CapabilityError(std::string("no closed form registered for ") +
                              (want_variance ? "the variance of " : "the expectation of ") + s.id +
                              " under " + std::string(model.id()));
      }
      return closed();
    case Method::enumeration:
      return enumerated();
    case Method::monte_carlo:
      return from_monte_carlo(model, t, s, config, want_variance);
    case Method::automatic:
      break;
  }
  if (formula) return closed();
  try {
    return enumerated();
  } catch (const ResourceError&) {
    if constexpr (is_exact_v<Real>) throw;
    if (!config.mc.seed) throw;
  }
  return from_monte_carlo(model, t, s, config, want_variance);
}

}  // namespace

template <class Real>
const ClosedFormRegistry<Real>& ClosedFormRegistry<Real>::builtin() {
  static const ClosedFormRegistry<Real> registry = make_builtin<Real>();
  return registry;
}

template <class Real>
EstimateResult<Real> expectation(const NullModel& model, const ContingencyTable& t, const Index<Real>& s,
                                 const EngineConfig& config) {
  return estimate(model, t, s, config, false);
}

template <class Real>
EstimateResult<Real> variance(const NullModel& model, const ContingencyTable& t, const Index<Real>& s,
                              const EngineConfig& config) {
  return estimate(model, t, s, config, true);
}

MonteCarloMoments monte_carlo_moments(const NullModel& model, const ContingencyTable& t,
                                      const TableFunction<double>& s, const MonteCarloConfig& config) {
  if (!config.seed) throw CapabilityError("Monte Carlo needs an explicit seed (--seed)");
  if (config.samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  const unsigned streams = std::max(1u, config.streams);
  const TableSampler sampler(model, t);

  std::vector<std::vector<double>> values(streams);
  std::vector<std::exception_ptr> failures(streams);
  auto run_stream = [&](unsigned k) {
    try {
      const std::uint64_t n = config.samples / streams + (k < config.samples % streams ? 1 : 0);
      Rng rng(stream_seed(*config.seed, k));
      values[k].reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) values[k].push_back(s(sampler.draw(rng)));
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };
  if (streams == 1) {
    run_stream(0);
  } else {
    std::vector<std::thread> workers;
    for (unsigned k = 0; k < streams; ++k) workers.emplace_back(run_stream, k);
    for (auto& w : workers) w.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  // Reduction in stream order keeps the result independent of scheduling.
  MonteCarloMoments m;
  m.samples = config.samples;
  const double n = static_cast<double>(config.samples);
  double sum = 0.0;
  for (const auto& v : values)
    for (double x : v) sum += x;
  m.mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (const auto& v : values)
    for (double x : v) {
      const double d2 = (x - m.mean) * (x - m.mean);
      m2 += d2;
      m4 += d2 * d2;
    }
  m.variance = m2 / (n - 1.0);
  m.mean_std_error = std::sqrt(m.variance / n);
  const double pop_var = m2 / n;
  m.variance_std_error = std::sqrt(std::max(0.0, m4 / n - pop_var * pop_var) / n);
  return m;
}

template class ClosedFormRegistry<double>;
template class ClosedFormRegistry<Rational>;
template EstimateResult<double> expectation(const NullModel&, const ContingencyTable&, const Index<double>&,
                                            const EngineConfig&);
template EstimateResult<Rational> expectation(const NullModel&, const ContingencyTable&, const Index<Rational>&,
                                              const EngineConfig&);
template EstimateResult<double> variance(const NullModel&, const ContingencyTable&, const Index<double>&,
                                         const EngineConfig&);
template EstimateResult<Rational> variance(const NullModel&, const ContingencyTable&, const Index<Rational>&,
                                           const EngineConfig&);

}  // namespace adjsim
