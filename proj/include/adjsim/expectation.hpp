#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "adjsim/indices.hpp"
#include "adjsim/null_model.hpp"

namespace adjsim {

enum class Method { automatic, closed_form, enumeration, monte_carlo };

std::string_view method_name(Method m);
// Accepts auto, closed_form, enumeration, monte_carlo.
Method method_from_id(std::string_view id);

struct MonteCarloConfig {
  std::uint64_t samples = 100'000;
  std::optional<std::uint64_t> seed;  // required whenever sampling is used
  unsigned streams = 1;
};

struct EngineConfig {
  Method method = Method::automatic;
  MonteCarloConfig mc;
  EnumerationBudget budget;
};

template <class Real>
struct EstimateResult {
  Real value{};
  Method method = Method::closed_form;  // resolved; never automatic
  std::optional<double> mc_std_error;   // present iff method == monte_carlo
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
};

// Closed-form null moments keyed by (model, index id). Every entry is
// checked against an enumeration oracle in the test suite.
template <class Real>
class ClosedFormRegistry {
 public:
  using Formula = std::function<Real(const ContingencyTable&)>;

  void add_mean(ModelKind model, std::string index_id, Formula f);
  void add_variance(ModelKind model, std::string index_id, Formula f);
  const Formula* find_mean(ModelKind model, std::string_view index_id) const;
  const Formula* find_variance(ModelKind model, std::string_view index_id) const;

  static const ClosedFormRegistry& builtin();

 private:
  using Key = std::pair<ModelKind, std::string>;
  std::map<Key, Formula, std::less<>> means_;
  std::map<Key, Formula, std::less<>> variances_;
};

// E_{M^t}[S(n~)].
//   closed_form  registry lookup; CapabilityError when absent
//   enumeration  sum of S(n') P(n') over the support; ResourceError over budget
//   monte_carlo  sample mean with standard error; needs mc.seed
//   automatic    closed form, else enumeration, else Monte Carlo
template <class Real>
EstimateResult<Real> expectation(const NullModel& model, const ContingencyTable& t, const Index<Real>& s,
                                 const EngineConfig& config = {});

// Population variance of S(n~) under M^t, same method semantics.
template <class Real>
EstimateResult<Real> variance(const NullModel& model, const ContingencyTable& t, const Index<Real>& s,
                              const EngineConfig& config = {});

struct MonteCarloMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double mean_std_error = 0.0;
  double variance_std_error = 0.0;
  std::uint64_t samples = 0;
};

// Samples are split across `streams` independent generators seeded by
// stream_seed(seed, k); the result is identical for a fixed (seed, streams).
MonteCarloMoments monte_carlo_moments(const NullModel& model, const ContingencyTable& t,
                                      const TableFunction<double>& s, const MonteCarloConfig& config);

extern template class ClosedFormRegistry<double>;
extern template class ClosedFormRegistry<Rational>;
extern template EstimateResult<double> expectation(const NullModel&, const ContingencyTable&,
                                                   const Index<double>&, const EngineConfig&);
extern template EstimateResult<Rational> expectation(const NullModel&, const ContingencyTable&,
                                                     const Index<Rational>&, const EngineConfig&);
extern template EstimateResult<double> variance(const NullModel&, const ContingencyTable&,
                                                const Index<double>&, const EngineConfig&);
extern template EstimateResult<Rational> variance(const NullModel&, const ContingencyTable&,
                                                  const Index<Rational>&, const EngineConfig&);

}  // namespace adjsim
