#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adjsim/adjust.hpp"

namespace adjsim {

enum class Verdict { holds, violated, inconclusive };
std::string_view verdict_name(Verdict v);

// A named number; `exact` carries the rational form in exact mode.
struct Quantity {
  std::string name;
  double value = 0.0;
  std::string exact;
};

struct Witness {
  ContingencyTable table;
  std::vector<Quantity> values;
};

// Outcome of one property check. violated implies at least one witness;
// holds implies every checked instance passed within `tolerance` and no
// quantity was estimated by sampling.
struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::inconclusive;
  std::vector<Witness> witnesses;
  std::vector<Quantity> summary;
  double tolerance = 0.0;
  bool exact = false;
  std::map<std::string, std::string> methods;
  std::vector<std::string> notes;
  std::uint64_t checked = 0;
};

struct CheckConfig {
  EngineConfig engine;
  // Absolute tolerance for double-precision checks; exact mode compares
  // with equality. Sampled quantities widen the band by 4 standard errors.
  double tolerance = 1e-9;
  std::size_t max_witnesses = 4;
};

// How A^2 S picks its maximum: 1 from the linear relation between AS and S
// (c where the first adjustment was degenerate), or the domain maximum of AS.
enum class SecondMax { derived, domain_max };
SecondMax second_max_from_id(std::string_view id);
std::string_view second_max_name(SecondMax m);

// E_{M^n'}[S] and S_max^{n'} agree for every n' in the support of M^t.
template <class Real>
PropertyReport check_constancy(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                               const ContingencyTable& t, const CheckConfig& config = {});

// E_{M^t}[AS(n~)] = 0, each n~ adjusted with its own M^{n~}.
template <class Real>
PropertyReport check_mean_zero(const Index<Real>& s, const NullModel& model, const MaxSpec& spec,
                               const ContingencyTable& t, const Real& c, const CheckConfig& config = {});

// The standardized index has null mean 0 and variance 1 under M^t.
template <class Real>
PropertyReport check_variance_one(const Index<Real>& s, const NullModel& model, const ContingencyTable& t,
                                  const Real& c, const CheckConfig& config = {});

// A^2 S(t) = AS(t).
template <class Real>
PropertyReport check_idempotency(const Index<Real>& s, const NullModel& model, const MaxSpec& first,
                                 SecondMax second, const ContingencyTable& t, const Real& c,
                                 const CheckConfig& config = {});

// E_{M^t}[S] = E_{M^t}[E_{M^n~}[S]].
template <class Real>
PropertyReport check_nested_collapse(const Index<Real>& s, const NullModel& model, const ContingencyTable& t,
                                     const CheckConfig& config = {});

// T = alpha + beta S adjusted with T_max = alpha + beta S_max equals AS
// (sgn(beta) AS under standardization). Fails with a witness when alpha or
// beta vary over the support of M^t.
template <class Real>
PropertyReport check_linear_equivalence(const LinearMember<Real>& member, const NullModel& model,
                                        const MaxSpec& spec, const ContingencyTable& t, const Real& c,
                                        const CheckConfig& config = {});

}  // namespace adjsim
