#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "adjsim/enumerate.hpp"
#include "adjsim/scalar.hpp"
#include "adjsim/table.hpp"

namespace adjsim {

enum class ModelKind {
  perm,           // permute y-labels uniformly; margins (u, v) fixed
  ind2,           // x, y drawn independently from u/N and v/N
  ind1,           // x, y drawn independently from pooled (u + v) / 2N
  fixed_uniform,  // x uniform over I, y uniform over J; ignores the data
};

// One member of a null-model family. The distribution M^n is obtained by
// conditioning on an observed table n.
struct NullModel {
  ModelKind kind = ModelKind::perm;

  std::string_view id() const;
  // Which observed properties M^n depends on.
  std::string_view conditioning() const;
  friend bool operator==(const NullModel&, const NullModel&) = default;
};

inline constexpr std::string_view kModelIds[] = {"perm", "ind2", "ind1", "fixed_uniform"};

// Throws InputError for an unknown identifier.
NullModel model_from_id(std::string_view id);
std::string_view describe_model(std::string_view id);

// Throws ShapeError when the model cannot be conditioned on t (ind1 with I != J).
void require_model_shape(const NullModel& model, const ContingencyTable& t);

// Tables with positive probability under M^t.
//   perm           fixed margins (u, v)
//   ind2           total N on cells with u_i > 0 and v_j > 0
//   ind1           total N on cells whose pooled proportions are both positive
//   fixed_uniform  every table of the same shape and total
TableSet support(const NullModel& model, const ContingencyTable& t, EnumerationBudget budget = {});

// Probability mass of M^given. Zero outside the support.
//   perm           prod u_i! prod v_j! / (N! prod n_ij!)
//   ind2/ind1/uniform  multinomial with cell probabilities pi_ij
template <class Real>
class ModelDistribution {
 public:
  ModelDistribution(const NullModel& model, const ContingencyTable& given);
  Real mass(const ContingencyTable& candidate) const;

 private:
  NullModel model_;
  ContingencyTable given_;
  // double: log-space constants; Rational: exact numerators/denominators.
  std::vector<double> log_cell_;
  double log_const_ = 0.0;
  std::vector<BigInt> cell_num_;
  BigInt cell_den_ = 1;
  Rational exact_const_ = 0;
};

template <class Real>
Real table_probability(const NullModel& model, const ContingencyTable& given, const ContingencyTable& candidate) {
  return ModelDistribution<Real>(model, given).mass(candidate);
}

template <class Real>
using WeightedVisitor = std::function<void(const ContingencyTable&, const Real&)>;

// Visits every support table of M^t with its probability, in the fixed
// enumeration order of support().
template <class Real>
void for_each_weighted(const NullModel& model, const ContingencyTable& t, EnumerationBudget budget,
                       const WeightedVisitor<Real>& visit);

extern template class ModelDistribution<double>;
extern template class ModelDistribution<Rational>;
extern template void for_each_weighted<double>(const NullModel&, const ContingencyTable&, EnumerationBudget,
                                               const WeightedVisitor<double>&);
extern template void for_each_weighted<Rational>(const NullModel&, const ContingencyTable&, EnumerationBudget,
                                                 const WeightedVisitor<Rational>&);

}  // namespace adjsim
