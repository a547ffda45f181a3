#include "adjsim/null_model.hpp"

#include <cmath>
#include <limits>

#include "adjsim/combinatorics.hpp"
#include "adjsim/errors.hpp"

namespace adjsim {

std::string_view NullModel::id() const {
  switch (kind) {
    case ModelKind::perm: return "perm";
    case ModelKind::ind2: return "ind2";
    case ModelKind::ind1: return "ind1";
    case ModelKind::fixed_uniform: return "fixed_uniform";
  }
  return "unknown";
}

std::string_view NullModel::conditioning() const {
  switch (kind) {
    case ModelKind::perm: return "observed margins u and v (fixed exactly)";
    case ModelKind::ind2: return "margin proportions u/N and v/N (margins random)";
    case ModelKind::ind1: return "pooled proportions (u+v)/2N (margins random)";
    case ModelKind::fixed_uniform: return "nothing beyond N and the table shape";
  }
  return "";
}

NullModel model_from_id(std::string_view id) {
  if (id == "perm") return {ModelKind::perm};
  if (id == "ind2") return {ModelKind::ind2};
  if (id == "ind1") return {ModelKind::ind1};
  if (id == "fixed_uniform") return {ModelKind::fixed_uniform};
  throw InputError("unknown model '" + std::string(id) + "' (expected one of perm, ind2, ind1, fixed_uniform)");
}

std::string_view describe_model(std::string_view id) {
  if (id == "perm") return "permutation (hypergeometric) model: y-labels permuted uniformly, margins fixed";
  if (id == "ind2") return "two-population independence: x, y sampled independently from u/N and v/N";
  if (id == "ind1") return "one-population independence: x, y sampled from pooled (u+v)/2N (square tables)";
  if (id == "fixed_uniform") return "data-free model: x uniform over I categories, y uniform over J";
  return "unknown model";
}

void require_model_shape(const NullModel& model, const ContingencyTable& t) {
  if (model.kind == ModelKind::ind1 && t.rows() != t.cols()) {
    throw ShapeError("ind1 pools margins positionally and needs I = J (got " + std::to_string(t.rows()) + "x" +
                     std::to_string(t.cols()) + ")");
  }
}

namespace {

// Numerators of the cell probabilities over a shared denominator; zero
// numerators mark cells outside the support.
void cell_weights(const NullModel& model, const ContingencyTable& t, std::vector<BigInt>& num, BigInt& den) {
  const std::size_t I = t.rows(), J = t.cols();
  const auto u = t.row_margins();
  const auto v = t.col_margins();
  const BigInt n = t.total();
  num.assign(I * J, 0);
  switch (model.kind) {
    case ModelKind::perm:
    case ModelKind::ind2:
      for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) num[i * J + j] = BigInt(u[i]) * v[j];
      den = n * n;
      break;
    case ModelKind::ind1:
      for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) num[i * J + j] = BigInt(u[i] + v[i]) * (u[j] + v[j]);
      den = 4 * n * n;
      break;
    case ModelKind::fixed_uniform:
      for (auto& x : num) x = 1;
      den = static_cast<Count>(I * J);
      break;
  }
}

bool same_margins(const ContingencyTable& a, const ContingencyTable& b) {
  return std::equal(a.row_margins().begin(), a.row_margins().end(), b.row_margins().begin(),
                    b.row_margins().end()) &&
         std::equal(a.col_margins().begin(), a.col_margins().end(), b.col_margins().begin(),
                    b.col_margins().end());
}

}  // namespace

TableSet support(const NullModel& model, const ContingencyTable& t, EnumerationBudget budget) {
  require_model_shape(model, t);
  if (model.kind == ModelKind::perm) {
    return enumerate_fixed_margins(t.row_margins(), t.col_margins(), budget);
  }
  std::vector<BigInt> num;
  BigInt den;
  cell_weights(model, t, num, den);
  std::vector<bool> mask(num.size());
  for (std::size_t c = 0; c < num.size(); ++c) mask[c] = num[c] > 0;
  return TableSet::over_cells(t.total(), t.rows(), t.cols(), std::move(mask), budget);
}

template <class Real>
ModelDistribution<Real>::ModelDistribution(const NullModel& model, const ContingencyTable& given)
    : model_(model), given_(given) {
  require_model_shape(model, given);
  const Count n = given.total();
  if (model.kind == ModelKind::perm) {
    if constexpr (is_exact_v<Real>) {
      BigInt num = 1;
      for (Count m : given.row_margins()) num *= factorial(m);
      for (Count m : given.col_margins()) num *= factorial(m);
      exact_const_ = Rational(num, factorial(n));
    } else {
      for (Count m : given.row_margins()) log_const_ += log_factorial(m);
      for (Count m : given.col_margins()) log_const_ += log_factorial(m);
      log_const_ -= log_factorial(n);
    }
    return;
  }
  cell_weights(model, given, cell_num_, cell_den_);
  if constexpr (is_exact_v<Real>) {
    exact_const_ = Rational(factorial(n), boost::multiprecision::pow(cell_den_, static_cast<unsigned>(n)));
  } else {
    const double log_den = std::log(cell_den_.convert_to<double>());
    log_cell_.resize(cell_num_.size());
    for (std::size_t c = 0; c < cell_num_.size(); ++c) {
      log_cell_[c] = cell_num_[c] > 0 ? std::log(cell_num_[c].convert_to<double>()) - log_den
                                      : -std::numeric_limits<double>::infinity();
    }
    log_const_ = log_factorial(n);
  }
}

template <class Real>
Real ModelDistribution<Real>::mass(const ContingencyTable& candidate) const {
  if (candidate.rows() != given_.rows() || candidate.cols() != given_.cols() ||
      candidate.total() != given_.total()) {
    return Real(0);
  }
  const auto cells = candidate.cells();
  if (model_.kind == ModelKind::perm) {
    if (!same_margins(candidate, given_)) return Real(0);
    if constexpr (is_exact_v<Real>) {
      BigInt den = 1;
      for (Count c : cells) den *= factorial(c);
      return exact_const_ / Rational(den);
    } else {
      double lp = log_const_;
      for (Count c : cells) lp -= log_factorial(c);
      return std::exp(lp);
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (cells[c] > 0 && cell_num_[c] == 0) return Real(0);
  if constexpr (is_exact_v<Real>) {
    BigInt num = 1, den = 1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == 0) continue;
      num *= boost::multiprecision::pow(cell_num_[c], static_cast<unsigned>(cells[c]));
      den *= factorial(cells[c]);
    }
    return exact_const_ * Rational(num, den);
  } else {
    double lp = log_const_;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == 0) continue;
      lp += static_cast<double>(cells[c]) * log_cell_[c] - log_factorial(cells[c]);
    }
    return std::exp(lp);
  }
}

template <class Real>
void for_each_weighted(const NullModel& model, const ContingencyTable& t, EnumerationBudget budget,
                       const WeightedVisitor<Real>& visit) {
  const ModelDistribution<Real> dist(model, t);
  support(model, t, budget).for_each([&](const ContingencyTable& candidate) {
    visit(candidate, dist.mass(candidate));
  });
}

template class ModelDistribution<double>;
template class ModelDistribution<Rational>;
template void for_each_weighted<double>(const NullModel&, const ContingencyTable&, EnumerationBudget,
                                        const WeightedVisitor<double>&);
template void for_each_weighted<Rational>(const NullModel&, const ContingencyTable&, EnumerationBudget,
                                          const WeightedVisitor<Rational>&);

}  // namespace adjsim
