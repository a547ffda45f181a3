#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adjsim/combinatorics.hpp"
#include "adjsim/errors.hpp"
#include "adjsim/table.hpp"

namespace adjsim {

template <class Real>
using TableFunction = std::function<Real(const ContingencyTable&)>;

enum class ShapeRule {
  any,
  square,       // I = J, shared category set
  pairs_exist,  // N >= 2
};

// A real-valued function of a contingency table with a stable identifier.
// The identifier keys the closed-form registries, so wrappers built on top
// of an index must use a distinct id.
template <class Real>
struct Index {
  std::string id;
  TableFunction<Real> fn;
  ShapeRule required_shape = ShapeRule::any;

  Real operator()(const ContingencyTable& t) const { return fn(t); }
};

// p(n) = sum_i n_ii / N.
template <class Real>
Real raw_agreement_p(const ContingencyTable& t) {
  if (t.rows() != t.cols()) {
    throw ShapeError("raw agreement p needs a square table (got " + std::to_string(t.rows()) + "x" +
                     std::to_string(t.cols()) + ")");
  }
  Count diag = 0;
  for (std::size_t i = 0; i < t.rows(); ++i) diag += t(i, i);
  return Real(diag) / Real(t.total());
}

// q(w) = sum_r C(w_r, 2) / C(N, 2): share of observation pairs that w puts
// in the same category. w may be flattened joint counts or a margin.
template <class Real>
Real pair_agreement_q(std::span<const Count> w, Count n) {
  if (n < 2) throw DomainError("pair agreement q needs N >= 2 (got N = " + std::to_string(n) + ")");
  Count sum = 0, together = 0;
  for (Count c : w) {
    sum += c;
    together += pairs(c);
  }
  if (sum != n) {
    throw InputError("count vector sums to " + std::to_string(sum) + ", expected N = " + std::to_string(n));
  }
  return Real(together) / Real(pairs(n));
}

template <class Real>
Real q_joint(const ContingencyTable& t) {
  return pair_agreement_q<Real>(t.cells(), t.total());
}
template <class Real>
Real q_row(const ContingencyTable& t) {
  return pair_agreement_q<Real>(t.row_margins(), t.total());
}
template <class Real>
Real q_col(const ContingencyTable& t) {
  return pair_agreement_q<Real>(t.col_margins(), t.total());
}

// RI = 1 - q(u) - q(v) + 2 q(n).
template <class Real>
Real rand_index(const ContingencyTable& t) {
  return Real(1) - q_row<Real>(t) - q_col<Real>(t) + Real(2) * q_joint<Real>(t);
}

enum class ToyKind { u1, u1_squared };

// First row margin u_1, or its square.
template <class Real>
Real toy_index(ToyKind kind, const ContingencyTable& t) {
  const Real u1(t.row_margins()[0]);
  return kind == ToyKind::u1 ? u1 : Real(u1 * u1);
}

// Stable index identifiers used by the CLI and JSON output.
inline constexpr std::string_view kIndexIds[] = {"p",    "q_joint", "q_row",         "q_col",
                                                 "rand", "toy_u1",  "toy_u1_squared"};

// Human-readable description of a built-in index for --help output.
std::string_view describe_index(std::string_view id);

// Throws InputError for an unknown identifier.
template <class Real>
Index<Real> index_by_id(std::string_view id) {
  if (id == "p") return {"p", &raw_agreement_p<Real>, ShapeRule::square};
  if (id == "q_joint") return {"q_joint", &q_joint<Real>, ShapeRule::pairs_exist};
  if (id == "q_row") return {"q_row", &q_row<Real>, ShapeRule::pairs_exist};
  if (id == "q_col") return {"q_col", &q_col<Real>, ShapeRule::pairs_exist};
  if (id == "rand") return {"rand", &rand_index<Real>, ShapeRule::pairs_exist};
  if (id == "toy_u1") {
    return {"toy_u1", [](const ContingencyTable& t) { return toy_index<Real>(ToyKind::u1, t); }};
  }
  if (id == "toy_u1_squared") {
    return {"toy_u1_squared",
            [](const ContingencyTable& t) { return toy_index<Real>(ToyKind::u1_squared, t); }};
  }
  throw InputError("unknown index '" + std::string(id) +
                   "' (expected one of p, q_joint, q_row, q_col, rand, toy_u1, toy_u1_squared)");
}

// T(n) = alpha(n) + beta(n) S(n). Whether alpha and beta are constant on
// each null support (membership in the linear family) is checked by the
// properties module, not assumed here.
template <class Real>
struct LinearMember {
  Index<Real> base;
  TableFunction<Real> alpha;
  TableFunction<Real> beta;

  Real operator()(const ContingencyTable& t) const {
    const Real b = beta(t);
    if (b == Real(0)) throw ContractError("linear member '" + base.id + "': beta evaluated to 0 on " + t.to_string());
    return alpha(t) + b * base(t);
  }

  Index<Real> as_index(std::string id = {}) const {
    if (id.empty()) id = "linear(" + base.id + ")";
    LinearMember self = *this;
    return {std::move(id), [self](const ContingencyTable& t) { return self(t); }, base.required_shape};
  }
};

template <class Real>
LinearMember<Real> linear_member(Index<Real> base, TableFunction<Real> alpha, TableFunction<Real> beta) {
  return {std::move(base), std::move(alpha), std::move(beta)};
}

// rand_index written as alpha + beta q(n) with alpha = 1 - q(u) - q(v), beta = 2.
template <class Real>
LinearMember<Real> rand_as_linear_member() {
  return linear_member<Real>(
      index_by_id<Real>("q_joint"),
      [](const ContingencyTable& t) { return Real(1) - q_row<Real>(t) - q_col<Real>(t); },
      [](const ContingencyTable&) { return Real(2); });
}

}  // namespace adjsim
