#include "adjsim/indices.hpp"

namespace adjsim {

std::string_view describe_index(std::string_view id) {
  if (id == "p") return "raw proportion of agreement, sum_i n_ii / N (square tables)";
  if (id == "q_joint") return "share of observation pairs sharing a cell of the joint table";
  if (id == "q_row") return "share of observation pairs sharing an x category (row margin)";
  if (id == "q_col") return "share of observation pairs sharing a y category (column margin)";
  if (id == "rand") return "Rand index, 1 - q(u) - q(v) + 2 q(n)";
  if (id == "toy_u1") return "first row margin u_1 (counterexample index)";
  if (id == "toy_u1_squared") return "squared first row margin u_1^2 (counterexample index)";
  return "unknown index";
}

}  // namespace adjsim
