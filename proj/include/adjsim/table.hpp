#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adjsim/scalar.hpp"

namespace adjsim {

// Joint count matrix of two categorical labelings with cached margins.
// Immutable after construction.
class ContingencyTable {
 public:
  // Row-major counts of a rows x cols table. Throws InputError when the
  // shape is empty, the cell count mismatches, a count is negative, or the
  // total is zero.
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts);

  static ContingencyTable from_rows(const std::vector<std::vector<Count>>& rows);
  static ContingencyTable from_rows(std::initializer_list<std::initializer_list<Count>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Count total() const { return total_; }

  Count operator()(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
  std::span<const Count> cells() const { return counts_; }
  std::span<const Count> row_margins() const { return row_margins_; }
  std::span<const Count> col_margins() const { return col_margins_; }

  // Original category labels when the table was built from label data;
  // empty otherwise.
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  ContingencyTable with_labels(std::vector<std::string> row_labels,
                               std::vector<std::string> col_labels) const;

  // "[[2,0],[0,2]]"
  std::string to_string() const;
  std::vector<std::vector<Count>> to_rows() const;

  // Shape and counts only; labels are presentation.
  friend bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.counts_ == b.counts_;
  }
  friend bool operator<(const ContingencyTable& a, const ContingencyTable& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.counts_ < b.counts_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> counts_;
  std::vector<Count> row_margins_;
  std::vector<Count> col_margins_;
  Count total_ = 0;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

// Pairs of observations classified by same/different x and same/different y.
struct PairTable {
  Count same_same = 0;
  Count same_diff = 0;
  Count diff_same = 0;
  Count diff_diff = 0;

  Count total() const { return same_same + same_diff + diff_same + diff_diff; }
  friend bool operator==(const PairTable&, const PairTable&) = default;
};

// Optional explicit category counts. Categories are indexed in order of
// first appearance; declaring more categories than observed pads with empty
// rows/columns.
struct LabelShape {
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
};

ContingencyTable table_from_labels(std::span<const std::string> x, std::span<const std::string> y,
                                   LabelShape shape = {});

// Throws DomainError when N < 2.
PairTable pair_table(const ContingencyTable& t);

}  // namespace adjsim
